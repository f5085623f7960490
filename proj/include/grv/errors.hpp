#pragma once

#include <stdexcept>
#include <string>

namespace grv {

// Base type for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroStateError : Error { using Error::Error; };
struct NotUnitaryError : Error { using Error::Error; };
struct UnknownKindError : Error { using Error::Error; };
struct DecompositionFailure : Error { using Error::Error; };
struct DegenerateTransform : Error { using Error::Error; };
struct NoRealRoot : Error { using Error::Error; };
struct OutOfRangeError : Error { using Error::Error; };
struct UnknownFamilyError : Error { using Error::Error; };
struct NoCandidateMatches : Error { using Error::Error; };
struct UnknownSuiteError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace grv
