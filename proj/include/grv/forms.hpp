#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "grv/errors.hpp"

namespace grv {

// Canonical five-term form: lambda[0]|000> + lambda[1] e^{i phi}|100>
// + lambda[2]|101> + lambda[3]|110> + lambda[4]|111>.
struct AcinForm {
    std::array<double, 5> lambda{};
    double phi = 0.0;
};

inline void validate(const AcinForm& p) {
    double n2 = 0.0;
    for (double l : p.lambda) {
        if (l < 0.0) throw ValidationError("AcinForm: negative lambda component");
        n2 += l * l;
    }
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ValidationError("AcinForm: sum of squared lambdas deviates from 1 beyond 1e-10");
    if (p.phi < 0.0 || p.phi > std::numbers::pi)
        throw ValidationError("AcinForm: phi outside [0, pi]");
}

// a|100> + b|010> + c|001> + q|111>, all coefficients nonnegative.
struct WLikeParams {
    double a = 0.0, b = 0.0, c = 0.0, q = 0.0;
};

inline void validate(const WLikeParams& p) {
    if (p.a < 0.0 || p.b < 0.0 || p.c < 0.0 || p.q < 0.0)
        throw ValidationError("WLikeParams: negative coefficient");
    const double n2 = p.a * p.a + p.b * p.b + p.c * p.c + p.q * p.q;
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ValidationError("WLikeParams: squared coefficients do not sum to 1 within 1e-10");
}

}  // namespace grv
