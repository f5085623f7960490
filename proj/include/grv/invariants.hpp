#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "grv/bloch.hpp"
#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/state.hpp"

namespace grv {

struct Invariants {
    double j1 = 0.0, j2 = 0.0, j3 = 0.0, j4 = 0.0, j5 = 0.0;
};

namespace detail {

// Rounding can leave tiny negative residues on quantities that are
// nonnegative by construction; anything beyond the window is a real defect.
inline double clamp_residue(double x) { return (x > -1e-12 && x < 0.0) ? 0.0 : x; }

}  // namespace detail

inline Invariants invariants_from_acin(const AcinForm& p) {
    const double l0 = p.lambda[0], l1 = p.lambda[1], l2 = p.lambda[2], l3 = p.lambda[3],
                 l4 = p.lambda[4];
    const double c = std::cos(p.phi);
    Invariants j;
    j.j1 = detail::clamp_residue(l1 * l1 * l4 * l4 + l2 * l2 * l3 * l3 -
                                 2.0 * l1 * l2 * l3 * l4 * c);
    j.j2 = l0 * l0 * l2 * l2;
    j.j3 = l0 * l0 * l3 * l3;
    j.j4 = l0 * l0 * l4 * l4;
    j.j5 = 2.0 * l0 * l0 * l2 * l3 * (l2 * l3 - l1 * l4 * c);
    return j;
}

// Cayley hyperdeterminant of the 2 x 2 x 2 amplitude tensor.  Its modulus is
// invariant under local unitaries and equals j4 on canonical forms.
inline cd hyperdeterminant(const PureState3& s) {
    auto t = [&s](int i, int j, int k) { return s.amp[4 * i + 2 * j + k]; };
    cd d = t(0, 0, 0) * t(0, 0, 0) * t(1, 1, 1) * t(1, 1, 1) +
           t(0, 0, 1) * t(0, 0, 1) * t(1, 1, 0) * t(1, 1, 0) +
           t(0, 1, 0) * t(0, 1, 0) * t(1, 0, 1) * t(1, 0, 1) +
           t(0, 1, 1) * t(0, 1, 1) * t(1, 0, 0) * t(1, 0, 0);
    d -= 2.0 * (t(0, 0, 0) * t(1, 1, 1) *
                    (t(0, 0, 1) * t(1, 1, 0) + t(0, 1, 0) * t(1, 0, 1) +
                     t(0, 1, 1) * t(1, 0, 0)) +
                t(0, 0, 1) * t(1, 1, 0) * (t(0, 1, 0) * t(1, 0, 1) + t(0, 1, 1) * t(1, 0, 0)) +
                t(0, 1, 0) * t(1, 0, 1) * t(0, 1, 1) * t(1, 0, 0));
    d += 4.0 * (t(0, 0, 0) * t(0, 1, 1) * t(1, 0, 1) * t(1, 1, 0) +
                t(0, 0, 1) * t(0, 1, 0) * t(1, 0, 0) * t(1, 1, 1));
    return d;
}

// Second, decomposition-free route: the single-site vector norms fix
// j1 + j2 + j4, j1 + j3 + j4, j2 + j3 + j4; the hyperdeterminant supplies j4
// (the norms alone carry only three independent combinations); the mixed
// h3-v1-v2 contraction then yields j5.
inline Invariants invariants_from_state(const PureState3& s) {
    const BlochForm3 f = bloch3(s);
    const double a1 = (1.0 - dot3(f.v1, f.v1)) / 4.0;
    const double a2 = (1.0 - dot3(f.v2, f.v2)) / 4.0;
    const double a3 = (1.0 - dot3(f.v3, f.v3)) / 4.0;
    Invariants j;
    j.j4 = std::abs(hyperdeterminant(s));
    j.j1 = detail::clamp_residue((a2 + a3 - a1 - j.j4) / 2.0);
    j.j2 = detail::clamp_residue((a1 + a3 - a2 - j.j4) / 2.0);
    j.j3 = detail::clamp_residue((a1 + a2 - a3 - j.j4) / 2.0);
    double hv = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) hv += f.h3[a][b] * f.v1[a] * f.v2[b];
    j.j5 = j.j1 + j.j2 + j.j3 + j.j4 - (1.0 - hv) / 4.0;
    return j;
}

// Two-qubit invariant J = |det M|^2 of the amplitude matrix (squared
// product of the Schmidt coefficients).
inline double j_two_qubit(const PureState2& s) {
    const cd det = s.amp[0] * s.amp[3] - s.amp[1] * s.amp[2];
    return std::norm(det);
}

// ---------------------------------------------------------------------------
// Per-family relations among J1..J5
// ---------------------------------------------------------------------------

struct RelationResidual {
    std::string id;
    double residual = 0.0;
};

struct RelationReport {
    std::vector<RelationResidual> residuals;
    bool pass = true;
};

// Evaluates the J-relations applicable to the given family label and reports
// their residuals.  Families without a dedicated relation (products,
// biseparable and extended-GHZ classes, GENERIC) pass trivially with an empty
// list.  Accepts labels as produced by to_string(TypeLabel) or bare aliases
// such as "3a" / "wlike".
inline RelationReport check_relations(const Invariants& j, const std::string& family,
                                      double tol = 1e-8) {
    std::string key;
    for (char ch : family) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (!key.empty() && key[0] == 't') key.erase(0, 1);

    static const std::vector<std::string> trivial = {
        "1", "2a_j1", "2a_j2", "2a_j3", "2b", "3b_12", "3b_13", "3b_23",
        "4b_2", "4b_3", "generic"};

    const double root_j123 = std::sqrt(std::max(0.0, j.j1 * j.j2 * j.j3));
    RelationReport rep;
    if (key == "3a") {
        rep.residuals.push_back(
            {"j5-tri-bell", std::abs(j.j1 * j.j2 + j.j1 * j.j3 + j.j2 * j.j3 - 0.5 * j.j5)});
        rep.residuals.push_back({"j5-circumradius", std::abs(root_j123 - 0.5 * j.j5)});
    } else if (key == "4a") {
        rep.residuals.push_back({"j5-type-4a", std::abs(root_j123 - 0.5 * j.j5)});
    } else if (key == "4c") {
        rep.residuals.push_back(
            {"j5-type-4c",
             std::abs(j.j1 * (j.j2 + j.j3 + j.j4) + j.j2 * j.j3 - root_j123)});
    } else if (key == "5" || key == "wlike") {
        rep.residuals.push_back({"j5-sign-folded", std::abs(std::abs(j.j5) - 2.0 * root_j123)});
    } else if (std::find(trivial.begin(), trivial.end(), key) == trivial.end()) {
        throw UnknownFamilyError("check_relations: unknown family '" + family + "'");
    }
    for (const RelationResidual& rr : rep.residuals)
        if (!(rr.residual < tol)) rep.pass = false;
    return rep;
}

}  // namespace grv
