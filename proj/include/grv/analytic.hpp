#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "grv/canonical.hpp"
#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/invariants.hpp"
#include "grv/linalg.hpp"
#include "grv/numeric.hpp"
#include "grv/state.hpp"

namespace grv {

enum class TypeLabel {
    T1,
    T2a_J1,
    T2a_J2,
    T2a_J3,
    T2b,
    T3a,
    T3b_12,
    T3b_13,
    T3b_23,
    T4a,
    T4b_2,
    T4b_3,
    T4c,
    T5,
    WLIKE,
    GENERIC,
};

inline const char* to_string(TypeLabel t) {
    switch (t) {
        case TypeLabel::T1: return "T1";
        case TypeLabel::T2a_J1: return "T2a_J1";
        case TypeLabel::T2a_J2: return "T2a_J2";
        case TypeLabel::T2a_J3: return "T2a_J3";
        case TypeLabel::T2b: return "T2b";
        case TypeLabel::T3a: return "T3a";
        case TypeLabel::T3b_12: return "T3b_12";
        case TypeLabel::T3b_13: return "T3b_13";
        case TypeLabel::T3b_23: return "T3b_23";
        case TypeLabel::T4a: return "T4a";
        case TypeLabel::T4b_2: return "T4b_2";
        case TypeLabel::T4b_3: return "T4b_3";
        case TypeLabel::T4c: return "T4c";
        case TypeLabel::T5: return "T5";
        case TypeLabel::WLIKE: return "WLIKE";
        case TypeLabel::GENERIC: return "GENERIC";
    }
    return "GENERIC";
}

// Label by the pattern of vanishing canonical coefficients; more specific
// patterns are tested first so they win over their degenerations.
inline TypeLabel classify(const AcinForm& p, double tol = 1e-10) {
    validate(p);
    const auto& l = p.lambda;
    const bool z0 = l[0] < tol, z1 = l[1] < tol, z2 = l[2] < tol, z3 = l[3] < tol,
               z4 = l[4] < tol;
    const Invariants j = invariants_from_acin(p);

    if ((z0 && j.j1 < tol) || (z2 && z3 && z4)) return TypeLabel::T1;
    if (z0) return TypeLabel::T2a_J1;
    if (z3 && z4) return TypeLabel::T2a_J2;
    if (z2 && z4) return TypeLabel::T2a_J3;
    if (z1 && z2 && z3) return TypeLabel::T2b;
    if (z1 && z4) return TypeLabel::T3a;
    if (z1 && z2) return TypeLabel::T3b_12;
    if (z1 && z3) return TypeLabel::T3b_13;
    if (z2 && z3) return TypeLabel::T3b_23;
    if (z4) return TypeLabel::T4a;
    if (z2) return TypeLabel::T4b_2;
    if (z3) return TypeLabel::T4b_3;
    if (z1) return TypeLabel::T4c;
    if (p.phi < 1e-10 || std::abs(p.phi - std::numbers::pi) < 1e-10) return TypeLabel::T5;
    return TypeLabel::GENERIC;
}

inline double pmax_two_qubit(double j) {
    if (j < -1e-12 || j > 0.25 + 1e-12)
        throw OutOfRangeError("pmax_two_qubit: J must lie in [0, 1/4]");
    const double jc = std::clamp(j, 0.0, 0.25);
    return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * jc));
}

struct CandidateValue {
    std::string id;
    std::optional<double> value;
    std::string note;  // why a candidate was skipped, or how it fared
};

struct AnalyticPmax {
    double value = 1.0;
    std::string formula_id;
    std::vector<CandidateValue> candidates;
};

struct AnalyticOutcome {
    TypeLabel label = TypeLabel::GENERIC;
    std::optional<AnalyticPmax> pmax;
    std::string unavailable_reason;  // set when pmax is absent
};

namespace detail {

// Cross-check of the coefficient-form value against the invariant-form value.
inline double checked_pair(double lambda_form, double j_form, double tol, const char* what) {
    if (std::abs(lambda_form - j_form) > tol)
        throw Error(std::string("analytic cross-check failed for ") + what);
    return lambda_form;
}

// The invariant form v = (1 + sqrt(1-4x))/2 is the larger root of v(1-v) = x,
// so the two routes are compared through that product, which stays
// well-conditioned at the double root x = 1/4 where the radical does not.
inline double checked_root(double lambda_form, double x, const char* what) {
    if (lambda_form < 0.5 - 1e-12 || std::abs(lambda_form * (1.0 - lambda_form) - x) > 1e-10)
        throw Error(std::string("analytic cross-check failed for ") + what);
    return lambda_form;
}

inline double largest_schmidt_sq(const Mat2c& m) {
    const Svd2 d = svd2(m);
    return d.s0 * d.s0;
}

inline double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

// Circumradius-style closed form for states with lambda1 = lambda4 = 0,
// valid when the largest squared coefficient is below the sum of the others.
inline double tribell_circumradius(double l0, double l2, double l3) {
    const double r1 = l3 * l3 + l2 * l2 - l0 * l0;
    const double r2 = l0 * l0 + l2 * l2 - l3 * l3;
    const double r3 = l0 * l0 + l3 * l3 - l2 * l2;
    const double w = 2.0 * l0 * l3;
    const double num =
        w * safe_sqrt((w * w + r1 * r1 - r3 * r3) * (w * w + r2 * r2 - r3 * r3)) - r1 * r2 * r3;
    return 0.25 * (1.0 + num / (w * w - r3 * r3));
}

}  // namespace detail

// Closed-form P_max where one is available for the classified type;
// types 4a/4b/4c/5 and the generic case report "not presented".
inline AnalyticOutcome pmax_analytic(const AcinForm& p) {
    validate(p);
    AnalyticOutcome out;
    out.label = classify(p);
    const Invariants j = invariants_from_acin(p);
    const auto& l = p.lambda;
    const cd e1 = std::polar(l[1], p.phi);

    AnalyticPmax a;
    switch (out.label) {
        case TypeLabel::T1:
            a.value = 1.0;
            a.formula_id = "product";
            break;
        case TypeLabel::T2a_J1: {
            const Mat2c m = {{{e1, cd(l[2])}, {cd(l[3]), cd(l[4])}}};
            a.value = detail::checked_root(detail::largest_schmidt_sq(m), j.j1, "biseparable-j1");
            a.formula_id = "biseparable-j1";
            break;
        }
        case TypeLabel::T2a_J2: {
            const Mat2c m = {{{cd(l[0]), cd(0.0)}, {e1, cd(l[2])}}};
            a.value = detail::checked_root(detail::largest_schmidt_sq(m), j.j2, "biseparable-j2");
            a.formula_id = "biseparable-j2";
            break;
        }
        case TypeLabel::T2a_J3: {
            const Mat2c m = {{{cd(l[0]), cd(0.0)}, {e1, cd(l[3])}}};
            a.value = detail::checked_root(detail::largest_schmidt_sq(m), j.j3, "biseparable-j3");
            a.formula_id = "biseparable-j3";
            break;
        }
        case TypeLabel::T2b:
            a.value = detail::checked_root(std::max(l[0] * l[0], l[4] * l[4]), j.j4,
                                           "generalized-ghz");
            a.formula_id = "generalized-ghz";
            break;
        case TypeLabel::T3a: {
            std::array<double, 3> sq = {l[0] * l[0], l[2] * l[2], l[3] * l[3]};
            std::sort(sq.rbegin(), sq.rend());
            if (sq[0] >= sq[1] + sq[2] - 1e-12) {
                // Each radical of the invariant form is |1 - 2 lambda_k^2|;
                // verify the radicands against that square, then assemble.
                const std::array<double, 3> rad = {1.0 - 4.0 * (j.j1 + j.j2),
                                                   1.0 - 4.0 * (j.j1 + j.j3),
                                                   1.0 - 4.0 * (j.j2 + j.j3)};
                const std::array<double, 3> ref = {1.0 - 2.0 * l[2] * l[2],
                                                   1.0 - 2.0 * l[3] * l[3],
                                                   1.0 - 2.0 * l[0] * l[0]};
                for (int k = 0; k < 3; ++k)
                    if (std::abs(rad[static_cast<std::size_t>(k)] -
                                 ref[static_cast<std::size_t>(k)] * ref[static_cast<std::size_t>(k)]) > 1e-10)
                        throw Error("analytic cross-check failed for largest-coefficient");
                a.value = sq[0];
                a.formula_id = "largest-coefficient";
            } else {
                const double s = j.j1 + j.j2 + j.j3;
                const double jform = 4.0 * std::sqrt(j.j1 * j.j2 * j.j3) / (4.0 * s - 1.0);
                a.value = detail::checked_pair(detail::tribell_circumradius(l[0], l[2], l[3]),
                                               jform, 1e-10, "circumradius");
                a.formula_id = "circumradius";
            }
            break;
        }
        case TypeLabel::T3b_12:
            a.value = detail::checked_root(std::max(l[0] * l[0], 1.0 - l[0] * l[0]),
                                           j.j3 + j.j4, "extended-ghz-j3j4");
            a.formula_id = "extended-ghz-j3j4";
            break;
        case TypeLabel::T3b_13:
            a.value = detail::checked_root(std::max(l[0] * l[0], 1.0 - l[0] * l[0]),
                                           j.j2 + j.j4, "extended-ghz-j2j4");
            a.formula_id = "extended-ghz-j2j4";
            break;
        case TypeLabel::T3b_23:
            a.value = detail::checked_root(std::max(l[4] * l[4], 1.0 - l[4] * l[4]),
                                           j.j1 + j.j4, "extended-ghz-j1j4");
            a.formula_id = "extended-ghz-j1j4";
            break;
        default:
            out.unavailable_reason = "not presented";
            return out;
    }
    out.pmax = std::move(a);
    return out;
}

// All three W-like sharing-case candidates; the one certified by the
// independent numerical maximizer is reported as the value.
inline AnalyticPmax pmax_wlike(const WLikeParams& p, const OptimizerConfig& cfg = {}) {
    validate(p);
    const double a = p.a, b = p.b, c = p.c, q = p.q;
    const Invariants j = wlike_invariants_exact(p);
    const bool on_branch =
        (a * a + q * q - b * b - c * c) * (a * b - c * q) * (a * c - b * q) >= 0.0;

    AnalyticPmax out;
    out.candidates.resize(3);

    // Candidate Q: quadrilateral circumradius form.
    {
        CandidateValue& cv = out.candidates[0];
        cv.id = "Q";
        const double r3 = a * a + b * b - c * c - q * q;
        const double omega = a * b + q * c;
        const double den = 4.0 * omega * omega - r3 * r3;
        if (std::abs(den) <= 1e-12) {
            cv.note = "skipped: denominator vanishes";
        } else {
            const double val = 4.0 * (a * b + q * c) * (a * c + q * b) * (a * q + b * c) / den;
            if (val <= 0.0 || val > 1.0 + 1e-12) {
                cv.note = "skipped: value outside (0, 1]";
            } else {
                cv.value = std::min(val, 1.0);
                const double denj = 4.0 * (j.j1 + j.j2 + j.j3 + 2.0 * j.j4) - 1.0;
                if (on_branch && std::abs(denj) > 1e-12) {
                    const double jform =
                        4.0 *
                        std::sqrt(std::max(0.0, (j.j1 + j.j4) * (j.j2 + j.j4) * (j.j3 + j.j4))) /
                        denj;
                    detail::checked_pair(*cv.value, jform, 1e-9, "wlike-Q");
                }
            }
        }
    }

    // Candidate CQ: triangle circumradius form.
    {
        CandidateValue& cv = out.candidates[1];
        cv.id = "CQ";
        const double num = (a * b - c * q) * (a * c - b * q) * (b * c - a * q);
        const double sx2 = (a + b + c + q) * (a + b - c - q) * (a - b + c - q) *
                           (-a + b + c - q) / 16.0;
        if (num <= 0.0) {
            cv.note = "skipped: nonpositive numerator";
        } else if (sx2 <= 1e-12) {
            cv.note = "skipped: degenerate quadrilateral area";
        } else {
            const double val = num / (4.0 * sx2);
            if (val <= 0.0 || val > 1.0 + 1e-12) {
                cv.note = "skipped: value outside (0, 1]";
            } else {
                cv.value = std::min(val, 1.0);
                const double denj = 4.0 * (j.j1 + j.j2 + j.j3 + j.j4) - 1.0;
                if (on_branch && std::abs(denj) > 1e-12) {
                    const double jform =
                        4.0 * std::sqrt(std::max(0.0, j.j1 * j.j2 * j.j3)) / denj;
                    detail::checked_pair(*cv.value, jform, 1e-9, "wlike-CQ");
                }
            }
        }
    }

    // Candidate L: largest squared coefficient.
    {
        CandidateValue& cv = out.candidates[2];
        cv.id = "L";
        cv.value = std::max({a * a, b * b, c * c, q * q});
        if (on_branch) {
            const double jform =
                0.25 * (1.0 + detail::safe_sqrt(1.0 - 4.0 * (j.j2 + j.j3 + j.j4)) +
                        detail::safe_sqrt(1.0 - 4.0 * (j.j1 + j.j3 + j.j4)) +
                        detail::safe_sqrt(1.0 - 4.0 * (j.j1 + j.j2 + j.j4)));
            detail::checked_pair(*cv.value, jform, 1e-9, "wlike-L");
        }
    }

    const double oracle = pmax_numeric_2site(wlike_state(p), cfg).value;
    int best = -1;
    double bestdiff = 1e-6;
    for (int i = 0; i < 3; ++i) {
        if (!out.candidates[i].value) continue;
        const double diff = std::abs(*out.candidates[i].value - oracle);
        if (diff < bestdiff) {
            bestdiff = diff;
            best = i;
        }
    }
    if (best < 0)
        throw NoCandidateMatches("pmax_wlike: no candidate agrees with the numeric value");
    for (int i = 0; i < 3; ++i)
        if (out.candidates[i].value && out.candidates[i].note.empty())
            out.candidates[i].note = (i == best) ? "matches numeric maximizer" : "computed";
    out.value = *out.candidates[static_cast<std::size_t>(best)].value;
    out.formula_id = out.candidates[static_cast<std::size_t>(best)].id;
    return out;
}

// The entanglement measure itself.
inline double groverian_measure(double pmax) { return std::sqrt(std::max(0.0, 1.0 - pmax)); }

}  // namespace grv
