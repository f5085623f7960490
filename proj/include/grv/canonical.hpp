#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/invariants.hpp"
#include "grv/linalg.hpp"
#include "grv/state.hpp"

namespace grv {

struct SchmidtForm2 {
    double lambda0 = 1.0;
    double lambda1 = 0.0;
    LocalUnitary uA, uB;  // (uA ⊗ uB)|psi> = lambda0|00> + lambda1|11>
};

inline SchmidtForm2 schmidt2(const PureState2& s) {
    const Mat2c m = {{{s.amp[0], s.amp[1]}, {s.amp[2], s.amp[3]}}};
    const Svd2 d = svd2(m);
    SchmidtForm2 out;
    out.lambda0 = d.s0;
    out.lambda1 = d.s1;
    out.uA.u = mat2_adjoint(d.u);
    out.uB.u = {{{d.v[0][0], d.v[1][0]}, {d.v[0][1], d.v[1][1]}}};  // v transposed
    return out;
}

struct AcinDecomposition {
    AcinForm form;
    LocalUnitary uA, uB, uC;  // (uA ⊗ uB ⊗ uC)|psi> = from_acin(form)
};

namespace detail {

inline Mat2c phase_diag(double top, double bottom) {
    return {{{std::exp(cd(0.0, top)), cd(0.0)}, {cd(0.0), std::exp(cd(0.0, bottom))}}};
}

inline Mat2c slice_comb(const Mat2c& t0, const Mat2c& t1, cd w0, cd w1) {
    Mat2c r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = w0 * t0[i][j] + w1 * t1[i][j];
    return r;
}

inline double wrap_angle(double a) {
    const double pi = std::numbers::pi;
    double w = std::remainder(a, 2.0 * pi);
    if (w <= -pi) w = pi;  // land on (-pi, pi]
    return w;
}

// One canonical-form candidate per admissible root of the slice-determinant
// quadratic; phi is kept raw in (-pi, pi] so the caller can filter validity.
struct AcinCandidate {
    std::array<double, 5> lambda{};
    double phi = 0.0;
    LocalUnitary uA, uB, uC;
};

inline std::vector<AcinCandidate> acin_candidates(const PureState3& s) {
    const double tol = 1e-12;
    const Mat2c t0 = {{{s.amp[0], s.amp[1]}, {s.amp[2], s.amp[3]}}};
    const Mat2c t1 = {{{s.amp[4], s.amp[5]}, {s.amp[6], s.amp[7]}}};
    const cd c0 = mat2_det(t0);
    const cd c2 = mat2_det(t1);
    const cd c1 = t0[0][0] * t1[1][1] + t0[1][1] * t1[0][0] - t0[0][1] * t1[1][0] -
                  t0[1][0] * t1[0][1];

    // Mixing (alpha, beta) of the slices makes the new top slice singular.
    std::vector<std::pair<cd, cd>> roots;
    if (std::abs(c2) > tol) {
        const cd disc = std::sqrt(c1 * c1 - 4.0 * c0 * c2);
        roots.emplace_back(cd(1.0), (-c1 + disc) / (2.0 * c2));
        roots.emplace_back(cd(1.0), (-c1 - disc) / (2.0 * c2));
    } else if (std::abs(c1) > tol) {
        roots.emplace_back(cd(1.0), -c0 / c1);
        roots.emplace_back(cd(0.0), cd(1.0));
    } else if (std::abs(c0) > tol) {
        roots.emplace_back(cd(0.0), cd(1.0));
    } else {
        roots.emplace_back(cd(1.0), cd(0.0));
        roots.emplace_back(cd(0.0), cd(1.0));
    }

    std::vector<AcinCandidate> cands;
    for (const auto& [al, be] : roots) {
        const double n = std::sqrt(std::norm(al) + std::norm(be));
        const cd u00 = al / n, u01 = be / n;
        AcinCandidate cand;
        cand.uA.u = {{{u00, u01}, {-std::conj(u01), std::conj(u00)}}};
        const Mat2c tp0 = slice_comb(t0, t1, u00, u01);
        const Mat2c tp1 = slice_comb(t0, t1, cand.uA.u[1][0], cand.uA.u[1][1]);

        double tp0max = 0.0;
        for (const auto& row : tp0)
            for (const cd& z : row) tp0max = std::max(tp0max, std::abs(z));

        if (tp0max < 1e-12) {
            // Top slice empty: Schmidt-decompose the bottom slice directly.
            const Svd2 d = svd2(tp1);
            cand.uB.u = mat2_adjoint(d.u);
            cand.uC.u = {{{d.v[0][0], d.v[1][0]}, {d.v[0][1], d.v[1][1]}}};
            cand.lambda = {0.0, d.s0, 0.0, 0.0, d.s1};
            cand.phi = 0.0;
            cands.push_back(cand);
            continue;
        }

        const Svd2 d = svd2(tp0);
        Mat2c ub = mat2_adjoint(d.u);
        Mat2c uc = {{{d.v[0][0], d.v[1][0]}, {d.v[0][1], d.v[1][1]}}};
        const Mat2c s0m = mat2_mul(mat2_mul(ub, tp0), d.v);  // uB . Tp0 . uC^T, uC = v^T
        const Mat2c s1m = mat2_mul(mat2_mul(ub, tp1), d.v);

        // Surviving amplitudes (t000, t100, t101, t110, t111).
        const std::array<cd, 5> amps = {s0m[0][0], s1m[0][0], s1m[0][1], s1m[1][0], s1m[1][1]};
        std::array<double, 5> lam{};
        std::array<double, 5> th{};
        std::array<bool, 5> f{};
        for (int i = 0; i < 5; ++i) {
            lam[i] = std::abs(amps[i]);
            th[i] = std::arg(amps[i]);
            f[i] = lam[i] > 1e-10;
            if (!f[i]) lam[i] = 0.0;
        }

        // Site phase rotations diag(e^{i a0}, e^{i a1}) etc. zero every argument
        // they can reach; the one unremovable phase lands on the |100> term.
        const double alpha0 = -th[0];
        double alpha1 = 0.0, beta1 = 0.0, gamma1 = 0.0, phi = 0.0;
        if (f[2] && f[3] && f[4]) {
            gamma1 = th[3] - th[4];
            alpha1 = -th[2] - gamma1;
            beta1 = th[2] - th[4];
            phi = f[1] ? wrap_angle(th[1] + alpha1) : 0.0;
        } else {
            alpha1 = f[1] ? -th[1] : 0.0;
            gamma1 = f[2] ? -th[2] - alpha1 : 0.0;
            beta1 = f[3] ? -th[3] - alpha1 : 0.0;
            if (f[4]) {
                if (!f[2])
                    gamma1 = -th[4] - alpha1 - beta1;
                else if (!f[3])
                    beta1 = -th[4] - alpha1 - gamma1;
            }
            phi = 0.0;
        }

        cand.uA.u = mat2_mul(phase_diag(alpha0, alpha1), cand.uA.u);
        cand.uB.u = mat2_mul(phase_diag(0.0, beta1), ub);
        cand.uC.u = mat2_mul(phase_diag(0.0, gamma1), uc);
        cand.lambda = lam;
        cand.phi = phi;
        cands.push_back(cand);
    }
    return cands;
}

}  // namespace detail

inline AcinDecomposition acin_decompose(const PureState3& s) {
    const auto cands = detail::acin_candidates(s);
    std::vector<detail::AcinCandidate> valid;
    for (const auto& c : cands)
        if (c.phi >= -1e-9) valid.push_back(c);
    if (valid.empty())
        throw DecompositionFailure(
            "acin_decompose: no quadratic root yields a phase in [0, pi]");
    std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.lambda[0] - b.lambda[0]) > 1e-12) return a.lambda[0] > b.lambda[0];
        return std::abs(a.phi) < std::abs(b.phi);
    });
    const auto& best = valid.front();

    AcinDecomposition out;
    out.uA = best.uA;
    out.uB = best.uB;
    out.uC = best.uC;
    out.form.lambda = best.lambda;
    double n2 = 0.0;
    for (double l : out.form.lambda) n2 += l * l;
    const double n = std::sqrt(n2);
    for (double& l : out.form.lambda) l /= n;
    out.form.phi = std::clamp(best.phi, 0.0, std::numbers::pi);
    validate(out.form);
    return out;
}

// Exact invariants of a W-like state, polynomial in (a, b, c, q).
inline Invariants wlike_invariants_exact(const WLikeParams& p) {
    const double a = p.a, b = p.b, c = p.c, q = p.q;
    Invariants j;
    j.j1 = (a * q - b * c) * (a * q - b * c);
    j.j2 = (a * c - b * q) * (a * c - b * q);
    j.j3 = (a * b - c * q) * (a * b - c * q);
    j.j4 = 4.0 * a * b * c * q;
    j.j5 = 2.0 * (a * c - b * q) * (a * b - c * q) * (b * c - a * q);
    return j;
}

// Canonical form of a|100> + b|010> + c|001> + q|111> by the explicit
// one-parameter transform; phi comes out 0 or pi.
inline AcinForm wlike_standard_form(const WLikeParams& p) {
    validate(p);
    const double a = p.a, b = p.b, c = p.c, q = p.q;
    const double dd = a * q + b * c;
    if (dd <= 1e-12)
        throw DegenerateTransform("wlike_standard_form: a q + b c vanishes, transform singular");
    const double pp = a * b + c * q;
    const double qq = a * c + b * q;
    const double l0 = std::sqrt(qq * pp / dd);
    if (l0 <= 1e-12)
        throw DegenerateTransform("wlike_standard_form: lambda0 vanishes, transform singular");
    const double k = a * a + q * q - b * b - c * c;
    AcinForm out;
    out.lambda[0] = l0;
    out.lambda[1] = std::sqrt(a * b * c * q) * std::abs(k) / std::sqrt(pp * qq * dd);
    out.lambda[2] = std::abs(a * c - b * q) / l0;
    out.lambda[3] = std::abs(a * b - c * q) / l0;
    out.lambda[4] = 2.0 * std::sqrt(a * b * c * q) / l0;
    const double sgn = k * (a * b - c * q) * (a * c - b * q);
    out.phi = (sgn >= 0.0) ? 0.0 : std::numbers::pi;
    double n2 = 0.0;
    for (double l : out.lambda) n2 += l * l;
    const double n = std::sqrt(n2);
    for (double& l : out.lambda) l /= n;
    validate(out);
    return out;
}

// Roots for lambda0^2 of the invariant quartic
// (j1+j4) x^2 - (j5+j4) x + (j2 j3 + j2 j4 + j3 j4 + j4^2) = 0, descending.
inline std::vector<double> lambda0_from_invariants(const Invariants& j) {
    const double a = j.j1 + j.j4;
    const double b = -(j.j5 + j.j4);
    const double c = j.j2 * j.j3 + j.j2 * j.j4 + j.j3 * j.j4 + j.j4 * j.j4;

    std::vector<double> roots;
    if (a <= 1e-14) {
        if (std::abs(b) <= 1e-14) {
            if (std::abs(c) <= 1e-12) return {};  // vacuous equation, no constraint
            throw NoRealRoot("lambda0_from_invariants: degenerate equation with nonzero constant");
        }
        roots.push_back(-c / b);
    } else {
        const double disc_tol = 1e-12 * std::max({b * b, std::abs(4.0 * a * c), 1e-30});
        double r0 = 0.0, r1 = 0.0;
        const int nr = quadratic_roots(a, b, c, disc_tol, r0, r1);
        if (nr == 0) throw NoRealRoot("lambda0_from_invariants: negative discriminant");
        roots = {r0, r1};
    }
    std::vector<double> out;
    for (double r : roots) {
        if (r < -1e-9 || r > 1.0 + 1e-9) continue;
        out.push_back(std::clamp(r, 0.0, 1.0));
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

}  // namespace grv
