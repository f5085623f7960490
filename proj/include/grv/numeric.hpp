#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "grv/bloch.hpp"
#include "grv/errors.hpp"
#include "grv/linalg.hpp"
#include "grv/rng.hpp"
#include "grv/state.hpp"

namespace grv {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 10000;
    double convergence_tol = 1e-12;  // on objective increase
    std::uint64_t seed = 20240901;
};

inline void validate(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iters < 1 || !(cfg.convergence_tol > 0.0))
        throw ValidationError("OptimizerConfig: restarts, max_iters, convergence_tol must be positive");
}

struct PmaxResult {
    double value = 0.0;
    ProductState product_state;
    int iterations = 0;
    bool converged = false;
    double multiplier_residual = 0.0;
};

namespace detail {

inline const std::array<Vec3, 6>& axis_starts() {
    static const std::array<Vec3, 6> a = {{{1, 0, 0},
                                           {-1, 0, 0},
                                           {0, 1, 0},
                                           {0, -1, 0},
                                           {0, 0, 1},
                                           {0, 0, -1}}};
    return a;
}

inline Vec2c spinor_from_bloch(const Vec3& s) {
    const double theta = std::atan2(std::hypot(s[0], s[1]), s[2]);
    const double phi = std::atan2(s[1], s[0]);
    return {cd(std::cos(theta / 2.0), 0.0),
            std::exp(cd(0.0, phi)) * std::sin(theta / 2.0)};
}

// Keep-and-perturb step for a fixed-point update whose image vanished.
inline Vec3 perturbed_keep(const Vec3& prev, Rng& rng) {
    Vec3 t = rng.unit_sphere();
    const double along = dot3(t, prev);
    for (int i = 0; i < 3; ++i) t[i] -= along * prev[i];
    Vec3 out = add3(prev, scale3(t, 1e-8));
    const double n = norm3(out);
    return n > 0.0 ? scale3(out, 1.0 / n) : prev;
}

struct TwoSiteRun {
    Vec3 s1{0, 0, 1}, s2{0, 0, 1};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

inline double two_site_objective(const Correlators& c, const Vec3& s1, const Vec3& s2) {
    return 0.25 * (1.0 + dot3(c.r1, s1) + dot3(c.r2, s2) + dot3(s1, matvec3(c.g, s2)));
}

inline double two_site_residual(const Correlators& c, const Vec3& s1, const Vec3& s2) {
    const Vec3 w1 = add3(c.r1, matvec3(c.g, s2));
    const Vec3 w2 = add3(c.r2, mat_t_vec3(c.g, s1));
    const Vec3 d1 = add3(w1, scale3(s1, -norm3(w1)));
    const Vec3 d2 = add3(w2, scale3(s2, -norm3(w2)));
    return std::max(norm3(d1), norm3(d2));
}

inline TwoSiteRun two_site_ascent(const Correlators& c, Vec3 s2, const OptimizerConfig& cfg,
                                  Rng& rng) {
    TwoSiteRun run;
    Vec3 s1 = add3(c.r1, matvec3(c.g, s2));
    double n = norm3(s1);
    s1 = (n < 1e-14) ? Vec3{0, 0, 1} : scale3(s1, 1.0 / n);

    double f = two_site_objective(c, s1, s2);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        Vec3 w2 = add3(c.r2, mat_t_vec3(c.g, s1));
        n = norm3(w2);
        s2 = (n < 1e-14) ? perturbed_keep(s2, rng) : scale3(w2, 1.0 / n);

        Vec3 w1 = add3(c.r1, matvec3(c.g, s2));
        n = norm3(w1);
        s1 = (n < 1e-14) ? perturbed_keep(s1, rng) : scale3(w1, 1.0 / n);

        const double fnew = two_site_objective(c, s1, s2);
        run.iterations = k;
        if (fnew - f < cfg.convergence_tol) {
            // Objective stalled.  Accept only once the stationarity residual
            // certifies the fixed point; the normalized update keeps
            // contracting toward it even while the objective is flat at
            // machine precision, so otherwise keep sweeping.
            f = std::max(f, fnew);
            run.residual = two_site_residual(c, s1, s2);
            if (run.residual < 1e-8) {
                run.converged = true;
                break;
            }
            continue;
        }
        f = fnew;
    }
    if (!run.converged)
        run.residual = two_site_residual(c, s1, s2);
    run.s1 = s1;
    run.s2 = s2;
    run.value = f;
    return run;
}

// Contraction of psi against the two fixed spinors, leaving the named site free.
inline Vec2c contract_leaving(const PureState3& psi, int site, const Vec2c& p, const Vec2c& r) {
    Vec2c v{cd(0.0), cd(0.0)};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int cbit = 0; cbit < 2; ++cbit) {
                const cd amp = psi.amp[4 * a + 2 * b + cbit];
                if (site == 0)
                    v[a] += std::conj(p[b]) * std::conj(r[cbit]) * amp;
                else if (site == 1)
                    v[b] += std::conj(p[a]) * std::conj(r[cbit]) * amp;
                else
                    v[cbit] += std::conj(p[a]) * std::conj(r[b]) * amp;
            }
    return v;
}

inline double spinor_norm(const Vec2c& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

inline Vec2c perturbed_keep_spinor(const Vec2c& prev, Rng& rng) {
    Vec2c t = rng.unit_spinor();
    Vec2c out = {prev[0] + 1e-8 * t[0], prev[1] + 1e-8 * t[1]};
    const double n = spinor_norm(out);
    return n > 0.0 ? Vec2c{out[0] / n, out[1] / n} : prev;
}

struct ThreeSiteRun {
    std::array<Vec2c, 3> q;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

inline double three_site_residual(const PureState3& psi, const std::array<Vec2c, 3>& q) {
    double worst = 0.0;
    for (int site = 0; site < 3; ++site) {
        const Vec2c v = contract_leaving(psi, site, q[site == 0 ? 1 : 0], q[site == 2 ? 1 : 2]);
        // project out the component along q[site]
        const cd along = std::conj(q[site][0]) * v[0] + std::conj(q[site][1]) * v[1];
        const Vec2c d = {v[0] - along * q[site][0], v[1] - along * q[site][1]};
        worst = std::max(worst, spinor_norm(d));
    }
    return worst;
}

inline ThreeSiteRun three_site_ascent(const PureState3& psi, std::array<Vec2c, 3> q,
                                      const OptimizerConfig& cfg, Rng& rng) {
    auto objective = [&] {
        cd ov = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int cbit = 0; cbit < 2; ++cbit)
                    ov += std::conj(q[0][a]) * std::conj(q[1][b]) * std::conj(q[2][cbit]) *
                          psi.amp[4 * a + 2 * b + cbit];
        return std::norm(ov);
    };

    ThreeSiteRun run;
    double f = objective();
    for (int k = 1; k <= cfg.max_iters; ++k) {
        for (int site = 0; site < 3; ++site) {
            const Vec2c p = q[site == 0 ? 1 : 0];
            const Vec2c r = q[site == 2 ? 1 : 2];
            const Vec2c v = contract_leaving(psi, site, p, r);
            const double n = spinor_norm(v);
            q[site] = (n < 1e-14) ? perturbed_keep_spinor(q[site], rng)
                                  : Vec2c{v[0] / n, v[1] / n};
        }
        const double fnew = objective();
        run.iterations = k;
        if (fnew - f < cfg.convergence_tol) {
            // Same acceptance rule as the two-site ascent: a stalled
            // objective only converges once the tangential residual does.
            f = std::max(f, fnew);
            run.residual = three_site_residual(psi, q);
            if (run.residual < 1e-8) {
                run.converged = true;
                break;
            }
            continue;
        }
        f = fnew;
    }
    if (!run.converged)
        run.residual = three_site_residual(psi, q);
    run.q = q;
    run.value = f;
    return run;
}

}  // namespace detail

// P_max by alternating ascent on the two Bloch vectors of the AB pair
// (the third factor is implicit in the reduced-density objective).
inline PmaxResult pmax_numeric_2site(const PureState3& state, const OptimizerConfig& cfg = {}) {
    validate(cfg);
    const Correlators c = correlators(state);

    std::optional<detail::TwoSiteRun> best;
    for (int i = 0; i < cfg.restarts; ++i) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        const Vec3 start = (i < 6) ? detail::axis_starts()[static_cast<std::size_t>(i)]
                                   : rng.unit_sphere();
        detail::TwoSiteRun run = detail::two_site_ascent(c, start, cfg, rng);
        if (!best || run.value > best->value) best = run;
    }

    PmaxResult out;
    out.value = best->value;
    out.iterations = best->iterations;
    out.converged = best->converged;
    out.multiplier_residual = best->residual;
    out.product_state.q1 = detail::spinor_from_bloch(best->s1);
    out.product_state.q2 = detail::spinor_from_bloch(best->s2);
    // The best third factor is the normalized leftover contraction.
    Vec2c v3 = detail::contract_leaving(state, 2, out.product_state.q1, out.product_state.q2);
    const double n3 = detail::spinor_norm(v3);
    out.product_state.q3 = (n3 < 1e-14) ? Vec2c{cd(1.0), cd(0.0)} : Vec2c{v3[0] / n3, v3[1] / n3};
    return out;
}

// P_max by alternating ascent directly on the three product-state spinors.
inline PmaxResult pmax_numeric_3site(const PureState3& state, const OptimizerConfig& cfg = {}) {
    validate(cfg);

    std::optional<detail::ThreeSiteRun> best;
    for (int i = 0; i < cfg.restarts; ++i) {
        Rng rng(derive_seed(cfg.seed, 0x3511u + static_cast<std::uint64_t>(i)));
        std::array<Vec2c, 3> q;
        if (i < 6) {
            const Vec2c sp = detail::spinor_from_bloch(detail::axis_starts()[static_cast<std::size_t>(i)]);
            q = {sp, sp, sp};
        } else {
            q = {rng.unit_spinor(), rng.unit_spinor(), rng.unit_spinor()};
        }
        detail::ThreeSiteRun run = detail::three_site_ascent(state, q, cfg, rng);
        if (!best || run.value > best->value) best = run;
    }

    PmaxResult out;
    out.value = best->value;
    out.iterations = best->iterations;
    out.converged = best->converged;
    out.multiplier_residual = best->residual;
    out.product_state.q1 = best->q[0];
    out.product_state.q2 = best->q[1];
    out.product_state.q3 = best->q[2];
    return out;
}

// Exhaustive (theta, phi)-grid scan over both Bloch spheres; a certified
// lower bound on the two-site objective's maximum.
inline double pmax_grid_lower_bound(const PureState3& state, int resolution) {
    if (resolution < 8) throw OutOfRangeError("pmax_grid_lower_bound: resolution must be >= 8");
    const Correlators c = correlators(state);
    const double pi = std::numbers::pi;

    std::vector<Vec3> grid;
    grid.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double theta = pi * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double phi = 2.0 * pi * j / resolution;
            grid.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta)});
        }
    }

    double bestval = -1.0;
    for (const Vec3& s1 : grid) {
        const double base = dot3(c.r1, s1);
        const Vec3 w = add3(c.r2, mat_t_vec3(c.g, s1));
        double inner = -4.0;
        for (const Vec3& s2 : grid) inner = std::max(inner, dot3(w, s2));
        bestval = std::max(bestval, 0.25 * (1.0 + base + inner));
    }
    return bestval;
}

}  // namespace grv
