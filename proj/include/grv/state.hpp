#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/linalg.hpp"
#include "grv/rng.hpp"

namespace grv {

// Basis label b = 4 q_A + 2 q_B + q_C, qubit A most significant.
struct PureState3 {
    std::array<cd, 8> amp{};
};

// Basis label 2 q_A + q_B.
struct PureState2 {
    std::array<cd, 4> amp{};
};

struct DensityMatrix {
    int dim = 2;
    std::vector<cd> m;  // row-major dim x dim

    cd& at(int i, int j) { return m[static_cast<std::size_t>(i) * dim + j]; }
    const cd& at(int i, int j) const { return m[static_cast<std::size_t>(i) * dim + j]; }
};

struct LocalUnitary {
    Mat2c u = mat2_identity();
};

struct ProductState {
    Vec2c q1{cd(1.0), cd(0.0)};
    Vec2c q2{cd(1.0), cd(0.0)};
    std::optional<Vec2c> q3;  // absent for two-site problems
};

inline double norm(const PureState3& s) {
    double n2 = 0.0;
    for (const cd& a : s.amp) n2 += std::norm(a);
    return std::sqrt(n2);
}

inline double norm(const PureState2& s) {
    double n2 = 0.0;
    for (const cd& a : s.amp) n2 += std::norm(a);
    return std::sqrt(n2);
}

inline PureState3 normalize(const PureState3& s) {
    const double n = norm(s);
    if (n <= 1e-300) throw ZeroStateError("normalize: zero amplitude vector");
    PureState3 r = s;
    for (cd& a : r.amp) a /= n;
    return r;
}

inline PureState2 normalize(const PureState2& s) {
    const double n = norm(s);
    if (n <= 1e-300) throw ZeroStateError("normalize: zero amplitude vector");
    PureState2 r = s;
    for (cd& a : r.amp) a /= n;
    return r;
}

inline cd overlap(const PureState3& a, const PureState3& b) {
    cd s = 0.0;
    for (int i = 0; i < 8; ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

inline PureState3 from_acin(const AcinForm& p) {
    validate(p);
    PureState3 s;
    s.amp[0] = p.lambda[0];
    s.amp[4] = p.lambda[1] * std::exp(cd(0.0, p.phi));
    s.amp[5] = p.lambda[2];
    s.amp[6] = p.lambda[3];
    s.amp[7] = p.lambda[4];
    return s;
}

inline PureState3 wlike_state(const WLikeParams& p) {
    validate(p);
    PureState3 s;
    s.amp[4] = p.a;
    s.amp[2] = p.b;
    s.amp[1] = p.c;
    s.amp[7] = p.q;
    return s;
}

inline void require_unitary(const LocalUnitary& u, const char* who) {
    if (unitarity_defect(u.u) > 1e-12)
        throw NotUnitaryError(std::string(who) + ": matrix fails u u^dag = I within 1e-12");
}

inline PureState3 apply_local(const PureState3& s, const LocalUnitary& uA,
                              const LocalUnitary& uB, const LocalUnitary& uC) {
    require_unitary(uA, "apply_local uA");
    require_unitary(uB, "apply_local uB");
    require_unitary(uC, "apply_local uC");
    PureState3 r;
    for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2)
            for (int c2 = 0; c2 < 2; ++c2) {
                cd acc = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c)
                            acc += uA.u[a2][a] * uB.u[b2][b] * uC.u[c2][c] *
                                   s.amp[4 * a + 2 * b + c];
                r.amp[4 * a2 + 2 * b2 + c2] = acc;
            }
    return r;
}

enum class Keep { A, B, C, AB, AC, BC };

// Partial trace over the complement of `keep`.
inline DensityMatrix reduce(const PureState3& s, Keep keep) {
    // Bit positions in the basis label: A = 2, B = 1, C = 0.
    std::vector<int> kept;
    switch (keep) {
        case Keep::A: kept = {2}; break;
        case Keep::B: kept = {1}; break;
        case Keep::C: kept = {0}; break;
        case Keep::AB: kept = {2, 1}; break;
        case Keep::AC: kept = {2, 0}; break;
        case Keep::BC: kept = {1, 0}; break;
    }
    std::vector<int> traced;
    for (int bit : {2, 1, 0}) {
        bool k = false;
        for (int kb : kept) k = k || (kb == bit);
        if (!k) traced.push_back(bit);
    }
    const int kd = static_cast<int>(kept.size());
    const int dim = 1 << kd;
    DensityMatrix rho;
    rho.dim = dim;
    rho.m.assign(static_cast<std::size_t>(dim) * dim, cd(0.0));
    const int tn = 1 << traced.size();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cd acc = 0.0;
            for (int t = 0; t < tn; ++t) {
                int bi = 0, bj = 0;
                for (int k = 0; k < kd; ++k) {
                    const int bit = (i >> (kd - 1 - k)) & 1;
                    const int bjt = (j >> (kd - 1 - k)) & 1;
                    bi |= bit << kept[k];
                    bj |= bjt << kept[k];
                }
                for (std::size_t k = 0; k < traced.size(); ++k) {
                    const int bit = (t >> k) & 1;
                    bi |= bit << traced[k];
                    bj |= bit << traced[k];
                }
                acc += s.amp[bi] * std::conj(s.amp[bj]);
            }
            rho.at(i, j) = acc;
        }
    return rho;
}

struct DensityDefects {
    double hermiticity = 0.0;  // max |rho_ij - conj(rho_ji)|
    double trace = 0.0;        // |Tr rho - 1|
    double min_eigenvalue = 0.0;
};

inline DensityDefects density_defects(const DensityMatrix& rho) {
    DensityDefects d;
    cd tr = 0.0;
    for (int i = 0; i < rho.dim; ++i) {
        tr += rho.at(i, i);
        for (int j = 0; j < rho.dim; ++j)
            d.hermiticity = std::max(d.hermiticity,
                                     std::abs(rho.at(i, j) - std::conj(rho.at(j, i))));
    }
    d.trace = std::abs(tr - cd(1.0));
    std::vector<std::vector<cd>> h(rho.dim, std::vector<cd>(rho.dim));
    for (int i = 0; i < rho.dim; ++i)
        for (int j = 0; j < rho.dim; ++j) h[i][j] = rho.at(i, j);
    d.min_eigenvalue = eig_hermitian(std::move(h)).front();
    return d;
}

inline void validate_density(const DensityMatrix& rho) {
    const DensityDefects d = density_defects(rho);
    if (d.hermiticity > 1e-12)
        throw ValidationError("DensityMatrix: Hermiticity defect beyond 1e-12");
    if (d.trace > 1e-12) throw ValidationError("DensityMatrix: trace deviates from 1 beyond 1e-12");
    if (d.min_eigenvalue < -1e-10)
        throw ValidationError("DensityMatrix: negative eigenvalue beyond -1e-10");
}

// Haar-distributed 2 x 2 unitary: QR of a complex Ginibre sample with the
// positive-diagonal-R convention (Gram-Schmidt), which makes Q exactly Haar.
inline LocalUnitary haar_unitary_from(Rng& rng) {
    for (;;) {
        const Vec2c a0{rng.cnormal(), rng.cnormal()};
        const Vec2c a1{rng.cnormal(), rng.cnormal()};
        const double n0 = norm2c(a0);
        if (n0 < 1e-154) continue;
        const Vec2c q0{a0[0] / n0, a0[1] / n0};
        const cd proj = std::conj(q0[0]) * a1[0] + std::conj(q0[1]) * a1[1];
        const Vec2c w{a1[0] - proj * q0[0], a1[1] - proj * q0[1]};
        const double n1 = norm2c(w);
        if (n1 < 1e-154) continue;
        LocalUnitary u;
        u.u = {{{q0[0], w[0] / n1}, {q0[1], w[1] / n1}}};
        return u;
    }
}

inline LocalUnitary haar_unitary(std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary_from(rng);
}

inline PureState3 random_haar3(std::uint64_t seed) {
    Rng rng(seed);
    PureState3 s;
    for (cd& a : s.amp) a = rng.cnormal();
    return normalize(s);
}

inline PureState2 random_haar2(std::uint64_t seed) {
    Rng rng(seed);
    PureState2 s;
    for (cd& a : s.amp) a = rng.cnormal();
    return normalize(s);
}

// Uniform point on the nonnegative octant of the unit sphere in R^n.
template <std::size_t N>
inline std::array<double, N> unit_octant(Rng& rng) {
    std::array<double, N> v{};
    for (;;) {
        double n2 = 0.0;
        for (double& x : v) {
            x = std::abs(rng.normal());
            n2 += x * x;
        }
        if (n2 > 1e-200) {
            const double n = std::sqrt(n2);
            for (double& x : v) x /= n;
            return v;
        }
    }
}

inline AcinForm random_acin(std::uint64_t seed) {
    Rng rng(seed);
    AcinForm p;
    p.lambda = unit_octant<5>(rng);
    p.phi = rng.uniform(0.0, std::numbers::pi);
    return p;
}

inline WLikeParams random_wlike(std::uint64_t seed) {
    Rng rng(seed);
    const auto v = unit_octant<4>(rng);
    return WLikeParams{v[0], v[1], v[2], v[3]};
}

enum class StateKind { Haar3, Haar2, AcinUniform, WlikeUniform };

inline StateKind parse_state_kind(const std::string& kind) {
    if (kind == "haar3") return StateKind::Haar3;
    if (kind == "haar2") return StateKind::Haar2;
    if (kind == "acin-uniform") return StateKind::AcinUniform;
    if (kind == "wlike-uniform") return StateKind::WlikeUniform;
    throw UnknownKindError("random_state: unknown kind '" + kind + "'");
}

inline std::variant<PureState3, PureState2> random_state(std::uint64_t seed, StateKind kind) {
    switch (kind) {
        case StateKind::Haar3: return random_haar3(seed);
        case StateKind::Haar2: return random_haar2(seed);
        case StateKind::AcinUniform: return from_acin(random_acin(seed));
        case StateKind::WlikeUniform: return wlike_state(random_wlike(seed));
    }
    throw UnknownKindError("random_state: unknown kind");
}

// Two-qubit state embedded as A,B of a three-qubit state with C = |0>.
// Leaves every product-overlap question unchanged: the optimal third factor is |0>.
inline PureState3 embed_two_qubit(const PureState2& s) {
    PureState3 r;
    r.amp[0] = s.amp[0];  // 00 -> 000
    r.amp[2] = s.amp[1];  // 01 -> 010
    r.amp[4] = s.amp[2];  // 10 -> 100
    r.amp[6] = s.amp[3];  // 11 -> 110
    return r;
}

}  // namespace grv
