#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/linalg.hpp"
#include "grv/state.hpp"

namespace grv {

// Pauli index convention: 0, 1, 2 <-> x, y, z.
inline const Mat2c& pauli(int a) {
    static const std::array<Mat2c, 3> p = {
        Mat2c{{{cd(0.0), cd(1.0)}, {cd(1.0), cd(0.0)}}},
        Mat2c{{{cd(0.0), cd(0.0, -1.0)}, {cd(0.0, 1.0), cd(0.0)}}},
        Mat2c{{{cd(1.0), cd(0.0)}, {cd(0.0), cd(-1.0)}}},
    };
    return p[a];
}

// h1 pairs sites (B, C), h2 pairs (A, C), h3 pairs (A, B); g is the three-site tensor.
struct BlochForm3 {
    Vec3 v1{}, v2{}, v3{};
    Mat3 h1{}, h2{}, h3{};
    Ten3 g{};
};

struct BlochForm2 {
    Vec3 v1{}, v2{};
    Mat3 gmat{};
};

struct Rotation3 {
    Mat3 o{};
};

namespace detail {

// Tr[rho * (O_A ⊗ O_B ⊗ O_C)] with Pauli index or -1 for the identity at each site.
inline cd pauli_trace3(const DensityMatrix& rho, int a, int b, int c) {
    auto fac = [](int idx, int i, int j) -> cd {
        if (idx < 0) return i == j ? cd(1.0) : cd(0.0);
        return pauli(idx)[i][j];
    };
    cd tr = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const cd k = fac(a, (j >> 2) & 1, (i >> 2) & 1) * fac(b, (j >> 1) & 1, (i >> 1) & 1) *
                         fac(c, j & 1, i & 1);
            if (k != cd(0.0)) tr += rho.at(i, j) * k;
        }
    return tr;
}

inline cd pauli_trace2(const DensityMatrix& rho, int a, int b) {
    auto fac = [](int idx, int i, int j) -> cd {
        if (idx < 0) return i == j ? cd(1.0) : cd(0.0);
        return pauli(idx)[i][j];
    };
    cd tr = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const cd k = fac(a, (j >> 1) & 1, (i >> 1) & 1) * fac(b, j & 1, i & 1);
            if (k != cd(0.0)) tr += rho.at(i, j) * k;
        }
    return tr;
}

inline double real_component(const cd& z, const char* what) {
    if (std::abs(z.imag()) > 1e-12)
        throw ValidationError(std::string(what) + ": Pauli trace has imaginary residue beyond 1e-12");
    return z.real();
}

}  // namespace detail

inline DensityMatrix density_of(const PureState3& s) {
    DensityMatrix rho;
    rho.dim = 8;
    rho.m.resize(64);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) rho.at(i, j) = s.amp[i] * std::conj(s.amp[j]);
    return rho;
}

inline BlochForm3 bloch3(const DensityMatrix& rho) {
    if (rho.dim != 8) throw ValidationError("bloch3: density matrix must be 8 x 8");
    BlochForm3 f;
    for (int a = 0; a < 3; ++a) {
        f.v1[a] = detail::real_component(detail::pauli_trace3(rho, a, -1, -1), "bloch3 v1");
        f.v2[a] = detail::real_component(detail::pauli_trace3(rho, -1, a, -1), "bloch3 v2");
        f.v3[a] = detail::real_component(detail::pauli_trace3(rho, -1, -1, a), "bloch3 v3");
        for (int b = 0; b < 3; ++b) {
            f.h1[a][b] = detail::real_component(detail::pauli_trace3(rho, -1, a, b), "bloch3 h1");
            f.h2[a][b] = detail::real_component(detail::pauli_trace3(rho, a, -1, b), "bloch3 h2");
            f.h3[a][b] = detail::real_component(detail::pauli_trace3(rho, a, b, -1), "bloch3 h3");
            for (int c = 0; c < 3; ++c)
                f.g[a][b][c] =
                    detail::real_component(detail::pauli_trace3(rho, a, b, c), "bloch3 g");
        }
    }
    return f;
}

inline BlochForm3 bloch3(const PureState3& s) { return bloch3(density_of(s)); }

inline BlochForm2 bloch2(const DensityMatrix& rho) {
    if (rho.dim != 4) throw ValidationError("bloch2: density matrix must be 4 x 4");
    BlochForm2 f;
    for (int a = 0; a < 3; ++a) {
        f.v1[a] = detail::real_component(detail::pauli_trace2(rho, a, -1), "bloch2 v1");
        f.v2[a] = detail::real_component(detail::pauli_trace2(rho, -1, a), "bloch2 v2");
        for (int b = 0; b < 3; ++b)
            f.gmat[a][b] = detail::real_component(detail::pauli_trace2(rho, a, b), "bloch2 g");
    }
    return f;
}

// rho = (1/8) sum over the 4^3 identity/Pauli site words weighted by the components.
inline DensityMatrix bloch3_reconstruct(const BlochForm3& f) {
    DensityMatrix rho;
    rho.dim = 8;
    rho.m.assign(64, cd(0.0));
    auto fac = [](int idx, int i, int j) -> cd {
        if (idx < 0) return i == j ? cd(1.0) : cd(0.0);
        return pauli(idx)[i][j];
    };
    auto accumulate = [&](int a, int b, int c, double w) {
        if (w == 0.0) return;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                rho.at(i, j) += 0.125 * w * fac(a, (i >> 2) & 1, (j >> 2) & 1) *
                                fac(b, (i >> 1) & 1, (j >> 1) & 1) * fac(c, i & 1, j & 1);
    };
    accumulate(-1, -1, -1, 1.0);
    for (int a = 0; a < 3; ++a) {
        accumulate(a, -1, -1, f.v1[a]);
        accumulate(-1, a, -1, f.v2[a]);
        accumulate(-1, -1, a, f.v3[a]);
        for (int b = 0; b < 3; ++b) {
            accumulate(-1, a, b, f.h1[a][b]);
            accumulate(a, -1, b, f.h2[a][b]);
            accumulate(a, b, -1, f.h3[a][b]);
            for (int c = 0; c < 3; ++c) accumulate(a, b, c, f.g[a][b][c]);
        }
    }
    return rho;
}

inline DensityMatrix bloch2_reconstruct(const BlochForm2& f) {
    DensityMatrix rho;
    rho.dim = 4;
    rho.m.assign(16, cd(0.0));
    auto fac = [](int idx, int i, int j) -> cd {
        if (idx < 0) return i == j ? cd(1.0) : cd(0.0);
        return pauli(idx)[i][j];
    };
    auto accumulate = [&](int a, int b, double w) {
        if (w == 0.0) return;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rho.at(i, j) += 0.25 * w * fac(a, (i >> 1) & 1, (j >> 1) & 1) * fac(b, i & 1, j & 1);
    };
    accumulate(-1, -1, 1.0);
    for (int a = 0; a < 3; ++a) {
        accumulate(a, -1, f.v1[a]);
        accumulate(-1, a, f.v2[a]);
        for (int b = 0; b < 3; ++b) accumulate(a, b, f.gmat[a][b]);
    }
    return rho;
}

// U sigma_alpha U^dag = sum_beta o[alpha][beta] sigma_beta.
inline Rotation3 adjoint_rotation(const LocalUnitary& u) {
    require_unitary(u, "adjoint_rotation");
    Rotation3 r;
    const Mat2c ud = mat2_adjoint(u.u);
    for (int a = 0; a < 3; ++a) {
        const Mat2c m = mat2_mul(mat2_mul(u.u, pauli(a)), ud);
        for (int b = 0; b < 3; ++b) {
            const Mat2c pb = pauli(b);
            cd tr = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) tr += pb[i][k] * m[k][i];
            r.o[a][b] = detail::real_component(0.5 * tr, "adjoint_rotation");
        }
    }
    if (orthogonality_defect(r.o) > 1e-12)
        throw NotUnitaryError("adjoint_rotation: image is not orthogonal within 1e-12");
    return r;
}

struct Correlators {
    Vec3 r1{}, r2{};
    Mat3 g{};
};

// Single-site vectors of A and B plus the AB two-site matrix, via the reduced
// density matrix route (independent of the direct three-site tally in bloch3).
inline Correlators correlators(const PureState3& s) {
    const BlochForm2 f = bloch2(reduce(s, Keep::AB));
    return Correlators{f.v1, f.v2, f.gmat};
}

// Components of a canonical-form state as explicit polynomials in (lambda, phi).
inline BlochForm3 bloch3_canonical_polynomials(const AcinForm& p) {
    const double l0 = p.lambda[0], l1 = p.lambda[1], l2 = p.lambda[2], l3 = p.lambda[3],
                 l4 = p.lambda[4];
    const double c = std::cos(p.phi), s = std::sin(p.phi);
    BlochForm3 f;
    f.v1 = {2 * l0 * l1 * c, 2 * l0 * l1 * s,
            l0 * l0 - l1 * l1 - l2 * l2 - l3 * l3 - l4 * l4};
    f.v2 = {2 * l1 * l3 * c + 2 * l2 * l4, -2 * l1 * l3 * s,
            l0 * l0 + l1 * l1 + l2 * l2 - l3 * l3 - l4 * l4};
    f.v3 = {2 * l1 * l2 * c + 2 * l3 * l4, -2 * l1 * l2 * s,
            l0 * l0 + l1 * l1 - l2 * l2 + l3 * l3 - l4 * l4};

    f.h1[0][0] = 2 * l2 * l3 + 2 * l1 * l4 * c;
    f.h1[1][1] = 2 * l2 * l3 - 2 * l1 * l4 * c;
    f.h1[2][2] = l0 * l0 + l1 * l1 - l2 * l2 - l3 * l3 + l4 * l4;
    f.h1[0][1] = f.h1[1][0] = -2 * l1 * l4 * s;
    f.h1[0][2] = -2 * l2 * l4 + 2 * l1 * l3 * c;
    f.h1[2][0] = -2 * l3 * l4 + 2 * l1 * l2 * c;
    f.h1[1][2] = -2 * l1 * l3 * s;
    f.h1[2][1] = -2 * l1 * l2 * s;

    auto pair_site = [c, s](double m0, double m1, double m2, double m3, double m4) {
        Mat3 h{};
        h[0][0] = 2 * m0 * m2;
        h[1][1] = -2 * m0 * m2;
        h[2][2] = m0 * m0 - m1 * m1 + m2 * m2 - m3 * m3 + m4 * m4;
        h[0][2] = 2 * m0 * m1 * c;
        h[2][0] = -2 * m3 * m4 - 2 * m1 * m2 * c;
        h[1][2] = 2 * m0 * m1 * s;
        h[2][1] = 2 * m1 * m2 * s;
        return h;
    };
    f.h2 = pair_site(l0, l1, l2, l3, l4);
    f.h3 = pair_site(l0, l1, l3, l2, l4);  // exchange l2 <-> l3

    f.g[0][0][0] = 2 * l0 * l4;
    f.g[0][1][1] = f.g[1][0][1] = f.g[1][1][0] = -2 * l0 * l4;
    f.g[0][0][2] = 2 * l0 * l3;
    f.g[1][1][2] = -2 * l0 * l3;
    f.g[0][2][0] = 2 * l0 * l2;
    f.g[1][2][1] = -2 * l0 * l2;
    f.g[0][2][2] = 2 * l0 * l1 * c;
    f.g[1][2][2] = 2 * l0 * l1 * s;
    f.g[2][0][1] = f.g[2][1][0] = 2 * l1 * l4 * s;
    f.g[2][0][0] = -2 * l2 * l3 - 2 * l1 * l4 * c;
    f.g[2][0][2] = 2 * l2 * l4 - 2 * l1 * l3 * c;
    f.g[2][1][1] = -2 * l2 * l3 + 2 * l1 * l4 * c;
    f.g[2][1][2] = 2 * l1 * l3 * s;
    f.g[2][2][0] = 2 * l3 * l4 - 2 * l1 * l2 * c;
    f.g[2][2][1] = 2 * l1 * l2 * s;
    f.g[2][2][2] = l0 * l0 - l1 * l1 + l2 * l2 + l3 * l3 - l4 * l4;
    return f;
}

// Entries of the adjoint rotation as explicit polynomials in the matrix entries.
inline Mat3 rotation_entry_polynomials(const LocalUnitary& u) {
    const cd u11 = u.u[0][0], u12 = u.u[0][1], u21 = u.u[1][0], u22 = u.u[1][1];
    const cd i1(0.0, 1.0);
    Mat3 o{};
    o[0][0] = (0.5 * (u11 * std::conj(u22) + std::conj(u11) * u22 + u12 * std::conj(u21) +
                      std::conj(u12) * u21))
                  .real();
    o[1][1] = (0.5 * (u11 * std::conj(u22) + std::conj(u11) * u22 - u12 * std::conj(u21) -
                      std::conj(u12) * u21))
                  .real();
    o[2][2] = std::norm(u11) - std::norm(u12);
    o[0][1] = (0.5 * i1 *
               (u12 * std::conj(u21) + u11 * std::conj(u22) - std::conj(u12) * u21 -
                std::conj(u11) * u22))
                  .real();
    o[1][0] = (0.5 * i1 *
               (u12 * std::conj(u21) + std::conj(u11) * u22 - std::conj(u12) * u21 -
                u11 * std::conj(u22)))
                  .real();
    o[0][2] = (u11 * std::conj(u12) + std::conj(u11) * u12).real();
    o[2][0] = (u11 * std::conj(u21) + std::conj(u11) * u21).real();
    o[1][2] = (-i1 * (u11 * std::conj(u12) + std::conj(u21) * u22)).real();
    o[2][1] = (i1 * (u11 * std::conj(u21) + std::conj(u12) * u22)).real();
    return o;
}

// Largest entrywise difference between two three-qubit Bloch forms.
inline double bloch_form_distance(const BlochForm3& a, const BlochForm3& b) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(a.v1[i] - b.v1[i]));
        worst = std::max(worst, std::abs(a.v2[i] - b.v2[i]));
        worst = std::max(worst, std::abs(a.v3[i] - b.v3[i]));
        for (int k = 0; k < 3; ++k) {
            worst = std::max(worst, std::abs(a.h1[i][k] - b.h1[i][k]));
            worst = std::max(worst, std::abs(a.h2[i][k] - b.h2[i][k]));
            worst = std::max(worst, std::abs(a.h3[i][k] - b.h3[i][k]));
            for (int m = 0; m < 3; ++m)
                worst = std::max(worst, std::abs(a.g[i][k][m] - b.g[i][k][m]));
        }
    }
    return worst;
}

inline double mat3_distance(const Mat3& a, const Mat3& b) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a[i][k] - b[i][k]));
    return worst;
}

}  // namespace grv
