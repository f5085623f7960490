#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "grv/errors.hpp"

namespace grv {

using cd = std::complex<double>;

using Vec2c = std::array<cd, 2>;
using Mat2c = std::array<std::array<cd, 2>, 2>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Ten3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

inline Mat2c mat2_identity() {
    return {{{cd(1.0), cd(0.0)}, {cd(0.0), cd(1.0)}}};
}

inline Mat2c mat2_mul(const Mat2c& a, const Mat2c& b) {
    Mat2c r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

inline Mat2c mat2_adjoint(const Mat2c& a) {
    return {{{std::conj(a[0][0]), std::conj(a[1][0])},
             {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

inline cd mat2_det(const Mat2c& a) {
    return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

inline Vec2c mat2_apply(const Mat2c& a, const Vec2c& v) {
    return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

// max |(a a^dag - I)_{ij}|
inline double unitarity_defect(const Mat2c& a) {
    const Mat2c p = mat2_mul(a, mat2_adjoint(a));
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            d = std::max(d, std::abs(p[i][j] - (i == j ? cd(1.0) : cd(0.0))));
    return d;
}

inline double norm2c(const Vec2c& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

inline Vec3 add3(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 scale3(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Vec3 matvec3(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline Vec3 mat_t_vec3(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int j = 0; j < 3; ++j) r[j] = m[0][j] * v[0] + m[1][j] * v[1] + m[2][j] * v[2];
    return r;
}

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

// max |(o o^T - I)_{ij}|
inline double orthogonality_defect(const Mat3& o) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += o[i][k] * o[j][k];
            d = std::max(d, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return d;
}

// m = u * diag(s0, s1) * v^dag with s0 >= s1 >= 0 and u, v unitary.
struct Svd2 {
    Mat2c u = mat2_identity();
    double s0 = 0.0;
    double s1 = 0.0;
    Mat2c v = mat2_identity();
};

inline Svd2 svd2(const Mat2c& m) {
    // Eigen-decompose h = m^dag m; its eigenvectors are the right singular vectors.
    const double h00 = std::norm(m[0][0]) + std::norm(m[1][0]);
    const double h11 = std::norm(m[0][1]) + std::norm(m[1][1]);
    const cd h01 = std::conj(m[0][0]) * m[0][1] + std::conj(m[1][0]) * m[1][1];

    const double mean = 0.5 * (h00 + h11);
    const double diff = 0.5 * (h00 - h11);
    const double rad = std::sqrt(diff * diff + std::norm(h01));
    const double mu0 = mean + rad;
    const double mu1 = std::max(mean - rad, 0.0);

    Svd2 out;
    out.s0 = std::sqrt(std::max(mu0, 0.0));
    out.s1 = std::sqrt(mu1);

    const double scale = std::max({h00, h11, std::abs(h01)});
    Vec2c v0;
    if (std::abs(h01) > 1e-15 * std::max(scale, 1e-300)) {
        v0 = {h01, cd(mu0 - h00)};
    } else {
        v0 = (h00 >= h11) ? Vec2c{cd(1.0), cd(0.0)} : Vec2c{cd(0.0), cd(1.0)};
    }
    const double nv = norm2c(v0);
    v0 = {v0[0] / nv, v0[1] / nv};
    const Vec2c v1 = {-std::conj(v0[1]), std::conj(v0[0])};
    out.v = {{{v0[0], v1[0]}, {v0[1], v1[1]}}};

    Vec2c u0;
    if (out.s0 > 1e-300) {
        const Vec2c mv0 = mat2_apply(m, v0);
        const double n0 = norm2c(mv0);
        u0 = (n0 > 0.0) ? Vec2c{mv0[0] / n0, mv0[1] / n0} : Vec2c{cd(1.0), cd(0.0)};
    } else {
        u0 = {cd(1.0), cd(0.0)};
    }
    Vec2c u1;
    if (out.s1 > 1e-13 * out.s0) {
        Vec2c mv1 = mat2_apply(m, v1);
        const cd proj = std::conj(u0[0]) * mv1[0] + std::conj(u0[1]) * mv1[1];
        mv1 = {mv1[0] - proj * u0[0], mv1[1] - proj * u0[1]};
        const double n1 = norm2c(mv1);
        u1 = (n1 > 0.0) ? Vec2c{mv1[0] / n1, mv1[1] / n1}
                        : Vec2c{-std::conj(u0[1]), std::conj(u0[0])};
    } else {
        u1 = {-std::conj(u0[1]), std::conj(u0[0])};
    }
    out.u = {{{u0[0], u1[0]}, {u0[1], u1[1]}}};
    return out;
}

// Eigenvalues of an n x n complex Hermitian matrix (n <= 8), ascending.
// Cyclic Jacobi with explicit 2 x 2 unitary rotations.
inline std::vector<double> eig_hermitian(std::vector<std::vector<cd>> h) {
    const std::size_t n = h.size();
    for (const auto& row : h)
        if (row.size() != n) throw ValidationError("eig_hermitian: matrix not square");

    double fro = 0.0;
    for (const auto& row : h)
        for (const cd& z : row) fro += std::norm(z);
    const double stop = std::max(fro, 1e-30) * 1e-30;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(h[p][q]);
        if (off <= stop) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = std::abs(h[p][q]);
                if (apq < 1e-300) continue;
                const cd phase = h[p][q] / apq;
                const double app = h[p][p].real();
                const double aqq = h[q][q].real();
                const double tau = (aqq - app) / (2.0 * apq);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Columns: h <- h * j with j = [[c, s], [-s conj(phase), c conj(phase)]]
                for (std::size_t i = 0; i < n; ++i) {
                    const cd hip = h[i][p], hiq = h[i][q];
                    h[i][p] = c * hip - s * std::conj(phase) * hiq;
                    h[i][q] = s * hip + c * std::conj(phase) * hiq;
                }
                // Rows: h <- j^dag h
                for (std::size_t i = 0; i < n; ++i) {
                    const cd hpi = h[p][i], hqi = h[q][i];
                    h[p][i] = c * hpi - s * phase * hqi;
                    h[q][i] = s * hpi + c * phase * hqi;
                }
                h[q][p] = std::conj(h[p][q]);
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = h[i][i].real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Real roots of a x^2 + b x + c = 0, largest first.  Cancellation-safe.
// Returns the number of roots written; a discriminant below -disc_tol yields zero.
inline int quadratic_roots(double a, double b, double c, double disc_tol, double& r0,
                           double& r1) {
    if (std::abs(a) < 1e-300) {
        if (std::abs(b) < 1e-300) return 0;
        r0 = -c / b;
        return 1;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < -disc_tol) return 0;
    if (disc < 0.0) disc = 0.0;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double x0, x1;
    if (std::abs(qq) > 0.0) {
        x0 = qq / a;
        x1 = c / qq;
    } else {
        x0 = x1 = 0.0;
    }
    r0 = std::max(x0, x1);
    r1 = std::min(x0, x1);
    return 2;
}

}  // namespace grv
