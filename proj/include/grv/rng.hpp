#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "grv/linalg.hpp"

namespace grv {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent sub-seed for item `stream` of a study seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    return splitmix64(x);
}

// Deterministic double-precision stream on top of mt19937_64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_) {
            have_ = false;
            return cache_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        cache_ = r * std::sin(t);
        have_ = true;
        return r * std::cos(t);
    }

    cd cnormal() { return {normal(), normal()}; }

    Vec3 unit_sphere() {
        const double z = uniform(-1.0, 1.0);
        const double ph = uniform(0.0, 2.0 * std::numbers::pi);
        const double s = std::sqrt(std::max(1.0 - z * z, 0.0));
        return {s * std::cos(ph), s * std::sin(ph), z};
    }

    Vec2c unit_spinor() {
        Vec2c v{cnormal(), cnormal()};
        double n = norm2c(v);
        while (n < 1e-154) {
            v = {cnormal(), cnormal()};
            n = norm2c(v);
        }
        return {v[0] / n, v[1] / n};
    }

  private:
    std::mt19937_64 eng_;
    double cache_ = 0.0;
    bool have_ = false;
};

}  // namespace grv
