#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "grv/bloch.hpp"
#include "grv/canonical.hpp"
#include "grv/invariants.hpp"
#include "grv/state.hpp"

using Catch::Matchers::WithinAbs;
using namespace grv;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

double max_component_diff(const Invariants& a, const Invariants& b) {
    return std::max({std::abs(a.j1 - b.j1), std::abs(a.j2 - b.j2), std::abs(a.j3 - b.j3),
                     std::abs(a.j4 - b.j4), std::abs(a.j5 - b.j5)});
}

}  // namespace

TEST_CASE("polynomial invariants of reference canonical forms", "[invariants]") {
    SECTION("GHZ") {
        AcinForm p;
        p.lambda = {kInvSqrt2, 0, 0, 0, kInvSqrt2};
        const Invariants j = invariants_from_acin(p);
        CHECK_THAT(j.j1, WithinAbs(0.0, 1e-15));
        CHECK_THAT(j.j2, WithinAbs(0.0, 1e-15));
        CHECK_THAT(j.j3, WithinAbs(0.0, 1e-15));
        CHECK_THAT(j.j4, WithinAbs(0.25, 1e-15));
        CHECK_THAT(j.j5, WithinAbs(0.0, 1e-15));
    }
    SECTION("tri-Bell W form") {
        AcinForm p;
        p.lambda = {kInvSqrt3, 0, kInvSqrt3, kInvSqrt3, 0};
        const Invariants j = invariants_from_acin(p);
        CHECK_THAT(j.j1, WithinAbs(1.0 / 9.0, 1e-14));
        CHECK_THAT(j.j2, WithinAbs(1.0 / 9.0, 1e-14));
        CHECK_THAT(j.j3, WithinAbs(1.0 / 9.0, 1e-14));
        CHECK_THAT(j.j4, WithinAbs(0.0, 1e-15));
        CHECK_THAT(j.j5, WithinAbs(2.0 / 27.0, 1e-14));
    }
    SECTION("lambda2 = 0 family keeps only the mixed products") {
        AcinForm p;
        p.lambda = {0.6, 0.5, 0.0, 0.4, std::sqrt(1.0 - 0.36 - 0.25 - 0.16)};
        p.phi = 0.9;
        const double l0 = p.lambda[0], l1 = p.lambda[1], l3 = p.lambda[3], l4 = p.lambda[4];
        const Invariants j = invariants_from_acin(p);
        CHECK_THAT(j.j1, WithinAbs(l1 * l1 * l4 * l4, 1e-14));
        CHECK_THAT(j.j2, WithinAbs(0.0, 1e-15));
        CHECK_THAT(j.j3, WithinAbs(l0 * l0 * l3 * l3, 1e-14));
        CHECK_THAT(j.j4, WithinAbs(l0 * l0 * l4 * l4, 1e-14));
        CHECK_THAT(j.j5, WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("state-route invariants agree with the canonical polynomials", "[invariants]") {
    SECTION("GHZ amplitudes") {
        PureState3 s;
        s.amp[0] = kInvSqrt2;
        s.amp[7] = kInvSqrt2;
        const Invariants j = invariants_from_state(s);
        CHECK_THAT(j.j4, WithinAbs(0.25, 1e-12));
        CHECK_THAT(j.j1 + j.j2 + j.j3 + std::abs(j.j5), WithinAbs(0.0, 1e-12));
    }
    SECTION("product state") {
        PureState3 s;
        s.amp[0] = 1.0;
        const Invariants j = invariants_from_state(s);
        CHECK(max_component_diff(j, Invariants{}) < 1e-14);
    }
    SECTION("random canonical states, both routes") {
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            const AcinForm p = random_acin(seed);
            const Invariants via_poly = invariants_from_acin(p);
            const Invariants via_state = invariants_from_state(from_acin(p));
            CHECK(max_component_diff(via_poly, via_state) < 1e-10);
        }
    }
    SECTION("haar states against the decomposition route") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const PureState3 s = random_haar3(seed);
            const Invariants direct = invariants_from_state(s);
            const Invariants via_form = invariants_from_acin(acin_decompose(s).form);
            CHECK(max_component_diff(direct, via_form) < 1e-8);
        }
    }
}

TEST_CASE("invariants are blind to local unitaries", "[invariants]") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const PureState3 s = random_haar3(seed);
        const PureState3 t = apply_local(s, haar_unitary(derive_seed(seed, 1)),
                                         haar_unitary(derive_seed(seed, 2)),
                                         haar_unitary(derive_seed(seed, 3)));
        CHECK(max_component_diff(invariants_from_state(s), invariants_from_state(t)) < 1e-8);
    }
}

TEST_CASE("hyperdeterminant magnitudes of reference states", "[invariants]") {
    PureState3 g;
    g.amp[0] = kInvSqrt2;
    g.amp[7] = kInvSqrt2;
    CHECK_THAT(std::abs(hyperdeterminant(g)), WithinAbs(0.25, 1e-14));

    PureState3 w;
    w.amp[1] = kInvSqrt3;
    w.amp[2] = kInvSqrt3;
    w.amp[4] = kInvSqrt3;
    CHECK_THAT(std::abs(hyperdeterminant(w)), WithinAbs(0.0, 1e-14));
}

TEST_CASE("two-qubit invariant equals the squared amplitude determinant", "[invariants]") {
    SECTION("Bell") {
        PureState2 s;
        s.amp = {cd(kInvSqrt2), cd(0.0), cd(0.0), cd(kInvSqrt2)};
        CHECK_THAT(j_two_qubit(s), WithinAbs(0.25, 1e-15));
    }
    SECTION("product") {
        PureState2 s;
        s.amp = {cd(1.0), cd(0.0), cd(0.0), cd(0.0)};
        CHECK_THAT(j_two_qubit(s), WithinAbs(0.0, 1e-15));
    }
    SECTION("Schmidt coefficients 0.8 / 0.6") {
        PureState2 s;
        s.amp = {cd(0.8), cd(0.0), cd(0.0), cd(0.6)};
        CHECK_THAT(j_two_qubit(s), WithinAbs(0.64 * 0.36, 1e-15));
    }
}

TEST_CASE("eight bloch identities hold on random canonical states", "[invariants]") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const AcinForm p = random_acin(seed);
        const Invariants j = invariants_from_acin(p);
        const BlochForm3 f = bloch3(from_acin(p));

        const auto trace_sq = [](const Mat3& m) {
            double t = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) t += m[a][b] * m[a][b];
            return t;
        };
        double ggg = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) ggg += f.g[a][b][c] * f.g[a][b][c];
        double hvv = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) hvv += f.h3[a][b] * f.v1[a] * f.v2[b];

        CHECK_THAT(dot3(f.v1, f.v1), WithinAbs(1 - 4 * (j.j2 + j.j3 + j.j4), 1e-10));
        CHECK_THAT(dot3(f.v2, f.v2), WithinAbs(1 - 4 * (j.j1 + j.j3 + j.j4), 1e-10));
        CHECK_THAT(dot3(f.v3, f.v3), WithinAbs(1 - 4 * (j.j1 + j.j2 + j.j4), 1e-10));
        CHECK_THAT(trace_sq(f.h1), WithinAbs(1 + 4 * (2 * j.j1 - j.j2 - j.j3), 1e-10));
        CHECK_THAT(trace_sq(f.h2), WithinAbs(1 - 4 * (j.j1 - 2 * j.j2 + j.j3), 1e-10));
        CHECK_THAT(trace_sq(f.h3), WithinAbs(1 - 4 * (j.j1 + j.j2 - 2 * j.j3), 1e-10));
        CHECK_THAT(ggg, WithinAbs(1 + 4 * (2 * j.j1 + 2 * j.j2 + 2 * j.j3 + 3 * j.j4), 1e-10));
        CHECK_THAT(hvv, WithinAbs(1 - 4 * (j.j1 + j.j2 + j.j3 + j.j4 - j.j5), 1e-10));
    }
}

TEST_CASE("per-family relation reports", "[invariants]") {
    SECTION("tri-Bell family satisfies both of its identities") {
        AcinForm p;
        p.lambda = {kInvSqrt3, 0, kInvSqrt3, kInvSqrt3, 0};
        const RelationReport rep = check_relations(invariants_from_acin(p), "T3a");
        REQUIRE(rep.residuals.size() == 2);
        CHECK(rep.pass);
        for (const auto& rr : rep.residuals) CHECK(rr.residual < 1e-14);
    }
    SECTION("lambda4 = 0 family") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            Rng rng(seed);
            const auto o = unit_octant<4>(rng);
            AcinForm p;
            p.lambda = {o[0], o[1], o[2], o[3], 0.0};
            p.phi = rng.uniform(0.0, std::numbers::pi);
            const RelationReport rep = check_relations(invariants_from_acin(p), "T4a");
            REQUIRE(rep.residuals.size() == 1);
            CHECK(rep.residuals[0].residual < 1e-10);
        }
    }
    SECTION("lambda1 = 0 family") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            Rng rng(seed);
            const auto o = unit_octant<4>(rng);
            AcinForm p;
            p.lambda = {o[0], 0.0, o[1], o[2], o[3]};
            const RelationReport rep = check_relations(invariants_from_acin(p), "T4c");
            REQUIRE(rep.residuals.size() == 1);
            CHECK(rep.residuals[0].residual < 1e-10);
        }
    }
    SECTION("GHZ relations are trivial for its own family") {
        AcinForm p;
        p.lambda = {kInvSqrt2, 0, 0, 0, kInvSqrt2};
        const RelationReport rep = check_relations(invariants_from_acin(p), "2b");
        CHECK(rep.pass);
        CHECK(rep.residuals.empty());
    }
    SECTION("sign-folded magnitude relation for the full-support family") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const WLikeParams wp = random_wlike(seed);
            AcinForm p;
            try {
                p = wlike_standard_form(wp);
            } catch (const DegenerateTransform&) {
                continue;
            }
            const RelationReport rep = check_relations(invariants_from_acin(p), "wlike");
            REQUIRE(rep.residuals.size() == 1);
            CHECK(rep.residuals[0].residual < 1e-8);
        }
    }
    SECTION("unknown family is rejected") {
        CHECK_THROWS_AS(check_relations(Invariants{}, "T9"), UnknownFamilyError);
    }
}

TEST_CASE("nonnegativity and range of the invariants", "[invariants]") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Invariants j = invariants_from_acin(random_acin(seed));
        CHECK(j.j1 >= 0.0);
        CHECK(j.j2 >= 0.0);
        CHECK(j.j2 <= 0.25 + 1e-15);
        CHECK(j.j3 >= 0.0);
        CHECK(j.j3 <= 0.25 + 1e-15);
        CHECK(j.j4 >= 0.0);
        CHECK(j.j4 <= 0.25 + 1e-15);
    }
}
