#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "thompson/analysis.hpp"
#include "thompson/approx.hpp"
#include "thompson/errors.hpp"

using thompson::BigInt;
using thompson::Certificate;
using thompson::DiffeoSpec;
using thompson::DomainError;
using thompson::Dyadic;
using thompson::GapPoint;
using thompson::PLMap;
using thompson::RotationInput;
using thompson::Space;
using thompson::SpaceMismatch;

namespace {

Dyadic dy(long long m, int k) { return Dyadic(BigInt(m), k); }

// Staircase F element: below the diagonal by 1/4 at x = 1/2.
PLMap staircase() {
    return PLMap(Space::interval, {{Dyadic(0), Dyadic(0)},
                                   {dy(1, 1), dy(1, 2)},
                                   {dy(3, 2), dy(1, 1)},
                                   {Dyadic(1), Dyadic(1)}});
}

} // namespace

TEST_CASE("bracket is tight for matching maps") {
    const DiffeoSpec f = DiffeoSpec::family("identity");
    const PLMap id = PLMap::identity(Space::interval);
    const Certificate c = thompson::certified_sup_distance(f, id, 1024);
    CHECK(c.lower == 0.0);
    // The monotonicity bound cannot see below one cell of f-variation.
    CHECK(c.upper <= 2.0 / 1024.0);
    CHECK(c.grid_size == 1024);
}

TEST_CASE("bracket locates a known gap") {
    const DiffeoSpec f = DiffeoSpec::family("identity");
    const PLMap g = staircase();
    const Certificate c = thompson::certified_sup_distance(f, g, 4096);
    CHECK(c.lower == 0.25);
    CHECK(c.witness_x == 0.5);
    CHECK(c.upper >= 0.25);
    CHECK(c.upper <= 0.25 + 2.0 / 4096.0);
}

TEST_CASE("exact PL-PL bracket contains the exact sup") {
    const PLMap id = PLMap::identity(Space::interval);
    const PLMap g = staircase();
    const Certificate c = thompson::certified_sup_distance(id, g, 4096);
    const Dyadic sup = testsupport::exact_sup_distance(id, g);
    CHECK(sup == dy(1, 2));
    CHECK(Dyadic::from_float(c.lower) <= sup);
    CHECK(sup <= Dyadic::from_float(c.upper));
    CHECK(c.lower == 0.25);
}

TEST_CASE("PL-PL bracket on random element pairs") {
    std::mt19937 rng(5151);
    for (int trial = 0; trial < 30; ++trial) {
        const Space sp = trial % 2 == 0 ? Space::interval : Space::circle_lift;
        const PLMap a = testsupport::random_element(rng, sp);
        const PLMap b = testsupport::random_element(rng, sp);
        const Certificate c = thompson::certified_sup_distance(a, b, 512);
        const Dyadic sup = testsupport::exact_sup_distance(a, b);
        REQUIRE(Dyadic::from_float(c.lower) <= sup);
        REQUIRE(sup <= Dyadic::from_float(c.upper));
    }
}

TEST_CASE("bracket narrows monotonically and halves on grid doubling") {
    const DiffeoSpec f = DiffeoSpec::family("bump:0.3");
    const PLMap g = thompson::approximate(f, 0x1p-6).g;

    Certificate prev{};
    double prev_width = 0.0;
    for (int k = 0; k < 3; ++k) {
        const long long n = 4096LL << k;
        const Certificate c = thompson::certified_sup_distance(f, g, n);
        CHECK(c.lower <= c.upper);
        if (k > 0) {
            CHECK(c.upper <= prev.upper);
            CHECK(c.lower >= prev.lower);
            const double ratio = prev_width / (c.upper - c.lower);
            CHECK(ratio >= 1.8);
            CHECK(ratio <= 2.2);
        }
        prev = c;
        prev_width = c.upper - c.lower;
    }
}

TEST_CASE("circle brackets align lifts before comparing") {
    const DiffeoSpec f = DiffeoSpec::family("rot:0.3");
    const PLMap g = PLMap::rotation(dy(5, 4)); // 5/16, a dyadic rotation near 0.3
    const Certificate c = thompson::certified_sup_distance(f, g, 1024);
    CHECK(c.lower >= 0.0124);
    CHECK(c.upper <= 0.0126 + 2.0 / 1024.0);
}

TEST_CASE("bracket argument checks") {
    CHECK_THROWS_AS(thompson::certified_sup_distance(DiffeoSpec::family("identity"),
                                                     PLMap::identity(Space::circle_lift), 64),
                    SpaceMismatch);
    CHECK_THROWS_AS(thompson::certified_sup_distance(DiffeoSpec::family("identity"),
                                                     PLMap::identity(Space::interval), 0),
                    DomainError);
    CHECK_THROWS_AS(thompson::certified_sup_distance(PLMap::identity(Space::interval),
                                                     PLMap::identity(Space::circle_lift), 64),
                    SpaceMismatch);
}

TEST_CASE("derivative distance lower bound") {
    CHECK(thompson::derivative_distance_lb(DiffeoSpec::family("rot:0.5"),
                                           PLMap::rotation(dy(1, 1)), 1024) == 0.0);
    CHECK(thompson::derivative_distance_lb(DiffeoSpec::family("identity"), staircase(), 1024) ==
          1.0);

    const DiffeoSpec f = DiffeoSpec::family("bump:0.3");
    const PLMap g = thompson::approximate(f, 0x1p-6).g;
    CHECK(thompson::derivative_distance_lb(f, g, 4096) >= 0.29);
}

TEST_CASE("power2_gap") {
    CHECK(thompson::power2_gap(1.0) == 0.0);
    CHECK(thompson::power2_gap(1.5) == 0.5);
    CHECK(thompson::power2_gap(1.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(thompson::power2_gap(3.0) == 1.0);
    CHECK(thompson::power2_gap(0.75) == 0.25);
    for (int j = -20; j <= 20; ++j) {
        CHECK(thompson::power2_gap(std::ldexp(1.0, j)) == 0.0);
    }
    CHECK(thompson::power2_gap(1.0 + 1e-13) == 0.0);
    CHECK_THROWS_AS(thompson::power2_gap(0.0), DomainError);
    CHECK_THROWS_AS(thompson::power2_gap(-1.0), DomainError);
}

TEST_CASE("is_rotation") {
    CHECK(thompson::is_rotation(DiffeoSpec::family("identity"), 1e-9, 1024));
    CHECK(thompson::is_rotation(DiffeoSpec::family("rot:0.3"), 1e-9, 1024));
    CHECK_FALSE(thompson::is_rotation(DiffeoSpec::family("sine:0.2"), 1e-6, 1024));
    CHECK_FALSE(thompson::is_rotation(DiffeoSpec::family("bump:0.3"), 1e-6, 1024));
}

TEST_CASE("discreteness floor") {
    const GapPoint g = thompson::discreteness_floor(DiffeoSpec::family("bump:0.3"), 4096);
    CHECK(g.x_star == 0.0);
    CHECK(g.mu == doctest::Approx(0.3).epsilon(1e-12));

    const GapPoint h = thompson::discreteness_floor(DiffeoSpec::family("bump:-0.3"), 4096);
    CHECK(h.x_star == 1.0);
    CHECK(h.mu == doctest::Approx(0.3).epsilon(1e-12));

    CHECK_THROWS_AS(thompson::discreteness_floor(DiffeoSpec::family("rot:0.25"), 1024),
                    RotationInput);
    CHECK_THROWS_AS(thompson::discreteness_floor(DiffeoSpec::family("identity"), 1024),
                    RotationInput);
}

TEST_CASE("the obstruction survives arbitrarily good approximation") {
    const DiffeoSpec f = DiffeoSpec::family("bump:0.3");
    for (double eps : {0x1p-3, 0x1p-6}) {
        const auto r = thompson::approximate(f, eps);
        const long long grid = std::max(
            {4096LL, 4 * static_cast<long long>(r.g.segment_count()), 4 * r.params.n});
        const Certificate c = thompson::certified_sup_distance(f, r.g, grid);
        CHECK(c.upper < eps);
        CHECK(thompson::derivative_distance_lb(f, r.g, 4096) >= 0.29);
    }
}
