#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "thompson/errors.hpp"
#include "thompson/interp.hpp"

using thompson::BigInt;
using thompson::Dyadic;
using thompson::DomainError;
using thompson::DyadicPoint;
using thompson::InterpPlan;
using thompson::SideSplit;

namespace {

Dyadic dy(long long m, int k) { return Dyadic(BigInt(m), k); }

std::vector<Dyadic> sorted_union(std::vector<Dyadic> base, const std::vector<Dyadic>& cuts) {
    base.insert(base.end(), cuts.begin(), cuts.end());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    return base;
}

} // namespace

TEST_CASE("side_decomposition picks the side with the smaller odd numerator") {
    // 1/4 vs 11/64: side 1 is refined, needs d = 10 extra cuts.
    const SideSplit s = thompson::side_decomposition(dy(1, 2), dy(11, 6));
    CHECK(s.a == 1);
    CHECK(s.b == 2);
    CHECK(s.m_a == 1);
    CHECK(s.k_a == 2);
    CHECK(s.m_b == 11);
    CHECK(s.k_b == 6);
    CHECK(s.d == 10);

    const SideSplit t = thompson::side_decomposition(Dyadic(1), Dyadic(1));
    CHECK(t.a == 1);
    CHECK(t.d == 0);

    // 3/8 vs 1/2: numerators 3 and 1, so side 2 is refined.
    const SideSplit u = thompson::side_decomposition(dy(3, 3), dy(1, 1));
    CHECK(u.a == 2);
    CHECK(u.m_a == 1);
    CHECK(u.k_a == 1);
    CHECK(u.m_b == 3);
    CHECK(u.k_b == 3);
    CHECK(u.d == 2);

    CHECK_THROWS_AS(thompson::side_decomposition(Dyadic(0), Dyadic(1)), DomainError);
    CHECK_THROWS_AS(thompson::side_decomposition(Dyadic(1), dy(-1, 1)), DomainError);
}

TEST_CASE("refine_cuts generation order") {
    // m_a = 2, k_a = 3, d = 9: rounds of 2, 4 cuts, then 3 of the 8.
    const std::vector<Dyadic> got = thompson::refine_cuts(BigInt(2), 3, BigInt(9));
    const std::vector<Dyadic> want = {dy(1, 4), dy(3, 4), dy(1, 5), dy(3, 5), dy(5, 5),
                                      dy(7, 5), dy(1, 6), dy(3, 6), dy(5, 6)};
    CHECK(got == want);

    // m_a = 1, k_a = 2, d = 10: rounds of 1, 2, 4 cuts, then 3 of the 8.
    const std::vector<Dyadic> got2 = thompson::refine_cuts(BigInt(1), 2, BigInt(10));
    const std::vector<Dyadic> want2 = {dy(1, 3), dy(1, 4), dy(3, 4), dy(1, 5), dy(3, 5),
                                       dy(5, 5), dy(7, 5), dy(1, 6), dy(3, 6), dy(5, 6)};
    CHECK(got2 == want2);

    CHECK(thompson::refine_cuts(BigInt(5), 4, BigInt(0)).empty());
}

TEST_CASE("refined partition for the quarter rectangle") {
    const std::vector<Dyadic> cuts = thompson::refine_cuts(BigInt(1), 2, BigInt(10));
    const std::vector<Dyadic> grid = sorted_union({Dyadic(0), dy(1, 2)}, cuts);
    const long long nums[] = {0, 1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 16};
    REQUIRE(grid.size() == 12);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i] == dy(nums[i], 6));
    }
}

TEST_CASE("plan_interpolation records the stopping round") {
    const InterpPlan plan = thompson::plan_interpolation(dy(1, 2), dy(11, 6));
    CHECK(plan.l == 4); // c_3 = 7 < 10 <= c_4 = 15
    CHECK(plan.cuts.size() == 10);
    CHECK(plan.a_is_x);

    const InterpPlan flat = thompson::plan_interpolation(Dyadic(1), Dyadic(1));
    CHECK(flat.l == 0);
    CHECK(flat.cuts.empty());
}

TEST_CASE("interpolation golden: (0,0) to (1/4, 11/64)") {
    const std::vector<DyadicPoint> pts =
        thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {dy(1, 2), dy(11, 6)});
    REQUIRE(pts.size() == 12);

    const long long xs[] = {0, 1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 16};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].x == dy(xs[i], 6));
        CHECK(pts[i].y == dy(static_cast<long long>(i), 6));
    }

    // Six segments of slope 1 followed by five of slope 1/2, all exact.
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Dyadic dx = pts[i + 1].x - pts[i].x;
        const Dyadic dyv = pts[i + 1].y - pts[i].y;
        if (i < 6) {
            CHECK(dyv == dx);
        } else {
            CHECK(dyv.scaled_pow2(1) == dx);
        }
    }
}

TEST_CASE("interpolation trivial cases") {
    const auto line = thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {Dyadic(1), Dyadic(1)});
    REQUIRE(line.size() == 2);
    CHECK(line[0] == DyadicPoint{Dyadic(0), Dyadic(0)});
    CHECK(line[1] == DyadicPoint{Dyadic(1), Dyadic(1)});

    const auto half = thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {dy(1, 1), dy(1, 2)});
    REQUIRE(half.size() == 2);
    CHECK(half[1].x == dy(1, 1));
    CHECK(half[1].y == dy(1, 2));

    CHECK_THROWS_AS(thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {Dyadic(0), Dyadic(1)}),
                    DomainError);
    CHECK_THROWS_AS(thompson::dyadic_interpolation({Dyadic(0), Dyadic(1)}, {Dyadic(1), Dyadic(1)}),
                    DomainError);
}

TEST_CASE("interpolation invariants on random dyadic rectangles") {
    std::mt19937 rng(1729);
    std::uniform_int_distribution<int> exp(0, 12);
    auto corner = [&](int k) {
        // A dyadic in [-2, 2] with exponent at most k.
        std::uniform_int_distribution<long long> num(-(2LL << k), 2LL << k);
        return Dyadic(BigInt(num(rng)), k);
    };

    for (int trial = 0; trial < 5000; ++trial) {
        const Dyadic px = corner(exp(rng));
        const Dyadic py = corner(exp(rng));
        Dyadic qx = corner(exp(rng));
        Dyadic qy = corner(exp(rng));
        if (!(px < qx)) {
            qx = px + dy(1, exp(rng));
        }
        if (!(py < qy)) {
            qy = py + dy(1, exp(rng));
        }

        const std::vector<DyadicPoint> pts = thompson::dyadic_interpolation({px, py}, {qx, qy});
        const SideSplit s = thompson::side_decomposition(qx - px, qy - py);

        REQUIRE(pts.size() == s.m_b.convert_to<std::size_t>() + 1);
        REQUIRE(pts.front() == DyadicPoint{px, py});
        REQUIRE(pts.back() == DyadicPoint{qx, qy});

        // Every piece is a standard dyadic interval on both axes, so all
        // slopes are automatically powers of two.
        bool ok = true;
        for (std::size_t i = 0; ok && i + 1 < pts.size(); ++i) {
            const Dyadic dx = pts[i + 1].x - pts[i].x;
            const Dyadic dyv = pts[i + 1].y - pts[i].y;
            ok = dx.sign() > 0 && dyv.sign() > 0 && dx.numerator() == 1 &&
                 dyv.numerator() == 1;
        }
        REQUIRE(ok);
    }
}

TEST_CASE("interpolation commutes with transposition") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> exp(0, 10);
    std::uniform_int_distribution<long long> num(1, 4000);
    for (int trial = 0; trial < 200; ++trial) {
        const Dyadic rx(BigInt(num(rng)), exp(rng));
        const Dyadic ry(BigInt(num(rng)), exp(rng));
        const auto fwd = thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {rx, ry});
        const auto rev = thompson::dyadic_interpolation({Dyadic(0), Dyadic(0)}, {ry, rx});
        REQUIRE(fwd.size() == rev.size());
        bool ok = true;
        for (std::size_t i = 0; ok && i < fwd.size(); ++i) {
            ok = fwd[i].x == rev[i].y && fwd[i].y == rev[i].x;
        }
        REQUIRE(ok);
    }
}
