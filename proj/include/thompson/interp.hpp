#pragma once

#include <vector>

#include "thompson/dyadic.hpp"

namespace thompson {

/// A point of a piecewise-linear graph, both coordinates exact.
struct DyadicPoint {
    Dyadic x;
    Dyadic y;
    bool operator==(const DyadicPoint&) const = default;
};

/// Canonical decomposition of the two side lengths of a dyadic rectangle.
///
/// r1 and r2 are written as m1/2^k1 and m2/2^k2 in canonical form (odd
/// numerator, minimal exponent). Side `a` is the one with the smaller
/// numerator (side 1 on ties) and receives the halving subdivision; side
/// `b` keeps the uniform grid. d = m_b - m_a is the number of extra cuts
/// side `a` needs.
struct SideSplit {
    int a = 1; // 1 or 2
    int b = 2;
    BigInt m_a;
    BigInt m_b;
    int k_a = 0;
    int k_b = 0;
    BigInt d;
};

SideSplit side_decomposition(const Dyadic& r1, const Dyadic& r2);

/// Cut positions subdividing the base grid {0, 1/2^k_a, ..., m_a/2^k_a}
/// into m_a + d intervals: rounds n = 0, ..., l-1 place cuts at
/// (2i-1)/2^(k_a+n+1), halving every interval left to right, with the last
/// round stopped after d - c_{l-1} cuts (c_n = m_a (2^n - 1), l minimal
/// with c_l >= d). Cuts are returned in generation order.
std::vector<Dyadic> refine_cuts(const BigInt& m_a, int k_a, const BigInt& d);

/// Full record of one interpolation: the side counts, the stopping round,
/// the cut sequence and which side of the rectangle was subdivided.
struct InterpPlan {
    BigInt m_a;
    BigInt m_b;
    int k_a = 0;
    int k_b = 0;
    BigInt d;
    int l = 0; // smallest round count with c_l >= d; 0 when d == 0
    std::vector<Dyadic> cuts;
    bool a_is_x = true;
};

InterpPlan plan_interpolation(const Dyadic& r1, const Dyadic& r2);

/// Strictly increasing PL path from p to q whose breakpoints are dyadic
/// and whose slopes are all integer powers of 2. Returns m_b + 1 points
/// with endpoints exactly p and q. Requires p.x < q.x and p.y < q.y.
std::vector<DyadicPoint> dyadic_interpolation(const DyadicPoint& p, const DyadicPoint& q);

} // namespace thompson
