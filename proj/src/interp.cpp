#include "thompson/interp.hpp"

#include <algorithm>

namespace thompson {

namespace {

// Guard against absurd piece counts before allocating.
std::size_t checked_count(const BigInt& n) {
    if (n > BigInt(100'000'000)) {
        throw ConstructionError("interpolation piece count exceeds budget: " + n.str());
    }
    return n.convert_to<std::size_t>();
}

} // namespace

SideSplit side_decomposition(const Dyadic& r1, const Dyadic& r2) {
    if (r1.sign() <= 0 || r2.sign() <= 0) {
        throw DomainError("side_decomposition requires positive side lengths");
    }
    SideSplit s;
    const BigInt& m1 = r1.numerator();
    const BigInt& m2 = r2.numerator();
    if (m1 <= m2) {
        s.a = 1;
        s.b = 2;
        s.m_a = m1;
        s.k_a = r1.exponent();
        s.m_b = m2;
        s.k_b = r2.exponent();
    } else {
        s.a = 2;
        s.b = 1;
        s.m_a = m2;
        s.k_a = r2.exponent();
        s.m_b = m1;
        s.k_b = r1.exponent();
    }
    s.d = s.m_b - s.m_a;
    return s;
}

std::vector<Dyadic> refine_cuts(const BigInt& m_a, int k_a, const BigInt& d) {
    std::vector<Dyadic> cuts;
    if (d.is_zero()) {
        return cuts;
    }
    cuts.reserve(checked_count(d));

    // c_n = m_a (2^n - 1); l is the smallest round count with c_l >= d.
    int l = 1;
    while (m_a * ((BigInt(1) << l) - 1) < d) {
        ++l;
    }

    // After the full rounds 0..l-2 exactly c_{l-1} cuts have been emitted;
    // the final round stops after d - c_{l-1} cuts from the left.
    BigInt emitted = 0;
    for (int n = 0; n < l; ++n) {
        const BigInt full = m_a << n; // cuts in a full round: 2^n * m_a
        const BigInt count = (n == l - 1) ? d - emitted : full;
        const std::size_t cnt = checked_count(count);
        for (std::size_t i = 1; i <= cnt; ++i) {
            cuts.emplace_back(BigInt(2 * static_cast<long long>(i) - 1), k_a + n + 1);
        }
        emitted += count;
    }
    return cuts;
}

InterpPlan plan_interpolation(const Dyadic& r1, const Dyadic& r2) {
    const SideSplit s = side_decomposition(r1, r2);
    InterpPlan plan;
    plan.m_a = s.m_a;
    plan.m_b = s.m_b;
    plan.k_a = s.k_a;
    plan.k_b = s.k_b;
    plan.d = s.d;
    plan.a_is_x = (s.a == 1);
    plan.cuts = refine_cuts(s.m_a, s.k_a, s.d);
    if (!s.d.is_zero()) {
        int l = 1;
        while (s.m_a * ((BigInt(1) << l) - 1) < s.d) {
            ++l;
        }
        plan.l = l;
    }
    return plan;
}

std::vector<DyadicPoint> dyadic_interpolation(const DyadicPoint& p, const DyadicPoint& q) {
    if (!(p.x < q.x) || !(p.y < q.y)) {
        throw DomainError("dyadic_interpolation requires p < q in both coordinates");
    }
    const InterpPlan plan = plan_interpolation(q.x - p.x, q.y - p.y);

    // Subdivided side: base grid m/2^k_a unioned with the cuts, sorted.
    std::vector<Dyadic> fine = plan.cuts;
    const std::size_t m_a = checked_count(plan.m_a);
    const std::size_t m_b = checked_count(plan.m_b);
    fine.reserve(m_b + 1);
    for (std::size_t m = 0; m <= m_a; ++m) {
        fine.emplace_back(BigInt(m), plan.k_a);
    }
    std::sort(fine.begin(), fine.end());

    // Pair the partitions pointwise. Endpoints are exact: fine.back() is
    // m_a/2^k_a and the final coarse point is m_b/2^k_b, the two sides.
    std::vector<DyadicPoint> pts;
    pts.reserve(m_b + 1);
    for (std::size_t m = 0; m <= m_b; ++m) {
        Dyadic coarse(BigInt(m), plan.k_b);
        if (plan.a_is_x) {
            pts.push_back({p.x + fine[m], p.y + coarse});
        } else {
            pts.push_back({p.x + coarse, p.y + fine[m]});
        }
    }
    return pts;
}

} // namespace thompson
