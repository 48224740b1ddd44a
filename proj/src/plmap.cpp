#include "thompson/plmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thompson {

namespace mp = boost::multiprecision;

namespace {

// value = odd * 2^pow2 with odd > 0; defined for positive dyadics.
struct OddDecomp {
    BigInt odd;
    long long pow2;
};

OddDecomp odd_decomp(const Dyadic& v) {
    const BigInt mag = mp::abs(v.numerator());
    const long long tz = static_cast<long long>(mp::lsb(mag));
    return {mag >> tz, tz - v.exponent()};
}

// Exponent j with dy/dx == 2^j, or nullopt when the ratio is not a power
// of 2. Both arguments must be positive.
std::optional<long long> slope_log2(const Dyadic& dy, const Dyadic& dx) {
    const OddDecomp a = odd_decomp(dy);
    const OddDecomp b = odd_decomp(dx);
    if (a.odd != b.odd) {
        return std::nullopt;
    }
    return a.pow2 - b.pow2;
}

// Exact num/den for positive den; throws when the quotient is not dyadic.
Dyadic div_exact(const Dyadic& num, const Dyadic& den) {
    if (num.is_zero()) {
        return Dyadic();
    }
    const OddDecomp n = odd_decomp(num);
    const OddDecomp d = odd_decomp(den);
    BigInt q, r;
    mp::divide_qr(n.odd, d.odd, q, r);
    if (!r.is_zero()) {
        throw DomainError("evaluation result is not a dyadic rational");
    }
    if (num.sign() < 0) {
        q = -q;
    }
    return Dyadic(std::move(q), 0).scaled_pow2(n.pow2 - d.pow2);
}

Dyadic eval_on_segment(const DyadicPoint& p0, const DyadicPoint& p1, const Dyadic& x) {
    const Dyadic dx = p1.x - p0.x;
    const Dyadic dy = p1.y - p0.y;
    if (const auto j = slope_log2(dy, dx)) {
        return p0.y + (x - p0.x).scaled_pow2(*j);
    }
    return p0.y + div_exact((x - p0.x) * dy, dx);
}

// PL evaluation over an arbitrary strictly increasing point list.
Dyadic eval_points(const std::vector<DyadicPoint>& pts, const Dyadic& x) {
    auto it = std::upper_bound(pts.begin(), pts.end(), x,
                               [](const Dyadic& v, const DyadicPoint& p) { return v < p.x; });
    std::size_t i = static_cast<std::size_t>(it - pts.begin());
    if (i == 0) {
        i = 1; // x == front (caller guarantees containment)
    }
    if (i >= pts.size()) {
        i = pts.size() - 1;
    }
    return eval_on_segment(pts[i - 1], pts[i], x);
}

bool collinear(const DyadicPoint& a, const DyadicPoint& b, const DyadicPoint& c) {
    return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

std::vector<DyadicPoint> strip_collinear(std::vector<DyadicPoint> pts) {
    if (pts.size() <= 2) {
        return pts;
    }
    std::vector<DyadicPoint> kept;
    kept.reserve(pts.size());
    kept.push_back(pts.front());
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (!collinear(kept.back(), pts[i], pts[i + 1])) {
            kept.push_back(pts[i]);
        }
    }
    kept.push_back(pts.back());
    return kept;
}

// Build the normalized circle lift through one period of breakpoints.
// pts must span exactly one period: x-extent 1 and y(x+1) = y(x) + 1.
PLMap restrict_lift_to_unit(const std::vector<DyadicPoint>& pts) {
    const Dyadic& a = pts.front().x;

    auto eval_periodic = [&](const Dyadic& x) {
        const BigInt n = (x - a).floor();
        const Dyadic shift(n, 0);
        return eval_points(pts, x - shift) + shift;
    };

    std::vector<Dyadic> xs;
    xs.reserve(pts.size() + 2);
    xs.emplace_back(0);
    xs.emplace_back(1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Dyadic frac = pts[i].x - Dyadic(pts[i].x.floor(), 0);
        if (frac.sign() > 0) {
            xs.push_back(frac);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<DyadicPoint> unit;
    unit.reserve(xs.size());
    for (const Dyadic& x : xs) {
        unit.push_back({x, eval_periodic(x)});
    }
    return PLMap(Space::circle_lift, std::move(unit));
}

// Exact preimage under a valid Thompson element: x with g(x) == y.
Dyadic preimage(const std::vector<DyadicPoint>& pts, const Dyadic& y) {
    auto it = std::upper_bound(pts.begin(), pts.end(), y,
                               [](const Dyadic& v, const DyadicPoint& p) { return v < p.y; });
    std::size_t i = static_cast<std::size_t>(it - pts.begin());
    if (i == 0) {
        i = 1;
    }
    if (i >= pts.size()) {
        i = pts.size() - 1;
    }
    const DyadicPoint& p0 = pts[i - 1];
    const DyadicPoint& p1 = pts[i];
    const auto j = slope_log2(p1.y - p0.y, p1.x - p0.x);
    if (!j) {
        throw InvalidElement("preimage requires power-of-2 slopes");
    }
    return p0.x + (y - p0.y).scaled_pow2(-*j);
}

} // namespace

std::string to_string(Space s) {
    return s == Space::interval ? "interval" : "circle";
}

PLMap::PLMap(Space space, std::vector<DyadicPoint> points) : space_(space) {
    if (points.size() < 2) {
        throw InvalidElement("a PL map needs at least two points");
    }
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i].x < points[i + 1].x)) {
            throw InvalidElement("x-coordinates must be strictly increasing");
        }
        if (!(points[i].y < points[i + 1].y)) {
            throw InvalidElement("y-coordinates must be strictly increasing");
        }
    }
    const Dyadic zero(0);
    const Dyadic one(1);
    if (space == Space::interval) {
        if (points.front().x != zero || points.front().y != zero ||
            points.back().x != one || points.back().y != one) {
            throw InvalidElement("interval maps must run from (0,0) to (1,1)");
        }
    } else {
        if (points.front().x != zero || points.back().x != one) {
            throw InvalidElement("circle lifts must be given on [0,1]");
        }
        if (points.back().y != points.front().y + one) {
            throw InvalidElement("circle lifts must satisfy g(1) = g(0) + 1");
        }
        // Normalize the lift representative: shift by an integer so that
        // g(0) lands in [0,1). The circle map is unchanged.
        const BigInt n = points.front().y.floor();
        if (!n.is_zero()) {
            const Dyadic shift(n, 0);
            for (DyadicPoint& p : points) {
                p.y -= shift;
            }
        }
    }
    points_ = strip_collinear(std::move(points));

    xs_d_.reserve(points_.size());
    ys_d_.reserve(points_.size());
    for (const DyadicPoint& p : points_) {
        xs_d_.push_back(p.x.to_double());
        ys_d_.push_back(p.y.to_double());
    }
}

PLMap PLMap::identity(Space space) {
    return PLMap(space, {{Dyadic(0), Dyadic(0)}, {Dyadic(1), Dyadic(1)}});
}

PLMap PLMap::rotation(const Dyadic& c) {
    if (c.sign() < 0 || !(c < Dyadic(1))) {
        throw DomainError("rotation offset must lie in [0,1)");
    }
    return PLMap(Space::circle_lift, {{Dyadic(0), c}, {Dyadic(1), c + Dyadic(1)}});
}

Dyadic PLMap::eval(const Dyadic& x) const {
    if (space_ == Space::interval) {
        if (x < points_.front().x || points_.back().x < x) {
            throw DomainError("evaluation point outside [0,1]");
        }
        return eval_points(points_, x);
    }
    const BigInt n = x.floor();
    const Dyadic shift(n, 0);
    return eval_points(points_, x - shift) + shift;
}

double PLMap::eval_real(double x) const {
    if (!std::isfinite(x)) {
        throw DomainError("evaluation point must be finite");
    }
    double offset = 0.0;
    if (space_ == Space::interval) {
        if (x < 0.0 || x > 1.0) {
            throw DomainError("evaluation point outside [0,1]");
        }
    } else {
        const double n = std::floor(x);
        x -= n;
        offset = n;
    }
    if (x <= xs_d_.front()) {
        return ys_d_.front() + offset;
    }
    if (x >= xs_d_.back()) {
        return ys_d_.back() + offset;
    }
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(xs_d_.begin(), xs_d_.end(), x) - xs_d_.begin());
    const double x0 = xs_d_[i - 1];
    const double y0 = ys_d_[i - 1];
    return y0 + (x - x0) * (ys_d_[i] - y0) / (xs_d_[i] - x0) + offset;
}

std::optional<long long> PLMap::segment_slope_log2(std::size_t i) const {
    const DyadicPoint& p0 = points_.at(i);
    const DyadicPoint& p1 = points_.at(i + 1);
    return slope_log2(p1.y - p0.y, p1.x - p0.x);
}

std::string PLMap::segment_slope_string(std::size_t i) const {
    const DyadicPoint& p0 = points_.at(i);
    const DyadicPoint& p1 = points_.at(i + 1);
    const Dyadic dy = p1.y - p0.y;
    const Dyadic dx = p1.x - p0.x;
    // slope = (my * 2^kx) / (mx * 2^ky), reduced.
    BigInt num = dy.numerator() << dx.exponent();
    BigInt den = dx.numerator() << dy.exponent();
    const BigInt g = mp::gcd(num, den);
    num /= g;
    den /= g;
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

ThompsonValidation validate_thompson(const PLMap& g) {
    ThompsonValidation result;
    for (std::size_t i = 0; i < g.segment_count(); ++i) {
        if (!g.segment_slope_log2(i)) {
            result.violations.push_back({Violation::Kind::slope_not_power_of_two, i,
                                         "segment " + std::to_string(i) + " has slope " +
                                             g.segment_slope_string(i) +
                                             ", not an integer power of 2"});
        }
    }
    if (g.space() == Space::circle_lift) {
        const Dyadic& y0 = g.points().front().y;
        if (y0.sign() < 0 || !(y0 < Dyadic(1))) {
            result.violations.push_back(
                {Violation::Kind::lift_not_normalized, 0,
                 "lift value at 0 is " + y0.to_string() + ", outside [0,1)"});
        }
    }
    return result;
}

PLMap invert(const PLMap& g) {
    if (!validate_thompson(g).ok()) {
        throw InvalidElement("invert requires a valid Thompson element");
    }
    std::vector<DyadicPoint> swapped;
    swapped.reserve(g.points().size());
    for (const DyadicPoint& p : g.points()) {
        swapped.push_back({p.y, p.x});
    }
    if (g.space() == Space::interval) {
        return PLMap(Space::interval, std::move(swapped));
    }
    return restrict_lift_to_unit(swapped);
}

PLMap compose(const PLMap& a, const PLMap& b) {
    if (a.space() != b.space()) {
        throw SpaceMismatch("cannot compose maps on different spaces");
    }
    if (!validate_thompson(a).ok() || !validate_thompson(b).ok()) {
        throw InvalidElement("compose requires valid Thompson elements");
    }

    std::vector<Dyadic> xs;
    xs.emplace_back(0);
    xs.emplace_back(1);
    const auto& bp = b.points();
    for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
        xs.push_back(bp[i].x);
    }

    const auto& ap = a.points();
    if (a.space() == Space::interval) {
        for (std::size_t i = 1; i + 1 < ap.size(); ++i) {
            xs.push_back(preimage(bp, ap[i].x));
        }
    } else {
        // Breakpoints of the periodic extension of a that fall inside the
        // codomain [b(0), b(0)+1] of b, pulled back through b.
        const Dyadic& b0 = bp.front().y;
        const Dyadic b1 = b0 + Dyadic(1);
        std::vector<Dyadic> targets;
        targets.emplace_back(0);
        for (std::size_t i = 1; i + 1 < ap.size(); ++i) {
            targets.push_back(ap[i].x);
        }
        for (const Dyadic& t : targets) {
            const BigInt base = (b0 - t).floor();
            for (int off = 0; off <= 2; ++off) {
                const Dyadic v = t + Dyadic(base + off, 0);
                if (!(v < b0) && !(b1 < v)) {
                    xs.push_back(preimage(bp, v));
                }
            }
        }
    }

    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<DyadicPoint> pts;
    pts.reserve(xs.size());
    for (const Dyadic& x : xs) {
        pts.push_back({x, a.eval(b.eval(x))});
    }
    return PLMap(a.space(), std::move(pts));
}

BreakpointSet breakpoints(const PLMap& g) {
    BreakpointSet set;
    const auto& pts = g.points();
    if (g.space() == Space::circle_lift && pts.size() >= 2) {
        // The seam x = 0 is a breakpoint iff the slopes on its two sides
        // (last segment vs first under the periodic extension) differ.
        const Dyadic dy_first = pts[1].y - pts[0].y;
        const Dyadic dx_first = pts[1].x - pts[0].x;
        const Dyadic dy_last = pts[pts.size() - 1].y - pts[pts.size() - 2].y;
        const Dyadic dx_last = pts[pts.size() - 1].x - pts[pts.size() - 2].x;
        if (dy_first * dx_last != dy_last * dx_first) {
            set.xs.emplace_back(0);
        }
    }
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        set.xs.push_back(pts[i].x);
    }
    return set;
}

} // namespace thompson
