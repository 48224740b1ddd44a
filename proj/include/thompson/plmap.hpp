#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thompson/dyadic.hpp"
#include "thompson/interp.hpp"

namespace thompson {

/// Which compact 1-manifold a map acts on. Circle maps are stored as
/// normalized lifts: functions [0,1] -> R with g(1) = g(0) + 1 and
/// g(0) in [0,1), extended to R by g(x+1) = g(x) + 1.
enum class Space {
    interval,
    circle_lift,
};

std::string to_string(Space s);

/// Strictly increasing piecewise-linear map with exact dyadic breakpoint
/// data, the candidate format for elements of Thompson's groups F
/// (interval) and T (circle lifts).
///
/// Construction enforces the structural invariants: >= 2 points, strictly
/// increasing in both coordinates, (0,0)..(1,1) endpoints on the interval,
/// x from 0 to 1 with g(1) = g(0) + 1 on the circle. Circle lifts are
/// renormalized so g(0) lands in [0,1) (an integer shift of the lift, the
/// same circle map). Interior points collinear with their neighbours are
/// stripped, so distinct canonical forms are distinct maps and operator==
/// is structural equality.
class PLMap {
public:
    PLMap(Space space, std::vector<DyadicPoint> points);

    static PLMap identity(Space space);
    /// The rotation x + c as a circle lift; requires 0 <= c < 1.
    static PLMap rotation(const Dyadic& c);

    Space space() const { return space_; }
    const std::vector<DyadicPoint>& points() const { return points_; }
    std::size_t segment_count() const { return points_.size() - 1; }

    /// Exact evaluation. Interval maps require 0 <= x <= 1; circle lifts
    /// accept any x via the periodic extension. Slopes that are powers of
    /// 2 keep everything dyadic; for other slopes the exact rational value
    /// is returned when it is dyadic and DomainError is thrown otherwise.
    Dyadic eval(const Dyadic& x) const;

    /// Floating evaluation (a few ulp from exact). Same domain rules.
    double eval_real(double x) const;

    /// Exponent j with segment slope == 2^j, or nullopt for non-Thompson
    /// slopes. Segments are indexed 0 .. segment_count()-1.
    std::optional<long long> segment_slope_log2(std::size_t i) const;

    /// Segment slope as an exact reduced fraction string, e.g. "3/4".
    std::string segment_slope_string(std::size_t i) const;

    bool operator==(const PLMap& o) const = default;

private:
    Space space_;
    std::vector<DyadicPoint> points_;
    // Double mirrors of the breakpoints for fast floating evaluation.
    std::vector<double> xs_d_;
    std::vector<double> ys_d_;

};

/// One failed Thompson-membership condition.
struct Violation {
    enum class Kind {
        slope_not_power_of_two, // (Th2)
        coordinate_not_dyadic,  // (Th1) -- impossible with Dyadic storage, reported for completeness
        lift_not_normalized,
    };
    Kind kind;
    std::size_t segment = 0;
    std::string detail;
};

/// Outcome of the executable membership test. Violations are data, not
/// errors: an element that fails is still a perfectly good PL map.
struct ThompsonValidation {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks (Th1) breakpoints and images dyadic (automatic here) and (Th2)
/// every slope an integer power of 2; for circle lifts also the lift
/// normalization. g must be structurally well-formed (guaranteed by
/// construction).
ThompsonValidation validate_thompson(const PLMap& g);

/// Group inverse: reflect the graph across the diagonal, renormalizing the
/// lift representative for circle maps. Requires validate_thompson ok.
PLMap invert(const PLMap& g);

/// Group composition a after b: result(x) = a(b(x)), computed exactly with
/// breakpoints at B_b and the b-preimages of B_a. Requires both valid and
/// on the same space.
PLMap compose(const PLMap& a, const PLMap& b);

/// Interior x-coordinates where the slope changes; for circle lifts, 0 is
/// included iff the slopes on the two sides of the seam differ.
struct BreakpointSet {
    std::vector<Dyadic> xs;
};

BreakpointSet breakpoints(const PLMap& g);

} // namespace thompson
