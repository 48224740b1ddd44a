#include "thompson/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

void require_same_space(Space a, Space b) {
    if (a != b) {
        throw SpaceMismatch("cannot compare a " + to_string(a) + " map with a " +
                            to_string(b) + " map");
    }
}

void require_grid(long long grid_size) {
    if (grid_size < 1) {
        throw DomainError("grid_size must be positive");
    }
}

/// Flat double view of a PL map for linear sweeps.
struct FlatPL {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> slope;

    explicit FlatPL(const PLMap& g) {
        const auto& pts = g.points();
        xs.reserve(pts.size());
        ys.reserve(pts.size());
        for (const auto& p : pts) {
            xs.push_back(p.x.to_double());
            ys.push_back(p.y.to_double());
        }
        slope.reserve(pts.size() - 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (const auto j = g.segment_slope_log2(i)) {
                slope.push_back(std::ldexp(1.0, static_cast<int>(*j)));
            } else {
                slope.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
            }
        }
    }

    // x must be non-decreasing across calls with the caller's cursor.
    double eval_at(double x, std::size_t& seg) const {
        while (seg + 1 < slope.size() && xs[seg + 1] <= x) {
            ++seg;
        }
        return ys[seg] + slope[seg] * (x - xs[seg]);
    }
};

/// Sorted union of the uniform grid {i/N} and g's breakpoint abscissas.
std::vector<double> merged_partition(const FlatPL& g, long long N) {
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(N) + 1 + g.xs.size());
    std::size_t bi = 0;
    for (long long i = 0; i <= N; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(N);
        while (bi < g.xs.size() && g.xs[bi] < x) {
            pts.push_back(g.xs[bi++]);
        }
        while (bi < g.xs.size() && g.xs[bi] == x) {
            ++bi;
        }
        pts.push_back(x);
    }
    return pts;
}

long long lift_shift(double f0, double g0) {
    return std::llround(f0 - g0);
}

/// Smallest double >= d.
double round_up(const Dyadic& d) {
    double x = d.to_double();
    while (Dyadic::from_float(x) < d) {
        x = std::nextafter(x, std::numeric_limits<double>::infinity());
    }
    return x;
}

/// Largest double <= d.
double round_down(const Dyadic& d) {
    double x = d.to_double();
    while (Dyadic::from_float(x) > d) {
        x = std::nextafter(x, -std::numeric_limits<double>::infinity());
    }
    return x;
}

Dyadic dyadic_abs(const Dyadic& d) {
    return d.sign() < 0 ? -d : d;
}

} // namespace

Certificate certified_sup_distance(const DiffeoSpec& f, const PLMap& g, long long grid_size) {
    require_same_space(f.space(), g.space());
    require_grid(grid_size);

    const FlatPL gp(g);
    const double shift = g.space() == Space::circle_lift
                             ? static_cast<double>(lift_shift(f.eval(0.0), gp.ys.front()))
                             : 0.0;

    const std::vector<double> part = merged_partition(gp, grid_size);

    Certificate cert;
    cert.grid_size = grid_size;
    std::size_t seg = 0;
    double prev_f = 0.0;
    double prev_g = 0.0;
    for (std::size_t i = 0; i < part.size(); ++i) {
        const double x = part[i];
        const double fv = f.eval(x) - shift;
        const double gv = gp.eval_at(x, seg);
        const double point_diff = std::abs(fv - gv);
        if (point_diff > cert.lower) {
            cert.lower = point_diff;
            cert.witness_x = x;
        }
        if (i > 0) {
            cert.upper = std::max(cert.upper, std::max(fv - prev_g, gv - prev_f));
        }
        prev_f = fv;
        prev_g = gv;
    }
    cert.upper = std::max(cert.upper, cert.lower);
    return cert;
}

Certificate certified_sup_distance(const PLMap& f, const PLMap& g, long long grid_size) {
    require_same_space(f.space(), g.space());
    require_grid(grid_size);

    int K = 0;
    while ((1LL << K) < grid_size) {
        ++K;
    }
    const long long N = 1LL << K;

    std::vector<Dyadic> part;
    part.reserve(static_cast<std::size_t>(N) + 1 + f.points().size() + g.points().size());
    for (long long i = 0; i <= N; ++i) {
        part.emplace_back(BigInt(i), K);
    }
    for (const auto& p : f.points()) {
        part.push_back(p.x);
    }
    for (const auto& p : g.points()) {
        part.push_back(p.x);
    }
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());

    Dyadic shift(0);
    if (f.space() == Space::circle_lift) {
        // integer shift minimizing |f(0) - g(0)|, ties away from zero
        const Dyadic diff = f.points().front().y - g.points().front().y;
        const Dyadic twice = diff.scaled_pow2(1);
        if (dyadic_abs(twice) >= Dyadic(1) && !diff.is_zero()) {
            shift = Dyadic(diff.sign());
        }
    }

    Dyadic lower_e(0);
    Dyadic upper_e(0);
    Dyadic witness(0);
    Dyadic prev_f(0);
    Dyadic prev_g(0);
    for (std::size_t i = 0; i < part.size(); ++i) {
        const Dyadic& x = part[i];
        const Dyadic fv = f.eval(x) - shift;
        const Dyadic gv = g.eval(x);
        const Dyadic point_diff = dyadic_abs(fv - gv);
        if (point_diff > lower_e) {
            lower_e = point_diff;
            witness = x;
        }
        if (i > 0) {
            upper_e = std::max({upper_e, fv - prev_g, gv - prev_f});
        }
        prev_f = fv;
        prev_g = gv;
    }
    upper_e = std::max(upper_e, lower_e);

    Certificate cert;
    cert.grid_size = N;
    cert.lower = round_down(lower_e);
    cert.upper = round_up(upper_e);
    cert.witness_x = witness.to_double();
    return cert;
}

double derivative_distance_lb(const DiffeoSpec& f, const PLMap& g, long long grid_size) {
    require_same_space(f.space(), g.space());
    require_grid(grid_size);

    const FlatPL gp(g);
    std::vector<double> kinks;
    for (const Dyadic& b : breakpoints(g).xs) {
        kinks.push_back(b.to_double());
    }
    const bool seam_kink = !kinks.empty() && kinks.front() == 0.0;

    double best = 0.0;
    std::size_t seg = 0;
    for (long long i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        if (std::binary_search(kinks.begin(), kinks.end(), x)) {
            continue;
        }
        if (x == 1.0 && g.space() == Space::circle_lift && seam_kink) {
            continue;
        }
        while (seg + 1 < gp.slope.size() && gp.xs[seg + 1] <= x) {
            ++seg;
        }
        best = std::max(best, std::abs(f.derivative(x) - gp.slope[seg]));
    }
    return best;
}

double power2_gap(double v) {
    if (!(v > 0.0)) {
        throw DomainError("power2_gap requires v > 0");
    }
    const double l = std::log2(v);
    const double nearest = std::exp2(std::nearbyint(l));
    if (std::abs(v - nearest) <= 0x1p-40) {
        return 0.0;
    }
    const double fl = std::floor(l);
    const double ce = std::ceil(l);
    if (fl == ce) {
        return 0.0;
    }
    return std::min(v - std::exp2(fl), std::exp2(ce) - v);
}

bool is_rotation(const DiffeoSpec& f, double tol, long long grid_size) {
    require_grid(grid_size);
    for (long long i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        if (std::abs(f.derivative(x) - 1.0) > tol) {
            return false;
        }
    }
    return true;
}

GapPoint discreteness_floor(const DiffeoSpec& f, long long grid_size) {
    require_grid(grid_size);
    if (is_rotation(f, 1e-6, grid_size)) {
        throw RotationInput("f is a rotation: f' is identically 1, no power-of-2 gap exists");
    }
    GapPoint best;
    for (long long i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        const double gap = power2_gap(f.derivative(x));
        if (gap > best.mu) {
            best.mu = gap;
            best.x_star = x;
        }
    }
    return best;
}

} // namespace thompson
