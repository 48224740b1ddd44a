#pragma once

#include "thompson/funcspec.hpp"
#include "thompson/plmap.hpp"

namespace thompson {

/// Two-sided bracket on sup|f - g|: lower <= sup|f - g| <= upper.
/// `lower` is the max of |f - g| over the partition points and is attained
/// at `witness_x`; `upper` uses only that both maps increase: on each cell
/// [a,b] of the partition refining the uniform grid and g's breakpoints,
/// sup (f-g) <= f(b) - g(a) and sup (g-f) <= g(b) - f(a).
struct Certificate {
    double lower = 0.0;
    double upper = 0.0;
    long long grid_size = 0;
    double witness_x = 0.0;
};

/// Bracket for a smooth (monotone) spec against a PL map; circle lifts are
/// compared after aligning f to g by the integer shift minimizing
/// |f(0) - g(0)|. Endpoint values are evaluated in double, so the bracket
/// is exact up to ulp-scale noise in f itself.
Certificate certified_sup_distance(const DiffeoSpec& f, const PLMap& g, long long grid_size);

/// Exact variant for two PL maps with power-of-2 slopes: cell bounds are
/// computed in dyadic arithmetic and rounded outward, so the true sup lies
/// in [lower, upper] as reals. The uniform grid is rounded up to a power
/// of 2 (recorded in grid_size) to keep the grid points dyadic.
Certificate certified_sup_distance(const PLMap& f, const PLMap& g, long long grid_size);

/// Sampled lower bound for the derivative distance d(f,g) =
/// sup_{x not in B_g} |f'(x) - g'(x)|: the max over grid points, skipping
/// samples that land exactly on a breakpoint of g.
double derivative_distance_lb(const DiffeoSpec& f, const PLMap& g, long long grid_size);

/// min(v - 2^floor(log2 v), 2^ceil(log2 v) - v); zero iff v is a power of
/// 2 (values within 2^-40 of a power count as zero, a float-noise guard).
double power2_gap(double v);

/// True iff |f'(x) - 1| <= tol at all grid_size+1 uniform samples.
bool is_rotation(const DiffeoSpec& f, double tol, long long grid_size);

struct GapPoint {
    double x_star = 0.0;
    double mu = 0.0;
};

/// The grid point maximizing power2_gap(f'(x)) and that gap: an empirical
/// floor for d(f,g) over Thompson elements g whose breakpoints avoid
/// x_star. Throws RotationInput when f' is identically 1 within 1e-6.
GapPoint discreteness_floor(const DiffeoSpec& f, long long grid_size);

} // namespace thompson
