#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "thompson/dyadic.hpp"
#include "thompson/funcspec.hpp"
#include "thompson/plmap.hpp"

namespace thompson {

/// Every choice the construction made, kept for reports and reproducibility.
struct ApproxParams {
    double epsilon = 0.0;
    double S = 1.0;     // derivative bound actually used
    int Delta = 0;      // ceil(-log2(epsilon / (3 S)))
    long long n = 0;    // 2^Delta rectangles
    double delta = 0.0; // vertical margin

    std::vector<Dyadic> xi;  // xi_i = i/n, i = 0..n
    std::vector<Dyadic> eta; // eta_0..eta_n, strictly increasing

    // Open target windows the eta were drawn from, in eta order:
    // interval maps have n-1 entries (eta_1..eta_{n-1}; eta_0 = 0 and
    // eta_n = 1 are pinned), circle lifts have n (eta_0..eta_{n-1};
    // eta_n = eta_0 + 1).
    std::vector<std::pair<double, double>> I_intervals;
};

/// Delta = ceil(-log2(epsilon/(3S))) clamped to >= 1, and n = 2^Delta.
/// Requires 0 < epsilon < 1 (epsilon >= 1 is rejected, not clamped) and
/// S >= 1. Delta > 30 is refused: the piece count would be astronomical.
std::pair<int, long long> compute_params(double epsilon, double S);

/// max f' over grid_size+1 uniform samples of [0,1], times a 1.25 safety
/// margin, clamped below at 1. An estimate, not a bound: a miss is caught
/// by the mandatory post-hoc certification.
double estimate_derivative_max(const DiffeoSpec& f, int grid_size = 4096);

struct ApproxResult {
    PLMap g;
    ApproxParams params;
};

/// Interval construction: on the uniform dyadic grid xi_i = i/2^Delta,
/// choose dyadic eta_i inside I_i = (max{f(xi_{i-1})+delta, f(xi_i)},
/// f(xi_i)+delta) with delta = min{epsilon/2, (f(xi_n)-f(xi_{n-1}))/2},
/// pin eta_0 = 0 and eta_n = 1, and join consecutive (xi_i, eta_i) by
/// dyadic interpolation. The result validates as an F element and lies
/// within epsilon of f in sup norm (certify with the analysis module).
/// S overrides the derivative bound; otherwise f's stored bound or the
/// grid estimate is used.
ApproxResult approximate_interval(const DiffeoSpec& f, double epsilon,
                                  std::optional<double> S = std::nullopt);

/// Circle variant on normalized lifts: delta = min{epsilon/2,
/// (f(xi_1)-f(xi_0))/2}, eta_0 dyadic in (f(xi_0)+delta, f(xi_1)),
/// eta_n = eta_0 + 1. The result is stored as a normalized lift (integer
/// shifts are deck transformations of the same circle map) and validates
/// as a T element.
ApproxResult approximate_circle(const DiffeoSpec& f_lift, double epsilon,
                                std::optional<double> S = std::nullopt);

/// Dispatches on f.space().
ApproxResult approximate(const DiffeoSpec& f, double epsilon,
                         std::optional<double> S = std::nullopt);

} // namespace thompson
