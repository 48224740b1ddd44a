#include "thompson/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thompson/errors.hpp"
#include "thompson/interp.hpp"

namespace thompson {

namespace {

constexpr std::size_t kPieceBudget = 20'000'000;

/// Dyadic point strictly inside the open window (lo, hi). The window is
/// first pulled in by an ulp-scale margin (the endpoints carry floating
/// error from evaluating f), then shrunk symmetrically before calling
/// find_dyadic_in; failures retry with less shrink. The pick is re-checked
/// exactly against the margined endpoints.
Dyadic pick_dyadic_in(double lo, double hi) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    const double margin = 8.0 * std::numeric_limits<double>::epsilon() * scale;
    const double lo_c = lo + margin;
    const double hi_c = hi - margin;
    if (!(lo_c < hi_c)) {
        throw ConstructionError("target window (" + std::to_string(lo) + ", " +
                                std::to_string(hi) + ") too narrow for float endpoints");
    }
    const Dyadic lo_exact = Dyadic::from_float(lo_c);
    const Dyadic hi_exact = Dyadic::from_float(hi_c);
    const double width = hi_c - lo_c;
    for (const double shrink : {0x1p-40, 0x1p-48, 0x1p-56, 0.0}) {
        const double pad = shrink * width;
        try {
            const Dyadic pick = find_dyadic_in(lo_c + pad, hi_c - pad);
            if (lo_exact < pick && pick < hi_exact) {
                return pick;
            }
        } catch (const DomainError&) {
            // degenerate shrunk window; retry with less shrink
        }
    }
    throw ConstructionError("no dyadic point found in (" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ")");
}

struct Skeleton {
    std::vector<Dyadic> xi;
    std::vector<Dyadic> eta;
    std::vector<double> F; // f(xi_i), endpoints pinned
    double delta = 0.0;
};

/// Joins consecutive (xi_i, eta_i) by dyadic interpolation.
PLMap assemble(Space space, const Skeleton& s) {
    const std::size_t n = s.xi.size() - 1;
    std::vector<DyadicPoint> pts;
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<DyadicPoint> piece =
            dyadic_interpolation({s.xi[i - 1], s.eta[i - 1]}, {s.xi[i], s.eta[i]});
        if (i == 1) {
            pts = std::move(piece);
        } else {
            pts.insert(pts.end(), piece.begin() + 1, piece.end());
        }
        if (pts.size() > kPieceBudget) {
            throw ConstructionError("piece budget exceeded; epsilon too small for this f");
        }
    }
    return PLMap(space, std::move(pts));
}

std::vector<double> sample_f(const DiffeoSpec& f, long long n) {
    std::vector<double> F(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i) {
        F[static_cast<std::size_t>(i)] =
            f.eval(static_cast<double>(i) / static_cast<double>(n));
    }
    for (long long i = 1; i <= n; ++i) {
        if (!(F[static_cast<std::size_t>(i - 1)] < F[static_cast<std::size_t>(i)])) {
            throw ConstructionError("f is not strictly increasing on the grid at i = " +
                                    std::to_string(i));
        }
    }
    return F;
}

double resolve_bound(const DiffeoSpec& f, std::optional<double> S) {
    double bound;
    if (S) {
        bound = *S;
    } else if (f.derivative_bound()) {
        bound = *f.derivative_bound();
    } else {
        bound = estimate_derivative_max(f);
    }
    if (!(bound >= 1.0)) {
        throw DomainError("derivative bound S must be >= 1, got " + std::to_string(bound));
    }
    return bound;
}

} // namespace

std::pair<int, long long> compute_params(double epsilon, double S) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    }
    if (!(S >= 1.0)) {
        throw DomainError("derivative bound S must be >= 1, got " + std::to_string(S));
    }
    int Delta = static_cast<int>(std::ceil(std::log2(3.0 * S / epsilon)));
    Delta = std::max(Delta, 1);
    if (Delta > 30) {
        throw ConstructionError("Delta = " + std::to_string(Delta) +
                                " would need 2^Delta > 10^9 rectangles");
    }
    return {Delta, 1LL << Delta};
}

double estimate_derivative_max(const DiffeoSpec& f, int grid_size) {
    if (grid_size < 1) {
        throw DomainError("grid_size must be positive");
    }
    double max_deriv = 0.0;
    for (int i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / grid_size;
        max_deriv = std::max(max_deriv, f.derivative(x));
    }
    return std::max(1.0, 1.25 * max_deriv);
}

ApproxResult approximate_interval(const DiffeoSpec& f, double epsilon,
                                  std::optional<double> S) {
    if (f.space() != Space::interval) {
        throw SpaceMismatch("approximate_interval requires an interval spec");
    }
    const FuncValidation v = validate_interval_diffeo(f, 4096);
    if (!v.ok()) {
        throw InvalidDiffeo("not an orientation-preserving interval diffeomorphism: " +
                            v.violations.front().what);
    }

    ApproxParams params;
    params.epsilon = epsilon;
    params.S = resolve_bound(f, S);
    std::tie(params.Delta, params.n) = compute_params(epsilon, params.S);
    const long long n = params.n;

    params.xi.reserve(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i) {
        params.xi.emplace_back(BigInt(i), params.Delta);
    }

    std::vector<double> F = sample_f(f, n);
    F.front() = 0.0; // endpoint values pinned exactly
    F.back() = 1.0;

    params.delta = std::min(epsilon / 2.0,
                            (F[static_cast<std::size_t>(n)] - F[static_cast<std::size_t>(n - 1)]) / 2.0);
    if (!(params.delta > 0.0)) {
        throw ConstructionError("degenerate vertical margin delta");
    }

    params.eta.resize(static_cast<std::size_t>(n) + 1);
    params.eta.front() = Dyadic(0);
    params.eta.back() = Dyadic(1);
    params.I_intervals.reserve(static_cast<std::size_t>(n) - 1);
    for (long long i = 1; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double lo = std::max(F[k - 1] + params.delta, F[k]);
        const double hi = F[k] + params.delta;
        if (!(lo < hi)) {
            throw ConstructionError("empty target window I_" + std::to_string(i));
        }
        params.I_intervals.emplace_back(lo, hi);
        params.eta[k] = pick_dyadic_in(lo, hi);
    }
    for (long long i = 1; i <= n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (!(params.eta[k - 1] < params.eta[k])) {
            throw ConstructionError("eta not strictly increasing at i = " + std::to_string(i));
        }
    }

    Skeleton s{params.xi, params.eta, std::move(F), params.delta};
    PLMap g = assemble(Space::interval, s);
    if (!validate_thompson(g).ok()) {
        throw ConstructionError("constructed map failed Thompson validation");
    }
    return {std::move(g), std::move(params)};
}

ApproxResult approximate_circle(const DiffeoSpec& f_lift, double epsilon,
                                std::optional<double> S) {
    if (f_lift.space() != Space::circle_lift) {
        throw SpaceMismatch("approximate_circle requires a circle-lift spec");
    }
    const FuncValidation v = validate_circle_lift(f_lift, 4096);
    if (!v.ok()) {
        throw InvalidDiffeo("not an orientation-preserving circle diffeomorphism lift: " +
                            v.violations.front().what);
    }

    ApproxParams params;
    params.epsilon = epsilon;
    params.S = resolve_bound(f_lift, S);
    std::tie(params.Delta, params.n) = compute_params(epsilon, params.S);
    const long long n = params.n;

    params.xi.reserve(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i) {
        params.xi.emplace_back(BigInt(i), params.Delta);
    }

    std::vector<double> F = sample_f(f_lift, n);
    F.back() = F.front() + 1.0; // lift identity pinned exactly

    params.delta = std::min(epsilon / 2.0, (F[1] - F[0]) / 2.0);
    if (!(params.delta > 0.0)) {
        throw ConstructionError("degenerate vertical margin delta");
    }

    params.eta.resize(static_cast<std::size_t>(n) + 1);
    params.I_intervals.reserve(static_cast<std::size_t>(n));
    {
        const double lo = F[0] + params.delta;
        const double hi = F[1];
        if (!(lo < hi)) {
            throw ConstructionError("empty target window I_0");
        }
        params.I_intervals.emplace_back(lo, hi);
        params.eta.front() = pick_dyadic_in(lo, hi);
    }
    for (long long i = 1; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double lo = std::max(F[k - 1] + params.delta, F[k]);
        const double hi = F[k] + params.delta;
        if (!(lo < hi)) {
            throw ConstructionError("empty target window I_" + std::to_string(i));
        }
        params.I_intervals.emplace_back(lo, hi);
        params.eta[k] = pick_dyadic_in(lo, hi);
    }
    params.eta.back() = params.eta.front() + Dyadic(1);

    for (long long i = 1; i <= n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (!(params.eta[k - 1] < params.eta[k])) {
            throw ConstructionError("eta not strictly increasing at i = " + std::to_string(i));
        }
    }
    const double eta_n = params.eta.back().to_double();
    if (!(std::max(F[static_cast<std::size_t>(n - 1)] + params.delta,
                   F[static_cast<std::size_t>(n)]) < eta_n)) {
        throw ConstructionError("wrap-around window violated at i = n");
    }

    Skeleton s{params.xi, params.eta, std::move(F), params.delta};
    PLMap g = assemble(Space::circle_lift, s);
    if (!validate_thompson(g).ok()) {
        throw ConstructionError("constructed map failed Thompson validation");
    }
    return {std::move(g), std::move(params)};
}

ApproxResult approximate(const DiffeoSpec& f, double epsilon, std::optional<double> S) {
    return f.space() == Space::interval ? approximate_interval(f, epsilon, S)
                                        : approximate_circle(f, epsilon, S);
}

} // namespace thompson
