#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "thompson/errors.hpp"

namespace thompson {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational m / 2^k with unbounded integer numerator.
///
/// Values are kept in canonical form: the exponent is 0 or the numerator is
/// odd, and a zero numerator forces exponent 0. Two canonical values are
/// equal as reals iff their fields are equal, so equality is structural.
class Dyadic {
public:
    /// Zero.
    Dyadic() = default;

    /// m / 2^k, normalized. k must be non-negative.
    Dyadic(BigInt m, int k);

    Dyadic(long long m) : num_(m) {}
    Dyadic(int m) : num_(m) {}

    /// Exact conversion of a finite double (every finite binary floating
    /// point value is a dyadic rational). Throws DomainError on NaN/inf.
    static Dyadic from_float(double x);

    const BigInt& numerator() const { return num_; }
    int exponent() const { return exp_; }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    /// Nearest double (round-to-nearest; exact whenever representable).
    double to_double() const;

    /// Largest integer <= value.
    BigInt floor() const;
    /// True iff the value is an integer.
    bool is_integer() const { return exp_ == 0; }

    /// "m" for integers, "m/2^k" otherwise (denominator printed in decimal
    /// while it fits, as a power of two beyond that).
    std::string to_string() const;

    Dyadic operator-() const;
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    /// Exact value * 2^j for any signed j.
    Dyadic scaled_pow2(long long j) const;

    /// Exact total order by real value (cross-scaling by powers of 2).
    std::strong_ordering operator<=>(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const = default;

private:
    BigInt num_ = 0;
    int exp_ = 0; // >= 0

    void normalize();
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

/// Smallest integer strictly greater than x (x + 1 when x is an integer,
/// the usual ceiling otherwise).
long long overline_ceil(double x);

/// A dyadic rational strictly inside the open interval (p, q).
///
/// Uses k = max{0, overline_ceil(-log2(q - p))} and m = floor(2^k p) + 1,
/// then verifies strict containment against the exact dyadic values of p
/// and q, bumping k on the (pathological) rounding failures. Accepts any
/// p < q, not only 0 < p < q; throws DomainError when p >= q or either
/// endpoint is non-finite.
Dyadic find_dyadic_in(double p, double q);

} // namespace thompson
