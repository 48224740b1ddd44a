#include "thompson/dyadic.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace thompson {

namespace mp = boost::multiprecision;

Dyadic::Dyadic(BigInt m, int k) : num_(std::move(m)), exp_(k) {
    if (k < 0) {
        throw DomainError("dyadic exponent must be non-negative");
    }
    normalize();
}

void Dyadic::normalize() {
    if (num_.is_zero()) {
        exp_ = 0;
        return;
    }
    if (exp_ == 0) {
        return;
    }
    // Strip common factors of 2 from numerator and denominator.
    const BigInt mag = mp::abs(num_);
    const int trailing = static_cast<int>(mp::lsb(mag));
    const int strip = trailing < exp_ ? trailing : exp_;
    if (strip > 0) {
        num_ = (num_ < 0) ? BigInt(-(mag >> strip)) : BigInt(mag >> strip);
        exp_ -= strip;
    }
}

Dyadic Dyadic::from_float(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("cannot convert non-finite value to a dyadic rational");
    }
    if (x == 0.0) {
        return Dyadic();
    }
    int e = 0;
    const double mant = std::frexp(x, &e); // x = mant * 2^e, |mant| in [0.5, 1)
    // mant * 2^53 is integral and fits a signed 64-bit value.
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    BigInt m(scaled);
    const int shift = e - 53;
    if (shift >= 0) {
        return Dyadic(m << shift, 0);
    }
    return Dyadic(std::move(m), -shift);
}

double Dyadic::to_double() const {
    return std::ldexp(num_.convert_to<double>(), -exp_);
}

BigInt Dyadic::floor() const {
    if (exp_ == 0) {
        return num_;
    }
    BigInt q, r;
    mp::divide_qr(num_, BigInt(BigInt(1) << exp_), q, r);
    if (num_ < 0 && !r.is_zero()) {
        --q;
    }
    return q;
}

std::string Dyadic::to_string() const {
    if (exp_ == 0) {
        return num_.str();
    }
    if (exp_ <= 62) {
        return num_.str() + "/" + std::to_string(1ULL << exp_);
    }
    return num_.str() + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::operator-() const {
    Dyadic r;
    r.num_ = -num_;
    r.exp_ = exp_;
    return r;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int k = std::max(a.exp_, b.exp_);
    BigInt m = (a.num_ << (k - a.exp_)) + (b.num_ << (k - b.exp_));
    return Dyadic(std::move(m), k);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    const int k = std::max(a.exp_, b.exp_);
    BigInt m = (a.num_ << (k - a.exp_)) - (b.num_ << (k - b.exp_));
    return Dyadic(std::move(m), k);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
}

Dyadic Dyadic::scaled_pow2(long long j) const {
    if (is_zero()) {
        return Dyadic();
    }
    const long long k = static_cast<long long>(exp_) - j;
    if (k <= 0) {
        Dyadic r;
        r.num_ = num_ << static_cast<unsigned>(-k);
        r.exp_ = 0;
        return r;
    }
    if (k > std::numeric_limits<int>::max()) {
        throw DomainError("dyadic exponent overflow");
    }
    // An integer numerator may be even, so renormalize.
    return Dyadic(num_, static_cast<int>(k));
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    const int k = std::max(exp_, o.exp_);
    const BigInt lhs = num_ << (k - exp_);
    const BigInt rhs = o.num_ << (k - o.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) {
    return os << d.to_string();
}

long long overline_ceil(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("overline_ceil of non-finite value");
    }
    const double f = std::floor(x);
    if (std::abs(f) >= 9.0e18) {
        throw DomainError("overline_ceil out of integer range");
    }
    return static_cast<long long>(f) + 1;
}

Dyadic find_dyadic_in(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("find_dyadic_in requires finite endpoints");
    }
    if (!(p < q)) {
        throw DomainError("find_dyadic_in requires p < q");
    }
    const Dyadic pd = Dyadic::from_float(p);
    const Dyadic qd = Dyadic::from_float(q);

    long long k = std::max(0LL, overline_ceil(-std::log2(q - p)));
    // Exact floor(2^k p) + 1 == overline_ceil(2^k p); containment is verified
    // exactly and k bumped if floating rounding produced too coarse a grid.
    for (int attempt = 0; attempt < 80; ++attempt, ++k) {
        const BigInt m = pd.scaled_pow2(k).floor() + 1;
        Dyadic candidate(m, static_cast<int>(k));
        if (pd < candidate && candidate < qd) {
            return candidate;
        }
    }
    throw DomainError("find_dyadic_in failed to resolve the interval");
}

} // namespace thompson
