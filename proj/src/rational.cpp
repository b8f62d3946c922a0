#include "dnc/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dnc {

namespace {

__int128 gcd128(__int128 a, __int128 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v)
{
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

} // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0) return 0;
    __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l < 0) l = -l;
    if (!fits64(l)) throw std::overflow_error("lcm overflow");
    return static_cast<std::int64_t>(l);
}

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den)
{
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    if (!fits64(num) || !fits64(den)) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::mod_one() const
{
    std::int64_t m = num_ % den_;
    if (m < 0) m += den_;
    Rational r;
    r.num_ = m;
    r.den_ = m == 0 ? 1 : den_;
    return r;
}

Rational Rational::operator-() const
{
    return from_wide(-static_cast<__int128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o)
{
    if (den_ == o.den_) {
        *this = from_wide(static_cast<__int128>(num_) + o.num_, den_);
    } else {
        *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                          static_cast<__int128>(den_) * o.den_);
    }
    return *this;
}

Rational& Rational::operator-=(const Rational& o)
{
    return *this += -o;
}

Rational& Rational::operator*=(const Rational& o)
{
    *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::string Rational::to_string() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

bool isqrt_exact(std::int64_t v, std::int64_t& root)
{
    if (v < 0) return false;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::int64_t c = std::max<std::int64_t>(r - 2, 0); c <= r + 2; ++c) {
        if (static_cast<__int128>(c) * c == v) {
            root = c;
            return true;
        }
    }
    return false;
}

} // namespace

bool rational_sqrt(const Rational& value, Rational& root)
{
    std::int64_t n = 0;
    std::int64_t d = 0;
    if (!isqrt_exact(value.num(), n) || !isqrt_exact(value.den(), d)) return false;
    root = Rational(n, d);
    return true;
}

} // namespace dnc
