#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dnc/phase.hpp"
#include "dnc/rational.hpp"

namespace dnc {

/// A complex coefficient. The exact variant is a finite rational combination
/// of roots of unity, sum_k c_k e^{2 pi i q_k}; equality and zero tests are
/// decided exactly by reduction modulo the cyclotomic polynomial. The
/// approximate variant is a complex double. Mixing the two yields an
/// approximate result.
class Scalar {
public:
    struct Term {
        Rational turn; ///< q in [0, 1)
        Rational coef; ///< nonzero
    };

    /// Exact zero.
    Scalar() = default;
    Scalar(int value) : Scalar(Rational(value)) {}
    Scalar(const Rational& value);
    explicit Scalar(const Phase& phase);
    static Scalar approx(std::complex<double> value);
    static Scalar from_terms(std::vector<Term> terms);

    bool is_exact() const noexcept { return exact_; }
    bool is_zero() const;
    std::complex<double> value() const;
    /// The value as a rational, when it is one (exact only).
    std::optional<Rational> as_rational() const;
    /// Upper bound on the modulus, cheap.
    double magnitude_bound() const;

    const std::vector<Term>& terms() const noexcept { return terms_; }

    Scalar conj() const;
    Scalar times(const Phase& phase) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

    /// Value equality (exact when both sides are exact).
    friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

    /// Drops to the approximate variant.
    Scalar demoted() const { return approx(value()); }

    std::string to_string() const;

    /// Float coefficients below this modulus are treated as zero.
    static constexpr double kFloatZero = 1e-14;

private:
    void add_terms(const std::vector<Term>& other, bool negate);
    void compact();

    bool exact_ = true;
    std::vector<Term> terms_;
    std::complex<double> approx_{};
};

namespace cyclotomic {

/// An equal combination in a fixed basis of Q(zeta_N), N the lcm of the turn
/// denominators. The result is empty exactly when the combination sums to zero.
std::vector<Scalar::Term> reduce(const std::vector<Scalar::Term>& terms);

} // namespace cyclotomic

} // namespace dnc
