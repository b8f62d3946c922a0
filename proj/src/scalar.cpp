#include "dnc/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dnc/error.hpp"

namespace dnc {

namespace {

constexpr std::size_t kCompactThreshold = 16;

bool turn_less(const Scalar::Term& a, const Scalar::Term& b) { return a.turn < b.turn; }

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Scalar::Scalar(const Rational& value)
{
    if (!value.is_zero()) terms_.push_back({Rational(), value});
}

Scalar::Scalar(const Phase& phase)
{
    if (phase.is_exact()) {
        terms_.push_back({phase.turns(), Rational(1)});
    } else {
        exact_ = false;
        approx_ = phase.as_complex();
    }
}

Scalar Scalar::approx(std::complex<double> value)
{
    Scalar s;
    s.exact_ = false;
    s.approx_ = std::abs(value) < kFloatZero ? std::complex<double>{} : value;
    return s;
}

Scalar Scalar::from_terms(std::vector<Term> terms)
{
    Scalar s;
    for (auto& t : terms) t.turn = t.turn.mod_one();
    std::sort(terms.begin(), terms.end(), turn_less);
    for (const auto& t : terms) {
        if (!s.terms_.empty() && s.terms_.back().turn == t.turn) {
            s.terms_.back().coef += t.coef;
            if (s.terms_.back().coef.is_zero()) s.terms_.pop_back();
        } else if (!t.coef.is_zero()) {
            s.terms_.push_back(t);
        }
    }
    s.compact();
    return s;
}

std::complex<double> Scalar::value() const
{
    if (!exact_) return approx_;
    std::complex<double> v{};
    for (const auto& t : terms_) v += t.coef.to_double() * Phase::exact(t.turn).as_complex();
    return v;
}

double Scalar::magnitude_bound() const
{
    if (!exact_) return std::abs(approx_);
    double m = 0.0;
    for (const auto& t : terms_) m += std::abs(t.coef.to_double());
    return m;
}

bool Scalar::is_zero() const
{
    if (!exact_) return std::abs(approx_) < kFloatZero;
    if (terms_.empty()) return true;
    if (terms_.size() == 1) return false;
    const double bound = magnitude_bound();
    if (std::abs(value()) > 1e-9 * bound) return false;
    try {
        return cyclotomic::reduce(terms_).empty();
    } catch (const Error&) {
        return std::abs(value()) < 1e-12 * bound;
    }
}

std::optional<Rational> Scalar::as_rational() const
{
    if (!exact_) return std::nullopt;
    if (terms_.empty()) return Rational();
    if (terms_.size() == 1) {
        const auto& t = terms_.front();
        if (t.turn.is_zero()) return t.coef;
        if (t.turn == Rational(1, 2)) return -t.coef;
        return std::nullopt;
    }
    std::vector<Term> reduced;
    try {
        reduced = cyclotomic::reduce(terms_);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (reduced.empty()) return Rational();
    if (reduced.size() == 1 && reduced.front().turn.is_zero()) return reduced.front().coef;
    return std::nullopt;
}

Scalar Scalar::conj() const
{
    if (!exact_) return approx(std::conj(approx_));
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({-t.turn, t.coef});
    return from_terms(std::move(out));
}

Scalar Scalar::times(const Phase& phase) const
{
    if (!exact_ || !phase.is_exact()) return approx(value() * phase.as_complex());
    if (phase.is_one()) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.turn + phase.turns(), t.coef});
    return from_terms(std::move(out));
}

Scalar Scalar::operator-() const
{
    if (!exact_) return approx(-approx_);
    Scalar s = *this;
    for (auto& t : s.terms_) t.coef = -t.coef;
    return s;
}

void Scalar::add_terms(const std::vector<Term>& other, bool negate)
{
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.size());
    auto a = terms_.begin();
    auto b = other.begin();
    while (a != terms_.end() || b != other.end()) {
        if (b == other.end() || (a != terms_.end() && a->turn < b->turn)) {
            merged.push_back(*a++);
        } else {
            Term t = *b++;
            if (negate) t.coef = -t.coef;
            if (a != terms_.end() && a->turn == t.turn) {
                t.coef += a->coef;
                ++a;
            }
            if (!t.coef.is_zero()) merged.push_back(t);
        }
    }
    terms_ = std::move(merged);
    compact();
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    if (exact_ && o.exact_) {
        add_terms(o.terms_, false);
    } else {
        *this = approx(value() + o.value());
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    if (exact_ && o.exact_) {
        add_terms(o.terms_, true);
    } else {
        *this = approx(value() - o.value());
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (!exact_ || !o.exact_) {
        *this = approx(value() * o.value());
        return *this;
    }
    if (terms_.empty() || o.terms_.empty()) {
        terms_.clear();
        return *this;
    }
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) out.push_back({a.turn + b.turn, a.coef * b.coef});
    *this = from_terms(std::move(out));
    return *this;
}

void Scalar::compact()
{
    if (terms_.size() <= kCompactThreshold) return;
    try {
        terms_ = cyclotomic::reduce(terms_);
    } catch (const Error&) {
        // Denominators too large to reduce; keep the longer form.
    }
}

std::string Scalar::to_string() const
{
    if (!exact_) {
        if (approx_.imag() == 0.0) return format_double(approx_.real());
        const double im = approx_.imag();
        return "(" + format_double(approx_.real()) + (im < 0 ? "-" : "+") + format_double(std::abs(im)) + "i)";
    }
    if (terms_.empty()) return "0";
    auto render = [](Term t) {
        if (t.coef.sign() < 0) {
            t.coef = -t.coef;
            t.turn = (t.turn + Rational(1, 2)).mod_one();
        }
        if (t.turn.is_zero()) return t.coef.to_string();
        if (t.turn == Rational(1, 2)) return "-" + t.coef.to_string();
        const std::string w = Phase::exact(t.turn).to_string();
        return t.coef == Rational(1) ? w : t.coef.to_string() + "*" + w;
    };
    if (terms_.size() == 1) return render(terms_.front());
    std::string out = "(";
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        std::string piece = render(terms_[k]);
        if (k > 0) {
            if (piece.front() == '-') {
                out += " - ";
                piece.erase(0, 1);
            } else {
                out += " + ";
            }
        }
        out += piece;
    }
    return out + ")";
}

} // namespace dnc
