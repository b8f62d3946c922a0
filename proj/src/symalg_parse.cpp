#include <cctype>
#include <cstdlib>

#include "dnc/error.hpp"
#include "dnc/symalg.hpp"

namespace dnc {

namespace {

constexpr const char* kMiddleDot = "\xC2\xB7";

class Parser {
public:
    Parser(const std::string& text, const StructureConstants& zc) : text_(text), zc_(zc) {}

    FormalSum parse()
    {
        FormalSum s = sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        if (pos_ >= text_.size()) throw ParseError(pos_, what + " (end of input)");
        throw ParseError(pos_, what + " near '" + text_.substr(pos_, 8) + "'");
    }

    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_middle_dot() const { return text_.compare(pos_, 2, kMiddleDot) == 0; }

    bool starts_atom() const
    {
        char c = peek();
        return c == 'V' || c == '(' || c == 'i' || c == 'w' || c == 'r' || c == '.'
            || std::isdigit(static_cast<unsigned char>(c));
    }

    std::int64_t integer()
    {
        std::size_t start = pos_;
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        std::int64_t v = 0;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            if (pos_ - start > 17) fail("integer literal too long");
            v = v * 10 + (text_[pos_++] - '0');
        }
        return negative ? -v : v;
    }

    void expect(char c)
    {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    FormalSum sum()
    {
        skip_ws();
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
        }
        FormalSum acc = product();
        if (negative) acc = acc.scaled(Scalar(-1));
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            FormalSum rhs = product();
            if (c == '+') acc += rhs;
            else acc -= rhs;
        }
        return acc;
    }

    FormalSum product()
    {
        FormalSum acc = power();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            } else if (at_middle_dot()) {
                pos_ += 2;
                skip_ws();
            } else if (!starts_atom()) {
                break;
            }
            acc = sum_mul(acc, power(), zc_);
        }
        return acc;
    }

    FormalSum power()
    {
        bool adjointable = false;
        FormalSum value = atom(adjointable);
        while (adjointable && peek() == '*') {
            ++pos_;
            value = sum_adjoint(value, zc_);
        }
        if (peek() == '^') {
            ++pos_;
            std::int64_t k = integer();
            if (k < 0 || k > 1000) fail("exponent must lie in 0..1000");
            value = sum_pow(value, static_cast<int>(k), zc_);
        }
        return value;
    }

    FormalSum atom(bool& adjointable)
    {
        skip_ws();
        const int n = zc_.n();
        char c = peek();
        adjointable = false;
        if (c == 'V') {
            std::size_t start = pos_++;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a generator index after 'V'");
            std::int64_t idx = integer();
            if (idx < 1 || idx > n) {
                pos_ = start;
                fail("generator index " + std::to_string(idx) + " out of range 1.." + std::to_string(n));
            }
            adjointable = true;
            return FormalSum::from_monomial(Monomial::letter(n, {static_cast<int>(idx), false}));
        }
        if (c == '(') {
            ++pos_;
            FormalSum inner = sum();
            expect(')');
            adjointable = true;
            return inner;
        }
        if (c == 'w' && peek(1) == '(') {
            pos_ += 2;
            skip_ws();
            std::int64_t p = integer();
            expect('/');
            skip_ws();
            std::int64_t q = integer();
            if (q <= 0) fail("phase denominator must be positive");
            expect(')');
            return FormalSum::constant(n, Scalar(Phase::exact(p, q)));
        }
        if (c == 'r' && text_.compare(pos_, 4, "rad(") == 0) {
            pos_ += 4;
            const char* begin = text_.c_str() + pos_;
            char* end = nullptr;
            double theta = std::strtod(begin, &end);
            if (end == begin) fail("expected an angle");
            pos_ += static_cast<std::size_t>(end - begin);
            expect(')');
            return FormalSum::constant(n, Scalar(Phase::radians(theta)));
        }
        if (c == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1)))) {
            ++pos_;
            return FormalSum::constant(n, Scalar(Phase::exact(1, 4)));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            Scalar value = number();
            if (peek() == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1)))) {
                ++pos_;
                value = value.times(Phase::exact(1, 4));
            }
            return FormalSum::constant(n, value);
        }
        fail("unexpected input");
    }

    // Decimal and p/q literals are exact; exponent notation or long
    // mantissas fall back to floating point.
    Scalar number()
    {
        std::size_t start = pos_;
        std::size_t digits = 0;
        std::int64_t mantissa = 0;
        std::int64_t scale = 1;
        bool fraction = false;
        while (std::isdigit(static_cast<unsigned char>(peek())) || (peek() == '.' && !fraction)) {
            if (peek() == '.') {
                fraction = true;
                ++pos_;
                continue;
            }
            if (++digits <= 17) {
                mantissa = mantissa * 10 + (text_[pos_] - '0');
                if (fraction) scale *= 10;
            }
            ++pos_;
        }
        if (digits == 0) fail("malformed number");
        if (digits > 17 || peek() == 'e' || peek() == 'E') {
            const char* begin = text_.c_str() + start;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            pos_ = start + static_cast<std::size_t>(end - begin);
            return Scalar::approx(v);
        }
        Rational value(mantissa, scale);
        if (!fraction && peek() == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            ++pos_;
            std::int64_t q = integer();
            if (q == 0) fail("zero denominator");
            value /= Rational(q);
        }
        return Scalar(value);
    }

    const std::string& text_;
    const StructureConstants& zc_;
    std::size_t pos_ = 0;
};

} // namespace

FormalSum parse_expression(const std::string& text, const StructureConstants& zc)
{
    return Parser(text, zc).parse();
}

} // namespace dnc
