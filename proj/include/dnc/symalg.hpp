#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dnc/phase.hpp"
#include "dnc/scalar.hpp"

namespace dnc {

struct Letter {
    int index = 1; ///< 1-based
    bool starred = false;
};

/// Exponent pattern (a_i, b_i) per index, 0-based storage of 1-based indices.
using Exponents = std::vector<std::pair<int, int>>;

/// phase * V_1^{a_1} ... V_n^{a_n} V_1^{*b_1} ... V_n^{*b_n}.
///
/// All isometries stand to the left of all co-isometries, each group in
/// increasing index order. Cross-index letters commute up to a phase and
/// V_i^* V_i = 1, so every word has exactly one such form.
struct Monomial {
    Phase phase;
    Exponents exps;

    static Monomial identity(int n) { return {Phase(), Exponents(static_cast<std::size_t>(n), {0, 0})}; }
    static Monomial letter(int n, Letter l, int power = 1);

    int n() const { return static_cast<int>(exps.size()); }
    bool is_identity_pattern() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Text form of a pattern, e.g. `V2 V1*` or `V1^2 V1*`; `1` when empty.
std::string pattern_to_string(const Exponents& exps);

Monomial mono_mul(const Monomial& m1, const Monomial& m2, const StructureConstants& zc);
Monomial mono_adjoint(const Monomial& m, const StructureConstants& zc);
Monomial reduce_word(const std::vector<Letter>& letters, const StructureConstants& zc);

/// Finite linear combination of normal-form patterns.
class FormalSum {
public:
    explicit FormalSum(int n) : n_(n) {}
    static FormalSum one(int n) { return constant(n, Scalar(1)); }
    static FormalSum constant(int n, const Scalar& c);
    static FormalSum from_monomial(const Monomial& m, const Scalar& coef = Scalar(1));
    static FormalSum from_word(const std::vector<Letter>& letters, const StructureConstants& zc);

    int n() const noexcept { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Exponents, Scalar>& terms() const noexcept { return terms_; }

    void add(const Exponents& pattern, const Scalar& coef);

    FormalSum& operator+=(const FormalSum& o);
    FormalSum& operator-=(const FormalSum& o);
    FormalSum scaled(const Scalar& c) const;
    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }

    /// `w(3/4) · V2 V1*`, terms joined by ` + ` / ` - `; `0` when empty.
    std::string to_string() const;

private:
    int n_;
    std::map<Exponents, Scalar> terms_;
};

FormalSum sum_mul(const FormalSum& s1, const FormalSum& s2, const StructureConstants& zc);
FormalSum sum_adjoint(const FormalSum& s, const StructureConstants& zc);
FormalSum sum_pow(const FormalSum& s, int k, const StructureConstants& zc);
bool verify_identity(const FormalSum& lhs, const FormalSum& rhs);

/// Parses the expression grammar:
///   sum     := ['+'|'-'] product { ('+'|'-') product }
///   product := power { ['*'] power }        (juxtaposition multiplies)
///   power   := atom { '*' } [ '^' integer ]  (a '*' glued to the atom is the adjoint)
///   atom    := 'V' integer | '(' sum ')' | number ['i'] | 'i' | 'w(' p '/' q ')' | 'rad(' x ')'
/// The middle dot `·` is accepted as a multiplication sign.
FormalSum parse_expression(const std::string& text, const StructureConstants& zc);

} // namespace dnc
