#include "dnc/symalg.hpp"

#include <algorithm>

#include "dnc/error.hpp"

namespace dnc {

namespace {

void require_same_n(int a, int b)
{
    if (a != b) throw Error("operands over different numbers of generators (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

} // namespace

Monomial Monomial::letter(int n, Letter l, int power)
{
    if (l.index < 1 || l.index > n) throw Error("generator index " + std::to_string(l.index) + " out of range 1.." + std::to_string(n));
    if (power < 0) throw Error("negative power of a generator");
    Monomial m = identity(n);
    auto& e = m.exps[static_cast<std::size_t>(l.index - 1)];
    (l.starred ? e.second : e.first) = power;
    return m;
}

bool Monomial::is_identity_pattern() const
{
    return std::all_of(exps.begin(), exps.end(), [](const auto& e) { return e.first == 0 && e.second == 0; });
}

std::string pattern_to_string(const Exponents& exps)
{
    std::string out;
    auto emit = [&out](std::size_t i, int power, bool starred) {
        if (power == 0) return;
        if (!out.empty()) out += ' ';
        out += 'V' + std::to_string(i + 1);
        if (starred) out += '*';
        if (power > 1) out += '^' + std::to_string(power);
    };
    for (std::size_t i = 0; i < exps.size(); ++i) emit(i, exps[i].first, false);
    for (std::size_t i = 0; i < exps.size(); ++i) emit(i, exps[i].second, true);
    return out.empty() ? "1" : out;
}

Monomial mono_mul(const Monomial& m1, const Monomial& m2, const StructureConstants& zc)
{
    require_same_n(m1.n(), m2.n());
    require_same_n(m1.n(), zc.n());
    const std::size_t n = m1.exps.size();
    Monomial out{m1.phase * m2.phase, Exponents(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = m1.exps[i];
        const auto [c, d] = m2.exps[i];
        out.exps[i] = {a + std::max(c - b, 0), d + std::max(b - c, 0)};
    }
    // Convert both factors to per-index blocks V_i^a V_i^{*b}, move the
    // blocks of m2 left past the higher blocks of m1, then convert back.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const auto& x1 = m1.exps;
            const auto& x2 = m2.exps;
            const auto& r = out.exps;
            std::int64_t e = -static_cast<std::int64_t>(x1[k].first) * x1[j].second
                - static_cast<std::int64_t>(x2[k].first) * x2[j].second
                + static_cast<std::int64_t>(x1[k].first - x1[k].second) * (x2[j].first - x2[j].second)
                + static_cast<std::int64_t>(r[k].first) * r[j].second;
            if (e != 0) out.phase *= zc.z(static_cast<int>(k + 1), static_cast<int>(j + 1)).pow(e);
        }
    }
    return out;
}

Monomial mono_adjoint(const Monomial& m, const StructureConstants& zc)
{
    const int n = m.n();
    Monomial out = Monomial::identity(n);
    for (int i = n; i >= 1; --i) {
        int b = m.exps[static_cast<std::size_t>(i - 1)].second;
        if (b) out = mono_mul(out, Monomial::letter(n, {i, false}, b), zc);
    }
    for (int i = n; i >= 1; --i) {
        int a = m.exps[static_cast<std::size_t>(i - 1)].first;
        if (a) out = mono_mul(out, Monomial::letter(n, {i, true}, a), zc);
    }
    out.phase *= m.phase.conj();
    return out;
}

Monomial reduce_word(const std::vector<Letter>& letters, const StructureConstants& zc)
{
    Monomial acc = Monomial::identity(zc.n());
    for (const auto& l : letters) acc = mono_mul(acc, Monomial::letter(zc.n(), l), zc);
    return acc;
}

FormalSum FormalSum::constant(int n, const Scalar& c)
{
    FormalSum s(n);
    s.add(Exponents(static_cast<std::size_t>(n), {0, 0}), c);
    return s;
}

FormalSum FormalSum::from_monomial(const Monomial& m, const Scalar& coef)
{
    FormalSum s(m.n());
    s.add(m.exps, coef.times(m.phase));
    return s;
}

FormalSum FormalSum::from_word(const std::vector<Letter>& letters, const StructureConstants& zc)
{
    return from_monomial(reduce_word(letters, zc));
}

void FormalSum::add(const Exponents& pattern, const Scalar& coef)
{
    require_same_n(static_cast<int>(pattern.size()), n_);
    if (coef.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(pattern, coef);
    if (inserted) return;
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
}

FormalSum& FormalSum::operator+=(const FormalSum& o)
{
    require_same_n(n_, o.n_);
    for (const auto& [p, c] : o.terms_) add(p, c);
    return *this;
}

FormalSum& FormalSum::operator-=(const FormalSum& o)
{
    require_same_n(n_, o.n_);
    for (const auto& [p, c] : o.terms_) add(p, -c);
    return *this;
}

FormalSum FormalSum::scaled(const Scalar& c) const
{
    FormalSum out(n_);
    for (const auto& [p, v] : terms_) out.add(p, v * c);
    return out;
}

std::string FormalSum::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [pattern, coef] : terms_) {
        const bool unit_pattern = std::all_of(pattern.begin(), pattern.end(),
                                              [](const auto& e) { return e.first == 0 && e.second == 0; });
        std::string c = coef.to_string();
        bool negative = false;
        if (c.front() == '-') {
            negative = true;
            c.erase(0, 1);
        }
        std::string body;
        if (unit_pattern) {
            body = c;
        } else if (c == "1") {
            body = pattern_to_string(pattern);
        } else {
            body = c + " · " + pattern_to_string(pattern);
        }
        if (first) {
            out = negative ? "-" + body : body;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
        first = false;
    }
    return out;
}

FormalSum sum_mul(const FormalSum& s1, const FormalSum& s2, const StructureConstants& zc)
{
    require_same_n(s1.n(), s2.n());
    FormalSum out(s1.n());
    for (const auto& [p1, c1] : s1.terms()) {
        for (const auto& [p2, c2] : s2.terms()) {
            Monomial m = mono_mul({Phase(), p1}, {Phase(), p2}, zc);
            out.add(m.exps, (c1 * c2).times(m.phase));
        }
    }
    return out;
}

FormalSum sum_adjoint(const FormalSum& s, const StructureConstants& zc)
{
    FormalSum out(s.n());
    for (const auto& [p, c] : s.terms()) {
        Monomial m = mono_adjoint({Phase(), p}, zc);
        out.add(m.exps, c.conj().times(m.phase));
    }
    return out;
}

FormalSum sum_pow(const FormalSum& s, int k, const StructureConstants& zc)
{
    if (k < 0) throw Error("negative power of a formal sum");
    FormalSum out = FormalSum::one(s.n());
    for (int t = 0; t < k; ++t) out = sum_mul(out, s, zc);
    return out;
}

bool verify_identity(const FormalSum& lhs, const FormalSum& rhs)
{
    return (lhs - rhs).is_zero();
}

} // namespace dnc
