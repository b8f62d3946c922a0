#include <algorithm>
#include <map>

#include "dnc/scalar.hpp"

namespace dnc::cyclotomic {

namespace {

using Element = std::map<std::int64_t, Rational>; // exponent of zeta_N -> coefficient

std::int64_t largest_prime_factor(std::int64_t n)
{
    std::int64_t largest = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            largest = p;
            n /= p;
        }
    }
    return n > 1 ? n : largest;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m)
{
    std::int64_t r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    return ((s0 % m) + m) % m;
}

void accumulate(Element& x, std::int64_t e, const Rational& c)
{
    auto [it, fresh] = x.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) x.erase(it);
    }
}

// Canonical coordinates of x in Q(zeta_N) with respect to the tower basis
// built from Q(zeta_M) subset Q(zeta_N), N = p M:
//   p | M:  basis 1, zeta_N, ..., zeta_N^{p-1} over Q(zeta_M);
//   p ∤ M:  basis 1, zeta_p, ..., zeta_p^{p-2} over Q(zeta_M).
Element canonical(std::int64_t N, const Element& x)
{
    if (x.empty()) return {};
    if (N == 1) {
        Rational total;
        for (const auto& [e, c] : x) total += c;
        return total.is_zero() ? Element{} : Element{{0, total}};
    }
    const std::int64_t p = largest_prime_factor(N);
    const std::int64_t M = N / p;
    std::vector<Element> parts(static_cast<std::size_t>(p));
    Element out;

    if (M % p == 0) {
        for (const auto& [e, c] : x) accumulate(parts[static_cast<std::size_t>(e % p)], e / p, c);
        for (std::int64_t b = 0; b < p; ++b)
            for (const auto& [a, c] : canonical(M, parts[static_cast<std::size_t>(b)])) out.emplace(p * a + b, c);
        return out;
    }

    // zeta_N^e = zeta_M^a zeta_p^b with e = a p + b M (mod N).
    const std::int64_t p_inv = M == 1 ? 0 : mod_inverse(p % M, M);
    const std::int64_t m_inv = mod_inverse(M % p, p);
    for (const auto& [e, c] : x) {
        const std::int64_t a = M == 1 ? 0 : static_cast<std::int64_t>((static_cast<__int128>(e % M) * p_inv) % M);
        const std::int64_t b = static_cast<std::int64_t>((static_cast<__int128>(e % p) * m_inv) % p);
        accumulate(parts[static_cast<std::size_t>(b)], a, c);
    }
    // zeta_p^{p-1} = -(1 + zeta_p + ... + zeta_p^{p-2})
    const Element& top = parts[static_cast<std::size_t>(p - 1)];
    for (std::int64_t b = 0; b + 1 < p; ++b) {
        Element part = parts[static_cast<std::size_t>(b)];
        for (const auto& [a, c] : top) accumulate(part, a, -c);
        for (const auto& [a, c] : canonical(M, part))
            out.emplace(static_cast<std::int64_t>((static_cast<__int128>(a) * p + static_cast<__int128>(b) * M) % N), c);
    }
    return out;
}

} // namespace

std::vector<Scalar::Term> reduce(const std::vector<Scalar::Term>& terms)
{
    if (terms.empty()) return {};
    std::int64_t big_n = 1;
    for (const auto& t : terms) big_n = lcm64(big_n, t.turn.den());
    Element x;
    for (const auto& t : terms) accumulate(x, t.turn.num() * (big_n / t.turn.den()), t.coef);

    std::vector<Scalar::Term> out;
    for (const auto& [e, c] : canonical(big_n, x)) out.push_back({Rational(e, big_n), c});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.turn < b.turn; });
    return out;
}

} // namespace dnc::cyclotomic
