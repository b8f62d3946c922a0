#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dnc/scalar.hpp"

using namespace dnc;

namespace {

Scalar w(std::int64_t p, std::int64_t q) { return Scalar(Phase::exact(p, q)); }

} // namespace

TEST_CASE("sums of all N-th roots of unity vanish exactly")
{
    for (int N = 2; N <= 40; ++N) {
        Scalar s;
        for (int k = 0; k < N; ++k) s += w(k, N);
        CHECK_MESSAGE(s.is_zero(), "N = " << N);
        // Dropping one root leaves minus that root.
        CHECK(s - w(1, N) == -w(1, N));
    }
}

TEST_CASE("classical cyclotomic identities")
{
    CHECK(w(1, 6) + w(5, 6) == Scalar(1));                 // 2 cos 60 deg
    CHECK(w(1, 8) * w(1, 8) == w(1, 4));
    CHECK(w(1, 4) * w(1, 4) == Scalar(-1));
    CHECK(w(1, 5) + w(4, 5) - (w(2, 5) + w(3, 5)) != Scalar(0));
    // (2 cos 72 deg)^2 + 2 cos 72 deg = 1
    const Scalar c = w(1, 5) + w(4, 5);
    CHECK(c * c + c == Scalar(1));
    // 1 + w(1/3) + w(2/3) = 0
    CHECK((Scalar(1) + w(1, 3) + w(2, 3)).is_zero());
    // sqrt(2) is not rational: (w(1/8) + w(7/8))^2 = 2
    const Scalar r2 = w(1, 8) + w(7, 8);
    CHECK(r2 * r2 == Scalar(2));
    CHECK_FALSE(r2.as_rational().has_value());
}

TEST_CASE("exact zero test agrees with floating evaluation on random combinations")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> den_dist(1, 30), coef_dist(-3, 3), len_dist(1, 8);
    int zeros = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        // Half of the samples are built to vanish: x - (rearranged x).
        Scalar s;
        const int len = len_dist(rng);
        std::vector<std::pair<int, int>> roots;
        for (int k = 0; k < len; ++k) {
            const int q = den_dist(rng);
            roots.emplace_back(std::uniform_int_distribution<int>(0, q - 1)(rng), q);
            s += Scalar(coef_dist(rng)) * w(roots.back().first, roots.back().second);
        }
        if (trial % 2 == 0) {
            // Add sum of all q-th roots times a coefficient: value unchanged.
            const int q = den_dist(rng);
            Scalar t = s;
            for (int k = 0; k < q; ++k) t += Scalar(2) * w(k, q);
            if (q > 1) CHECK(t == s);
            s = t - s;
        }
        const bool numerically_zero = std::abs(s.value()) < 1e-9;
        CHECK(s.is_zero() == numerically_zero);
        zeros += s.is_zero();
    }
    CHECK(zeros > 1000);
}

TEST_CASE("arithmetic matches complex arithmetic")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> den_dist(1, 12), coef_dist(-4, 4);
    for (int trial = 0; trial < 300; ++trial) {
        auto rnd = [&] {
            Scalar s(coef_dist(rng));
            for (int k = 0; k < 3; ++k) {
                const int q = den_dist(rng);
                s += Scalar(Rational(coef_dist(rng), 3)) * w(std::uniform_int_distribution<int>(0, q - 1)(rng), q);
            }
            return s;
        };
        const Scalar a = rnd(), b = rnd();
        CHECK(std::abs((a * b).value() - a.value() * b.value()) < 1e-9);
        CHECK(std::abs((a + b).value() - (a.value() + b.value())) < 1e-12);
        CHECK(std::abs(a.conj().value() - std::conj(a.value())) < 1e-12);
        CHECK(a * b == b * a);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK(a.magnitude_bound() + 1e-12 >= std::abs(a.value()));
    }
}

TEST_CASE("approximate scalars")
{
    const Scalar a = Scalar::approx({0.0, 1.0});
    CHECK_FALSE(a.is_exact());
    CHECK(a == w(1, 4));
    const Scalar mixed = a + Scalar(1);
    CHECK_FALSE(mixed.is_exact());
    CHECK(std::abs(mixed.value() - std::complex<double>(1, 1)) < 1e-15);
    CHECK(Scalar::approx({1e-16, 0.0}).is_zero());
    CHECK(w(1, 4).demoted().is_exact() == false);
}

TEST_CASE("text forms")
{
    CHECK(Scalar().to_string() == "0");
    CHECK(Scalar(3).to_string() == "3");
    CHECK(Scalar(Rational(-1, 2)).to_string() == "-1/2");
    CHECK(w(3, 4).to_string() == "w(3/4)");
    CHECK((-w(1, 4)).to_string() == "w(3/4)");
    CHECK((Scalar(2) * w(1, 3)).to_string() == "2*w(1/3)");
}

TEST_CASE("reduction is canonical")
{
    // Equal values built differently reduce to identical coordinates.
    const Scalar a = w(1, 6) + w(5, 6);
    const Scalar b = Scalar(1) + w(0, 30) - w(0, 30);
    CHECK(a == b);
    // Same value, same lcm of denominators (30), different spelling.
    std::vector<Scalar::Term> t1{{Rational(1, 6), Rational(1)}, {Rational(5, 6), Rational(1)}, {Rational(1, 5), Rational(1)}};
    std::vector<Scalar::Term> t2{{Rational(0), Rational(1)}, {Rational(1, 5), Rational(1)},
                                 {Rational(1, 30), Rational(1)}, {Rational(1, 30), Rational(-1)}};
    const auto r1 = cyclotomic::reduce(t1);
    const auto r2 = cyclotomic::reduce(t2);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t k = 0; k < r1.size(); ++k) {
        CHECK(r1[k].turn == r2[k].turn);
        CHECK(r1[k].coef == r2[k].coef);
    }
}

TEST_CASE("large denominators stay fast")
{
    // lcm(1..30) has eleven distinct prime factors.
    Scalar s;
    for (int q = 1; q <= 30; ++q)
        for (int k = 0; k < q; ++k) s += w(k, q);
    CHECK(s == Scalar(1));
}
