#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dnc/error.hpp"
#include "dnc/opalg.hpp"
#include "support.hpp"

using namespace dnc;

namespace {

LatticeSignature sig(std::vector<CoordKind> coords, int d = 1) { return {std::move(coords), d}; }

constexpr CoordKind N0 = CoordKind::HalfLine;
constexpr CoordKind Z = CoordKind::Line;

StructuredOperator shift(const LatticeSignature& s, std::size_t coord, std::int64_t by, Phase w = Phase())
{
    OpTerm t{Scalar(1), std::vector<BandShiftFactor>(s.coords.size()), InternalOperator::identity(s.internal_dim)};
    t.factors[coord] = {by, s.coords[coord] == N0 ? std::max<std::int64_t>(0, -by) : 0, w};
    return StructuredOperator::from_terms(s, {t});
}

OpTerm random_term(std::mt19937_64& rng, const LatticeSignature& s)
{
    std::uniform_int_distribution<int> sh(-2, 2), extra(0, 2), coef(-2, 2), perm_pick(0, 1);
    OpTerm t;
    t.coef = Scalar(coef(rng)) + Scalar(test::random_phase(rng, 6));
    for (CoordKind c : s.coords) {
        BandShiftFactor f;
        f.shift = sh(rng);
        f.threshold = c == N0 ? std::max<std::int64_t>(0, -f.shift) + extra(rng) : 0;
        f.w = test::random_phase(rng, 6);
        t.factors.push_back(f);
    }
    if (s.internal_dim == 1 || perm_pick(rng) == 0) {
        t.internal = InternalOperator::identity(s.internal_dim);
    } else {
        std::vector<int> perm(static_cast<std::size_t>(s.internal_dim));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Phase> ph;
        for (int m = 0; m < s.internal_dim; ++m) ph.push_back(test::random_phase(rng, 4));
        t.internal = InternalOperator::permutation(perm, ph);
    }
    return t;
}

StructuredOperator random_operator(std::mt19937_64& rng, const LatticeSignature& s, int terms = 3)
{
    std::vector<OpTerm> ts;
    for (int k = 0; k < terms; ++k) ts.push_back(random_term(rng, s));
    return StructuredOperator::from_terms(s, ts);
}

// Direct evaluation of an operator on a basis vector from the defining
// formula, independent of op_apply.
std::map<BasisIndex, std::complex<double>> apply_by_definition(const StructuredOperator& f, const BasisIndex& e)
{
    std::map<BasisIndex, std::complex<double>> out;
    const auto& s = f.space().blocks[static_cast<std::size_t>(e.block)];
    for (const OpTerm& t : f.blocks()[static_cast<std::size_t>(e.block)]) {
        std::complex<double> c = t.coef.value();
        BasisIndex img = e;
        bool alive = true;
        for (std::size_t a = 0; a < s.coords.size(); ++a) {
            const auto& fa = t.factors[a];
            if (s.coords[a] == N0 && e.k[a] < fa.threshold) alive = false;
            c *= std::pow(fa.w.as_complex(), static_cast<double>(e.k[a]));
            img.k[a] += fa.shift;
        }
        if (!alive) continue;
        const Eigen::MatrixXcd m = t.internal.matrix();
        for (int r = 0; r < s.internal_dim; ++r) {
            if (m(r, e.internal) == 0.0) continue;
            img.internal = r;
            out[img] += c * m(r, e.internal);
        }
    }
    return out;
}

} // namespace

TEST_CASE("window layout")
{
    const Space sp{{sig({N0, Z}, 2), sig({N0})}};
    const Window w(sp, 3);
    CHECK(w.size() == 3 * 6 * 2 + 3);
    CHECK(w.at(0) == BasisIndex{0, {0, -3}, 0});
    CHECK(w.at(1) == BasisIndex{0, {0, -3}, 1});
    CHECK(w.at(w.size() - 1) == BasisIndex{1, {2}, 0});
    for (std::size_t k = 0; k + 1 < w.size(); ++k) CHECK(w.at(k) < w.at(k + 1));
    CHECK(w.find(BasisIndex{0, {1, 2}, 1}).has_value());
    CHECK_FALSE(w.contains(BasisIndex{0, {3, 0}, 0}));
}

TEST_CASE("unilateral shift: S*S = 1 and SS* = 1 - P0")
{
    const auto s = sig({N0});
    const Space sp = Space::single(s);
    const auto S = shift(s, 0, 1);
    CHECK(op_equal_on_window(op_compose(op_adjoint(S), S), StructuredOperator::identity(sp), 8) == 0.0);
    const auto SSs = op_compose(S, op_adjoint(S));
    const auto e0 = SupportedVector::basis(sp, {0, {0}, 0});
    CHECK(op_apply(SSs, e0).is_zero());
    const auto e3 = SupportedVector::basis(sp, {0, {3}, 0});
    CHECK(op_apply(SSs, e3) == e3);
}

TEST_CASE("bilateral shift is unitary")
{
    const auto s = sig({Z});
    const auto U = shift(s, 0, 1, Phase::exact(1, 3));
    const Space sp = Space::single(s);
    CHECK(op_equal_on_window(op_compose(U, op_adjoint(U)), StructuredOperator::identity(sp), 6) == 0.0);
    CHECK(op_equal_on_window(op_compose(op_adjoint(U), U), StructuredOperator::identity(sp), 6) == 0.0);
}

TEST_CASE("op_apply agrees with the defining formula")
{
    std::mt19937_64 rng(17);
    const std::vector<LatticeSignature> sigs{sig({N0}), sig({Z}), sig({N0, Z}, 2), sig({N0, N0}, 3)};
    for (const auto& s : sigs) {
        const Space sp = Space::single(s);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = random_operator(rng, s);
            const Window win(sp, 4);
            for (const auto& e : win.basis()) {
                const auto got = op_apply(f, SupportedVector::basis(sp, e));
                const auto want = apply_by_definition(f, e);
                double err = 0.0;
                for (const auto& [idx, c] : want) err = std::max(err, std::abs(got.coefficient(idx).value() - c));
                for (const auto& [idx, c] : got.entries())
                    if (!want.count(idx)) err = std::max(err, std::abs(c.value()));
                CHECK(err < 1e-12);
            }
        }
    }
}

TEST_CASE("composition and adjoint agree with dense matrices")
{
    std::mt19937_64 rng(23);
    const std::vector<LatticeSignature> sigs{sig({N0}), sig({Z}, 2), sig({N0, Z})};
    for (const auto& s : sigs) {
        const Space sp = Space::single(s);
        for (int trial = 0; trial < 15; ++trial) {
            const auto f = random_operator(rng, s);
            const auto g = random_operator(rng, s);
            const int K = 4, big = K + 3;
            const Window small(sp, K), large(sp, big);
            const Eigen::MatrixXcd prod = op_materialize(g, big) * op_materialize(f, big);
            const Eigen::MatrixXcd gf = op_materialize(op_compose(g, f), K);
            const Eigen::MatrixXcd fs = op_materialize(op_adjoint(f), K);
            const Eigen::MatrixXcd fm = op_materialize(f, K);
            double err = 0.0;
            for (std::size_t r = 0; r < small.size(); ++r) {
                for (std::size_t c = 0; c < small.size(); ++c) {
                    const auto R = static_cast<Eigen::Index>(*large.find(small.at(r)));
                    const auto C = static_cast<Eigen::Index>(*large.find(small.at(c)));
                    err = std::max(err, std::abs(gf(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - prod(R, C)));
                }
            }
            CHECK(err < 1e-12);
            CHECK((fs - fm.adjoint()).norm() < 1e-12);
            CHECK(op_equal_on_window(op_adjoint(op_adjoint(f)), f, K) == 0.0);
            CHECK(op_equal_on_window(op_adjoint(op_compose(g, f)), op_compose(op_adjoint(f), op_adjoint(g)), K) == 0.0);
        }
    }
}

TEST_CASE("structurally equal terms merge")
{
    const auto s = sig({N0});
    auto S = shift(s, 0, 1);
    S += shift(s, 0, 1);
    CHECK(S.term_count() == 1);
    S -= shift(s, 0, 1).scaled(Scalar(2));
    CHECK(S.term_count() == 0);
}

TEST_CASE("block-diagonal operators act blockwise")
{
    const auto a = sig({N0});
    const auto b = sig({Z}, 2);
    const auto D = StructuredOperator::block_diagonal({shift(a, 0, 1), shift(b, 0, -1)});
    CHECK(D.space().blocks.size() == 2);
    const auto x = SupportedVector::basis(D.space(), {1, {0}, 1});
    const auto y = op_apply(D, x);
    CHECK(y == SupportedVector::basis(D.space(), {1, {-1}, 1}));
}

TEST_CASE("invalid thresholds and mismatched spaces are rejected")
{
    const auto s = sig({N0});
    OpTerm t{Scalar(1), {BandShiftFactor{-1, 0, Phase()}}, InternalOperator::identity(1)};
    CHECK_THROWS_AS(StructuredOperator::from_terms(s, {t}), Error);
    const auto S = shift(s, 0, 1);
    const auto U = shift(sig({Z}), 0, 1);
    CHECK_THROWS_AS(op_compose(S, U), Error);
}

TEST_CASE("inner products and norms are exact where possible")
{
    const Space sp = Space::single(sig({N0}));
    SupportedVector x(sp);
    x.add({0, {0}, 0}, Scalar(3));
    x.add({0, {2}, 0}, Scalar(4) * Scalar(Phase::exact(1, 4)));
    CHECK(inner(x, x) == Scalar(25));
    CHECK(x.norm() == doctest::Approx(5.0));
    CHECK(x.is_exact());
    const auto y = SupportedVector::basis(sp, {0, {2}, 0});
    CHECK(inner(y, x) == Scalar(4) * Scalar(Phase::exact(1, 4)));
    CHECK(inner(x, y) == Scalar(4) * Scalar(Phase::exact(3, 4)));
}
