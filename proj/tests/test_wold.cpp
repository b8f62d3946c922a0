#include <doctest.h>

#include <random>

#include "dnc/tuples.hpp"
#include "dnc/wold.hpp"
#include "support.hpp"

using namespace dnc;

namespace {

const StructureConstants kZ1 = StructureConstants::trivial(1);
const StructureConstants kZm = test::constants2(Phase::exact(1, 2));

const SectorReport& sector(const WoldReport& r, const IndexSet& A)
{
    for (const auto& s : r.sectors)
        if (s.A == A) return s;
    throw std::logic_error("no such sector");
}

SupportedVector random_window_vector(std::mt19937_64& rng, const Space& sp, int K)
{
    const Window win(sp, K);
    std::uniform_int_distribution<std::size_t> pick(0, win.size() - 1);
    std::uniform_int_distribution<int> c(-3, 3);
    SupportedVector x(sp);
    for (int k = 0; k < 4; ++k) x.add(win.at(pick(rng)), Scalar(c(rng)) * Scalar(test::random_phase(rng, 4)));
    return x;
}

} // namespace

TEST_CASE("subsets in bitmask order")
{
    const auto s = all_subsets(2);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == IndexSet{});
    CHECK(s[1] == IndexSet{1});
    CHECK(s[2] == IndexSet{2});
    CHECK(s[3] == IndexSet{1, 2});
}

TEST_CASE("classical Wold decomposition of shift + shift + bilateral shift")
{
    const auto shift = make_standard_tuple(kZ1, WanderingData{{1}, 1, {}});
    const auto t = tuple_direct_sum({shift, shift, make_torus_sector(kZ1, {})});
    const WoldReport r = wold_decompose(t);
    CHECK(r.converged);
    CHECK(r.completeness_residual == 0.0);
    CHECK(r.orthogonality_residual == 0.0);
    const auto& pure = sector(r, {1});
    CHECK(pure.wandering_dim == 2);
    CHECK(pure.reliable);
    REQUIRE(pure.reconstruction_residual.has_value());
    CHECK(*pure.reconstruction_residual == 0.0);
    const auto& uni = sector(r, {});
    CHECK(uni.window_dim_H_A == 2 * r.K);
    CHECK_FALSE(uni.reliable);
    CHECK_FALSE(uni.reconstruction_residual.has_value());
}

TEST_CASE("the two one-variable projections add up to the identity")
{
    std::mt19937_64 rng(1);
    const auto t = tuple_direct_sum({make_standard_tuple(kZm, make_clock_shift_data({1}, 2, kZm)),
                                     make_torus_sector(kZm, {2}),
                                     make_standard_tuple(kZm, WanderingData{{1, 2}, 1, {}})});
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_window_vector(rng, t.space(), 4);
        for (int i = 1; i <= 2; ++i) {
            const auto iso = defect_projection_apply(i, t, x);
            const auto uni = unitary_projection_apply(i, t, x);
            CHECK(iso.converged);
            CHECK(iso.value + uni.value == x);
            CHECK(unitary_projection_apply(i, t, uni.value).value == uni.value);
            CHECK(inner(iso.value, uni.value).is_zero());
        }
    }
}

TEST_CASE("sector projections are complete and mutually orthogonal")
{
    std::mt19937_64 rng(2);
    const auto t = tuple_direct_sum({make_standard_tuple(kZm, make_clock_shift_data({}, 2, kZm)),
                                     make_standard_tuple(kZm, make_clock_shift_data({2}, 2, kZm)),
                                     make_standard_tuple(kZm, WanderingData{{1, 2}, 1, {}})});
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_window_vector(rng, t.space(), 3);
        SupportedVector total(t.space());
        std::vector<SupportedVector> parts;
        for (const auto& A : all_subsets(2)) {
            parts.push_back(sector_projection_apply(A, t, x).value);
            total += parts.back();
        }
        CHECK(total == x);
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (std::size_t b = 0; b < parts.size(); ++b)
                if (a != b) CHECK(inner(parts[a], parts[b]).is_zero());
    }
}

TEST_CASE("round trip through extraction and reconstruction")
{
    const auto zc = test::constants2(Phase::exact(1, 4));
    for (const IndexSet& A : std::vector<IndexSet>{{}, {1}, {2}, {1, 2}}) {
        const auto data = make_clock_shift_data(A, 4, zc, Phase::exact(1, 3));
        const auto t = make_standard_tuple(zc, data);
        const auto r = wold_decompose(t);
        CHECK(r.converged);
        for (const auto& s : r.sectors) {
            if (s.A != A) {
                CHECK(s.wandering_dim == 0);
                continue;
            }
            CHECK(s.wandering_dim == data.dim_W);
            CHECK(s.reliable);
            CHECK(s.exact);
            CHECK(s.extraction_residual == 0.0);
            REQUIRE(s.reconstruction_residual.has_value());
            CHECK(*s.reconstruction_residual == 0.0);
            CHECK(s.wandering_data.unitaries.size() == data.unitaries.size());
        }
    }
}

TEST_CASE("forced unitarity: the remaining operator is lambda z^k on l2(N0)")
{
    const auto zc = test::constants2(Phase::exact(1, 5));
    const Phase lambda = Phase::exact(2, 7);
    const auto t = make_standard_tuple(zc, WanderingData{{1}, 1, {InternalOperator::permutation({0}, {lambda})}});
    const auto ex = extract_wandering_data({1}, t);
    REQUIRE(ex.data.unitaries.size() == 1);
    CHECK(ex.data.unitaries[0].entry(0, 0) == Scalar(lambda));
    const int K = 6;
    const Eigen::MatrixXcd m = op_materialize(t.ops[1], K);
    for (int k = 0; k < K; ++k) {
        const std::complex<double> want = (lambda * zc.z(2, 1).pow(k)).as_complex();
        CHECK(std::abs(m(k, k) - want) < 1e-15);
    }
    CHECK((m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("a finite unitary has only the unitary sector")
{
    LatticeSignature sig{{}, 2};
    const auto X = InternalOperator::permutation({1, 0}, {Phase(), Phase()});
    IsometryTuple t;
    t.zc = kZ1;
    t.ops.push_back(StructuredOperator::from_terms(sig, {OpTerm{Scalar(1), {}, X}}));
    const auto r = wold_decompose(t);
    CHECK(sector(r, {}).wandering_dim == 2);
    CHECK(sector(r, {}).reliable);
    CHECK(sector(r, {1}).wandering_dim == 0);
    CHECK(r.completeness_residual == 0.0);
}

TEST_CASE("phi maps the model basis onto the tuple")
{
    const auto t = make_standard_tuple(kZm, make_clock_shift_data({1}, 2, kZm));
    const auto basis = wandering_basis({1}, t);
    REQUIRE(basis.vectors.size() == 2);
    const auto model = make_standard_tuple(kZm, extract_from_basis({1}, t, basis, {}).data);
    const auto y = SupportedVector::basis(model.space(), {0, {3}, 1});
    const auto image = phi_apply({1}, t, basis.vectors, y);
    CHECK(image.norm() == doctest::Approx(1.0));
    // phi intertwines V1.
    const auto lhs = phi_apply({1}, t, basis.vectors, op_apply(model.ops[0], y));
    CHECK(lhs == op_apply(t.ops[0], image));
}
