#include <doctest.h>

#include <random>

#include "dnc/error.hpp"
#include "dnc/tuples.hpp"
#include "support.hpp"

using namespace dnc;

namespace {

const StructureConstants kZi = test::constants2(Phase::exact(1, 4));

double max_entry(const RelationReport& r)
{
    double m = 0.0;
    for (const auto& e : r.entries) m = std::max(m, e.residual);
    return m;
}

} // namespace

TEST_CASE("index sets")
{
    CHECK(complement({2}, 4) == IndexSet{1, 3, 4});
    CHECK(complement({}, 2) == IndexSet{1, 2});
    CHECK(index_set_to_string({1, 3}) == "{1,3}");
    CHECK(index_set_to_string({}) == "{}");
}

TEST_CASE("clock-shift data satisfy the torus relations")
{
    for (int d : {4, 8}) {
        const auto data = make_clock_shift_data({}, d, kZi);
        const auto rep = check_torus_relations(kZi, data);
        CHECK(rep.unitarity == 0.0);
        CHECK(rep.unstarred_form == 0.0);
        CHECK_NOTHROW(validate_wandering_data(kZi, data));
    }
    CHECK_THROWS_AS(make_clock_shift_data({}, 2, kZi), Error);
}

TEST_CASE("standard tuples satisfy the defining relations exactly")
{
    std::mt19937_64 rng(8);
    for (const IndexSet& A : std::vector<IndexSet>{{}, {1}, {2}, {1, 2}}) {
        const auto t = make_standard_tuple(kZi, make_clock_shift_data(A, 4, kZi, Phase::exact(1, 3)));
        const auto rep = verify_tuple_relations(t, 5);
        CHECK(rep.ok());
        CHECK(rep.max_residual == 0.0);
        CHECK(rep.entries.size() == 2 + 3 * 2);
    }
    const auto zc = test::random_constants(rng, 3, 6);
    for (const IndexSet& A : std::vector<IndexSet>{{}, {1}, {3}, {1, 3}}) {
        const auto t = make_torus_sector(zc, A);
        CHECK(verify_tuple_relations(t, 4).max_residual == 0.0);
    }
}

TEST_CASE("torus generators")
{
    const auto U = make_torus_generators(2, kZi);
    REQUIRE(U.size() == 2);
    const Space& sp = U[0].space();
    const auto one = StructuredOperator::identity(sp);
    for (const auto& u : U) {
        CHECK(op_equal_on_window(op_compose(u, op_adjoint(u)), one, 5) == 0.0);
        CHECK(op_equal_on_window(op_compose(op_adjoint(u), u), one, 5) == 0.0);
    }
    const auto lhs = op_compose(op_adjoint(U[0]), U[1]);
    const auto rhs = op_compose(U[1], op_adjoint(U[0])).scaled(Scalar(kZi.z(1, 2).conj()));
    CHECK(op_equal_on_window(lhs, rhs, 5) == 0.0);
    CHECK_THROWS_AS(make_torus_generators(0, StructureConstants::trivial(1)), Error);
}

TEST_CASE("invalid wandering data are rejected")
{
    WanderingData bad{{}, 2, {InternalOperator::identity(2)}};
    CHECK_THROWS_AS(validate_wandering_data(kZi, bad), Error);  // one unitary missing

    const auto scaled = InternalOperator::dense(2, {Scalar(2), Scalar(0), Scalar(0), Scalar(1)});
    WanderingData nonunitary{{1}, 2, {scaled}};
    CHECK_THROWS_AS(validate_wandering_data(kZi, nonunitary), Error);

    // Commuting unitaries cannot carry z = i.
    WanderingData commuting{{}, 1, {InternalOperator::identity(1), InternalOperator::identity(1)}};
    CHECK_THROWS_AS(validate_wandering_data(kZi, commuting), StructureMismatch);
}

TEST_CASE("data for the conjugate constant are rejected with the offending pair")
{
    // (C, X^*) carries conj(z) instead of z.
    const auto data = make_clock_shift_data({}, 4, kZi);
    WanderingData swapped{{}, 4, {data.unitaries[0], data.unitaries[1].adjoint()}};
    const auto rep = check_torus_relations(kZi, swapped);
    CHECK(rep.unitarity == 0.0);
    CHECK(rep.unstarred_form > 0.5);
    try {
        validate_wandering_data(kZi, swapped);
        FAIL("expected a StructureMismatch");
    } catch (const StructureMismatch& e) {
        CHECK(e.i() + e.j() == 3);
    }
}

TEST_CASE("direct sums require identical structure constants")
{
    const auto t1 = make_standard_tuple(kZi, make_clock_shift_data({1}, 1, kZi));
    const auto zc2 = test::constants2(Phase::exact(1, 3));
    const auto t2 = make_standard_tuple(zc2, make_clock_shift_data({1}, 1, zc2));
    try {
        tuple_direct_sum({t1, t2});
        FAIL("expected a StructureMismatch");
    } catch (const StructureMismatch& e) {
        CHECK(e.i() == 1);
        CHECK(e.j() == 2);
    }
    const auto sum = tuple_direct_sum({t1, make_torus_sector(kZi, {2})});
    CHECK(sum.is_standard_sum());
    CHECK(sum.space().blocks.size() == 2);
    CHECK(verify_tuple_relations(sum, 4).max_residual == 0.0);
}

TEST_CASE("a perturbed phase breaks exactly the relations it enters")
{
    auto t = make_standard_tuple(kZi, make_clock_shift_data({1}, 1, kZi));
    // V2 acts on l2(N0) as e_k -> z21^k e_k; perturb its phase.
    auto terms = t.ops[1].blocks()[0];
    REQUIRE(terms.size() == 1);
    terms[0].factors[0].w = terms[0].factors[0].w * Phase::exact(1, 12);
    t.ops[1] = StructuredOperator::from_terms(t.space().blocks[0], terms);
    const auto rep = verify_tuple_relations(t, 4);
    CHECK_FALSE(rep.ok());
    for (const auto& e : rep.entries) {
        if (e.i == e.j) CHECK(e.residual == 0.0);
        else CHECK(e.residual > 0.1);
    }
    CHECK(max_entry(rep) == rep.max_residual);
}

TEST_CASE("dilation of a standard tuple")
{
    const auto t = tuple_direct_sum({make_standard_tuple(kZi, make_clock_shift_data({1}, 2, kZi, Phase::exact(1, 2))),
                                     make_standard_tuple(kZi, WanderingData{{1, 2}, 1, {}})});
    const Dilation d = dilate_tuple(t);
    CHECK(verify_tuple_relations(d.dilated, 4).max_residual == 0.0);
    for (const auto& U : d.dilated.ops)
        CHECK(op_equal_on_window(op_compose(U, op_adjoint(U)), StructuredOperator::identity(d.dilated.space()), 4) == 0.0);
    const Window win(t.space(), 4);
    for (const auto& idx : win.basis()) {
        const auto x = SupportedVector::basis(t.space(), idx);
        for (int i = 0; i < 2; ++i) {
            CHECK(op_apply(d.dilated.ops[i], d.embed(x)) == d.embed(op_apply(t.ops[i], x)));
            CHECK(d.compress(op_apply(op_adjoint(d.dilated.ops[i]), d.embed(x))) == op_apply(op_adjoint(t.ops[i]), x));
        }
    }
    IsometryTuple user = t;
    user.sectors.clear();
    CHECK_THROWS_AS(dilate_tuple(user), Error);
}
