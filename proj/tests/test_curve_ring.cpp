#include "doctest.h"
#include "endochain/curve_ring.hpp"

using namespace endochain;
using Q = Rational;
using P = LaurentPoly<Q>;

namespace {

RingPtr<Q> sg(std::vector<int> g) { return semigroup_ring<Q>(FieldSpec::rational(), g); }

BranchVector<Q> bv(std::vector<P> xs) { return xs; }

RingPtr<Q> node()
{
    return build_ring<Q>(FieldSpec::rational(), 2,
                         {bv({P::t_power(1), P()}), bv({P(), P::t_power(1)})});
}

// two smooth branches with contact order 2
RingPtr<Q> tacnode()
{
    return build_ring<Q>(FieldSpec::rational(), 2,
                         {bv({P::t_power(1), P::t_power(1)}), bv({P::t_power(2), P()})});
}

} // namespace

TEST_CASE("cusp")
{
    auto r = sg({2, 3});
    CHECK(r->conductor() == std::vector<int>{2});
    CHECK(r->value_set() == std::vector<int>{0});
    RingReport rep = ring_report(*r);
    CHECK(rep.multiplicity == 2);
    CHECK(rep.delta == 1);
    CHECK(rep.embedding_dim == 2);
    CHECK_FALSE(r->contains(bv({P::t_power(1)})));
    CHECK(r->contains(bv({P::t_power(5)})));
}

TEST_CASE("the DVR")
{
    auto r = sg({1});
    CHECK(r->conductor() == std::vector<int>{0});
    CHECK(r->is_dvr_product());
    CHECK(ring_report(*r).multiplicity == 1);
    CHECK(ring_report(*r).embedding_dim == 1);
}

TEST_CASE("semigroup rings")
{
    auto r = sg({2, 5});
    CHECK(r->conductor() == std::vector<int>{4});
    CHECK(r->value_set() == std::vector<int>{0, 2});
    CHECK(ring_report(*r).delta == 2);
    CHECK(ring_report(*sg({3, 4})).embedding_dim == 2);
    CHECK(ring_report(*sg({4, 5, 6, 7})).multiplicity == 4);
    CHECK(ring_report(*sg({3, 5})).delta == 4);
    try {
        sg({2, 4});
        FAIL("expected NotCoprime");
    } catch (const EngineError& e) {
        CHECK(e.code() == ErrorCode::NotCoprime);
    }
}

TEST_CASE("node")
{
    auto r = node();
    CHECK(r->conductor() == std::vector<int>{1, 1});
    CHECK(r->is_local());
    CHECK(branch_idempotents(*r).size() == 1);
    CHECK(ring_report(*r).multiplicity == 2);
    CHECK(ring_report(*r).delta == 1);
    CHECK(r->max_ideal_generators().size() == 2);
    try {
        factor(r, {0});
        FAIL("expected NotIdempotentFactor");
    } catch (const EngineError& e) {
        CHECK(e.code() == ErrorCode::NotIdempotentFactor);
    }
}

TEST_CASE("tangent branches need a deeper conductor")
{
    auto r = tacnode();
    CHECK(r->conductor() == std::vector<int>{2, 2});
    CHECK(ring_report(*r).delta == 2);
    CHECK(r->is_local());
}

TEST_CASE("split product")
{
    auto r = build_ring<Q>(FieldSpec::rational(), 2,
                           {bv({P(Q(1)), P()}), bv({P::t_power(1), P()}), bv({P(), P::t_power(1)})});
    auto blocks = branch_idempotents(*r);
    CHECK(blocks.size() == 2);
    CHECK_FALSE(r->is_local());
    auto f = factor(r, {0});
    CHECK(f->support() == std::vector<int>{0});
    CHECK(f->is_dvr_product());
    CHECK(f->is_local());
}

TEST_CASE("no finite conductor")
{
    try {
        build_ring<Q>(FieldSpec::rational(), 2, {bv({P::t_power(1), P()})}, BuildOptions{64, false});
        FAIL("expected NoFiniteConductor");
    } catch (const EngineError& e) {
        CHECK(e.code() == ErrorCode::NoFiniteConductor);
    }
}

TEST_CASE("prime field ring")
{
    FieldSpec f = FieldSpec::prime(101);
    auto r = semigroup_ring<ModP>(f, {3, 4});
    CHECK(r->conductor() == std::vector<int>{6});
    CHECK(ring_report(*r).delta == 3);
}

TEST_CASE("double-check agrees")
{
    auto r = semigroup_ring<Q>(FieldSpec::rational(), {3, 5}, BuildOptions{2048, true});
    CHECK(r->conductor() == std::vector<int>{8});
}
