#include "doctest.h"
#include "endochain/chain.hpp"

using namespace endochain;
using Q = Rational;
using P = LaurentPoly<Q>;

namespace {

RingPtr<Q> sg(std::vector<int> g) { return semigroup_ring<Q>(FieldSpec::rational(), g); }

RingPtr<Q> node()
{
    return build_ring<Q>(FieldSpec::rational(), 2, {{P::t_power(1), P()}, {P(), P::t_power(1)}});
}

} // namespace

TEST_CASE("End of the maximal ideal")
{
    CHECK(*end_of_maximal_ideal(sg({2, 3})) == *sg({1}));
    CHECK(*end_of_maximal_ideal(sg({2, 5})) == *sg({2, 3}));
    CHECK(*end_of_maximal_ideal(sg({3, 4})) == *sg({3, 4, 5}));
    auto e = end_of_maximal_ideal(node());
    CHECK_FALSE(e->is_local());
    CHECK(e->is_dvr_product());
    CHECK(*factor(e, {1}) == *factor(build_ring<Q>(FieldSpec::rational(), 2,
                                                   {{P(Q(1)), P()}, {P::t_power(1), P()}, {P(), P::t_power(1)}}),
                                     {1}));
    try {
        end_of_maximal_ideal(sg({1}));
        FAIL("expected AlreadyNormal");
    } catch (const EngineError& err) {
        CHECK(err.code() == ErrorCode::AlreadyNormal);
    }
}

TEST_CASE("chain depths")
{
    CHECK(build_chain_tree(sg({1})).depth == 0);
    CHECK(build_chain_tree(sg({2, 3})).depth == 1);
    CHECK(build_chain_tree(sg({2, 5})).depth == 2);
    CHECK(build_chain_tree(sg({3, 4})).depth == 2);
    auto t = build_chain_tree(node());
    CHECK(t.depth == 1);
    CHECK(t.leaves().size() == 2);
    CHECK(normalization_check(t));
}

TEST_CASE("delta decreases along edges")
{
    for (auto g : std::vector<std::vector<int>>{{2, 7}, {3, 5}, {4, 5, 6, 7}}) {
        auto t = build_chain_tree(sg(g));
        for (const auto& n : t.nodes)
            for (int c : n.children) CHECK(t.nodes[static_cast<std::size_t>(c)].ring->delta() < n.ring->delta());
        CHECK(t.depth <= t.nodes.front().ring->delta());
        CHECK(normalization_check(t));
    }
}

TEST_CASE("truncated tree fails the normalization check")
{
    std::string why;
    auto t = build_chain_tree(sg({2, 7}), ChainOptions{1, true});
    CHECK_FALSE(normalization_check(t, &why));
    CHECK_FALSE(why.empty());
    try {
        build_chain_tree(sg({2, 7}), ChainOptions{1, false});
        FAIL("expected ChainDiverged");
    } catch (const EngineError& err) {
        CHECK(err.code() == ErrorCode::ChainDiverged);
    }
}

TEST_CASE("family and representation module")
{
    auto r = sg({2, 5});
    auto fam = e_family(build_chain_tree(r));
    CHECK(fam.members.size() == 3);
    auto m = representation_module(fam);
    CHECK(m.slots() == 3);
    auto cusp = e_family(build_chain_tree(sg({2, 3})));
    CHECK(minimal_generators(representation_module(cusp)).size() == 3);
    CHECK(representation_module(e_family(build_chain_tree(sg({1})))).slots() == 1);
}
