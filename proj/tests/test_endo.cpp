#include "doctest.h"
#include "endochain/endo.hpp"

using namespace endochain;
using Q = Rational;
using P = LaurentPoly<Q>;
using V = PolyVector<Q>;

namespace {

RingPtr<Q> sg(std::vector<int> g) { return semigroup_ring<Q>(FieldSpec::rational(), g); }

P tp(int e) { return P::t_power(e); }

Lattice<Q> cyclic(const RingPtr<Q>& r, std::vector<V> gens, int tail)
{
    return span(r, Ambient::from_ranks({1}), gens, {tail});
}

template <class F> ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const EngineError& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

} // namespace

TEST_CASE("Gamma over a DVR")
{
    auto e = sg({1});
    auto g = build_endo_algebra(e, {ring_lattice(e, e)});
    CHECK(g.rad_end[0] == cyclic(e, {}, 1));
    CHECK(g.radical_methods_agree);
    auto rep = global_dimension(g);
    CHECK(rep.gldim == 1);
    CHECK(minimal_projective_resolution(g, projective(g, 0)).pd == 0);
    CHECK(projectivization_check(g));
}

TEST_CASE("cusp algebra")
{
    auto r = sg({2, 3});
    auto e = sg({1});
    auto g = build_endo_algebra(r, {ring_lattice(r, r), ring_lattice(e, r)}, {"R", "E"});
    CHECK(g.hom[0][1].lattice == ring_lattice(e, r));
    CHECK(g.hom[1][0].lattice == cyclic(r, {}, 2));
    CHECK(g.hom[1][1].lattice == ring_lattice(e, r));
    CHECK(g.rad_end[0] == maximal_ideal(r));
    CHECK(g.rad_end[1] == cyclic(r, {}, 1));
    CHECK(top_dimension(g, ring_lattice(r, r)) == 1);
    CHECK(top_dimension(g, ring_lattice(e, r)) == 1);

    auto s0 = minimal_projective_resolution(g, simple(g, 0));
    auto s1 = minimal_projective_resolution(g, simple(g, 1));
    // 0 -> P_E -> P_R -> S_R -> 0 via t^2: E -> R
    CHECK(s0.pd == 1);
    CHECK(s0.covers == std::vector<std::vector<int>>{{0}, {1}});
    // 0 -> P_E -> P_R + P_E -> P_E -> S_E -> 0
    CHECK(s1.pd == 2);
    CHECK(s1.covers == std::vector<std::vector<int>>{{1}, {0, 1}, {1}});
    auto rep = global_dimension(g);
    CHECK(rep.gldim == 2);
    CHECK(rep.multiplicity == 2);
    CHECK(projectivization_check(g));
}

TEST_CASE("family algebras")
{
    auto r = sg({2, 5});
    auto tree = build_chain_tree(r);
    auto fam = e_family(tree);
    auto rep = family_gldim(tree, fam);
    CHECK(rep.chain_bound == 3);
    CHECK(rep.gldim <= rep.chain_bound);
    CHECK(rep.gldim == 2);
    CHECK(rep.multiplicity == 2);
    CHECK_FALSE(rep.any_capped);
}

TEST_CASE("corrupted composition table")
{
    auto r = sg({2, 3});
    auto e = sg({1});
    auto g = build_endo_algebra(r, {ring_lattice(r, r), ring_lattice(e, r)});
    REQUIRE(projectivization_check(g));
    auto& entry = g.table.at({0, 1, 0});
    REQUIRE_FALSE(entry.empty());
    entry[0][0] += P(Q(1));
    std::string why;
    CHECK_FALSE(projectivization_check(g, &why));
    CHECK_FALSE(why.empty());
}

TEST_CASE("summand checks")
{
    auto r = sg({2, 3});
    auto e = sg({1});
    auto rl = ring_lattice(r, r);
    CHECK(isomorphic(rl, cyclic(r, {V{tp(1)}}, 3)));
    CHECK_FALSE(isomorphic(rl, ring_lattice(e, r)));
    CHECK(code_of([&] { build_endo_algebra(r, {rl, cyclic(r, {V{tp(1)}}, 3)}); }) == ErrorCode::DuplicateSummand);
    CHECK(code_of([&] { build_endo_algebra(r, {direct_sum(rl, rl)}); }) == ErrorCode::NotIndecomposable);
    CHECK(code_of([&] { fcmt_check(r, {ring_lattice(e, r)}); }) == ErrorCode::MissingFreeSummand);

    auto rp = semigroup_ring<ModP>(FieldSpec::prime(2), {2, 3});
    auto ep = semigroup_ring<ModP>(FieldSpec::prime(2), {1});
    CHECK(code_of([&] { build_endo_algebra(rp, {ring_lattice(rp, rp), ring_lattice(ep, rp)}); }) ==
          ErrorCode::CharacteristicTooSmall);
    auto g = build_endo_algebra(rp, {ring_lattice(rp, rp), ring_lattice(ep, rp)}, {}, EndoOptions{false});
    CHECK(global_dimension(g).gldim == 2);
}

TEST_CASE("finite CM type lists")
{
    for (int gg = 1; gg <= 4; ++gg) {
        auto r = sg({2, 2 * gg + 1});
        std::vector<Lattice<Q>> list;
        for (int h = gg; h >= 0; --h) list.push_back(ring_lattice(sg({2, 2 * h + 1}), r));
        auto rep = fcmt_check(r, list);
        CHECK(rep.gldim == 2);
        CHECK(rep.assumptions.size() == 1);
    }
    auto e = sg({1});
    CHECK(fcmt_check(e, {ring_lattice(e, e)}).gldim == 1);
}
