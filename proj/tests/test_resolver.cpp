#include <set>

#include "doctest.h"
#include "endochain/resolver.hpp"

using namespace endochain;
using Q = Rational;
using P = LaurentPoly<Q>;
using V = PolyVector<Q>;

namespace {

RingPtr<Q> sg(std::vector<int> g) { return semigroup_ring<Q>(FieldSpec::rational(), g); }

P tp(int e) { return P::t_power(e); }

Resolver<Q> resolver_for(const RingPtr<Q>& r)
{
    auto tree = build_chain_tree(r);
    auto fam = e_family(tree);
    return Resolver<Q>(std::move(tree), std::move(fam));
}

Lattice<Q> cyclic(const RingPtr<Q>& r, std::vector<V> gens, int tail)
{
    return span(r, Ambient::from_ranks({1}), gens, {tail});
}

void check_certified(const Resolution<Q>& res)
{
    CHECK(res.exact);
    CHECK(res.decomposition_ok);
    CHECK(res.minimal_cover_ok);
    for (bool b : res.hom_exact) CHECK(b);
    CHECK(res.notes.empty());
}

} // namespace

TEST_CASE("free module resolves in length zero")
{
    auto r = sg({2, 3});
    auto rs = resolver_for(r);
    auto res = rs.keyred_resolve(ring_lattice(r, r));
    CHECK(res.length() == 0);
    CHECK(res.terms[0].members == std::vector<int>{0});
    check_certified(res);
}

TEST_CASE("maximal ideal of <2,5> is the next ring")
{
    auto r = sg({2, 5});
    auto rs = resolver_for(r);
    auto res = rs.keyred_resolve(maximal_ideal(r));
    CHECK(res.length() == 0);
    REQUIRE(res.terms[0].members.size() == 1);
    CHECK(*rs.family().members[static_cast<std::size_t>(res.terms[0].members[0])] == *sg({2, 3}));
    check_certified(res);
}

TEST_CASE("J over <3,4>")
{
    auto r = sg({3, 4});
    auto rs = resolver_for(r);
    auto j = cyclic(r, {V{P(Q(1))}, V{tp(1)}}, 3);
    CHECK(scalar_extension_test(rs.tree().nodes[0].endo, j));
    auto res = rs.keyred_resolve(j);
    CHECK(res.length() >= 1);
    CHECK(res.length() <= rs.tree().depth);
    check_certified(res);
    const std::set<std::string> allowed{"R^(1)_1", "R^(2)_1"};
    for (const auto& t : res.terms)
        for (int m : t.members) CHECK(allowed.count(rs.family().labels[static_cast<std::size_t>(m)]) == 1);
    CHECK(*rs.family().members[1] == *sg({3, 4, 5}));
    CHECK(verify_hom_exactness(res, rs.family().as_lattices[2]));
}

TEST_CASE("corrupted complex fails Hom-exactness")
{
    auto r = sg({3, 4});
    auto rs = resolver_for(r);
    auto res = rs.keyred_resolve(cyclic(r, {V{P(Q(1))}, V{tp(1)}}, 3));
    REQUIRE(res.length() >= 1);
    Resolution<Q> bad = res;
    // drop the first summand of C_1
    const Term<Q>& c1 = res.terms[1];
    std::vector<int> keep_slots;
    for (int s = 1; s < c1.lattice.slots(); ++s) keep_slots.push_back(s);
    bad.terms[1].lattice = restrict_slots(c1.lattice, keep_slots, r);
    bad.terms[1].members.erase(bad.terms[1].members.begin());
    std::vector<int> all_rows;
    for (int p = 0; p < res.maps[1].rows(); ++p) all_rows.push_back(p);
    bad.maps[1] = res.maps[1].submatrix(all_rows, keep_slots);
    if (res.length() >= 2) {
        std::vector<int> all_cols;
        for (int q = 0; q < res.maps[2].cols(); ++q) all_cols.push_back(q);
        bad.maps[2] = res.maps[2].submatrix(keep_slots, all_cols);
    }
    CHECK(verify_hom_exactness(res, ring_lattice(r, r)));
    CHECK_FALSE(verify_hom_exactness(bad, ring_lattice(r, r)));
}

TEST_CASE("resolution lengths stay within the chain depth")
{
    for (auto g : std::vector<std::vector<int>>{{2, 5}, {2, 7}, {3, 4}, {3, 5}, {3, 4, 5}}) {
        auto r = sg(g);
        auto rs = resolver_for(r);
        std::vector<Lattice<Q>> mods{maximal_ideal(r), max_ideal_times(maximal_ideal(r))};
        for (const auto& x : rs.family().as_lattices) mods.push_back(x);
        mods.push_back(direct_sum(maximal_ideal(r), rs.family().as_lattices.back()));
        for (const auto& n : mods) {
            auto res = rs.keyred_resolve(n);
            CHECK(res.length() <= rs.tree().depth);
            check_certified(res);
        }
    }
}

TEST_CASE("node splits into its branches")
{
    auto r = build_ring<Q>(FieldSpec::rational(), 2, {{tp(1), P()}, {P(), tp(1)}});
    auto rs = resolver_for(r);
    auto res = rs.keyred_resolve(ring_lattice(r, r));
    CHECK(res.length() == 0);
    check_certified(res);
    auto m = rs.keyred_resolve(maximal_ideal(r));
    CHECK(m.length() == 0);
    CHECK(m.terms[0].members.size() == 2);
    check_certified(m);
}

TEST_CASE("presented modules")
{
    auto r = sg({2, 3});
    auto rs = resolver_for(r);
    auto rl = ring_lattice(r, r);
    auto e = rs.family().as_lattices[1];

    PolyMatrix<Q> id = PolyMatrix<Q>::identity(1);
    auto triv = resolve_presented_module(rs, LatticeMap<Q>{rl, rl, id});
    CHECK(triv.zero_module);
    CHECK(triv.length == 0);
    CHECK(triv.hom_exact);

    PolyMatrix<Q> t(1, 1);
    t(0, 0) = tp(1);
    auto mult = resolve_presented_module(rs, LatticeMap<Q>{e, e, t});
    CHECK(mult.kernel.lattice.is_zero());
    CHECK_FALSE(mult.zero_module);
    CHECK(mult.length == 1);
    CHECK(mult.hom_exact);

    PolyMatrix<Q> s(1, 2);
    s(0, 0) = P(Q(1));
    s(0, 1) = P(Q(1));
    auto sum_map = resolve_presented_module(rs, LatticeMap<Q>{direct_sum(rl, e), e, s});
    CHECK(sum_map.kernel.lattice.slots() == 1);
    CHECK(sum_map.syzygy.length() == 0);
    CHECK(sum_map.length == 2);
    CHECK(sum_map.length <= rs.tree().depth + 2);
    CHECK(sum_map.hom_exact);
    CHECK(sum_map.syzygy.certified());
}
