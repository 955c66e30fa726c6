#include <random>

#include "doctest.h"
#include "endochain/lattice.hpp"

using namespace endochain;
using Q = Rational;
using P = LaurentPoly<Q>;
using V = PolyVector<Q>;

namespace {

RingPtr<Q> sg(std::vector<int> g) { return semigroup_ring<Q>(FieldSpec::rational(), g); }

P tp(int e) { return P::t_power(e); }

Ambient line() { return Ambient::from_ranks({1}); }

Lattice<Q> cyclic(const RingPtr<Q>& r, std::vector<V> gens, int tail) { return span(r, line(), gens, {tail}); }

std::vector<int> valuations(const std::vector<V>& vs)
{
    std::vector<int> out;
    for (const auto& v : vs) out.push_back(v[0].valuation());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("minimal generators of maximal ideals")
{
    CHECK(valuations(minimal_generators(maximal_ideal(sg({2, 3})))) == std::vector<int>{2, 3});
    CHECK(valuations(minimal_generators(maximal_ideal(sg({3, 4})))) == std::vector<int>{3, 4});
    auto r = sg({2, 3});
    CHECK(minimal_generators(ring_lattice(r, r)).size() == 1);
}

TEST_CASE("membership")
{
    auto r = sg({2, 3});
    auto m = maximal_ideal(r);
    CHECK(membership(V{tp(4)}, m));
    CHECK_FALSE(membership(V{tp(1)}, ring_lattice(r, r)));
    CHECK(membership(V{P()}, m));
}

TEST_CASE("Hom of maximal ideals")
{
    auto r = sg({2, 3});
    auto m = maximal_ideal(r);
    auto h = hom_lattice(m, m);
    CHECK(h.lattice.window().lo == std::vector<int>{0});
    CHECK(h.lattice.window().hi == std::vector<int>{0});

    auto r34 = sg({3, 4});
    auto m34 = maximal_ideal(r34);
    auto h34 = hom_lattice(m34, m34);
    // value set {0,3,4,5,...}
    CHECK(h34.lattice.window().hi == std::vector<int>{3});
    CHECK(h34.lattice.window().rank() == 1);
    CHECK(h34.lattice.contains(V{tp(5)}));
    CHECK_FALSE(h34.lattice.contains(V{tp(2)}));

    // Hom(R, L) = L
    auto l = cyclic(r, {V{tp(1)}}, 3);
    CHECK(hom_lattice(ring_lattice(r, r), l).lattice == l);
}

TEST_CASE("kernel of the difference map is the diagonal")
{
    auto r = sg({2, 3});
    auto rr = ring_lattice(r, r);
    LatticeMap<Q> f{direct_sum(rr, rr), rr, PolyMatrix<Q>(1, 2)};
    f.matrix(0, 0) = tp(2);
    f.matrix(0, 1) = -tp(2);
    auto k = kernel(f);
    REQUIRE(k.lattice.slots() == 1);
    // the kernel is {(a, a) : a in R}
    CHECK(k.lattice == rr);
    CHECK(k.inclusion(0, 0) == P(Q(1)));
}

TEST_CASE("kernel of an injective map is zero")
{
    auto e = sg({1});
    auto l = ring_lattice(e, e);
    LatticeMap<Q> f{l, l, PolyMatrix<Q>(1, 1)};
    f.matrix(0, 0) = tp(1);
    CHECK(kernel(f).lattice.is_zero());
}

TEST_CASE("images")
{
    auto e = sg({1});
    auto l = ring_lattice(e, e);
    LatticeMap<Q> f{l, l, PolyMatrix<Q>(1, 1)};
    f.matrix(0, 0) = tp(2);
    CHECK(image(f) == cyclic(e, {V{tp(2)}}, 2));
    f.matrix(0, 0) = P(Q(1)) + tp(3);
    CHECK(image(f) == l);
}

TEST_CASE("sums")
{
    auto r = sg({2, 3});
    auto rr = ring_lattice(r, r);
    CHECK(sum(maximal_ideal(r), rr) == rr);
    auto e = sg({1});
    CHECK(sum(cyclic(e, {V{tp(2)}}, 2), cyclic(e, {V{tp(3)}}, 3)) == cyclic(e, {V{tp(2)}}, 2));
    auto rt = ring_lattice(e, r);
    CHECK(minimal_generators(direct_sum(rr, rt)).size() == 3);
}

TEST_CASE("scalar extension")
{
    auto r25 = sg({2, 5});
    auto r23 = sg({2, 3});
    // S = End(m) = k[[t^2, t^3]] viewed inside the same branch
    CHECK(scalar_extension_test(r23, maximal_ideal(r25)));
    auto e = sg({1});
    CHECK_FALSE(scalar_extension_test(e, ring_lattice(r23, r23)));
    CHECK(scalar_extension_test(r23, maximal_ideal(r23)));
    CHECK(scalar_extension_test(r25, maximal_ideal(r25)));
}

TEST_CASE("largest submodule over an overring")
{
    auto r = sg({3, 4, 5});
    auto e = sg({1});
    // J has value set {0,1,3,4,...}
    auto j = cyclic(r, {V{P(Q(1))}, V{tp(1)}}, 3);
    CHECK(j.window().hi == std::vector<int>{3});
    CHECK_FALSE(j.contains(V{tp(2)}));
    auto core = largest_submodule_over(e, j);
    CHECK(core == cyclic(r, {}, 3));
    CHECK(quotient_dimension(j, core) == 2);

    auto r23 = sg({2, 3});
    CHECK(largest_submodule_over(e, ring_lattice(r23, r23)) == cyclic(r23, {}, 2));
    CHECK(quotient_dimension(ring_lattice(e, r23), ring_lattice(r23, r23)) == 1);
}

TEST_CASE("free decomposition over a DVR")
{
    auto e = sg({1});
    auto l = span(e, line(), {V{tp(2)}, V{tp(3)}}, {5});
    auto d = free_decomposition_over_dvr_product(l);
    CHECK(d.ranks == std::vector<int>{1});
    REQUIRE(d.basis.size() == 1);
    CHECK(d.basis[0][0].valuation() == 2);
    try {
        free_decomposition_over_dvr_product(ring_lattice(sg({2, 3}), sg({2, 3})));
        FAIL("expected NotDvrProduct");
    } catch (const EngineError& err) {
        CHECK(err.code() == ErrorCode::NotDvrProduct);
    }
}

TEST_CASE("quotient dimension rejects non-submodules")
{
    auto r = sg({2, 3});
    try {
        quotient_dimension(maximal_ideal(r), ring_lattice(r, r));
        FAIL("expected NotASubmodule");
    } catch (const EngineError& err) {
        CHECK(err.code() == ErrorCode::NotASubmodule);
    }
}
