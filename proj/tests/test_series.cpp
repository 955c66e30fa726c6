#include <random>

#include "doctest.h"
#include "endochain/dense.hpp"
#include "endochain/laurent.hpp"
#include "endochain/polymatrix.hpp"

using namespace endochain;
using P = LaurentPoly<Rational>;

namespace {

P poly(std::initializer_list<std::pair<int, int>> ts)
{
    std::vector<P::Term> v;
    for (auto [e, c] : ts) v.emplace_back(e, Rational(c));
    return P::from_terms(v);
}

P random_poly(std::mt19937& rng)
{
    std::uniform_int_distribution<int> len(0, 4), ex(-3, 6), co(-5, 5);
    std::vector<P::Term> v;
    for (int n = len(rng); n > 0; --n) v.emplace_back(ex(rng), Rational(co(rng)));
    return P::from_terms(v);
}

} // namespace

TEST_CASE("addition prunes and cancels")
{
    CHECK(add(poly({{2, 1}, {3, 1}}), poly({{3, -1}})) == poly({{2, 1}}));
    CHECK(add(P(), poly({{-1, 1}})) == poly({{-1, 1}}));
    CHECK(poly({{1, 2}}) + poly({{1, 3}}) == poly({{1, 5}}));
}

TEST_CASE("multiplication")
{
    CHECK(mul(P::t_power(2), P::t_power(3)) == P::t_power(5));
    CHECK(mul(poly({{0, 1}, {1, 1}}), poly({{0, 1}, {1, -1}})) == poly({{0, 1}, {2, -1}}));
    CHECK(mul(P(), P::t_power(-5)).is_zero());
}

TEST_CASE("valuation")
{
    CHECK(valuation(poly({{2, 1}, {7, 1}})) == 2);
    CHECK(valuation(P()) == kInfiniteValuation);
    CHECK(valuation(poly({{-2, 3}})) == -2);
}

TEST_CASE("unit inversion")
{
    CHECK(invert_unit(poly({{0, 1}, {1, -1}}), 3) == poly({{0, 1}, {1, 1}, {2, 1}}));
    CHECK(invert_unit(P(Rational(2)), 5) == P(Rational(1, 2)));
    try {
        invert_unit(P::t_power(1), 3);
        FAIL("expected NotAUnit");
    } catch (const EngineError& e) {
        CHECK(e.code() == ErrorCode::NotAUnit);
    }
}

TEST_CASE("ring axioms on random triples")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        P a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero() && !b.is_zero()) CHECK(valuation(a * b) == valuation(a) + valuation(b));
    }
}

TEST_CASE("inverse composes up to order 64")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 40; ++i) {
        P a = random_poly(rng).truncated(5);
        a = a.slice(1, 5) + P(Rational(1 + i % 3));
        for (int n : {1, 5, 17, 64}) CHECK((a * invert_unit(a, n)).truncated(n) == P(Rational(1)));
    }
}

TEST_CASE("exact division and gcd")
{
    P a = poly({{0, 1}, {1, 1}});
    P b = poly({{-1, 2}, {2, 3}});
    CHECK(divide_exact(a * b, b) == a);
    CHECK(gcd(a * b, a * P::t_power(4)) == a);
    CHECK(series_quotient(P::t_power(3), poly({{1, 1}, {2, -1}}), 5) == poly({{2, 1}, {3, 1}, {4, 1}}));
}

TEST_CASE("prime field arithmetic")
{
    FieldSpec f = FieldSpec::prime(7);
    ModP::Scope scope(7);
    ModP x = Field<ModP>::parse("3/2", f);
    CHECK(x * ModP(2) == ModP(3));
    CHECK(ModP(5) + ModP(4) == ModP(2));
    CHECK((ModP(3) / ModP(5)) * ModP(5) == ModP(3));
}

TEST_CASE("exact row reduction and nullspace")
{
    Mat<Rational> m(2, 3);
    m << 1, 2, 3, 2, 4, 7;
    Echelon<Rational> e = rref(m);
    CHECK(e.rank() == 2);
    Mat<Rational> n = nullspace<Rational>(m);
    CHECK(n.cols() == 1);
    CHECK((m * n).isZero());
}

TEST_CASE("kernel over the Laurent polynomial ring")
{
    // (a, b) -> t^2 a - t^2 b has kernel spanned by (1, 1)
    PolyMatrix<Rational> f(1, 2);
    f(0, 0) = P::t_power(2);
    f(0, 1) = -P::t_power(2);
    KernelBasis<Rational> k = k_nullspace(f);
    REQUIRE(k.dimension() == 1);
    CHECK(k.basis(0, 0) == P(Rational(1)));
    CHECK(k.basis(1, 0) == P(Rational(1)));
}
