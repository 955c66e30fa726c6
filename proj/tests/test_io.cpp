#include "doctest.h"
#include "endochain/io.hpp"

using namespace endochain;
using Q = Rational;

namespace {

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const EngineError& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Internal;
}

const char* gluing = R"({"field":{"kind":"rational"},"branches":2,
  "generators":[[[[2,"1"]],[[1,"1"]]],[[[3,"1"]],[[2,"1"],[3,"1/2"]]]]})";

} // namespace

TEST_CASE("ring files round-trip through the canonical form")
{
    for (const char* src : {R"({"semigroup":[3,4,5]})", gluing, R"({"semigroup":[2,5],"name":"x","expected":{}})"}) {
        auto r = ring_from_json<Q>(Json::parse(src));
        Json out = ring_to_json(*r);
        auto back = ring_from_json<Q>(out);
        CHECK(*back == *r);
        CHECK(ring_to_json(*back) == out);
    }
}

TEST_CASE("prime field rings")
{
    auto j = Json::parse(R"({"field":{"kind":"prime","p":5},"branches":1,"generators":[[[[2,"3"]]],[[[3,"1/2"]]]]})");
    auto r = ring_from_json<ModP>(j);
    FieldScope<ModP> scope(r->field());
    CHECK(r->field().p == 5);
    CHECK(ring_report(*r).delta == 1);
    CHECK(*ring_from_json<ModP>(ring_to_json(*r)) == *r);
}

TEST_CASE("coefficients")
{
    auto p = poly_from_json<Q>(Json::parse(R"([[0,"-2/4"],[3,7],[3,"1"]])"), FieldSpec::rational());
    CHECK(p.coeff(0) == Q(-1) / 2);
    CHECK(p.coeff(3) == 8);
    CHECK(poly_to_json(p) == Json::parse(R"([[0,"-1/2"],[3,"8"]])"));
}

TEST_CASE("module files")
{
    auto r = semigroup_ring<Q>(FieldSpec::rational(), {2, 3});
    auto m = module_from_json(r, Json::parse(R"({"ambient_rank":[1],"generators":[[[[2,"1"]]]],"tail":[2]})"));
    CHECK(m == maximal_ideal(r));

    auto sum = direct_sum(maximal_ideal(r), ring_lattice(r, r));
    CHECK(module_from_json(r, module_to_json(sum)) == sum);

    auto node = ring_from_json<Q>(Json::parse(R"({"branches":2,"generators":[[[[1,"1"]],[]],[[],[[1,"1"]]]]})"));
    auto mixed = direct_sum(maximal_ideal(node), ring_lattice(node, node)); // slots on branches 0,1,0,1
    CHECK(module_from_json(node, module_to_json(mixed)) == mixed);
}

TEST_CASE("module lists")
{
    auto r = semigroup_ring<Q>(FieldSpec::rational(), {2, 5});
    std::vector<std::string> labels;
    auto j = Json::parse(R"({"modules":[{"overring":{"semigroup":[2,5]},"label":"R"},
                                        {"overring":{"semigroup":[2,3]}},
                                        {"ambient_rank":[1],"generators":[[[[0,"1"]]]],"tail":[0]}]})");
    auto ms = module_list_from_json(r, j, &labels);
    REQUIRE(ms.size() == 3);
    CHECK(labels == std::vector<std::string>{"R", "X2", "X3"});
    CHECK(ms[0] == ring_lattice(r, r));
    CHECK(ms[2] == ring_lattice(semigroup_ring<Q>(FieldSpec::rational(), {1}), r));
    CHECK(code_of([&] {
              module_list_from_json(r, Json::parse(R"({"modules":[{"overring":{"semigroup":[3,4]}}]})"), nullptr);
          }) == ErrorCode::NotAnOverring);
}

TEST_CASE("schema errors")
{
    auto bad = [](const char* src) { return code_of([&] { ring_from_json<Q>(Json::parse(src)); }); };
    CHECK(bad(R"([1,2])") == ErrorCode::SchemaError);
    CHECK(bad(R"({"branches":1})") == ErrorCode::SchemaError);
    CHECK(bad(R"({"branches":2,"generators":[[[[1,"1"]]]]})") == ErrorCode::SchemaError);
    CHECK(bad(R"({"branches":1,"generators":[[[[1,"x"]]]]})") == ErrorCode::SchemaError);
    CHECK(bad(R"({"field":{"kind":"real"},"semigroup":[2,3]})") == ErrorCode::SchemaError);
    CHECK(bad(R"({"branches":1,"generators":[[[[1,"1/0"]]]]})") == ErrorCode::SchemaError);
    CHECK(bad(R"({"semigroup":[2,4]})") == ErrorCode::NotCoprime);

    auto r = semigroup_ring<Q>(FieldSpec::rational(), {2, 3});
    CHECK(code_of([&] { module_from_json(r, Json::parse(R"({"ambient_rank":[1,1],"generators":[],"tail":[0,0]})")); }) ==
          ErrorCode::SchemaError);
    CHECK(code_of([&] { module_from_json(r, Json::parse(R"({"ambient_rank":[1],"generators":[[]],"tail":[0]})")); }) ==
          ErrorCode::SchemaError);
    CHECK(code_of([] { read_json_file("/nonexistent/ring.json"); }) == ErrorCode::IoError);
}

TEST_CASE("reports")
{
    auto r = semigroup_ring<Q>(FieldSpec::rational(), {2, 5});
    auto tree = build_chain_tree(r);
    auto fam = e_family(tree);
    Json c = chain_to_json(tree, fam, normalization_check(tree));
    CHECK(c["n"] == 2);
    CHECK(c["e"] == 2);
    CHECK(c["delta"] == 2);
    CHECK(c["normalization_check"] == true);
    CHECK(c["nodes"].size() == 3);
    CHECK(c["edges"].size() == 2);

    Json g = gldim_to_json(family_gldim(tree, fam));
    CHECK(g["gldim"] == 2);
    CHECK(g["chain_bound"] == 3);
    CHECK(g["within_chain_bound"] == true);

    Resolver<Q> rs(tree, fam);
    Json res = resolution_to_json(rs.keyred_resolve(maximal_ideal(r)), fam);
    CHECK(res["length"] == 0);
    CHECK(res["certificates"]["certified"] == true);
    CHECK(res["terms"][0]["summands"] == Json::array({fam.labels[1]}));

    Json err = error_to_json(EngineError(ErrorCode::ChainDiverged, "too deep", "cap 3"));
    CHECK(err == Json{{"code", "ChainDiverged"}, {"message", "too deep"}, {"context", "cap 3"}});
}
