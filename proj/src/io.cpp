#include "endochain/io.hpp"

#include <fstream>
#include <sstream>

namespace endochain {

namespace {

[[noreturn]] void schema(const std::string& msg, const std::string& where) { throw EngineError(ErrorCode::SchemaError, msg, where); }

const Json& need(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) schema(std::string("missing key \"") + key + "\"", where);
    return j.at(key);
}

int as_int(const Json& j, const std::string& where)
{
    if (!j.is_number_integer()) schema("expected an integer", where);
    return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& where)
{
    if (!j.is_array()) schema("expected an array of integers", where);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], where + "/" + std::to_string(i)));
    return out;
}

} // namespace

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw EngineError(ErrorCode::IoError, "cannot open file", path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw EngineError(ErrorCode::SchemaError, "invalid JSON", path + ": " + e.what());
    }
}

FieldSpec field_from_json(const Json& j)
{
    if (j.is_null()) return FieldSpec::rational();
    const std::string kind = need(j, "kind", "/field").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "rational") return FieldSpec::rational();
    if (kind == "prime") {
        const int p = as_int(need(j, "p", "/field"), "/field/p");
        if (p < 2) schema("prime must be at least 2", "/field/p");
        return FieldSpec::prime(static_cast<std::uint32_t>(p));
    }
    schema("field kind must be \"rational\" or \"prime\"", "/field/kind");
}

Json field_to_json(const FieldSpec& f)
{
    if (f.kind == FieldSpec::Kind::rational) return Json{{"kind", "rational"}};
    return Json{{"kind", "prime"}, {"p", f.p}};
}

template <class S> LaurentPoly<S> poly_from_json(const Json& j, const FieldSpec& f)
{
    if (!j.is_array()) schema("a series is a list of [exponent, coefficient] pairs", "");
    LaurentPoly<S> out;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2) schema("a term is [exponent, coefficient]", t.dump());
        const int e = as_int(t[0], t.dump());
        S c;
        if (t[1].is_string()) c = Field<S>::parse(t[1].get<std::string>(), f);
        else if (t[1].is_number_integer()) c = Field<S>::from_int(t[1].get<std::int64_t>(), f);
        else schema("coefficient must be a decimal string", t.dump());
        out += LaurentPoly<S>::monomial(c, e);
    }
    return out;
}

template <class S> Json poly_to_json(const LaurentPoly<S>& p)
{
    Json out = Json::array();
    for (const auto& [e, c] : p.terms()) out.push_back(Json::array({e, Field<S>::to_string(c)}));
    return out;
}

template <class S> RingPtr<S> ring_from_json(const Json& j, const BuildOptions& opts)
{
    if (!j.is_object()) schema("a ring file is a JSON object", "/");
    const FieldSpec f = field_from_json(j.contains("field") ? j.at("field") : Json());
    FieldScope<S> scope(f);
    if (j.contains("semigroup")) return semigroup_ring<S>(f, int_list(j.at("semigroup"), "/semigroup"), opts);
    const int b = as_int(need(j, "branches", "/"), "/branches");
    if (b < 1) schema("at least one branch", "/branches");
    const Json& gens = need(j, "generators", "/");
    if (!gens.is_array()) schema("generators must be an array", "/generators");
    std::vector<BranchVector<S>> out;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const std::string where = "/generators/" + std::to_string(g);
        if (!gens[g].is_array() || gens[g].size() != static_cast<std::size_t>(b))
            schema("a generator has one series per branch", where);
        BranchVector<S> x;
        for (const auto& s : gens[g]) x.push_back(poly_from_json<S>(s, f));
        out.push_back(std::move(x));
    }
    return build_ring<S>(f, b, out, opts);
}

template <class S> Json ring_to_json(const CurveRing<S>& r)
{
    Json gens = Json::array();
    for (const auto& x : r.canonical_generators()) {
        Json g = Json::array();
        for (const auto& p : x) g.push_back(poly_to_json(p));
        gens.push_back(std::move(g));
    }
    return Json{{"field", field_to_json(r.field())}, {"branches", r.branches()}, {"generators", std::move(gens)}};
}

Json report_to_json(const RingReport& r)
{
    return Json{{"multiplicity", r.multiplicity},
                {"embedding_dim", r.embedding_dim},
                {"conductor", r.conductor},
                {"is_dvr_product", r.is_dvr_product},
                {"delta", r.delta}};
}

template <class S> Lattice<S> module_from_json(const RingPtr<S>& r, const Json& j)
{
    FieldScope<S> scope(r->field());
    const std::vector<int> ranks = int_list(need(j, "ambient_rank", "/"), "/ambient_rank");
    if (static_cast<int>(ranks.size()) != r->branches()) schema("ambient_rank needs one entry per branch", "/ambient_rank");
    Ambient amb = Ambient::from_ranks(ranks);
    if (j.contains("slot_branch")) {
        Ambient custom = Ambient::rank_one(int_list(j.at("slot_branch"), "/slot_branch"), r->branches());
        for (int b : custom.slot_branch)
            if (b < 0 || b >= r->branches()) schema("slot branch out of range", "/slot_branch");
        if (custom.ranks() != ranks) schema("slot_branch disagrees with ambient_rank", "/slot_branch");
        amb = std::move(custom);
    }
    const std::vector<int> tail = int_list(need(j, "tail", "/"), "/tail");
    if (static_cast<int>(tail.size()) != amb.slots()) schema("tail needs one exponent per slot", "/tail");
    const Json& gens = need(j, "generators", "/");
    if (!gens.is_array()) schema("generators must be an array", "/generators");
    std::vector<PolyVector<S>> vs;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        if (!gens[g].is_array() || static_cast<int>(gens[g].size()) != amb.slots())
            schema("a generator has one series per slot", "/generators/" + std::to_string(g));
        PolyVector<S> v;
        for (const auto& s : gens[g]) v.push_back(poly_from_json<S>(s, r->field()));
        vs.push_back(std::move(v));
    }
    return span(r, amb, vs, tail);
}

template <class S> Json module_to_json(const Lattice<S>& l)
{
    Json gens = Json::array();
    for (const auto& v : l.window_vectors()) {
        Json g = Json::array();
        for (const auto& p : v) g.push_back(poly_to_json(p));
        gens.push_back(std::move(g));
    }
    std::vector<int> tail;
    for (int s = 0; s < l.slots(); ++s) tail.push_back(l.hi(s));
    return Json{{"ambient_rank", l.ambient().ranks()},
                {"slot_branch", l.ambient().slot_branch},
                {"generators", std::move(gens)},
                {"tail", std::move(tail)}};
}

template <class S>
std::vector<Lattice<S>> module_list_from_json(const RingPtr<S>& r, const Json& j, std::vector<std::string>* labels,
                                              const BuildOptions& opts)
{
    const Json& mods = need(j, "modules", "/");
    if (!mods.is_array()) schema("modules must be an array", "/modules");
    std::vector<Lattice<S>> out;
    for (std::size_t i = 0; i < mods.size(); ++i) {
        const Json& m = mods[i];
        if (m.is_object() && m.contains("overring")) {
            Json sub = m.at("overring");
            if (sub.is_object() && !sub.contains("field")) sub["field"] = field_to_json(r->field());
            RingPtr<S> s = ring_from_json<S>(sub, opts);
            if (!is_overring(s, r)) throw EngineError(ErrorCode::NotAnOverring, "listed ring does not contain R", "/modules/" + std::to_string(i));
            out.push_back(ring_lattice(s, r));
        } else {
            out.push_back(module_from_json(r, m));
        }
        if (labels) labels->push_back(m.is_object() && m.contains("label") && m.at("label").is_string()
                                          ? m.at("label").get<std::string>()
                                          : "X" + std::to_string(i + 1));
    }
    return out;
}

template <class S> Json chain_to_json(const ChainTree<S>& tree, const EFamily<S>& fam, bool normalization_ok)
{
    const RingReport root = ring_report(*tree.nodes.front().ring);
    Json nodes = Json::array(), edges = Json::array();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        nodes.push_back(Json{{"label", n.label},
                             {"level", n.level},
                             {"branches", n.ring->support()},
                             {"conductor", n.ring->conductor()},
                             {"delta", n.ring->delta()},
                             {"value_set", n.ring->value_set()},
                             {"is_dvr_product", n.ring->is_dvr_product()},
                             {"height", n.height},
                             {"member", fam.member_of_node[i]}});
        for (int c : n.children) edges.push_back(Json::array({n.label, tree.nodes[static_cast<std::size_t>(c)].label}));
    }
    return Json{{"n", tree.depth},
                {"e", root.multiplicity},
                {"delta", root.delta},
                {"truncated", tree.truncated},
                {"normalization_check", normalization_ok},
                {"family_size", fam.members.size()},
                {"nodes", std::move(nodes)},
                {"edges", std::move(edges)}};
}

template <class S> Json matrix_to_json(const PolyMatrix<S>& m)
{
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class S> Json resolution_to_json(const Resolution<S>& res, const EFamily<S>& fam)
{
    Json terms = Json::array(), maps = Json::array(), hom = Json::object();
    for (const auto& t : res.terms) {
        Json members = Json::array();
        for (int m : t.members) members.push_back(fam.labels[static_cast<std::size_t>(m)]);
        terms.push_back(Json{{"summands", std::move(members)}, {"slots", t.lattice.slots()}});
    }
    for (const auto& m : res.maps) maps.push_back(matrix_to_json(m));
    for (std::size_t i = 0; i < res.hom_exact.size(); ++i) hom[fam.labels[i]] = static_cast<bool>(res.hom_exact[i]);
    return Json{{"length", res.length()},
                {"terms", std::move(terms)},
                {"maps", std::move(maps)},
                {"certificates",
                 Json{{"exact", res.exact},
                      {"decomposition", res.decomposition_ok},
                      {"minimal_cover", res.minimal_cover_ok},
                      {"hom_exact", std::move(hom)},
                      {"certified", res.certified()}}},
                {"notes", res.notes}};
}

Json gldim_to_json(const GldimReport& r)
{
    Json pds = Json::array();
    for (std::size_t i = 0; i < r.pd_per_simple.size(); ++i)
        pds.push_back(r.capped[i] ? Json(">=" + std::to_string(r.pd_per_simple[i])) : Json(r.pd_per_simple[i]));
    Json out{{"labels", r.labels},
             {"pd_per_simple", std::move(pds)},
             {"gldim", r.any_capped ? Json(">=" + std::to_string(r.gldim)) : Json(r.gldim)},
             {"generator_bound", r.generator_bound},
             {"multiplicity", r.multiplicity},
             {"delta", r.delta},
             {"radical_methods_agree", r.radical_methods_agree},
             {"assumptions", r.assumptions}};
    if (r.chain_length >= 0) {
        out["n"] = r.chain_length;
        out["chain_bound"] = r.chain_bound;
        out["within_chain_bound"] = !r.any_capped && r.gldim <= r.chain_bound;
    }
    return out;
}

Json error_to_json(const EngineError& e)
{
    return Json{{"code", std::string(to_string(e.code()))}, {"message", e.message()}, {"context", e.context()}};
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template LaurentPoly<S> poly_from_json<S>(const Json&, const FieldSpec&);                                      \
    template Json poly_to_json<S>(const LaurentPoly<S>&);                                                          \
    template RingPtr<S> ring_from_json<S>(const Json&, const BuildOptions&);                                       \
    template Json ring_to_json<S>(const CurveRing<S>&);                                                            \
    template Lattice<S> module_from_json<S>(const RingPtr<S>&, const Json&);                                       \
    template Json module_to_json<S>(const Lattice<S>&);                                                            \
    template std::vector<Lattice<S>> module_list_from_json<S>(const RingPtr<S>&, const Json&,                      \
                                                              std::vector<std::string>*, const BuildOptions&);     \
    template Json chain_to_json<S>(const ChainTree<S>&, const EFamily<S>&, bool);                                  \
    template Json matrix_to_json<S>(const PolyMatrix<S>&);                                                         \
    template Json resolution_to_json<S>(const Resolution<S>&, const EFamily<S>&);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
