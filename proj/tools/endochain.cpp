// endochain: chains of endomorphism rings, resolutions and global dimensions
// of reduced curve singularities, from JSON ring files.

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "endochain/io.hpp"
#include "endochain/suite.hpp"

#ifndef ENDOCHAIN_CORPUS_DIR
#define ENDOCHAIN_CORPUS_DIR "corpus"
#endif

using namespace endochain;

namespace {

struct Config {
    std::string command;
    std::string input, module_file, modules_file;
    std::string corpus = ENDOCHAIN_CORPUS_DIR;
    std::string suite = "all";
    bool double_check = false;
    int pd_cap = 16;
    std::string output = "text";
    std::uint64_t seed = 1;
};

bool is_prime(const Json& ring)
{
    return ring.is_object() && ring.contains("field") && ring.at("field").is_object() &&
           ring.at("field").value("kind", "") == "prime";
}

template <class F> auto with_field(const Json& ring, F&& f)
{
    if (is_prime(ring)) return f(ModP{});
    return f(Rational{});
}

struct Outcome {
    Json report;
    std::string text;
    bool ok = true;
};

template <class S> Outcome cmd_ring(const Json& j, const BuildOptions& bo)
{
    const auto r = ring_from_json<S>(j, bo);
    FieldScope<S> scope(r->field());
    const RingReport rep = ring_report(*r);
    Json out = ring_to_json(*r);
    out["report"] = report_to_json(rep);
    std::ostringstream t;
    t << "branches " << r->branches() << "\ne " << rep.multiplicity << "\nembedding dimension " << rep.embedding_dim
      << "\ndelta " << rep.delta << "\nconductor";
    for (int c : rep.conductor) t << ' ' << c;
    t << "\nDVR product " << (rep.is_dvr_product ? "yes" : "no") << '\n';
    return {out, t.str(), true};
}

template <class S> Outcome cmd_chain(const Json& j, const BuildOptions& bo)
{
    const auto r = ring_from_json<S>(j, bo);
    FieldScope<S> scope(r->field());
    const auto tree = build_chain_tree(r);
    const auto fam = e_family(tree);
    const bool ok = normalization_check(tree);
    Json out = chain_to_json(tree, fam, ok);
    std::ostringstream t;
    t << "n " << tree.depth << "  e " << out["e"] << "  delta " << out["delta"] << "  family " << fam.members.size() << '\n';
    for (const auto& n : tree.nodes) {
        t << std::string(static_cast<std::size_t>(2 * n.level), ' ') << n.label << "  conductor";
        for (int c : n.ring->conductor()) t << ' ' << c;
        t << "  delta " << n.ring->delta() << (n.ring->is_dvr_product() ? "  (normal)" : "") << '\n';
    }
    t << "normalization check " << (ok ? "passed" : "FAILED") << '\n';
    return {out, t.str(), ok};
}

template <class S> Outcome cmd_resolve(const Json& j, const Json& module, const BuildOptions& bo)
{
    const auto r = ring_from_json<S>(j, bo);
    FieldScope<S> scope(r->field());
    const Lattice<S> n = module_from_json(r, module);
    auto tree = build_chain_tree(r);
    auto fam = e_family(tree);
    Resolver<S> resolver(std::move(tree), std::move(fam));
    const auto res = resolver.keyred_resolve(n);
    Json out = resolution_to_json(res, resolver.family());
    std::ostringstream t;
    t << "length " << res.length() << '\n';
    for (std::size_t k = 0; k < res.terms.size(); ++k) {
        t << "C" << k << " =";
        const auto& ms = res.terms[k].members;
        for (std::size_t i = 0; i < ms.size(); ++i)
            t << (i ? " + " : " ") << resolver.family().labels[static_cast<std::size_t>(ms[i])];
        t << '\n';
    }
    for (std::size_t k = 0; k < res.maps.size(); ++k) t << "d" << k << " = " << matrix_to_json(res.maps[k]).dump() << '\n';
    t << "exact " << res.exact << "  decomposition " << res.decomposition_ok << "  minimal cover " << res.minimal_cover_ok
      << "\nHom-exact:";
    for (std::size_t i = 0; i < res.hom_exact.size(); ++i) t << ' ' << resolver.family().labels[i] << '=' << res.hom_exact[i];
    t << '\n';
    for (const auto& note : res.notes) t << "note: " << note << '\n';
    return {out, t.str(), res.certified()};
}

template <class S> Outcome cmd_gldim(const Json& j, const Json* modules, const BuildOptions& bo, int cap)
{
    const auto r = ring_from_json<S>(j, bo);
    FieldScope<S> scope(r->field());
    GldimReport rep;
    if (modules) {
        std::vector<std::string> labels;
        const auto mcm = module_list_from_json(r, *modules, &labels, bo);
        rep = fcmt_check(r, mcm, labels, cap);
    } else {
        const auto tree = build_chain_tree(r);
        rep = family_gldim(tree, e_family(tree), cap);
    }
    Json out = gldim_to_json(rep);
    std::ostringstream t;
    for (std::size_t i = 0; i < rep.labels.size(); ++i)
        t << "pd S(" << rep.labels[i] << ") " << (rep.capped[i] ? ">= " : "") << rep.pd_per_simple[i] << '\n';
    t << "gldim " << (rep.any_capped ? ">= " : "") << rep.gldim << '\n';
    if (rep.chain_bound >= 0) t << "n + 1 = " << rep.chain_bound << '\n';
    t << "e " << rep.multiplicity << "  delta " << rep.delta << '\n';
    for (const auto& a : rep.assumptions) t << "assuming " << a << '\n';
    return {out, t.str(), !rep.any_capped};
}

std::set<int> suite_ids(const std::string& s)
{
    static const std::map<std::string, int> names{{"chain", 1},   {"resolve", 2}, {"gldim", 3},       {"fcmt", 4},
                                                  {"overring", 5}, {"ledger", 6},  {"projective", 7}, {"determinism", 8}};
    std::set<int> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part == "all") return {};
        if (auto it = names.find(part); it != names.end()) {
            out.insert(it->second);
            continue;
        }
        int id = 0;
        try {
            id = std::stoi(part);
        } catch (const std::exception&) {
            throw EngineError(ErrorCode::SchemaError, "unknown suite", part);
        }
        if (id < 1 || id > 8) throw EngineError(ErrorCode::SchemaError, "unknown suite", part);
        out.insert(id);
    }
    return out;
}

Outcome cmd_verify(const Config& cfg)
{
    SuiteOptions opts;
    opts.seed = cfg.seed;
    opts.double_check = cfg.double_check;
    opts.pd_cap = cfg.pd_cap;
    const auto rep = run_suite(load_corpus(cfg.corpus), opts, suite_ids(cfg.suite));
    std::ostringstream t;
    for (const auto& c : rep.criteria) {
        t << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << '\n';
        for (const auto& d : c.details) t << "    " << d << '\n';
    }
    return {rep.to_json(), t.str(), rep.all_pass()};
}

Outcome run(const Config& cfg)
{
    BuildOptions bo;
    bo.double_check = cfg.double_check;
    if (cfg.command == "verify") return cmd_verify(cfg);
    const Json ring = read_json_file(cfg.input);
    if (cfg.command == "ring") return with_field(ring, [&](auto s) { return cmd_ring<decltype(s)>(ring, bo); });
    if (cfg.command == "chain") return with_field(ring, [&](auto s) { return cmd_chain<decltype(s)>(ring, bo); });
    if (cfg.command == "resolve") {
        const Json module = read_json_file(cfg.module_file);
        return with_field(ring, [&](auto s) { return cmd_resolve<decltype(s)>(ring, module, bo); });
    }
    Json modules;
    if (!cfg.modules_file.empty()) modules = read_json_file(cfg.modules_file);
    return with_field(ring, [&](auto s) {
        return cmd_gldim<decltype(s)>(ring, cfg.modules_file.empty() ? nullptr : &modules, bo, cfg.pd_cap);
    });
}

void emit_error(const Config& cfg, const Json& err)
{
    if (cfg.output == "json") std::cout << err.dump(2) << '\n';
    else std::cerr << err.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    Config cfg;
    CLI::App app{"endomorphism ring chains of curve singularities"};
    app.require_subcommand(1);
    app.add_flag("--double-check", cfg.double_check, "redo every computation with doubled windows");
    app.add_option("--pd-cap", cfg.pd_cap, "stop projective resolutions at this length")->check(CLI::PositiveNumber);
    app.add_option("--output", cfg.output, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", cfg.seed, "seed of the randomized suites");

    auto* ring = app.add_subcommand("ring", "ring invariants; the JSON output is a ring file");
    ring->add_option("ring", cfg.input, "ring file")->required();
    auto* chain = app.add_subcommand("chain", "tree of iterated End(m) rings");
    chain->add_option("ring", cfg.input, "ring file")->required();
    auto* resolve = app.add_subcommand("resolve", "resolution of a module by family rings");
    resolve->add_option("ring", cfg.input, "ring file")->required();
    resolve->add_option("module", cfg.module_file, "module file")->required();
    auto* gldim = app.add_subcommand("gldim", "global dimension of End(M)^op");
    gldim->add_option("ring", cfg.input, "ring file")->required();
    gldim->add_option("modules", cfg.modules_file, "module list; default: the chain family");
    auto* verify = app.add_subcommand("verify", "run the verification suite over a corpus");
    verify->add_option("--suite", cfg.suite, "all, or a comma list of 1-8 / chain,resolve,gldim,fcmt,overring,ledger,projective,determinism");
    verify->add_option("corpus", cfg.corpus, "directory of ring files");
    for (auto* sub : {ring, chain, resolve, gldim, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (const char* env = std::getenv("ENDOCHAIN_PD_CAP")) {
            int cap = 0;
            try {
                cap = std::stoi(env);
            } catch (const std::exception&) {
                throw EngineError(ErrorCode::SchemaError, "ENDOCHAIN_PD_CAP must be a positive integer", env);
            }
            if (cap < 1) throw EngineError(ErrorCode::SchemaError, "ENDOCHAIN_PD_CAP must be a positive integer", env);
            cfg.pd_cap = cap;
        }
        const Outcome out = run(cfg);
        if (cfg.output == "json") std::cout << out.report.dump(2) << '\n';
        else std::cout << out.text;
        return out.ok ? 0 : 1;
    } catch (const EngineError& e) {
        emit_error(cfg, error_to_json(e));
        return e.code() == ErrorCode::SchemaError || e.code() == ErrorCode::IoError ? 2 : 1;
    } catch (const Json::exception& e) {
        emit_error(cfg, Json{{"code", "SchemaError"}, {"message", e.what()}, {"context", cfg.input}});
        return 2;
    }
}
