#include "endochain/suite.hpp"

#include <algorithm>
#include <filesystem>
#include <future>
#include <random>

namespace endochain {

namespace {

using Rng = std::mt19937_64;

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class S> S random_scalar(Rng& rng, const FieldSpec& f) { return Field<S>::from_int(uniform(rng, -3, 3), f); }

/* A random element of r that is nonzero on every branch of its support. */
template <class S> BranchVector<S> random_element(const CurveRing<S>& r, Rng& rng)
{
    BranchVector<S> x(static_cast<std::size_t>(r.branches()));
    for (const auto& w : r.window_elements()) {
        const S c = random_scalar<S>(rng, r.field());
        for (std::size_t b = 0; b < x.size(); ++b) x[b] += c * w[b];
    }
    for (int b : r.support())
        x[static_cast<std::size_t>(b)] += LaurentPoly<S>::t_power(r.conductor_on(b) + uniform(rng, 0, 2));
    return x;
}

template <class S> PolyVector<S> random_slots(const CurveRing<S>& r, Rng& rng) { return r.to_slots(random_element(r, rng)); }

bool expected_matches(const Json& expected, const char* key, int value, std::vector<std::string>& out)
{
    if (!expected.is_object() || !expected.contains(key)) return true;
    if (expected.at(key) == Json(value)) return true;
    out.push_back(std::string(key) + " = " + std::to_string(value) + ", expected " + expected.at(key).dump());
    return false;
}

struct TestLattice {
    std::string kind;
    bool seeded = false;
};

template <class S> RingAnalysis analyze(const CorpusEntry& entry, const SuiteOptions& opts)
{
    RingAnalysis a;
    a.name = entry.name;
    a.semigroup = entry.ring.contains("semigroup");
    const Json expected = entry.ring.value("expected", Json::object());
    int stage = 1;
    try {
        BuildOptions bo;
        bo.double_check = opts.double_check;
        const RingPtr<S> r = ring_from_json<S>(entry.ring, bo);
        FieldScope<S> scope(r->field());
        a.branches = r->branches();

        auto tree = build_chain_tree(r);
        std::string why;
        a.normalization_ok = normalization_check(tree, &why);
        if (!a.normalization_ok) a.failures[1].push_back("normalization check: " + why);
        if (tree.truncated) a.failures[1].push_back("chain truncated");
        for (int l : tree.leaves())
            if (!tree.nodes[static_cast<std::size_t>(l)].ring->is_dvr_product())
                a.failures[1].push_back("leaf " + tree.nodes[static_cast<std::size_t>(l)].label + " is not a DVR product");
        const auto fam = e_family(tree);
        const RingReport rep = ring_report(*r);
        a.n = tree.depth;
        a.e = rep.multiplicity;
        a.delta = rep.delta;
        expected_matches(expected, "n", a.n, a.failures[1]);
        expected_matches(expected, "e", a.e, a.failures[1]);
        expected_matches(expected, "delta", a.delta, a.failures[1]);

        stage = 3;
        const GldimReport gd = family_gldim(tree, fam, opts.pd_cap);
        a.gldim = gd.gldim;
        a.gldim_capped = gd.any_capped;
        if (gd.any_capped) a.failures[3].push_back("pd reached the cap " + std::to_string(opts.pd_cap));
        if (gd.gldim > a.n + 1)
            a.failures[3].push_back("gldim " + std::to_string(gd.gldim) + " exceeds n + 1 = " + std::to_string(a.n + 1));
        expected_matches(expected, "gldim", gd.gldim, a.failures[3]);

        stage = 7;
        const auto alg = build_endo_algebra(r, fam.as_lattices, fam.labels);
        a.projectivization_ok = projectivization_check(alg, &why);
        if (!a.projectivization_ok) a.failures[7].push_back("projectivization: " + why);

        stage = 2;
        Resolver<S> resolver(tree, fam);
        const Lattice<S> m_rep = representation_module(fam);
        Rng rng(opts.seed ^ fnv1a(entry.name));
        const Lattice<S> rl = ring_lattice(r, r);
        const Lattice<S> mi = maximal_ideal(r);
        std::vector<int> full;
        for (std::size_t i = 0; i < fam.members.size(); ++i)
            if (fam.members[i]->support().size() == r->support().size()) full.push_back(static_cast<int>(i));
        auto pick = [&](const std::vector<int>& from) { return from[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(from.size()) - 1))]; };
        std::vector<int> all(fam.members.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        const int cmax = *std::max_element(r->conductor().begin(), r->conductor().end());

        std::vector<std::pair<TestLattice, Lattice<S>>> tests;
        tests.push_back({{"maximal_ideal", false}, mi});
        tests.push_back({{"maximal_ideal_squared", false}, max_ideal_times(mi)});
        tests.push_back({{"random_ideal", true},
                         span(r, rl.ambient(), {random_slots(*r, rng), random_slots(*r, rng)},
                              std::vector<int>(static_cast<std::size_t>(rl.slots()), cmax + 4))});
        {
            const int k = pick(all);
            const Lattice<S>& x = fam.as_lattices[static_cast<std::size_t>(k)];
            std::vector<int> sh;
            for (int s = 0; s < x.slots(); ++s) sh.push_back(uniform(rng, -2, 3));
            tests.push_back({{"shifted_" + fam.labels[static_cast<std::size_t>(k)], true}, shift(x, sh)});
        }
        {
            const int k = pick(full);
            const Lattice<S>& x = fam.as_lattices[static_cast<std::size_t>(k)];
            const auto& sring = *fam.members[static_cast<std::size_t>(k)];
            const Lattice<S> src = direct_sum(rl, rl);
            const BranchVector<S> s1 = random_element(sring, rng), s2 = random_element(sring, rng);
            PolyMatrix<S> f(x.slots(), src.slots());
            for (int p = 0; p < x.slots(); ++p) {
                const auto b = static_cast<std::size_t>(x.branch(p));
                for (int q = 0; q < src.slots(); ++q)
                    if (src.branch(q) == x.branch(p)) f(p, q) = q < rl.slots() ? s1[b] : s2[b];
            }
            tests.push_back({{"kernel_into_" + fam.labels[static_cast<std::size_t>(k)], true},
                             kernel(LatticeMap<S>{src, x, f}).lattice});
        }
        {
            const int k = pick(all);
            tests.push_back({{"maximal_ideal_plus_" + fam.labels[static_cast<std::size_t>(k)], true},
                             direct_sum(mi, fam.as_lattices[static_cast<std::size_t>(k)])});
        }
        {
            const Ambient amb2 = Ambient::from_ranks(std::vector<int>(static_cast<std::size_t>(r->branches()), 2));
            std::vector<PolyVector<S>> gens;
            for (int g = 0; g < 3; ++g) {
                const BranchVector<S> x = random_element(*r, rng), y = random_element(*r, rng);
                PolyVector<S> v(static_cast<std::size_t>(amb2.slots()));
                for (int s = 0; s < amb2.slots(); ++s) {
                    const auto b = static_cast<std::size_t>(amb2.branch(s));
                    v[static_cast<std::size_t>(s)] = s % 2 == 0 ? x[b] : y[b];
                }
                gens.push_back(std::move(v));
            }
            tests.push_back({{"random_rank_two", true},
                             span(r, amb2, gens, std::vector<int>(static_cast<std::size_t>(amb2.slots()), cmax + 3))});
        }

        Json fixed = Json::array(), seeded = Json::array();
        for (const auto& [t, lat] : tests) {
            ++a.lattices;
            const auto res = resolver.keyred_resolve(lat);
            Json out = resolution_to_json(res, fam);
            const bool hom_m = verify_hom_exactness(res, m_rep);
            out["kind"] = t.kind;
            out["hom_M_exact"] = hom_m;
            a.max_length = std::max(a.max_length, res.length());
            auto dump = [&] { return t.kind + " " + module_to_json(lat).dump(); };
            if (res.length() > a.n) {
                a.lengths_ok = false;
                a.failures[2].push_back("length " + std::to_string(res.length()) + " > n for " + dump());
            }
            if (!res.certified()) {
                a.certified = false;
                a.failures[2].push_back("uncertified resolution " + out.at("certificates").dump() + " for " + dump());
            }
            if (!hom_m) {
                a.hom_m_exact = false;
                a.failures[7].push_back("Hom(M, -) not exact on the resolution of " + dump());
            }
            (t.seeded ? seeded : fixed).push_back(std::move(out));
        }

        Json fcmt;
        if (entry.ring.contains("mcm")) {
            stage = 4;
            std::vector<std::string> labels;
            const auto mcm = module_list_from_json(r, entry.ring.at("mcm"), &labels, bo);
            const GldimReport fr = fcmt_check(r, mcm, labels, opts.pd_cap);
            a.fcmt_gldim = fr.gldim;
            a.fcmt_capped = fr.any_capped;
            if (fr.any_capped || fr.gldim > 2) a.failures[4].push_back("gldim " + std::to_string(fr.gldim) + " above 2");
            expected_matches(expected, "fcmt_gldim", fr.gldim, a.failures[4]);
            fcmt = gldim_to_json(fr);
        }

        a.stable = Json{{"name", a.name},
                        {"ring", report_to_json(rep)},
                        {"chain", chain_to_json(tree, fam, a.normalization_ok)},
                        {"gldim", gldim_to_json(gd)},
                        {"projectivization", a.projectivization_ok},
                        {"resolutions", std::move(fixed)},
                        {"fcmt", std::move(fcmt)}};
        a.seeded = Json{{"name", a.name}, {"resolutions", std::move(seeded)}};
    } catch (const EngineError& e) {
        a.failures[stage].push_back(std::string(to_string(e.code())) + ": " + e.message() + " " + e.context());
        if (stage == 2) a.certified = false;
    }
    return a;
}

template <class S> struct OverringPair {
    std::string where;
    RingPtr<S> base, over;
};

template <class S> Lattice<S> random_over_lattice(const RingPtr<S>& s, Rng& rng)
{
    const int rank = uniform(rng, 1, 2);
    std::vector<int> slot_branch;
    for (int b : s->support())
        for (int k = 0; k < rank; ++k) slot_branch.push_back(b);
    const Ambient amb = Ambient::rank_one(slot_branch, s->branches());
    std::vector<PolyVector<S>> gens;
    const int count = uniform(rng, 1, rank + 1);
    for (int g = 0; g < count; ++g) {
        std::vector<BranchVector<S>> xs;
        for (int k = 0; k < rank; ++k) xs.push_back(random_element(*s, rng));
        PolyVector<S> v(static_cast<std::size_t>(amb.slots()));
        for (int slot = 0; slot < amb.slots(); ++slot)
            v[static_cast<std::size_t>(slot)] = xs[static_cast<std::size_t>(slot % rank)][static_cast<std::size_t>(amb.branch(slot))];
        gens.push_back(std::move(v));
    }
    std::vector<int> tail;
    for (int slot = 0; slot < amb.slots(); ++slot) tail.push_back(s->conductor_on(amb.branch(slot)) + uniform(rng, 2, 4));
    return shift(span(s, amb, gens, tail), std::vector<int>(static_cast<std::size_t>(amb.slots()), uniform(rng, -1, 1)));
}

/* One randomized case; empty on success. */
template <class S> std::string overring_case(const OverringPair<S>& pr, Rng& rng)
{
    FieldScope<S> scope(pr.base->field());
    const Lattice<S> c = random_over_lattice(pr.over, rng), d = random_over_lattice(pr.over, rng);
    const auto h_over = hom_lattice(c, d);
    const auto h_base = hom_lattice(c.over(pr.base), d.over(pr.base));
    if (!(h_over.lattice == h_base.lattice))
        return "hom over the base ring differs from hom over the overring: C = " + module_to_json(c).dump() +
               " D = " + module_to_json(d).dump();
    const auto gens = h_base.lattice.r_generators();
    for (int attempt = 0; attempt < 8; ++attempt) {
        PolyVector<S> v(static_cast<std::size_t>(h_base.lattice.slots()));
        for (const auto& g : gens) {
            const S k = random_scalar<S>(rng, pr.base->field());
            for (std::size_t s = 0; s < v.size(); ++s) v[s] += k * g[s];
        }
        const LatticeMap<S> f{c.over(pr.base), d.over(pr.base), h_base.to_matrix(v)};
        Lattice<S> im;
        try {
            im = image(f);
        } catch (const EngineError& e) {
            if (e.code() == ErrorCode::NotFullRank) continue;
            throw;
        }
        if (!scalar_extension_test(pr.over, im))
            return "image of a map is not stable under the overring: C = " + module_to_json(c).dump() +
                   " D = " + module_to_json(d).dump();
        return {};
    }
    return {};
}

template <class S> void collect_pairs(const CorpusEntry& entry, std::vector<OverringPair<S>>& out)
{
    const RingPtr<S> r = ring_from_json<S>(entry.ring);
    FieldScope<S> scope(r->field());
    const auto tree = build_chain_tree(r);
    for (const auto& n : tree.nodes)
        if (n.endo) out.push_back({entry.name + ":" + n.label, n.ring, n.endo});
}

template <class S> void run_cases(const std::vector<OverringPair<S>>& pairs, int count, std::uint64_t seed, LemmaResult& out)
{
    for (int i = 0; i < count; ++i) {
        const auto& pr = pairs[static_cast<std::size_t>(i) % pairs.size()];
        Rng rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1)));
        ++out.cases;
        try {
            const std::string err = overring_case(pr, rng);
            if (err.empty()) ++out.passed;
            else out.failures.push_back(pr.where + " case " + std::to_string(i) + ": " + err);
        } catch (const EngineError& e) {
            out.failures.push_back(pr.where + " case " + std::to_string(i) + ": " + e.what());
        }
    }
}

bool is_prime_field(const Json& ring)
{
    return ring.contains("field") && ring.at("field").is_object() && ring.at("field").value("kind", "") == "prime";
}

std::string cell(int v) { return std::to_string(v); }

} // namespace

std::vector<CorpusEntry> load_corpus(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw EngineError(ErrorCode::IoError, "corpus directory not found", dir);
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(dir))
        if (f.is_regular_file() && f.path().extension() == ".json") files.push_back(f.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files) {
        Json j = read_json_file(f.string());
        std::string name = j.value("name", f.stem().string());
        out.push_back({std::move(name), f.string(), std::move(j)});
    }
    return out;
}

RingAnalysis analyze_ring(const CorpusEntry& entry, const SuiteOptions& opts)
{
    return is_prime_field(entry.ring) ? analyze<ModP>(entry, opts) : analyze<Rational>(entry, opts);
}

LemmaResult overring_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opts)
{
    std::vector<OverringPair<Rational>> rq;
    std::vector<OverringPair<ModP>> rp;
    LemmaResult out;
    for (const auto& e : corpus) {
        try {
            if (is_prime_field(e.ring)) collect_pairs(e, rp);
            else collect_pairs(e, rq);
        } catch (const EngineError& err) {
            out.failures.push_back(e.name + ": " + err.what());
        }
    }
    const int total = static_cast<int>(rq.size() + rp.size());
    if (total == 0) return out;
    // the rational and prime pairs share the case numbering in proportion to their count
    const int nq = static_cast<int>(static_cast<long long>(opts.lemma_cases) * static_cast<long long>(rq.size()) / total);
    if (!rq.empty()) run_cases(rq, nq, opts.seed, out);
    if (!rp.empty()) run_cases(rp, opts.lemma_cases - nq, opts.seed + 0x51ed27ull, out);
    return out;
}

bool SuiteReport::all_pass() const
{
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

Json SuiteReport::to_json() const
{
    Json cs = Json::array();
    for (const auto& c : criteria) cs.push_back(Json{{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"details", c.details}});
    Json table = Json::array();
    for (const auto& r : rings)
        table.push_back(Json{{"name", r.name}, {"n_plus_1", r.n + 1}, {"e", r.e}, {"delta", r.delta}, {"gldim", r.gldim}});
    return Json{{"pass", all_pass()},
                {"criteria", std::move(cs)},
                {"ledger", std::move(table)},
                {"overring_cases", Json{{"cases", lemma.cases}, {"passed", lemma.passed}}}};
}

namespace {

std::vector<RingAnalysis> analyze_all(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opts)
{
    std::vector<std::future<RingAnalysis>> jobs;
    for (const auto& e : corpus) jobs.push_back(std::async(std::launch::async, [&e, &opts] { return analyze_ring(e, opts); }));
    std::vector<RingAnalysis> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

void take_failures(const std::vector<RingAnalysis>& rings, int id, CriterionResult& c)
{
    for (const auto& r : rings) {
        auto it = r.failures.find(id);
        if (it == r.failures.end()) continue;
        if (!it->second.empty()) c.pass = false;
        for (const auto& f : it->second) c.details.push_back(r.name + ": " + f);
    }
}

/* First differing JSON pointer of two reports, or empty. */
std::string first_difference(const Json& a, const Json& b)
{
    const Json patch = Json::diff(a, b);
    if (patch.empty()) return {};
    return patch.front().value("path", std::string("/"));
}

} // namespace

SuiteReport run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opts, const std::set<int>& which)
{
    auto wanted = [&](int id) { return which.empty() || which.count(id) > 0; };
    SuiteReport rep;
    rep.rings = analyze_all(corpus, opts);
    if (wanted(5)) rep.lemma = overring_suite(corpus, opts);

    auto add = [&](int id, std::string title, auto body) {
        if (!wanted(id)) return;
        CriterionResult c;
        c.id = id;
        c.title = std::move(title);
        body(c);
        take_failures(rep.rings, id, c);
        rep.criteria.push_back(std::move(c));
    };

    add(1, "chain reaches the normalization", [&](CriterionResult& c) {
        int multi = 0, three = 0, semi = 0;
        for (const auto& r : rep.rings) {
            if (r.semigroup) ++semi;
            if (r.branches == 2) ++multi;
            if (r.branches >= 3) ++three;
        }
        c.details.push_back(std::to_string(rep.rings.size()) + " rings, " + std::to_string(semi) + " semigroup, " +
                            std::to_string(multi) + " two-branch, " + std::to_string(three) + " with three or more branches");
        c.pass = rep.rings.size() >= 12 && semi >= 8 && multi >= 3 && three >= 1;
    });
    add(2, "resolutions by family rings have length <= n and are certified", [&](CriterionResult& c) {
        int lattices = 0;
        c.pass = true;
        for (const auto& r : rep.rings) {
            lattices += r.lattices;
            if (r.lattices < 5) {
                c.pass = false;
                c.details.push_back(r.name + ": only " + std::to_string(r.lattices) + " test lattices");
            }
        }
        c.details.push_back(std::to_string(lattices) + " lattices resolved");
    });
    add(3, "gldim <= n + 1 with the fixture values", [&](CriterionResult& c) {
        c.pass = true;
        for (std::size_t i = 0; i < rep.rings.size(); ++i) {
            const auto& r = rep.rings[i];
            const Json ex = corpus[i].ring.value("expected", Json::object());
            c.details.push_back(r.name + ": gldim " + cell(r.gldim) + ", bound " + cell(r.n + 1) +
                                (ex.contains("gldim") ? ", fixture " + ex.at("gldim").dump() : ", recorded"));
        }
    });
    add(4, "finite CM type: gldim of the MCM endomorphism ring is 2", [&](CriterionResult& c) {
        int count = 0;
        c.pass = true;
        for (const auto& r : rep.rings) {
            if (r.fcmt_gldim < 0) continue;
            ++count;
            c.details.push_back(r.name + ": gldim " + cell(r.fcmt_gldim));
            if (r.fcmt_gldim != 2 && r.delta > 0) c.pass = false;
        }
        if (count < 4) {
            c.pass = false;
            c.details.push_back("only " + std::to_string(count) + " rings carry an MCM list");
        }
    });
    add(5, "overring Hom and image stability", [&](CriterionResult& c) {
        c.details.push_back(std::to_string(rep.lemma.passed) + "/" + std::to_string(rep.lemma.cases) + " cases, seed " +
                            std::to_string(opts.seed));
        for (const auto& f : rep.lemma.failures) c.details.push_back(f);
        c.pass = rep.lemma.cases >= opts.lemma_cases && rep.lemma.passed == rep.lemma.cases && rep.lemma.failures.empty() &&
                 opts.lemma_cases >= 200;
    });
    add(6, "gldim against n + 1, e and delta", [&](CriterionResult& c) {
        c.details.push_back("ring | n+1 | e | delta | gldim");
        bool witness = false;
        c.pass = true;
        for (const auto& r : rep.rings) {
            c.details.push_back(r.name + " | " + cell(r.n + 1) + " | " + cell(r.e) + " | " + cell(r.delta) + " | " + cell(r.gldim));
            if (r.gldim_capped || r.gldim > r.n + 1) c.pass = false;
            if (r.n + 1 > r.e) witness = true;
        }
        if (!witness) {
            c.pass = false;
            c.details.push_back("no ring with n + 1 > e in the corpus");
        }
    });
    add(7, "projectivization and Hom(M, -) exactness", [&](CriterionResult& c) {
        c.pass = true;
        for (const auto& r : rep.rings)
            if (!r.projectivization_ok || !r.hom_m_exact) c.pass = false;
    });
    add(8, "reports identical under double-check and across seeds", [&](CriterionResult& c) {
        c.pass = true;
        SuiteOptions dc = opts;
        dc.double_check = !opts.double_check;
        SuiteOptions other = opts;
        other.seed = opts.seed + 1;
        const auto doubled = analyze_all(corpus, dc);
        const auto reseeded = analyze_all(corpus, other);
        for (std::size_t i = 0; i < rep.rings.size(); ++i) {
            const auto& base = rep.rings[i];
            std::string d = first_difference(base.stable, doubled[i].stable);
            if (d.empty()) d = first_difference(base.seeded, doubled[i].seeded);
            if (!d.empty()) {
                c.pass = false;
                c.details.push_back(base.name + ": double-check changes " + d);
            }
            d = first_difference(base.stable, reseeded[i].stable);
            if (!d.empty()) {
                c.pass = false;
                c.details.push_back(base.name + ": seed " + std::to_string(other.seed) + " changes " + d);
            }
        }
        if (wanted(5)) {
            const auto lemma2 = overring_suite(corpus, other);
            if (lemma2.passed != lemma2.cases || !lemma2.failures.empty()) {
                c.pass = false;
                c.details.push_back("overring cases fail under seed " + std::to_string(other.seed));
            }
        }
        c.details.push_back("compared " + std::to_string(rep.rings.size()) + " ring reports three ways");
    });
    return rep;
}

} // namespace endochain
