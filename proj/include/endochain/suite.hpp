#ifndef ENDOCHAIN_SUITE_HPP
#define ENDOCHAIN_SUITE_HPP

/* The verification suite run by `endochain verify` and the acceptance test:
 * chains, resolutions, global dimensions and the randomized overring checks
 * over a directory of ring files. */

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "endochain/io.hpp"

namespace endochain {

struct CorpusEntry {
    std::string name;
    std::string file;
    Json ring; // ring file contents, with optional "expected" and "mcm"
};

/* Every *.json file of dir, sorted by file name. */
std::vector<CorpusEntry> load_corpus(const std::string& dir);

struct SuiteOptions {
    std::uint64_t seed = 1;
    bool double_check = false;
    int pd_cap = 16;
    int lemma_cases = 200;
};

struct RingAnalysis {
    std::string name;
    int branches = 1;
    bool semigroup = false;
    int n = 0, e = 0, delta = 0, gldim = 0;
    bool gldim_capped = false;
    bool normalization_ok = false;
    bool projectivization_ok = false;
    int lattices = 0, max_length = 0;
    bool lengths_ok = true, certified = true, hom_m_exact = true;
    int fcmt_gldim = -1; // -1 without an MCM list
    bool fcmt_capped = false;
    std::map<int, std::vector<std::string>> failures; // by criterion
    Json stable; // seed-independent reports
    Json seeded; // resolutions of the generated lattices
};

RingAnalysis analyze_ring(const CorpusEntry& entry, const SuiteOptions& opts);

struct LemmaResult {
    int cases = 0, passed = 0;
    std::vector<std::string> failures;
};

/* hom over R of S-lattices equals hom over S, and images of R-maps between
 * S-lattices are S-stable, for random overring pairs R in S = End(m_R). */
LemmaResult overring_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opts);

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details;
};

struct SuiteReport {
    std::vector<RingAnalysis> rings;
    LemmaResult lemma;
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
    Json to_json() const;
};

/* Criteria 1..8; an empty set runs all of them. */
SuiteReport run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opts, const std::set<int>& which = {});

} // namespace endochain

#endif
