// One PASS/FAIL line per acceptance criterion over the shipped corpus.

#include <iostream>

#include "endochain/suite.hpp"

#ifndef ENDOCHAIN_CORPUS_DIR
#define ENDOCHAIN_CORPUS_DIR "corpus"
#endif

using namespace endochain;

int main(int argc, char** argv)
{
    const std::string dir = argc > 1 ? argv[1] : ENDOCHAIN_CORPUS_DIR;
    try {
        SuiteOptions opts;
        const auto rep = run_suite(load_corpus(dir), opts);
        for (const auto& c : rep.criteria) {
            std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
            for (const auto& d : c.details) std::cout << "    " << d << '\n';
        }
        return rep.all_pass() ? 0 : 1;
    } catch (const EngineError& e) {
        std::cout << "FAIL suite did not run: " << e.what() << ' ' << e.context() << '\n';
        return 1;
    }
}
