#ifndef ENDOCHAIN_ENDO_HPP
#define ENDOCHAIN_ENDO_HPP

/* Gamma = End_R(M)^op for M = X_1 + ... + X_k, handled through right
 * End(M)-modules: Hom_R(M, X) with Gamma acting by precomposition.
 *
 * Projective Gamma-modules are P_i = Hom(M, X_i). A syzygy beyond the first
 * is Hom(M, L) for an R-lattice L, because Hom(M, -) is left exact; so
 * minimal projective resolutions reduce to minimal add(M)-approximations
 * of lattices. */

#include <array>
#include <map>
#include <string>
#include <vector>

#include "endochain/chain.hpp"
#include "endochain/lattice.hpp"

namespace endochain {

struct EndoOptions {
    /* Also compute rad End(X_i) from the trace form; needs p > dim. */
    bool trace_form = true;
};

template <class S> struct LatticeAlgebra {
    RingPtr<S> base;
    std::vector<Lattice<S>> summands;
    std::vector<std::string> labels;
    std::vector<std::vector<HomLattice<S>>> hom;                 // hom[j][k] = Hom(X_j, X_k)
    std::vector<std::vector<std::vector<PolyMatrix<S>>>> gens;   // R-generators of hom[j][k]
    std::vector<Lattice<S>> rad_end;                             // rad End(X_i) in hom[i][i]
    std::vector<Lattice<S>> rad_end_trace;                       // same, from the trace form (if computed)
    std::vector<std::vector<PolyMatrix<S>>> rad_gens;            // R-generators of rad_end[i]
    bool radical_methods_agree = true;
    /* table[{j,k,l}][a * gens[j][k].size() + b] = gens[k][l][a] o gens[j][k][b] in hom[j][l]. */
    std::map<std::array<int, 3>, std::vector<PolyVector<S>>> table;

    int size() const { return static_cast<int>(summands.size()); }
    PolyMatrix<S> identity(int i) const { return PolyMatrix<S>::identity(summands[static_cast<std::size_t>(i)].slots()); }
    /* R-generators of rad(X_j, X_k). */
    std::vector<PolyMatrix<S>> radical_generators(int j, int k) const;
};

/* f in End(X) is a unit iff f(X) = X. */
template <class S> bool is_unit(const PolyMatrix<S>& f, const Lattice<S>& x);
template <class S> bool isomorphic(const Lattice<S>& x, const Lattice<S>& y);

template <class S>
LatticeAlgebra<S> build_endo_algebra(const RingPtr<S>& base, const std::vector<Lattice<S>>& summands,
                                     const std::vector<std::string>& labels = {}, const EndoOptions& opts = {});

template <class S> struct GammaModule {
    enum class Kind { Simple, Projective, Hom };
    Kind kind = Kind::Hom;
    int index = -1;      // Simple, Projective
    Lattice<S> lattice;  // Hom: the module Hom_R(M, lattice)
};

template <class S> GammaModule<S> projective(const LatticeAlgebra<S>& g, int i);
template <class S> GammaModule<S> simple(const LatticeAlgebra<S>& g, int i);
template <class S> GammaModule<S> hom_module(const Lattice<S>& l);

/* dim_F of top(Hom(M, L)) = Hom(M, L) / Hom(M, L) rad Gamma. */
template <class S> int top_dimension(const LatticeAlgebra<S>& g, const Lattice<S>& l);

struct PdResult {
    int pd = 0;
    bool capped = false;                   // pd >= cap
    std::vector<std::vector<int>> covers;  // summands of each projective term
};

template <class S> PdResult minimal_projective_resolution(const LatticeAlgebra<S>& g, const GammaModule<S>& q, int cap = 16);

struct GldimReport {
    std::vector<std::string> labels;
    std::vector<int> pd_per_simple;
    std::vector<bool> capped;
    int gldim = 0;
    bool any_capped = false;
    int chain_length = -1;  // n, when the algebra comes from a chain family
    int chain_bound = -1;   // n + 1
    int generator_bound = 2; // max{2, dim R}
    int multiplicity = 0;   // e(R)
    int delta = 0;
    bool radical_methods_agree = true;
    std::vector<std::string> assumptions;

    bool operator==(const GldimReport&) const = default;
};

template <class S> GldimReport global_dimension(const LatticeAlgebra<S>& g, int cap = 16);

/* Gamma for M = direct sum of the chain family, with the chain data filled in. */
template <class S> GldimReport family_gldim(const ChainTree<S>& tree, const EFamily<S>& fam, int cap = 16);

/* Hom(M, -) is additive on summands, Hom(M, M) = sum of the P_i, Hom(R, X_i) = X_i,
 * and the composition table matches matrix composition and is associative. */
template <class S> bool projectivization_check(const LatticeAlgebra<S>& g, std::string* diagnostic = nullptr);

/* Gamma on a user-supplied list of MCM modules, assumed complete. */
template <class S>
GldimReport fcmt_check(const RingPtr<S>& r, const std::vector<Lattice<S>>& mcm, const std::vector<std::string>& labels = {},
                       int cap = 16);

} // namespace endochain

#endif
