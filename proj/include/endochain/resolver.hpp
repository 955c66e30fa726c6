#ifndef ENDOCHAIN_RESOLVER_HPP
#define ENDOCHAIN_RESOLVER_HPP

/* Resolutions 0 -> C_m -> ... -> C_0 -> N -> 0 of torsion-free modules by
 * direct sums of rings from the chain family, which stay exact under
 * Hom(X, -) for every member X. */

#include <string>
#include <vector>

#include "endochain/chain.hpp"
#include "endochain/lattice.hpp"

namespace endochain {

/* A direct sum of family members; members[k] is the member on slot k. */
template <class S> struct Term {
    Lattice<S> lattice;
    std::vector<int> members;
};

template <class S> struct Resolution {
    Lattice<S> target;
    std::vector<Term<S>> terms;       // C_0 .. C_m; empty for the zero module
    std::vector<PolyMatrix<S>> maps;  // maps[0]: C_0 -> N, maps[j]: C_j -> C_{j-1}

    bool exact = false;
    bool decomposition_ok = false;
    bool minimal_cover_ok = true;
    std::vector<bool> hom_exact;      // per family member
    std::vector<std::string> notes;

    int length() const { return static_cast<int>(terms.size()) - 1; }
    bool certified() const;
};

/* objs[0] <- objs[1] <- ... with maps[i]: objs[i+1] -> objs[i]. Checks
 * that every map lands in its target, consecutive composites vanish, the
 * complex is exact at objs[1..], the last map is injective and, when asked,
 * that maps[0] is onto. */
template <class S>
bool complex_is_exact(const std::vector<Lattice<S>>& objs, const std::vector<PolyMatrix<S>>& maps, bool onto,
                      std::string* why = nullptr);

/* Matrix of g -> d o g from Hom(X, B) to Hom(X, C). */
template <class S> PolyMatrix<S> postcompose(const HomLattice<S>& from, const HomLattice<S>& to, const PolyMatrix<S>& d);

template <class S> bool verify_hom_exactness(const Resolution<S>& res, const Lattice<S>& x);

template <class S> class Resolver {
  public:
    Resolver(ChainTree<S> tree, EFamily<S> family);

    const ChainTree<S>& tree() const { return tree_; }
    const EFamily<S>& family() const { return family_; }
    const RingPtr<S>& root() const { return tree_.nodes.front().ring; }

    Resolution<S> keyred_resolve(const Lattice<S>& n, bool certify = true) const;

    /* Fills the exactness certificates of res in place. */
    void certify(Resolution<S>& res) const;

  private:
    struct Partial {
        std::vector<Term<S>> terms;
        std::vector<PolyMatrix<S>> maps;
        bool minimal_cover_ok = true;
    };

    Partial resolve(int node, const Lattice<S>& n) const;
    Partial resolve_stable(int node, const Lattice<S>& n) const;
    Term<S> make_term(const std::vector<int>& members, const RingPtr<S>& ring) const;

    ChainTree<S> tree_;
    EFamily<S> family_;
};

template <class S> struct PresentedResolution {
    LatticeMap<S> presentation;  // M_1 -> M_0
    KernelResult<S> kernel;      // L = ker(M_1 -> M_0)
    Resolution<S> syzygy;        // resolution of L (empty when L = 0)
    bool zero_module = false;    // Hom(M, M_1) -> Hom(M, M_0) is onto
    int length = 0;              // of 0 -> (M,C_m) -> ... -> (M,C_0) -> (M,M_1) -> (M,M_0)
    bool hom_exact = false;      // that complex is exact except at (M, M_0)
};

template <class S>
PresentedResolution<S> resolve_presented_module(const Resolver<S>& resolver, const LatticeMap<S>& f);

} // namespace endochain

#endif
