#ifndef ENDOCHAIN_LATTICE_HPP
#define ENDOCHAIN_LATTICE_HPP

/* Finitely generated torsion-free modules over a CurveRing, realized as
 * lattices in prod_i F((t_i))^{r_i}, and K-linear maps between them.
 *
 * Vectors are PolyVector indexed by the slots of the lattice ambient; a ring
 * element x acts on slot s through its entry on the branch of s. Every
 * lattice is kept in canonical window form, so == is equality of
 * submodules of the ambient. */

#include <algorithm>
#include <tuple>
#include <vector>

#include "endochain/curve_ring.hpp"
#include "endochain/polymatrix.hpp"
#include "endochain/window.hpp"

namespace endochain {

template <class S> class Lattice {
  public:
    Lattice() = default;
    /* Canonicalizes w unless the caller vouches that it already is canonical. */
    Lattice(RingPtr<S> ring, Window<S> w, bool canonical = false)
        : ring_(std::move(ring)), window_(canonical ? std::move(w) : canonicalize(w))
    {
    }

    const RingPtr<S>& ring() const { return ring_; }
    const Window<S>& window() const { return window_; }
    const Ambient& ambient() const { return window_.amb; }
    int slots() const { return window_.slots(); }
    int branch(int s) const { return window_.amb.branch(s); }
    int lo(int s) const { return window_.lo[static_cast<std::size_t>(s)]; }
    int hi(int s) const { return window_.hi[static_cast<std::size_t>(s)]; }
    bool is_zero() const { return slots() == 0; }

    bool contains(const PolyVector<S>& v) const { return window_.contains(v); }
    std::vector<PolyVector<S>> window_vectors() const { return window_.vectors(); }
    /* Window vectors plus t^{hi_s + k} e_s for k < max(c, 1): an R-generating set. */
    std::vector<PolyVector<S>> r_generators() const;

    /* The same submodule of the ambient, viewed over another ring. */
    Lattice over(RingPtr<S> ring) const { return Lattice(std::move(ring), window_, true); }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.window_ == b.window_; }

  private:
    RingPtr<S> ring_;
    Window<S> window_;
};

template <class S> struct LatticeMap {
    Lattice<S> source, target;
    PolyMatrix<S> matrix; // target slots x source slots
};

/* Entry (p, q) of a map is a K-element on the common branch of slots p, q. */
template <class S> bool is_valid(const LatticeMap<S>& f);

template <class S> Lattice<S> zero_lattice(const RingPtr<S>& ring);

/* R-span of the vectors together with t^{tail_s} F[[t]] e_s for every slot. */
template <class S>
Lattice<S> span(const RingPtr<S>& ring, const Ambient& amb, const std::vector<PolyVector<S>>& gens,
                const std::vector<int>& tail);

/* An overring S (or R itself) as a rank-one lattice over base. */
template <class S> Lattice<S> ring_lattice(const RingPtr<S>& s, const RingPtr<S>& base);
template <class S> Lattice<S> maximal_ideal(const RingPtr<S>& r);

template <class S> bool membership(const PolyVector<S>& x, const Lattice<S>& l) { return l.contains(x); }

/* Constraint map(y) in target for the unknown y. */
template <class S> struct Constraint {
    const PolyMatrix<S>* map;
    const Lattice<S>* target;
};

/* {y in box [lo, hi) + tail : every constraint holds}. The caller guarantees
 * that t^hi lies in the result. */
template <class S>
Lattice<S> preimage(const RingPtr<S>& ring, const Ambient& amb, const std::vector<int>& lo, const std::vector<int>& hi,
                    const std::vector<Constraint<S>>& constraints);

/* Hom(C, D) as a lattice of matrices; slot k holds entry pairs[k] = (p, q),
 * p a slot of D and q a slot of C on the same branch. */
template <class S> struct HomLattice {
    Lattice<S> lattice;
    std::vector<std::pair<int, int>> pairs;
    int rows = 0, cols = 0;

    int slot(int p, int q) const;
    PolyMatrix<S> to_matrix(const PolyVector<S>& v) const;
    PolyVector<S> from_matrix(const PolyMatrix<S>& m) const;
};

template <class S> HomLattice<S> hom_lattice(const Lattice<S>& c, const Lattice<S>& d);

template <class S> struct KernelResult {
    Lattice<S> lattice;
    PolyMatrix<S> inclusion; // source slots x kernel slots
    std::vector<int> free_rows;
    std::vector<LaurentPoly<S>> diag;

    /* Kernel coordinates of x = inclusion * y, correct below prec[j]. */
    PolyVector<S> coordinates(const PolyVector<S>& x, const std::vector<int>& prec) const;
};

template <class S> KernelResult<S> kernel(const LatticeMap<S>& f);

/* Image of a map whose matrix has full row rank on every branch. */
template <class S> Lattice<S> image(const LatticeMap<S>& f);

template <class S> Lattice<S> sum(const Lattice<S>& a, const Lattice<S>& b);
template <class S> Lattice<S> direct_sum(const Lattice<S>& a, const Lattice<S>& b);
template <class S> Lattice<S> direct_sum(const std::vector<Lattice<S>>& parts, const RingPtr<S>& ring);

/* m L, for a local ring. */
template <class S> Lattice<S> max_ideal_times(const Lattice<S>& l);
template <class S> std::vector<PolyVector<S>> minimal_generators(const Lattice<S>& l);
/* Minimal generators over a local ring, the R-generators otherwise. */
template <class S> std::vector<PolyVector<S>> module_generators(const Lattice<S>& l);

/* The F-space L/sub for sub contained in L with the same ambient. */
template <class S> class QuotientSpace {
  public:
    QuotientSpace(const Lattice<S>& l, const Lattice<S>& sub);

    int dimension() const { return quot_.rank(); }
    RowVec<S> residue(const PolyVector<S>& v) const;
    /* Indices of a greedy choice of candidates whose residues are independent. */
    std::vector<int> choose_basis(const std::vector<PolyVector<S>>& candidates) const;
    bool spans(const std::vector<PolyVector<S>>& vs) const;
    /* Lattice rows and tail units of the window: an F-basis of L modulo the frame. */
    const Window<S>& frame() const { return frame_; }

  private:
    Window<S> frame_;
    Echelon<S> sub_;
    Echelon<S> quot_;
};

/* Whether vectors of L generate L (Nakayama over a local ring). */
template <class S> bool spans(const Lattice<S>& l, const std::vector<PolyVector<S>>& vs);

/* Lowest valuation first, then branch, slot and original position. */
template <class S> std::vector<PolyVector<S>> by_valuation(std::vector<PolyVector<S>> cands, const Ambient& amb)
{
    std::vector<std::tuple<int, int, int, int>> keys;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        int v = kInfiniteValuation, slot = -1;
        for (int s = 0; s < amb.slots(); ++s) {
            const int w = cands[i][static_cast<std::size_t>(s)].valuation();
            if (w < v) v = w, slot = s;
        }
        keys.emplace_back(v, slot < 0 ? -1 : amb.branch(slot), slot, static_cast<int>(i));
    }
    std::sort(keys.begin(), keys.end());
    std::vector<PolyVector<S>> out;
    for (const auto& k : keys) out.push_back(std::move(cands[static_cast<std::size_t>(std::get<3>(k))]));
    return out;
}

template <class S> bool is_submodule(const Lattice<S>& sub, const Lattice<S>& l);

/* Elements of an overring S generating it as a module over base. */
template <class S> std::vector<BranchVector<S>> overring_module_generators(const RingPtr<S>& s, const RingPtr<S>& base);
template <class S> bool is_overring(const RingPtr<S>& s, const RingPtr<S>& base);

template <class S> bool scalar_extension_test(const RingPtr<S>& s, const Lattice<S>& l);
template <class S> Lattice<S> largest_submodule_over(const RingPtr<S>& s, const Lattice<S>& n);

template <class S> struct FreeDecomposition {
    std::vector<int> ranks;             // per branch of the ambient
    std::vector<PolyVector<S>> basis;   // one vector per free summand
    std::vector<int> basis_branch;
};

template <class S> FreeDecomposition<S> free_decomposition_over_dvr_product(const Lattice<S>& l);

template <class S> int quotient_dimension(const Lattice<S>& n, const Lattice<S>& n0);

/* Multiply slot s by t^{k[s]}. */
template <class S> Lattice<S> shift(const Lattice<S>& l, const std::vector<int>& k);
/* Multiply every slot by the K-element x (entry on the slot's branch must be nonzero). */
template <class S> Lattice<S> scale(const Lattice<S>& l, const BranchVector<S>& x);

/* The summand on the given slots, over ring (which must contain the matching
 * idempotent for this to be a direct summand). */
template <class S> Lattice<S> restrict_slots(const Lattice<S>& l, const std::vector<int>& slots, const RingPtr<S>& ring);

/* Diagonal action of a ring element on an ambient. */
template <class S> PolyMatrix<S> action_matrix(const Ambient& amb, const BranchVector<S>& x);
template <class S> PolyVector<S> act(const BranchVector<S>& x, const Ambient& amb, const PolyVector<S>& v);

} // namespace endochain

#endif
