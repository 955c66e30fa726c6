#ifndef ENDOCHAIN_CURVE_RING_HPP
#define ENDOCHAIN_CURVE_RING_HPP

/* Reduced one-dimensional complete rings R inside E = prod_i F[[t_i]].
 *
 * R is stored through its window: an F-basis of R/t^c E where c is the
 * conductor, so R = span(window) + t^c E exactly. A ring obtained by
 * splitting an idempotent keeps the global branch numbering and records the
 * branches it lives on as its support. */

#include <memory>
#include <string>
#include <vector>

#include "endochain/laurent.hpp"
#include "endochain/scalar.hpp"
#include "endochain/window.hpp"

namespace endochain {

template <class S> class CurveRing;
template <class S> using RingPtr = std::shared_ptr<const CurveRing<S>>;

template <class S> class CurveRing {
  public:
    const FieldSpec& field() const { return field_; }
    int branches() const { return branches_; }
    const std::vector<int>& support() const { return window_.amb.slot_branch; }
    /* Slot of a branch in the ring window, -1 off the support. */
    int slot_of(int branch) const;

    /* Per support slot. */
    const std::vector<int>& conductor() const { return window_.hi; }
    int conductor_on(int branch) const { return window_.hi[static_cast<std::size_t>(slot_of(branch))]; }
    /* Number of tail monomials t^{hi+k} e needed to generate t^hi E over R. */
    int staircase(int branch) const { return std::max(conductor_on(branch), 1); }

    const Window<S>& window() const { return window_; }
    int window_bound() const { return window_bound_; }
    /* Extra exponents carried above every tail (nonzero under double-check). */
    int slack() const { return slack_; }

    bool is_local() const { return blocks_.size() == 1; }
    bool is_dvr_product() const { return delta() == 0; }
    int delta() const;

    const std::vector<BranchVector<S>>& algebra_generators() const { return generators_; }
    const std::vector<std::vector<int>>& idempotent_blocks() const { return blocks_; }
    /* Minimal generators of the maximal ideal; throws NotLocal. */
    const std::vector<BranchVector<S>>& max_ideal_generators() const;

    BranchVector<S> one() const;
    BranchVector<S> idempotent(const std::vector<int>& branches) const;
    std::vector<BranchVector<S>> window_elements() const;
    /* Window elements followed by the tail monomials t^{c_i+k} e_i, k < max(c_i,1);
     * together they generate R as an algebra (and t^c E as an R-module). */
    std::vector<BranchVector<S>> canonical_generators() const;
    bool contains(const BranchVector<S>& x) const;

    PolyVector<S> to_slots(const BranchVector<S>& x) const;
    BranchVector<S> from_slots(const PolyVector<S>& v) const;

    /* Valuations attained on a single-branch ring below the conductor. */
    std::vector<int> value_set() const;

    friend bool operator==(const CurveRing& a, const CurveRing& b)
    {
        return a.field_ == b.field_ && a.branches_ == b.branches_ && a.window_ == b.window_;
    }

    // construction goes through build_ring / ring_from_window / factor
    CurveRing() = default;
    FieldSpec field_;
    int branches_ = 0;
    Window<S> window_;
    int window_bound_ = 0;
    int slack_ = 0;
    std::vector<BranchVector<S>> generators_;
    std::vector<std::vector<int>> blocks_;
    std::vector<BranchVector<S>> max_gens_;
};

struct BuildOptions {
    int max_window = 2048;
    bool double_check = false;
};

template <class S>
RingPtr<S> build_ring(const FieldSpec& field, int branches, const std::vector<BranchVector<S>>& generators,
                      const BuildOptions& opts = {});

template <class S>
RingPtr<S> semigroup_ring(const FieldSpec& field, const std::vector<int>& semigroup, const BuildOptions& opts = {});

/* A ring given directly by a canonical window (lo = 0); validates 1 in R and
 * closure under products. */
template <class S> RingPtr<S> ring_from_window(const FieldSpec& field, int branches, Window<S> w, int slack);

template <class S> std::vector<std::vector<int>> branch_idempotents(const CurveRing<S>& r);

template <class S> RingPtr<S> factor(const RingPtr<S>& r, const std::vector<int>& branches);

/* Window of the maximal ideal (lo = 0, hi = max(c, 1)); throws NotLocal. */
template <class S> Window<S> maximal_ideal_window(const CurveRing<S>& r);

struct RingReport {
    int multiplicity = 0;
    int embedding_dim = 0;
    std::vector<int> conductor;
    bool is_dvr_product = false;
    int delta = 0;
};

template <class S> RingReport ring_report(const CurveRing<S>& r);

/* Products truncated below per-branch bounds. */
template <class S> BranchVector<S> multiply(const BranchVector<S>& a, const BranchVector<S>& b);

} // namespace endochain

#endif
