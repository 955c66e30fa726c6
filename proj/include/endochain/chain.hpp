#ifndef ENDOCHAIN_CHAIN_HPP
#define ENDOCHAIN_CHAIN_HPP

/* The tree of iterated endomorphism rings R -> End(m) -> split -> End(m) ...
 * down to the normalization, and the family of rings it visits. */

#include <string>
#include <vector>

#include "endochain/curve_ring.hpp"
#include "endochain/lattice.hpp"

namespace endochain {

template <class S> RingPtr<S> end_of_maximal_ideal(const RingPtr<S>& r);

template <class S> struct ChainTree {
    struct Node {
        RingPtr<S> ring;
        std::string label;
        int level = 0;              // strict inclusions from the root
        RingPtr<S> endo;            // End(m) when the node is not a DVR
        std::vector<int> children;  // one per idempotent block of endo
        std::vector<std::vector<int>> child_branches;
        int height = 0;             // longest chain below this node
        bool expanded = false;      // false for leaves and for nodes cut off by the depth cap
    };

    std::vector<Node> nodes; // nodes[0] is the root
    int depth = 0;
    bool truncated = false;

    std::vector<int> leaves() const;
    int find(const CurveRing<S>& r) const;
};

struct ChainOptions {
    int depth_cap = 64;
    /* Stop at the cap instead of raising ChainDiverged. */
    bool truncate = false;
};

template <class S> ChainTree<S> build_chain_tree(const RingPtr<S>& r, const ChainOptions& opts = {});

/* True iff the leaves are DVRs whose product is prod_i F[[t_i]]. */
template <class S> bool normalization_check(const ChainTree<S>& tree, std::string* diagnostic = nullptr);

template <class S> struct EFamily {
    std::vector<RingPtr<S>> members; // members[0] is the root
    std::vector<std::string> labels;
    std::vector<Lattice<S>> as_lattices; // rank-one lattices over the root
    /* Chain node index -> member index. */
    std::vector<int> member_of_node;

    int index_of(const CurveRing<S>& r) const;
};

template <class S> EFamily<S> e_family(const ChainTree<S>& tree);

/* M = direct sum of the members, in member order. */
template <class S> Lattice<S> representation_module(const EFamily<S>& fam);

} // namespace endochain

#endif
