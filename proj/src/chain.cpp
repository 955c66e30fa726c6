#include "endochain/chain.hpp"

#include <algorithm>
#include <map>

namespace endochain {

template <class S> RingPtr<S> end_of_maximal_ideal(const RingPtr<S>& r)
{
    FieldScope<S> scope(r->field());
    if (!r->is_local()) throw EngineError(ErrorCode::NotLocal, "End(m) needs a local ring");
    if (r->is_dvr_product()) throw EngineError(ErrorCode::AlreadyNormal, "ring is already normal");
    Lattice<S> m = maximal_ideal(r);
    HomLattice<S> h = hom_lattice(m, m);
    // rank one: slot k of the colon pairs slot k of m with itself
    RingPtr<S> e = ring_from_window(r->field(), r->branches(), h.lattice.window(), r->slack());
    if (!is_overring(e, r)) throw EngineError(ErrorCode::Internal, "End(m) does not contain R");
    if (*e == *r) throw EngineError(ErrorCode::ClaimViolation, "End(m) equals R for a non-normal ring");
    return e;
}

template <class S> std::vector<int> ChainTree<S>::leaves() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].children.empty()) out.push_back(static_cast<int>(i));
    return out;
}

template <class S> int ChainTree<S>::find(const CurveRing<S>& r) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (*nodes[i].ring == r) return static_cast<int>(i);
    return -1;
}

namespace {

template <class S> struct Builder {
    ChainTree<S>& tree;
    const ChainOptions& opts;
    std::map<int, int> per_level;

    int add(const RingPtr<S>& r, int level)
    {
        const int found = tree.find(*r);
        if (found >= 0) return found;
        typename ChainTree<S>::Node n;
        n.ring = r;
        n.level = level;
        n.label = level == 0 ? "R" : "R^(" + std::to_string(level) + ")_" + std::to_string(++per_level[level]);
        tree.nodes.push_back(std::move(n));
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    /* Strictness lives in End(m) itself; after a split, the projection of the
     * parent onto a block may already equal the child (the node). */
    void check_contains(const CurveRing<S>& parent, const CurveRing<S>& child, const std::vector<int>& t)
    {
        const BranchVector<S> e = parent.idempotent(t);
        for (const auto& x : parent.canonical_generators())
            if (!child.contains(multiply(e, x)))
                throw EngineError(ErrorCode::ClaimViolation, "chain step does not contain the parent factor");
    }

    int expand(int idx)
    {
        if (tree.nodes[static_cast<std::size_t>(idx)].expanded || tree.nodes[static_cast<std::size_t>(idx)].ring->is_dvr_product())
            return tree.nodes[static_cast<std::size_t>(idx)].height;
        const RingPtr<S> r = tree.nodes[static_cast<std::size_t>(idx)].ring;
        const int level = tree.nodes[static_cast<std::size_t>(idx)].level;
        if (level >= opts.depth_cap) {
            if (!opts.truncate)
                throw EngineError(ErrorCode::ChainDiverged, "chain exceeded the depth cap",
                                  "cap " + std::to_string(opts.depth_cap));
            tree.truncated = true;
            return 0;
        }
        RingPtr<S> e = end_of_maximal_ideal(r);
        std::vector<int> kids;
        std::vector<std::vector<int>> kid_branches;
        for (const auto& blk : branch_idempotents(*e)) {
            RingPtr<S> child = blk.size() == e->support().size() ? e : factor(e, blk);
            check_contains(*r, *child, blk);
            kids.push_back(add(child, level + 1));
            kid_branches.push_back(blk);
        }
        {
            auto& n = tree.nodes[static_cast<std::size_t>(idx)];
            n.endo = e;
            n.children = kids;
            n.child_branches = kid_branches;
            n.expanded = true;
        }
        int h = 0;
        for (int k : kids) h = std::max(h, 1 + expand(k));
        tree.nodes[static_cast<std::size_t>(idx)].height = h;
        return h;
    }
};

} // namespace

template <class S> ChainTree<S> build_chain_tree(const RingPtr<S>& r, const ChainOptions& opts)
{
    FieldScope<S> scope(r->field());
    if (!r->is_local()) throw EngineError(ErrorCode::NotLocal, "the chain starts at a local ring");
    ChainTree<S> tree;
    Builder<S> b{tree, opts, {}};
    b.add(r, 0);
    tree.depth = b.expand(0);
    return tree;
}

template <class S> bool normalization_check(const ChainTree<S>& tree, std::string* diagnostic)
{
    auto fail = [&](const std::string& why) {
        if (diagnostic) *diagnostic = why;
        return false;
    };
    if (tree.truncated) return fail("tree was truncated at the depth cap");
    const RingPtr<S>& root = tree.nodes.front().ring;
    std::vector<int> seen(static_cast<std::size_t>(root->branches()), 0);
    for (int i : tree.leaves()) {
        const auto& n = tree.nodes[static_cast<std::size_t>(i)];
        if (!n.ring->is_dvr_product()) return fail("leaf " + n.label + " is not a DVR");
        for (int b : n.ring->support()) ++seen[static_cast<std::size_t>(b)];
    }
    for (int b : root->support())
        if (seen[static_cast<std::size_t>(b)] != 1)
            return fail("branch " + std::to_string(b) + " is covered by " + std::to_string(seen[static_cast<std::size_t>(b)]) +
                        " leaves");
    return true;
}

template <class S> int EFamily<S>::index_of(const CurveRing<S>& r) const
{
    for (std::size_t i = 0; i < members.size(); ++i)
        if (*members[i] == r) return static_cast<int>(i);
    return -1;
}

template <class S> EFamily<S> e_family(const ChainTree<S>& tree)
{
    EFamily<S> fam;
    const RingPtr<S>& root = tree.nodes.front().ring;
    for (const auto& n : tree.nodes) {
        int k = fam.index_of(*n.ring);
        if (k < 0) {
            k = static_cast<int>(fam.members.size());
            fam.members.push_back(n.ring);
            fam.labels.push_back(n.label);
            fam.as_lattices.push_back(ring_lattice(n.ring, root));
        }
        fam.member_of_node.push_back(k);
    }
    return fam;
}

template <class S> Lattice<S> representation_module(const EFamily<S>& fam)
{
    return direct_sum(fam.as_lattices, fam.members.front());
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template RingPtr<S> end_of_maximal_ideal<S>(const RingPtr<S>&);                                                \
    template struct ChainTree<S>;                                                                                  \
    template ChainTree<S> build_chain_tree<S>(const RingPtr<S>&, const ChainOptions&);                             \
    template bool normalization_check<S>(const ChainTree<S>&, std::string*);                                       \
    template struct EFamily<S>;                                                                                    \
    template EFamily<S> e_family<S>(const ChainTree<S>&);                                                          \
    template Lattice<S> representation_module<S>(const EFamily<S>&);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
