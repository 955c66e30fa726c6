#include "endochain/resolver.hpp"

#include <algorithm>
#include <set>

namespace endochain {

namespace {

template <class S> std::vector<int> coordinate_precision(const Lattice<S>& k)
{
    std::vector<int> prec;
    for (int j = 0; j < k.slots(); ++j) prec.push_back(k.hi(j) + k.ring()->staircase(k.branch(j)) + 1);
    return prec;
}

/* Matrix of u^k -> N sending the unit of copy c to vs[c]; copy c occupies
 * one slot per branch of u. */
template <class S>
PolyMatrix<S> cover_matrix(const Ambient& amb, const std::vector<PolyVector<S>>& vs, const std::vector<int>& support)
{
    std::vector<PolyVector<S>> cols;
    for (const auto& v : vs)
        for (int b : support) {
            PolyVector<S> col(static_cast<std::size_t>(amb.slots()));
            for (int s : amb.slots_on(b)) col[static_cast<std::size_t>(s)] = v[static_cast<std::size_t>(s)];
            cols.push_back(std::move(col));
        }
    return PolyMatrix<S>::from_columns(amb.slots(), cols);
}

} // namespace

template <class S>
bool complex_is_exact(const std::vector<Lattice<S>>& objs, const std::vector<PolyMatrix<S>>& maps, bool onto,
                      std::string* why)
{
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (objs.empty() || maps.size() + 1 != objs.size()) return fail("complex has the wrong shape");
    FieldScope<S> scope(objs.front().ring()->field());
    if (maps.empty()) return objs.front().is_zero() || !onto ? true : fail("nonzero module with no cover");
    for (std::size_t i = 0; i < maps.size(); ++i)
        if (!is_valid(LatticeMap<S>{objs[i + 1], objs[i], maps[i]}))
            return fail("map " + std::to_string(i) + " does not land in its target");
    for (std::size_t i = 0; i + 1 < maps.size(); ++i)
        if (!(maps[i] * maps[i + 1]).is_zero()) return fail("composite at position " + std::to_string(i + 1) + " is nonzero");
    if (onto) {
        std::vector<PolyVector<S>> imgs;
        for (const auto& g : module_generators(objs[1])) imgs.push_back(maps[0].apply(g));
        if (!spans(objs[0], imgs)) return fail("augmentation is not onto");
    }
    for (std::size_t i = 1; i < objs.size(); ++i) {
        KernelResult<S> k = kernel(LatticeMap<S>{objs[i], objs[i - 1], maps[i - 1]});
        if (i + 1 == objs.size()) {
            if (!k.lattice.is_zero()) return fail("last map is not injective");
            break;
        }
        const std::vector<int> prec = coordinate_precision(k.lattice);
        std::vector<PolyVector<S>> ys;
        for (const auto& g : module_generators(objs[i + 1])) ys.push_back(k.coordinates(maps[i].apply(g), prec));
        if (k.lattice.is_zero()) continue;
        if (!spans(k.lattice, ys)) return fail("not exact at position " + std::to_string(i));
    }
    return true;
}

template <class S> PolyMatrix<S> postcompose(const HomLattice<S>& from, const HomLattice<S>& to, const PolyMatrix<S>& d)
{
    PolyMatrix<S> m(static_cast<int>(to.pairs.size()), static_cast<int>(from.pairs.size()));
    for (std::size_t a = 0; a < from.pairs.size(); ++a) {
        const auto [p, q] = from.pairs[a];
        for (std::size_t c = 0; c < to.pairs.size(); ++c)
            if (to.pairs[c].second == q) m(static_cast<int>(c), static_cast<int>(a)) = d(to.pairs[c].first, p);
    }
    return m;
}

template <class S> bool verify_hom_exactness(const Resolution<S>& res, const Lattice<S>& x)
{
    FieldScope<S> scope(x.ring()->field());
    if (res.terms.empty()) return res.target.is_zero();
    std::vector<HomLattice<S>> hs{hom_lattice(x, res.target)};
    for (const auto& t : res.terms) hs.push_back(hom_lattice(x, t.lattice));
    std::vector<Lattice<S>> objs;
    for (const auto& h : hs) objs.push_back(h.lattice);
    std::vector<PolyMatrix<S>> maps;
    for (std::size_t i = 0; i < res.maps.size(); ++i) maps.push_back(postcompose(hs[i + 1], hs[i], res.maps[i]));
    return complex_is_exact(objs, maps, true);
}

template <class S> bool Resolution<S>::certified() const
{
    return exact && decomposition_ok && minimal_cover_ok &&
           std::all_of(hom_exact.begin(), hom_exact.end(), [](bool b) { return b; });
}

template <class S>
Resolver<S>::Resolver(ChainTree<S> tree, EFamily<S> family) : tree_(std::move(tree)), family_(std::move(family))
{
    if (tree_.truncated) throw EngineError(ErrorCode::ChainDiverged, "cannot resolve over a truncated chain");
}

template <class S> Term<S> Resolver<S>::make_term(const std::vector<int>& members, const RingPtr<S>& ring) const
{
    Term<S> t;
    t.members = members;
    std::vector<Lattice<S>> parts;
    for (int m : members) parts.push_back(ring_lattice(family_.members[static_cast<std::size_t>(m)], ring));
    t.lattice = direct_sum(parts, ring);
    return t;
}

template <class S> typename Resolver<S>::Partial Resolver<S>::resolve(int node, const Lattice<S>& n) const
{
    Partial out;
    if (n.is_zero()) return out;
    const auto& nd = tree_.nodes[static_cast<std::size_t>(node)];
    const RingPtr<S>& u = nd.ring;
    const int self = family_.member_of_node[static_cast<std::size_t>(node)];

    if (u->is_dvr_product()) {
        FreeDecomposition<S> fd = free_decomposition_over_dvr_product(n);
        out.terms.push_back(make_term(std::vector<int>(fd.basis.size(), self), u));
        out.maps.push_back(cover_matrix(n.ambient(), fd.basis, u->support()));
        return out;
    }
    // a free module is its own resolution
    const auto mg = minimal_generators(n);
    bool free = true;
    for (int b : u->support()) free = free && n.ambient().slots_on(b).size() == mg.size();
    if (free && static_cast<std::size_t>(n.slots()) == mg.size() * u->support().size()) {
        out.terms.push_back(make_term(std::vector<int>(mg.size(), self), u));
        out.maps.push_back(cover_matrix(n.ambient(), mg, u->support()));
        return out;
    }
    if (!nd.expanded) throw EngineError(ErrorCode::ChainDiverged, "node " + nd.label + " was never expanded");
    if (scalar_extension_test(nd.endo, n)) return resolve_stable(node, n);

    // N' = largest End(m)-submodule, resolved over the children
    Lattice<S> np = largest_submodule_over(nd.endo, n);
    Partial sub = resolve_stable(node, np);
    out.minimal_cover_ok = sub.minimal_cover_ok;

    // minimal cover of N / N' by copies of u
    QuotientSpace<S> q(n, sum(np, max_ideal_times(n)));
    const auto cands = by_valuation(n.r_generators(), n.ambient());
    std::vector<PolyVector<S>> chosen;
    for (int i : q.choose_basis(cands)) chosen.push_back(cands[static_cast<std::size_t>(i)]);
    const int k = static_cast<int>(chosen.size());
    Term<S> f = make_term(std::vector<int>(static_cast<std::size_t>(k), self), u);
    PolyMatrix<S> g = cover_matrix(n.ambient(), chosen, u->support());

    {
        // g^{-1}(N') must lie in m F
        std::vector<int> hi;
        for (int c = 0; c < f.lattice.slots(); ++c) {
            int h = f.lattice.hi(c);
            for (int p = 0; p < n.slots(); ++p)
                if (!g(p, c).is_zero()) h = std::max(h, np.hi(p) - g(p, c).valuation());
            hi.push_back(h);
        }
        const PolyMatrix<S> id = PolyMatrix<S>::identity(f.lattice.slots());
        Lattice<S> gp = preimage(u, f.lattice.ambient(), f.lattice.window().lo, hi,
                                 {Constraint<S>{&g, &np}, Constraint<S>{&id, &f.lattice}});
        if (!is_submodule(gp, max_ideal_times(f.lattice))) out.minimal_cover_ok = false;
    }

    Term<S> c0 = f;
    if (!sub.terms.empty()) {
        c0.lattice = direct_sum(f.lattice, sub.terms[0].lattice);
        c0.members.insert(c0.members.end(), sub.terms[0].members.begin(), sub.terms[0].members.end());
    }
    PolyMatrix<S> pi = sub.terms.empty() ? g : PolyMatrix<S>::hconcat(g, -sub.maps[0]);
    KernelResult<S> kr = kernel(LatticeMap<S>{c0.lattice, n, pi});
    out.terms.push_back(std::move(c0));
    out.maps.push_back(std::move(pi));
    if (kr.lattice.is_zero()) return out;

    Lattice<S> l = kr.lattice.over(u);
    if (!scalar_extension_test(nd.endo, l))
        throw EngineError(ErrorCode::ClaimViolation, "syzygy is not a module over End(m)", "node " + nd.label);
    Partial rest = resolve_stable(node, l);
    out.minimal_cover_ok = out.minimal_cover_ok && rest.minimal_cover_ok;
    for (std::size_t j = 0; j < rest.terms.size(); ++j) {
        out.terms.push_back(std::move(rest.terms[j]));
        out.maps.push_back(j == 0 ? kr.inclusion * rest.maps[0] : std::move(rest.maps[j]));
    }
    return out;
}

template <class S> typename Resolver<S>::Partial Resolver<S>::resolve_stable(int node, const Lattice<S>& n) const
{
    const auto& nd = tree_.nodes[static_cast<std::size_t>(node)];
    const RingPtr<S>& u = nd.ring;
    struct Piece {
        std::vector<int> slots;
        Partial part;
    };
    std::vector<Piece> pieces;
    std::size_t levels = 0;
    for (std::size_t j = 0; j < nd.children.size(); ++j) {
        const int child = nd.children[j];
        std::vector<int> ss;
        for (int b : nd.child_branches[j])
            for (int s : n.ambient().slots_on(b)) ss.push_back(s);
        std::sort(ss.begin(), ss.end());
        if (ss.empty()) continue;
        const RingPtr<S>& cr = tree_.nodes[static_cast<std::size_t>(child)].ring;
        Piece pc{ss, resolve(child, restrict_slots(n, ss, cr))};
        levels = std::max(levels, pc.part.terms.size());
        pieces.push_back(std::move(pc));
    }

    Partial out;
    std::vector<std::vector<int>> off(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        Term<S> t;
        t.lattice = zero_lattice(u);
        int o = 0;
        for (auto& pc : pieces) {
            off[i].push_back(o);
            if (i >= pc.part.terms.size()) continue;
            const Term<S>& pt = pc.part.terms[i];
            t.lattice = direct_sum(t.lattice, pt.lattice.over(u));
            t.members.insert(t.members.end(), pt.members.begin(), pt.members.end());
            o += pt.lattice.slots();
        }
        out.terms.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < levels; ++i) {
        const int rows = i == 0 ? n.slots() : out.terms[i - 1].lattice.slots();
        PolyMatrix<S> m(rows, out.terms[i].lattice.slots());
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            const Piece& pc = pieces[j];
            if (i >= pc.part.terms.size()) continue;
            const PolyMatrix<S>& d = pc.part.maps[i];
            for (int r = 0; r < d.rows(); ++r)
                for (int c = 0; c < d.cols(); ++c) {
                    const int row = i == 0 ? pc.slots[static_cast<std::size_t>(r)] : off[i - 1][j] + r;
                    m(row, off[i][j] + c) = d(r, c);
                }
        }
        out.maps.push_back(std::move(m));
    }
    for (const auto& pc : pieces) out.minimal_cover_ok = out.minimal_cover_ok && pc.part.minimal_cover_ok;
    return out;
}

template <class S> Resolution<S> Resolver<S>::keyred_resolve(const Lattice<S>& n, bool certify_it) const
{
    const RingPtr<S>& r = root();
    FieldScope<S> scope(r->field());
    if (!(*n.ring() == *r)) throw EngineError(ErrorCode::AmbientMismatch, "module is not over the chain's base ring");
    Partial p = resolve(0, n.over(r));
    Resolution<S> res;
    res.target = n.over(r);
    for (auto& t : p.terms) res.terms.push_back(Term<S>{t.lattice.over(r), std::move(t.members)});
    res.maps = std::move(p.maps);
    res.minimal_cover_ok = p.minimal_cover_ok;
    if (certify_it) certify(res);
    return res;
}

template <class S> void Resolver<S>::certify(Resolution<S>& res) const
{
    const RingPtr<S>& r = root();
    FieldScope<S> scope(r->field());
    std::vector<Lattice<S>> objs{res.target};
    for (const auto& t : res.terms) objs.push_back(t.lattice);
    std::string why;
    res.exact = complex_is_exact(objs, res.maps, true, &why);
    if (!res.exact) res.notes.push_back("not exact: " + why);

    res.decomposition_ok = true;
    for (const auto& t : res.terms) {
        std::vector<Lattice<S>> parts;
        for (int m : t.members) parts.push_back(family_.as_lattices[static_cast<std::size_t>(m)]);
        if (!(direct_sum(parts, r) == t.lattice)) res.decomposition_ok = false;
    }
    if (!res.decomposition_ok) throw EngineError(ErrorCode::FailedDecomposition, "a term is not the sum of its members");

    res.hom_exact.clear();
    for (const auto& x : family_.as_lattices) res.hom_exact.push_back(verify_hom_exactness(res, x));

    // members reachable from End(m) of the root, plus the root itself
    std::set<int> allowed{family_.member_of_node.front()};
    std::vector<int> stack = tree_.nodes.front().children;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        allowed.insert(family_.member_of_node[static_cast<std::size_t>(v)]);
        for (int c : tree_.nodes[static_cast<std::size_t>(v)].children) stack.push_back(c);
    }
    for (const auto& t : res.terms)
        for (int m : t.members)
            if (!allowed.count(m)) res.notes.push_back("summand " + family_.labels[static_cast<std::size_t>(m)] + " lies outside the family of End(m)");
}

template <class S>
PresentedResolution<S> resolve_presented_module(const Resolver<S>& resolver, const LatticeMap<S>& f)
{
    const RingPtr<S>& r = resolver.root();
    FieldScope<S> scope(r->field());
    PresentedResolution<S> out;
    out.presentation = LatticeMap<S>{f.source.over(r), f.target.over(r), f.matrix};
    if (!is_valid(out.presentation)) throw EngineError(ErrorCode::AmbientMismatch, "presentation does not map M_1 into M_0");
    out.kernel = kernel(out.presentation);

    const Lattice<S> m = representation_module(resolver.family());
    const HomLattice<S> h0 = hom_lattice(m, out.presentation.target);
    const HomLattice<S> h1 = hom_lattice(m, out.presentation.source);
    const PolyMatrix<S> pf = postcompose(h1, h0, f.matrix);
    {
        std::vector<PolyVector<S>> imgs;
        for (const auto& g : module_generators(h1.lattice)) imgs.push_back(pf.apply(g));
        out.zero_module = spans(h0.lattice, imgs);
    }

    std::vector<Lattice<S>> objs{h0.lattice, h1.lattice};
    std::vector<PolyMatrix<S>> maps{pf};
    if (out.kernel.lattice.is_zero()) {
        out.length = out.zero_module ? 0 : 1;
    } else {
        out.syzygy = resolver.keyred_resolve(out.kernel.lattice.over(r));
        out.length = out.syzygy.length() + 2;
        HomLattice<S> prev = h1;
        for (std::size_t j = 0; j < out.syzygy.terms.size(); ++j) {
            HomLattice<S> h = hom_lattice(m, out.syzygy.terms[j].lattice);
            const PolyMatrix<S> d = j == 0 ? out.kernel.inclusion * out.syzygy.maps[0] : out.syzygy.maps[j];
            maps.push_back(postcompose(h, prev, d));
            objs.push_back(h.lattice);
            prev = std::move(h);
        }
    }
    out.hom_exact = complex_is_exact(objs, maps, false);
    return out;
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template bool complex_is_exact<S>(const std::vector<Lattice<S>>&, const std::vector<PolyMatrix<S>>&, bool,     \
                                      std::string*);                                                               \
    template PolyMatrix<S> postcompose<S>(const HomLattice<S>&, const HomLattice<S>&, const PolyMatrix<S>&);       \
    template bool verify_hom_exactness<S>(const Resolution<S>&, const Lattice<S>&);                                \
    template struct Resolution<S>;                                                                                 \
    template class Resolver<S>;                                                                                    \
    template PresentedResolution<S> resolve_presented_module<S>(const Resolver<S>&, const LatticeMap<S>&);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
