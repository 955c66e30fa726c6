#include "endochain/endo.hpp"

#include <algorithm>

namespace endochain {

namespace {

template <class S> std::vector<PolyMatrix<S>> as_matrices(const HomLattice<S>& h, const std::vector<PolyVector<S>>& vs)
{
    std::vector<PolyMatrix<S>> out;
    for (const auto& v : vs) out.push_back(h.to_matrix(v));
    return out;
}

template <class S> std::vector<int> tail_of(const Lattice<S>& l, int extra)
{
    std::vector<int> t;
    for (int s = 0; s < l.slots(); ++s) t.push_back(l.hi(s) + extra * l.ring()->staircase(l.branch(s)));
    return t;
}

/* The inverse of a square matrix over the field, via rref of [B | I]. */
template <class S> Mat<S> inverse(const Mat<S>& b)
{
    const Eigen::Index d = b.rows();
    Mat<S> aug(d, 2 * d);
    aug.leftCols(d) = b;
    aug.rightCols(d) = Mat<S>::Identity(d, d);
    Echelon<S> e = rref(aug);
    if (e.rank() != d || (d > 0 && e.pivots.back() >= d)) throw EngineError(ErrorCode::Internal, "singular residue basis");
    return e.rows.rightCols(d);
}

/* rad End(X) from the image test: a basis element of End/mEnd is either a
 * non-unit or differs from a scalar by one. The scalar is the constant term
 * on the first slot, which is exact for rank-one summands. */
template <class S> Lattice<S> radical_by_image(const HomLattice<S>& h, const Lattice<S>& x)
{
    const Lattice<S>& lam = h.lattice;
    const Lattice<S> mlam = max_ideal_times(lam);
    QuotientSpace<S> q(lam, mlam);
    const auto cands = lam.r_generators();
    std::vector<PolyVector<S>> rad = mlam.window_vectors();
    for (int i : q.choose_basis(cands)) {
        PolyMatrix<S> f = h.to_matrix(cands[static_cast<std::size_t>(i)]);
        if (!is_unit(f, x)) {
            rad.push_back(h.from_matrix(f));
            continue;
        }
        bool found = false;
        for (int p = 0; p < x.slots() && !found; ++p) {
            const S lambda = f(p, p).coeff(0);
            if (Field<S>::is_zero(lambda)) continue;
            PolyMatrix<S> g = f;
            for (int s = 0; s < x.slots(); ++s) g(s, s) -= LaurentPoly<S>(lambda);
            if (!is_unit(g, x)) {
                rad.push_back(h.from_matrix(g));
                found = true;
            }
        }
        if (!found) throw EngineError(ErrorCode::NotIndecomposable, "unit with no scalar residue in End(X)");
    }
    return span(lam.ring(), lam.ambient(), rad, tail_of(mlam, 0));
}

/* rad End(X) as the preimage of the kernel of the trace form on End/mEnd. */
template <class S> Lattice<S> radical_by_trace(const HomLattice<S>& h)
{
    const Lattice<S>& lam = h.lattice;
    const Lattice<S> mlam = max_ideal_times(lam);
    QuotientSpace<S> q(lam, mlam);
    const int d = q.dimension();
    const std::uint32_t p = lam.ring()->field().characteristic();
    if (p != 0 && static_cast<int>(p) <= d)
        throw EngineError(ErrorCode::CharacteristicTooSmall, "trace form needs p > dim End/mEnd",
                          "p " + std::to_string(p) + ", dim " + std::to_string(d));
    const auto cands = lam.r_generators();
    std::vector<PolyMatrix<S>> b;
    Mat<S> res(d, d);
    for (int i : q.choose_basis(cands)) {
        res.row(static_cast<Eigen::Index>(b.size())) = q.residue(cands[static_cast<std::size_t>(i)]);
        b.push_back(h.to_matrix(cands[static_cast<std::size_t>(i)]));
    }
    const Mat<S> binv = inverse(res);
    auto coords = [&](const PolyMatrix<S>& m) -> RowVec<S> { return sparse_product<S>(Mat<S>(q.residue(h.from_matrix(m))), binv).row(0); };
    Mat<S> t = Mat<S>::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) {
            const PolyMatrix<S> ab = b[static_cast<std::size_t>(a)] * b[static_cast<std::size_t>(c)];
            S tr(0);
            for (int k = 0; k < d; ++k) tr += coords(ab * b[static_cast<std::size_t>(k)])(k);
            t(a, c) = tr;
        }
    const Mat<S> ker = nullspace<S>(t);
    std::vector<PolyVector<S>> rad = mlam.window_vectors();
    for (Eigen::Index col = 0; col < ker.cols(); ++col) {
        PolyMatrix<S> f(h.rows, h.cols);
        for (int a = 0; a < d; ++a)
            if (!Field<S>::is_zero(ker(a, col)))
                for (int r = 0; r < h.rows; ++r)
                    for (int s = 0; s < h.cols; ++s)
                        f(r, s) += b[static_cast<std::size_t>(a)](r, s) * LaurentPoly<S>(ker(a, col));
        rad.push_back(h.from_matrix(f));
    }
    return span(lam.ring(), lam.ambient(), rad, tail_of(mlam, 0));
}

template <class S> struct Approximation {
    std::vector<int> summands;
    Lattice<S> source;
    PolyMatrix<S> map;
};

/* Minimal cover of the Gamma-module sum_j a[j] (a[j] inside Hom(X_j, T)) by
 * projectives, written as a map from a sum of summands to T. */
template <class S>
Approximation<S> approximate(const LatticeAlgebra<S>& g, const Lattice<S>& t, const std::vector<HomLattice<S>>& a)
{
    Approximation<S> out;
    const int k = g.size();
    std::vector<std::vector<PolyMatrix<S>>> agens(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) agens[static_cast<std::size_t>(j)] = as_matrices(a[static_cast<std::size_t>(j)], module_generators(a[static_cast<std::size_t>(j)].lattice));
    std::vector<PolyMatrix<S>> cols;
    for (int j = 0; j < k; ++j) {
        const HomLattice<S>& aj = a[static_cast<std::size_t>(j)];
        if (aj.lattice.is_zero()) continue;
        std::vector<PolyVector<S>> sub;
        for (int l = 0; l < k; ++l)
            for (const auto& alpha : agens[static_cast<std::size_t>(l)])
                for (const auto& r : g.radical_generators(j, l)) sub.push_back(aj.from_matrix(alpha * r));
        Lattice<S> rad = span(aj.lattice.ring(), aj.lattice.ambient(), sub, tail_of(aj.lattice, 1));
        QuotientSpace<S> q(aj.lattice, rad);
        const auto cands = by_valuation(aj.lattice.r_generators(), aj.lattice.ambient());
        for (int i : q.choose_basis(cands)) {
            out.summands.push_back(j);
            cols.push_back(aj.to_matrix(cands[static_cast<std::size_t>(i)]));
        }
    }
    std::vector<Lattice<S>> parts;
    for (int j : out.summands) parts.push_back(g.summands[static_cast<std::size_t>(j)]);
    out.source = direct_sum(parts, g.base);
    out.map = PolyMatrix<S>(t.slots(), 0);
    for (const auto& c : cols) out.map = PolyMatrix<S>::hconcat(out.map, c);
    return out;
}

template <class S> std::vector<HomLattice<S>> full_homs(const LatticeAlgebra<S>& g, const Lattice<S>& t)
{
    std::vector<HomLattice<S>> a;
    for (const auto& x : g.summands) a.push_back(hom_lattice(x, t));
    return a;
}

} // namespace

template <class S> std::vector<PolyMatrix<S>> LatticeAlgebra<S>::radical_generators(int j, int k) const
{
    if (j == k) return rad_gens[static_cast<std::size_t>(j)];
    return gens[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
}

template <class S> bool is_unit(const PolyMatrix<S>& f, const Lattice<S>& x)
{
    try {
        return image(LatticeMap<S>{x, x, f}) == x;
    } catch (const EngineError& e) {
        if (e.code() == ErrorCode::NotFullRank) return false;
        throw;
    }
}

template <class S> bool isomorphic(const Lattice<S>& x, const Lattice<S>& y)
{
    FieldScope<S> scope(x.ring()->field());
    if (x.ambient().ranks() != y.ambient().ranks()) return false;
    if (x == y) return true;
    const HomLattice<S> xy = hom_lattice(x, y), yx = hom_lattice(y, x);
    const auto fs = as_matrices(xy, module_generators(xy.lattice));
    const auto gs = as_matrices(yx, module_generators(yx.lattice));
    for (const auto& f : fs)
        for (const auto& g : gs)
            if (is_unit(g * f, x)) return true;
    return false;
}

template <class S>
LatticeAlgebra<S> build_endo_algebra(const RingPtr<S>& base, const std::vector<Lattice<S>>& summands,
                                     const std::vector<std::string>& labels, const EndoOptions& opts)
{
    FieldScope<S> scope(base->field());
    if (!base->is_local()) throw EngineError(ErrorCode::NotLocal, "Gamma needs a local base ring");
    LatticeAlgebra<S> g;
    g.base = base;
    for (const auto& x : summands) g.summands.push_back(x.over(base));
    g.labels = labels;
    for (std::size_t i = g.labels.size(); i < summands.size(); ++i) g.labels.push_back("X" + std::to_string(i + 1));
    const int k = g.size();
    const auto uk = static_cast<std::size_t>(k);

    g.hom.assign(uk, {});
    g.gens.assign(uk, {});
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) {
            g.hom[static_cast<std::size_t>(j)].push_back(hom_lattice(g.summands[static_cast<std::size_t>(j)], g.summands[static_cast<std::size_t>(l)]));
            const auto& h = g.hom[static_cast<std::size_t>(j)].back();
            g.gens[static_cast<std::size_t>(j)].push_back(as_matrices(h, module_generators(h.lattice)));
        }

    for (int i = 0; i < k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const HomLattice<S>& h = g.hom[ui][ui];
        g.rad_end.push_back(radical_by_image(h, g.summands[ui]));
        if (opts.trace_form) {
            g.rad_end_trace.push_back(radical_by_trace(h));
            if (!(g.rad_end_trace.back() == g.rad_end.back())) g.radical_methods_agree = false;
        }
        if (QuotientSpace<S>(h.lattice, g.rad_end.back()).dimension() != 1)
            throw EngineError(ErrorCode::NotIndecomposable, "End(X)/rad is not the residue field", g.labels[ui]);
        g.rad_gens.push_back(as_matrices(h, module_generators(g.rad_end.back())));
    }
    if (!g.radical_methods_agree)
        throw EngineError(ErrorCode::ClaimViolation, "trace-form and image-test radicals differ");

    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (isomorphic(g.summands[static_cast<std::size_t>(i)], g.summands[static_cast<std::size_t>(j)]))
                throw EngineError(ErrorCode::DuplicateSummand, "isomorphic summands",
                                  g.labels[static_cast<std::size_t>(i)] + " and " + g.labels[static_cast<std::size_t>(j)]);

    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            for (int m = 0; m < k; ++m) {
                auto& entry = g.table[{j, l, m}];
                const auto& inner = g.gens[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
                const auto& outer = g.gens[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)];
                for (const auto& a : outer)
                    for (const auto& b : inner) entry.push_back(g.hom[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)].from_matrix(a * b));
            }
    return g;
}

template <class S> GammaModule<S> projective(const LatticeAlgebra<S>& g, int i)
{
    return GammaModule<S>{GammaModule<S>::Kind::Projective, i, g.summands[static_cast<std::size_t>(i)]};
}

template <class S> GammaModule<S> simple(const LatticeAlgebra<S>& g, int i)
{
    return GammaModule<S>{GammaModule<S>::Kind::Simple, i, g.summands[static_cast<std::size_t>(i)]};
}

template <class S> GammaModule<S> hom_module(const Lattice<S>& l) { return GammaModule<S>{GammaModule<S>::Kind::Hom, -1, l}; }

template <class S> int top_dimension(const LatticeAlgebra<S>& g, const Lattice<S>& l)
{
    FieldScope<S> scope(g.base->field());
    if (l.is_zero()) return 0;
    return static_cast<int>(approximate(g, l.over(g.base), full_homs(g, l.over(g.base))).summands.size());
}

template <class S> PdResult minimal_projective_resolution(const LatticeAlgebra<S>& g, const GammaModule<S>& q, int cap)
{
    FieldScope<S> scope(g.base->field());
    if (cap < 1) throw EngineError(ErrorCode::SchemaError, "pd cap must be at least 1");
    PdResult out;
    Lattice<S> l;
    Approximation<S> ap;
    switch (q.kind) {
    case GammaModule<S>::Kind::Projective:
        out.covers.push_back({q.index});
        return out;
    case GammaModule<S>::Kind::Simple: {
        // 0 -> rad P_i -> P_i -> S_i -> 0
        const auto ui = static_cast<std::size_t>(q.index);
        std::vector<HomLattice<S>> a;
        for (int j = 0; j < g.size(); ++j) a.push_back(g.hom[static_cast<std::size_t>(j)][ui]);
        a[ui].lattice = g.rad_end[ui];
        out.covers.push_back({q.index});
        ap = approximate(g, g.summands[ui], a);
        l = g.summands[ui];
        out.pd = 1;
        break;
    }
    case GammaModule<S>::Kind::Hom:
        l = q.lattice.over(g.base);
        if (l.is_zero()) return out;
        ap = approximate(g, l, full_homs(g, l));
        break;
    }
    for (;;) {
        out.covers.push_back(ap.summands);
        Lattice<S> k = kernel(LatticeMap<S>{ap.source, l, ap.map}).lattice;
        if (k.is_zero()) return out;
        if (out.pd >= cap) {
            out.capped = true;
            return out;
        }
        ++out.pd;
        l = k.over(g.base);
        ap = approximate(g, l, full_homs(g, l));
    }
}

template <class S> GldimReport global_dimension(const LatticeAlgebra<S>& g, int cap)
{
    FieldScope<S> scope(g.base->field());
    GldimReport rep;
    rep.labels = g.labels;
    for (int i = 0; i < g.size(); ++i) {
        PdResult r = minimal_projective_resolution(g, simple(g, i), cap);
        rep.pd_per_simple.push_back(r.pd);
        rep.capped.push_back(r.capped);
        rep.gldim = std::max(rep.gldim, r.pd);
        rep.any_capped = rep.any_capped || r.capped;
    }
    const RingReport rr = ring_report(*g.base);
    rep.multiplicity = rr.multiplicity;
    rep.delta = rr.delta;
    rep.radical_methods_agree = g.radical_methods_agree;
    return rep;
}

template <class S> GldimReport family_gldim(const ChainTree<S>& tree, const EFamily<S>& fam, int cap)
{
    LatticeAlgebra<S> g = build_endo_algebra(fam.members.front(), fam.as_lattices, fam.labels);
    GldimReport rep = global_dimension(g, cap);
    rep.chain_length = tree.depth;
    rep.chain_bound = tree.depth + 1;
    return rep;
}

template <class S> bool projectivization_check(const LatticeAlgebra<S>& g, std::string* diagnostic)
{
    FieldScope<S> scope(g.base->field());
    auto fail = [&](const std::string& why) {
        if (diagnostic) *diagnostic = why;
        return false;
    };
    const int k = g.size();
    auto hom = [&](int j, int l) -> const HomLattice<S>& { return g.hom[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]; };
    auto gen = [&](int j, int l) -> const std::vector<PolyMatrix<S>>& { return g.gens[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]; };

    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            for (int m = 0; m < k; ++m) {
                const auto it = g.table.find({j, l, m});
                const std::size_t nb = gen(j, l).size();
                if (it == g.table.end() || it->second.size() != gen(l, m).size() * nb) return fail("composition table is incomplete");
                for (std::size_t a = 0; a < gen(l, m).size(); ++a)
                    for (std::size_t b = 0; b < nb; ++b) {
                        const PolyVector<S>& v = it->second[a * nb + b];
                        if (!(hom(j, m).to_matrix(v) == gen(l, m)[a] * gen(j, l)[b]))
                            return fail("composition table disagrees with composition");
                        if (!hom(j, m).lattice.contains(v)) return fail("composite leaves its Hom block");
                    }
            }
    // associativity on generator triples, read through the table
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            for (int m = 0; m < k; ++m)
                for (int n = 0; n < k; ++n) {
                    const auto& inner = g.table.at({j, l, m});
                    const auto& outer = g.table.at({l, m, n});
                    const std::size_t nb = gen(j, l).size(), nc = gen(l, m).size();
                    for (std::size_t a = 0; a < gen(m, n).size(); ++a)
                        for (std::size_t b = 0; b < nc; ++b)
                            for (std::size_t c = 0; c < nb; ++c) {
                                const PolyMatrix<S> left = hom(l, n).to_matrix(outer[a * nc + b]) * gen(j, l)[c];
                                const PolyMatrix<S> right = gen(m, n)[a] * hom(j, m).to_matrix(inner[b * nb + c]);
                                if (!(left == right)) return fail("composition is not associative");
                            }
                }

    const Lattice<S> m = direct_sum(g.summands, g.base);
    std::vector<Lattice<S>> ps;
    for (const auto& x : g.summands) ps.push_back(hom_lattice(m, x).lattice);
    // one pair per summand; the full sum below covers the rest
    for (int i = 0; i < k; ++i) {
        const int j = (i + 1) % k;
        const Lattice<S> both = direct_sum(g.summands[static_cast<std::size_t>(i)], g.summands[static_cast<std::size_t>(j)]);
        if (!(hom_lattice(m, both).lattice == direct_sum(ps[static_cast<std::size_t>(i)], ps[static_cast<std::size_t>(j)])))
            return fail("Hom(M, X_i + X_j) is not P_i + P_j");
    }
    if (!(hom_lattice(m, m).lattice == direct_sum(ps, g.base))) return fail("Hom(M, M) is not the sum of the P_i");

    const Lattice<S> r = ring_lattice(g.base, g.base);
    int free = -1;
    for (int i = 0; i < k && free < 0; ++i)
        if (g.summands[static_cast<std::size_t>(i)] == r) free = i;
    if (free < 0) return fail("M has no free summand");
    for (int i = 0; i < k; ++i) {
        if (!(hom(free, i).lattice == g.summands[static_cast<std::size_t>(i)])) return fail("Hom(R, X_i) does not recover X_i");
        if (top_dimension(g, g.summands[static_cast<std::size_t>(i)]) != 1) return fail("top of P_i is not one-dimensional");
    }
    return true;
}

template <class S>
GldimReport fcmt_check(const RingPtr<S>& r, const std::vector<Lattice<S>>& mcm, const std::vector<std::string>& labels, int cap)
{
    FieldScope<S> scope(r->field());
    const Lattice<S> rl = ring_lattice(r, r);
    bool has_free = false;
    for (const auto& x : mcm) has_free = has_free || isomorphic(x.over(r), rl);
    if (!has_free) throw EngineError(ErrorCode::MissingFreeSummand, "module list has no free summand");
    LatticeAlgebra<S> g = build_endo_algebra(r, mcm, labels);
    GldimReport rep = global_dimension(g, cap);
    rep.assumptions.push_back("the list is a complete set of indecomposable MCM modules");
    return rep;
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template struct LatticeAlgebra<S>;                                                                             \
    template bool is_unit<S>(const PolyMatrix<S>&, const Lattice<S>&);                                             \
    template bool isomorphic<S>(const Lattice<S>&, const Lattice<S>&);                                             \
    template LatticeAlgebra<S> build_endo_algebra<S>(const RingPtr<S>&, const std::vector<Lattice<S>>&,            \
                                                     const std::vector<std::string>&, const EndoOptions&);         \
    template GammaModule<S> projective<S>(const LatticeAlgebra<S>&, int);                                          \
    template GammaModule<S> simple<S>(const LatticeAlgebra<S>&, int);                                              \
    template GammaModule<S> hom_module<S>(const Lattice<S>&);                                                      \
    template int top_dimension<S>(const LatticeAlgebra<S>&, const Lattice<S>&);                                    \
    template PdResult minimal_projective_resolution<S>(const LatticeAlgebra<S>&, const GammaModule<S>&, int);      \
    template GldimReport global_dimension<S>(const LatticeAlgebra<S>&, int);                                       \
    template GldimReport family_gldim<S>(const ChainTree<S>&, const EFamily<S>&, int);                             \
    template bool projectivization_check<S>(const LatticeAlgebra<S>&, std::string*);                               \
    template GldimReport fcmt_check<S>(const RingPtr<S>&, const std::vector<Lattice<S>>&,                          \
                                       const std::vector<std::string>&, int);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
