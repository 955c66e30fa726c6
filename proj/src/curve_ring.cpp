#include "endochain/curve_ring.hpp"

#include <algorithm>
#include <numeric>

namespace endochain {

namespace {

template <class S> Window<S> frame(const std::vector<int>& support, int branches, std::vector<int> hi)
{
    Window<S> w;
    w.amb = Ambient::rank_one(support, branches);
    w.lo.assign(support.size(), 0);
    w.hi = std::move(hi);
    w.basis.rows = Mat<S>(0, w.dim());
    return w;
}

std::vector<int> iota_vec(int n)
{
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

template <class S> LaurentPoly<S> unit_poly(const FieldSpec& f) { return LaurentPoly<S>(Field<S>::from_int(1, f)); }

/* Multiplicative closure of span{1} in E/t^w E (all branches). */
template <class S>
Window<S> closure(int branches, int w, const std::vector<BranchVector<S>>& gens, const FieldSpec& field)
{
    Window<S> fr = frame<S>(iota_vec(branches), branches, std::vector<int>(static_cast<std::size_t>(branches), w));
    IncrementalBasis<S> basis(fr.dim());
    std::vector<PolyVector<S>> queue;
    auto push = [&](const PolyVector<S>& v) {
        RowVec<S> row = fr.encode(v);
        if (basis.add(row)) queue.push_back(fr.decode(fr.encode(v)));
    };
    push(PolyVector<S>(static_cast<std::size_t>(branches), unit_poly<S>(field)));
    for (std::size_t q = 0; q < queue.size(); ++q)
        for (const auto& g : gens) push(multiply(g, queue[q]));
    fr.basis = basis.echelon();
    return fr;
}

template <class S> std::vector<std::vector<int>> compute_blocks(const CurveRing<S>& r)
{
    const Window<S>& w = r.window();
    const int k = w.slots();
    // constant terms of an F-basis of R
    std::vector<std::vector<S>> consts;
    for (int i = 0; i < w.rank(); ++i) {
        std::vector<S> c(static_cast<std::size_t>(k), S(0));
        for (int s = 0; s < k; ++s)
            if (w.hi[static_cast<std::size_t>(s)] > 0) c[static_cast<std::size_t>(s)] = w.basis.rows(i, w.offset(s));
        consts.push_back(std::move(c));
    }
    for (int s = 0; s < k; ++s)
        if (w.hi[static_cast<std::size_t>(s)] == 0) {
            std::vector<S> c(static_cast<std::size_t>(k), S(0));
            c[static_cast<std::size_t>(s)] = S(1);
            consts.push_back(std::move(c));
        }
    std::vector<int> block_of(static_cast<std::size_t>(k), -1);
    std::vector<std::vector<int>> blocks;
    for (int s = 0; s < k; ++s) {
        if (block_of[static_cast<std::size_t>(s)] >= 0) continue;
        block_of[static_cast<std::size_t>(s)] = static_cast<int>(blocks.size());
        std::vector<int> blk{w.amb.branch(s)};
        for (int u = s + 1; u < k; ++u) {
            if (block_of[static_cast<std::size_t>(u)] >= 0) continue;
            bool same = std::all_of(consts.begin(), consts.end(), [&](const std::vector<S>& c) {
                return c[static_cast<std::size_t>(s)] == c[static_cast<std::size_t>(u)];
            });
            if (same) {
                block_of[static_cast<std::size_t>(u)] = block_of[static_cast<std::size_t>(s)];
                blk.push_back(w.amb.branch(u));
            }
        }
        blocks.push_back(std::move(blk));
    }
    for (const auto& b : blocks)
        if (!r.contains(r.idempotent(b)))
            throw EngineError(ErrorCode::Internal, "constant-term idempotent does not lift to the ring");
    return blocks;
}

/* F-basis of m modulo t^{2c'}: window elements of m plus tail monomials. */
template <class S> std::vector<PolyVector<S>> max_ideal_fbasis(const Window<S>& mw)
{
    std::vector<PolyVector<S>> out = mw.vectors();
    for (int s = 0; s < mw.slots(); ++s) {
        const int h = mw.hi[static_cast<std::size_t>(s)];
        for (int k = 0; k < h; ++k) {
            PolyVector<S> v(static_cast<std::size_t>(mw.slots()));
            v[static_cast<std::size_t>(s)] = LaurentPoly<S>::t_power(h + k);
            out.push_back(std::move(v));
        }
    }
    return out;
}

template <class S> std::vector<BranchVector<S>> compute_max_gens(const CurveRing<S>& r)
{
    // m^2 contains t^{2c'}E, so m/m^2 is visible below 2c'
    Window<S> mw = maximal_ideal_window(r);
    std::vector<int> hi2 = mw.hi;
    for (auto& h : hi2) h *= 2;
    Window<S> fr = frame<S>(r.support(), r.branches(), hi2);
    std::vector<PolyVector<S>> fb = max_ideal_fbasis(mw);
    IncrementalBasis<S> sq(fr.dim());
    for (std::size_t i = 0; i < fb.size(); ++i)
        for (std::size_t j = i; j < fb.size(); ++j) sq.add(fr.encode(multiply(fb[i], fb[j])));
    std::vector<BranchVector<S>> gens;
    for (const auto& v : fb)
        if (sq.add(fr.encode(v))) gens.push_back(r.from_slots(v));
    return gens;
}

template <class S> void finish(CurveRing<S>& r)
{
    r.blocks_ = compute_blocks(r);
    if (r.is_local()) r.max_gens_ = compute_max_gens(r);
}

template <class S> int max_entry_valuation(const std::vector<BranchVector<S>>& gens)
{
    int m = 0;
    for (const auto& g : gens)
        for (const auto& x : g)
            if (!x.is_zero()) m = std::max(m, x.valuation());
    return m;
}

} // namespace

template <class S> int CurveRing<S>::slot_of(int branch) const
{
    const auto& sup = support();
    auto it = std::find(sup.begin(), sup.end(), branch);
    return it == sup.end() ? -1 : static_cast<int>(it - sup.begin());
}

template <class S> int CurveRing<S>::delta() const
{
    return std::accumulate(window_.hi.begin(), window_.hi.end(), 0) - window_.rank();
}

template <class S> const std::vector<BranchVector<S>>& CurveRing<S>::max_ideal_generators() const
{
    if (!is_local()) throw EngineError(ErrorCode::NotLocal, "ring has nontrivial idempotents");
    return max_gens_;
}

template <class S> BranchVector<S> CurveRing<S>::one() const { return idempotent(support()); }

template <class S> BranchVector<S> CurveRing<S>::idempotent(const std::vector<int>& branches) const
{
    BranchVector<S> e(static_cast<std::size_t>(branches_));
    for (int b : branches) e[static_cast<std::size_t>(b)] = unit_poly<S>(field_);
    return e;
}

template <class S> std::vector<BranchVector<S>> CurveRing<S>::window_elements() const
{
    std::vector<BranchVector<S>> out;
    for (const auto& v : window_.vectors()) out.push_back(from_slots(v));
    return out;
}

template <class S> std::vector<BranchVector<S>> CurveRing<S>::canonical_generators() const
{
    std::vector<BranchVector<S>> out = window_elements();
    for (int b : support())
        for (int k = 0; k < staircase(b); ++k) {
            BranchVector<S> x(static_cast<std::size_t>(branches_));
            x[static_cast<std::size_t>(b)] = LaurentPoly<S>::t_power(conductor_on(b) + k);
            out.push_back(std::move(x));
        }
    return out;
}

template <class S> bool CurveRing<S>::contains(const BranchVector<S>& x) const
{
    for (int b = 0; b < branches_; ++b)
        if (slot_of(b) < 0 && !x[static_cast<std::size_t>(b)].is_zero()) return false;
    return window_.contains(to_slots(x));
}

template <class S> PolyVector<S> CurveRing<S>::to_slots(const BranchVector<S>& x) const
{
    PolyVector<S> v;
    for (int b : support()) v.push_back(x[static_cast<std::size_t>(b)]);
    return v;
}

template <class S> BranchVector<S> CurveRing<S>::from_slots(const PolyVector<S>& v) const
{
    BranchVector<S> x(static_cast<std::size_t>(branches_));
    for (std::size_t s = 0; s < v.size(); ++s) x[static_cast<std::size_t>(support()[s])] = v[s];
    return x;
}

template <class S> std::vector<int> CurveRing<S>::value_set() const
{
    std::vector<int> vals;
    for (int p : window_.basis.pivots) {
        // pivot column -> exponent on its slot
        int s = 0;
        while (p >= window_.offset(s + 1)) ++s;
        vals.push_back(window_.lo[static_cast<std::size_t>(s)] + p - window_.offset(s));
    }
    return vals;
}

template <class S> BranchVector<S> multiply(const BranchVector<S>& a, const BranchVector<S>& b)
{
    BranchVector<S> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    return c;
}

template <class S>
RingPtr<S> build_ring(const FieldSpec& field, int branches, const std::vector<BranchVector<S>>& generators,
                      const BuildOptions& opts)
{
    FieldScope<S> scope(field);
    if (branches < 1) throw EngineError(ErrorCode::SchemaError, "a ring needs at least one branch");
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != branches)
            throw EngineError(ErrorCode::SchemaError, "generator length differs from branch count");
        for (const auto& x : g)
            if (x.valuation() < 0)
                throw EngineError(ErrorCode::SchemaError, "generator entries must have nonnegative valuation",
                                  x.to_string());
    }
    const int gval = max_entry_valuation(generators);
    int w = std::max(8, 2 * gval + 4);
    Window<S> can;
    for (;;) {
        can = canonicalize(closure(branches, w, generators, field));
        const int cmax = *std::max_element(can.hi.begin(), can.hi.end());
        if (cmax < w && w >= 2 * cmax + 2) break;
        w *= 2;
        if (w > opts.max_window)
            throw EngineError(ErrorCode::NoFiniteConductor, "closure did not reach full rank below the window cap",
                              "window cap " + std::to_string(opts.max_window));
    }
    const int cmax = *std::max_element(can.hi.begin(), can.hi.end());
    int bound = 2 * cmax + gval + 2;
    if (opts.double_check) {
        bound *= 2;
        Window<S> again = canonicalize(closure(branches, std::max(bound, w), generators, field));
        if (!(again == can))
            throw EngineError(ErrorCode::Internal, "ring window differs at doubled window bound");
    }
    auto r = std::make_shared<CurveRing<S>>();
    r->field_ = field;
    r->branches_ = branches;
    r->window_ = std::move(can);
    r->window_bound_ = bound;
    r->slack_ = opts.double_check ? bound / 2 : 0;
    r->generators_ = generators;
    finish(*r);
    return r;
}

template <class S>
RingPtr<S> semigroup_ring(const FieldSpec& field, const std::vector<int>& semigroup, const BuildOptions& opts)
{
    FieldScope<S> scope(field);
    int g = 0;
    for (int a : semigroup) {
        if (a <= 0) throw EngineError(ErrorCode::SchemaError, "semigroup generators must be positive");
        g = std::gcd(g, a);
    }
    if (g != 1) throw EngineError(ErrorCode::NotCoprime, "semigroup generators are not coprime", std::to_string(g));
    std::vector<BranchVector<S>> gens;
    for (int a : semigroup) gens.push_back({LaurentPoly<S>::monomial(Field<S>::from_int(1, field), a)});
    return build_ring<S>(field, 1, gens, opts);
}

template <class S> RingPtr<S> ring_from_window(const FieldSpec& field, int branches, Window<S> w, int slack)
{
    FieldScope<S> scope(field);
    w = canonicalize(w);
    for (int lo : w.lo)
        if (lo != 0) throw EngineError(ErrorCode::NotUnital, "ring window must start at exponent 0");
    auto r = std::make_shared<CurveRing<S>>();
    r->field_ = field;
    r->branches_ = branches;
    r->window_ = std::move(w);
    r->slack_ = slack;
    if (!r->contains(r->one())) throw EngineError(ErrorCode::NotUnital, "1 is not in the ring");
    const auto elems = r->window_elements();
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i; j < elems.size(); ++j)
            if (!r->contains(multiply(elems[i], elems[j])))
                throw EngineError(ErrorCode::Internal, "window is not closed under multiplication");
    const int cmax = r->window_.hi.empty() ? 0 : *std::max_element(r->window_.hi.begin(), r->window_.hi.end());
    r->window_bound_ = 2 * cmax + 2 + slack;
    r->generators_ = r->canonical_generators();
    finish(*r);
    return r;
}

template <class S> std::vector<std::vector<int>> branch_idempotents(const CurveRing<S>& r)
{
    return r.idempotent_blocks();
}

template <class S> RingPtr<S> factor(const RingPtr<S>& r, const std::vector<int>& branches)
{
    FieldScope<S> scope(r->field());
    std::vector<int> t = branches;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (int b : t)
        if (r->slot_of(b) < 0) throw EngineError(ErrorCode::NotIdempotentFactor, "branch outside the ring support");
    if (t.empty() || !r->contains(r->idempotent(t)))
        throw EngineError(ErrorCode::NotIdempotentFactor, "e_T is not in the ring");
    const Window<S>& w = r->window();
    Window<S> out;
    out.amb = Ambient::rank_one(t, r->branches());
    std::vector<int> keep;
    for (int b : t) {
        const int s = r->slot_of(b);
        out.lo.push_back(w.lo[static_cast<std::size_t>(s)]);
        out.hi.push_back(w.hi[static_cast<std::size_t>(s)]);
        for (int k = 0; k < w.width(s); ++k) keep.push_back(w.offset(s) + k);
    }
    Mat<S> rows(w.rank(), static_cast<Eigen::Index>(keep.size()));
    for (int i = 0; i < w.rank(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) rows(i, static_cast<Eigen::Index>(j)) = w.basis.rows(i, keep[j]);
    out.basis = rref(std::move(rows));
    return ring_from_window(r->field(), r->branches(), std::move(out), r->slack());
}

template <class S> Window<S> maximal_ideal_window(const CurveRing<S>& r)
{
    if (!r.is_local()) throw EngineError(ErrorCode::NotLocal, "ring has nontrivial idempotents");
    const Window<S>& w = r.window();
    std::vector<int> hi = w.hi;
    for (auto& h : hi) h = std::max(h, 1);
    Window<S> fr = frame<S>(r.support(), r.branches(), hi);
    std::vector<RowVec<S>> rows;
    for (const auto& v : w.vectors()) rows.push_back(fr.encode(v));
    for (int s = 0; s < w.slots(); ++s)
        if (w.hi[static_cast<std::size_t>(s)] == 0) {
            RowVec<S> u = RowVec<S>::Zero(fr.dim());
            u(fr.offset(s)) = S(1);
            rows.push_back(u);
        }
    Mat<S> b(static_cast<Eigen::Index>(rows.size()), fr.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) b.row(static_cast<Eigen::Index>(i)) = rows[i];
    // combinations whose constant terms all vanish
    Mat<S> c(b.rows(), fr.slots());
    for (int s = 0; s < fr.slots(); ++s) c.col(s) = b.col(fr.offset(s));
    Mat<S> x = nullspace<S>(c.transpose());
    fr.basis = rref(sparse_product<S>(x.transpose(), b));
    return canonicalize(fr);
}

template <class S> RingReport ring_report(const CurveRing<S>& r)
{
    Window<S> mw = maximal_ideal_window(r);
    RingReport rep;
    rep.multiplicity = std::accumulate(mw.lo.begin(), mw.lo.end(), 0);
    rep.embedding_dim = static_cast<int>(r.max_ideal_generators().size());
    rep.conductor = r.conductor();
    rep.is_dvr_product = r.is_dvr_product();
    rep.delta = r.delta();
    return rep;
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template class CurveRing<S>;                                                                                   \
    template RingPtr<S> build_ring<S>(const FieldSpec&, int, const std::vector<BranchVector<S>>&,                   \
                                      const BuildOptions&);                                                        \
    template RingPtr<S> semigroup_ring<S>(const FieldSpec&, const std::vector<int>&, const BuildOptions&);         \
    template RingPtr<S> ring_from_window<S>(const FieldSpec&, int, Window<S>, int);                               \
    template std::vector<std::vector<int>> branch_idempotents<S>(const CurveRing<S>&);                             \
    template RingPtr<S> factor<S>(const RingPtr<S>&, const std::vector<int>&);                                     \
    template Window<S> maximal_ideal_window<S>(const CurveRing<S>&);                                               \
    template RingReport ring_report<S>(const CurveRing<S>&);                                                       \
    template BranchVector<S> multiply<S>(const BranchVector<S>&, const BranchVector<S>&);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
