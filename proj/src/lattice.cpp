#include "endochain/lattice.hpp"

#include <algorithm>
#include <numeric>

namespace endochain {

namespace {

template <class S> void check_support(const CurveRing<S>& r, const Ambient& amb)
{
    if (amb.branches != r.branches()) throw EngineError(ErrorCode::AmbientMismatch, "branch counts differ");
    for (int b : amb.slot_branch)
        if (r.slot_of(b) < 0) throw EngineError(ErrorCode::AmbientMismatch, "slot on a branch outside the ring");
}

template <class S> Window<S> empty_frame(const Ambient& amb, std::vector<int> lo, std::vector<int> hi)
{
    Window<S> w;
    w.amb = amb;
    w.lo = std::move(lo);
    w.hi = std::move(hi);
    w.basis.rows = Mat<S>(0, w.dim());
    return w;
}

template <class S> PolyVector<S> unit_vector(int slots, int s, int e)
{
    PolyVector<S> v(static_cast<std::size_t>(slots));
    v[static_cast<std::size_t>(s)] = LaurentPoly<S>::t_power(e);
    return v;
}

template <class S> int min_valuation(const PolyVector<S>& v, int s) { return v[static_cast<std::size_t>(s)].valuation(); }

template <class S> Mat<S> stack(const std::vector<RowVec<S>>& rows, int cols)
{
    Mat<S> m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i];
    return m;
}

} // namespace

template <class S> std::vector<PolyVector<S>> Lattice<S>::r_generators() const
{
    std::vector<PolyVector<S>> out = window_vectors();
    for (int s = 0; s < slots(); ++s)
        for (int k = 0; k < ring_->staircase(branch(s)); ++k) out.push_back(unit_vector<S>(slots(), s, hi(s) + k));
    return out;
}

template <class S> PolyVector<S> act(const BranchVector<S>& x, const Ambient& amb, const PolyVector<S>& v)
{
    PolyVector<S> out(v.size());
    for (int s = 0; s < amb.slots(); ++s) {
        const auto& a = x[static_cast<std::size_t>(amb.branch(s))];
        const auto& b = v[static_cast<std::size_t>(s)];
        if (!a.is_zero() && !b.is_zero()) out[static_cast<std::size_t>(s)] = a * b;
    }
    return out;
}

template <class S> PolyMatrix<S> action_matrix(const Ambient& amb, const BranchVector<S>& x)
{
    PolyMatrix<S> m(amb.slots(), amb.slots());
    for (int s = 0; s < amb.slots(); ++s) m(s, s) = x[static_cast<std::size_t>(amb.branch(s))];
    return m;
}

template <class S> bool is_valid(const LatticeMap<S>& f)
{
    if (f.matrix.rows() != f.target.slots() || f.matrix.cols() != f.source.slots()) return false;
    for (int p = 0; p < f.matrix.rows(); ++p)
        for (int q = 0; q < f.matrix.cols(); ++q)
            if (!f.matrix(p, q).is_zero() && f.target.branch(p) != f.source.branch(q)) return false;
    for (const auto& g : f.source.r_generators())
        if (!f.target.contains(f.matrix.apply(g))) return false;
    return true;
}

template <class S> Lattice<S> zero_lattice(const RingPtr<S>& ring)
{
    Ambient amb;
    amb.branches = ring->branches();
    return Lattice<S>(ring, empty_frame<S>(amb, {}, {}), true);
}

template <class S>
Lattice<S> span(const RingPtr<S>& ring, const Ambient& amb, const std::vector<PolyVector<S>>& gens,
                const std::vector<int>& tail)
{
    FieldScope<S> scope(ring->field());
    check_support(*ring, amb);
    const int n = amb.slots();
    std::vector<int> lo = tail, hi = tail;
    for (int s = 0; s < n; ++s) {
        hi[static_cast<std::size_t>(s)] += ring->slack();
        for (const auto& g : gens) lo[static_cast<std::size_t>(s)] = std::min(lo[static_cast<std::size_t>(s)], min_valuation(g, s));
    }
    Window<S> fr = empty_frame<S>(amb, lo, hi);
    IncrementalBasis<S> basis(fr.dim());
    for (int s = 0; s < n; ++s)
        for (int e = tail[static_cast<std::size_t>(s)]; e < hi[static_cast<std::size_t>(s)]; ++e)
            basis.add_entries({{fr.offset(s) + e - lo[static_cast<std::size_t>(s)], S(1)}});
    const auto elems = ring->window_elements();
    for (const auto& g : gens) {
        for (const auto& x : elems) basis.add_entries(fr.entries(act(x, amb, g)));
        for (int b : ring->support()) {
            const int c = ring->conductor_on(b);
            for (int k = 0;; ++k) {
                bool below = false;
                PolyVector<S> v(static_cast<std::size_t>(n));
                for (int s = 0; s < n; ++s) {
                    if (amb.branch(s) != b || g[static_cast<std::size_t>(s)].is_zero()) continue;
                    v[static_cast<std::size_t>(s)] = g[static_cast<std::size_t>(s)].shifted(c + k);
                    if (v[static_cast<std::size_t>(s)].valuation() < hi[static_cast<std::size_t>(s)]) below = true;
                }
                if (!below) break;
                basis.add_entries(fr.entries(v));
            }
        }
    }
    fr.basis = basis.echelon();
    return Lattice<S>(ring, fr);
}

template <class S> Lattice<S> ring_lattice(const RingPtr<S>& s, const RingPtr<S>& base)
{
    check_support(*base, s->window().amb);
    return Lattice<S>(base, s->window(), true);
}

template <class S> Lattice<S> maximal_ideal(const RingPtr<S>& r)
{
    FieldScope<S> scope(r->field());
    return Lattice<S>(r, maximal_ideal_window(*r), true);
}

template <class S>
Lattice<S> preimage(const RingPtr<S>& ring, const Ambient& amb, const std::vector<int>& lo, const std::vector<int>& hi_in,
                    const std::vector<Constraint<S>>& constraints)
{
    FieldScope<S> scope(ring->field());
    std::vector<int> hi = hi_in;
    for (auto& h : hi) h += ring->slack();
    for (std::size_t s = 0; s < hi.size(); ++s) hi[s] = std::max(hi[s], lo[s]);
    Window<S> fr = empty_frame<S>(amb, lo, hi);
    const int n = fr.dim();
    std::vector<Mat<S>> blocks;
    int total = 0;
    for (const auto& c : constraints) {
        const PolyMatrix<S>& phi = *c.map;
        const Lattice<S>& t = *c.target;
        const Window<S>& tw = t.window();
        // rows: coefficients below lo_T per target slot, then window coordinates of T
        std::vector<int> low_start(static_cast<std::size_t>(t.slots())), low_off(static_cast<std::size_t>(t.slots()) + 1, 0);
        for (int p = 0; p < t.slots(); ++p) {
            int xmin = t.lo(p);
            for (int s = 0; s < amb.slots(); ++s)
                if (!phi(p, s).is_zero()) xmin = std::min(xmin, phi(p, s).valuation() + lo[static_cast<std::size_t>(s)]);
            low_start[static_cast<std::size_t>(p)] = xmin;
            low_off[static_cast<std::size_t>(p) + 1] = low_off[static_cast<std::size_t>(p)] + (t.lo(p) - xmin);
        }
        const int nlow = low_off.back();
        Mat<S> low = Mat<S>::Zero(nlow, n);
        Mat<S> win = Mat<S>::Zero(tw.dim(), n);
        for (int s = 0; s < amb.slots(); ++s)
            for (int e = lo[static_cast<std::size_t>(s)]; e < hi[static_cast<std::size_t>(s)]; ++e) {
                const int col = fr.offset(s) + e - lo[static_cast<std::size_t>(s)];
                for (int p = 0; p < t.slots(); ++p)
                    for (const auto& [f, a] : phi(p, s).terms()) {
                        const int x = f + e;
                        if (x < t.lo(p))
                            low(low_off[static_cast<std::size_t>(p)] + x - low_start[static_cast<std::size_t>(p)], col) += a;
                        else if (x < t.hi(p))
                            win(tw.offset(p) + x - t.lo(p), col) += a;
                    }
            }
        Mat<S> q = annihilator(tw.basis);
        Mat<S> a(nlow + q.rows(), n);
        a.topRows(nlow) = low;
        a.bottomRows(q.rows()) = sparse_product<S>(q, win);
        total += static_cast<int>(a.rows());
        blocks.push_back(std::move(a));
    }
    // Eliminate on reversed columns: the null vector of free column f then
    // has its lowest nonzero at f and vanishes at the other free columns, so
    // the null vectors are already the reduced echelon basis.
    Mat<S> all(total, n);
    int row = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < n; ++j) all(row + i, n - 1 - j) = b(i, j);
        row += static_cast<int>(b.rows());
    }
    const Echelon<S> e = rref(std::move(all));
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
    Echelon<S> out;
    out.rows = Mat<S>::Zero(n - e.rank(), n);
    for (int f = 0; f < n; ++f) {
        const int rf = n - 1 - f; // reversed index of original column f
        if (is_pivot[static_cast<std::size_t>(rf)]) continue;
        const int k = static_cast<int>(out.pivots.size());
        out.rows(k, f) = S(1);
        for (int i = 0; i < e.rank(); ++i) out.rows(k, n - 1 - e.pivots[static_cast<std::size_t>(i)]) = -e.rows(i, rf);
        out.pivots.push_back(f);
    }
    fr.basis = std::move(out);
    return Lattice<S>(ring, fr);
}

template <class S> int HomLattice<S>::slot(int p, int q) const
{
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].first == p && pairs[k].second == q) return static_cast<int>(k);
    return -1;
}

template <class S> PolyMatrix<S> HomLattice<S>::to_matrix(const PolyVector<S>& v) const
{
    PolyMatrix<S> m(rows, cols);
    for (std::size_t k = 0; k < pairs.size(); ++k) m(pairs[k].first, pairs[k].second) = v[k];
    return m;
}

template <class S> PolyVector<S> HomLattice<S>::from_matrix(const PolyMatrix<S>& m) const
{
    PolyVector<S> v(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) v[k] = m(pairs[k].first, pairs[k].second);
    return v;
}

template <class S> HomLattice<S> hom_lattice(const Lattice<S>& c, const Lattice<S>& d)
{
    FieldScope<S> scope(c.ring()->field());
    if (c.ambient().branches != d.ambient().branches)
        throw EngineError(ErrorCode::AmbientMismatch, "Hom between lattices over different branch sets");
    HomLattice<S> h;
    h.rows = d.slots();
    h.cols = c.slots();
    Ambient amb;
    amb.branches = c.ambient().branches;
    std::vector<int> lo, hi;
    for (int p = 0; p < d.slots(); ++p)
        for (int q = 0; q < c.slots(); ++q) {
            if (d.branch(p) != c.branch(q)) continue;
            h.pairs.emplace_back(p, q);
            amb.slot_branch.push_back(d.branch(p));
            lo.push_back(d.lo(p) - c.hi(q));
            hi.push_back(d.hi(p) - c.lo(q));
        }
    std::vector<PolyMatrix<S>> maps;
    for (const auto& v : module_generators(c)) {
        PolyMatrix<S> m(d.slots(), amb.slots());
        for (std::size_t k = 0; k < h.pairs.size(); ++k)
            m(h.pairs[k].first, static_cast<int>(k)) = v[static_cast<std::size_t>(h.pairs[k].second)];
        maps.push_back(std::move(m));
    }
    std::vector<Constraint<S>> cons;
    for (const auto& m : maps) cons.push_back({&m, &d});
    h.lattice = preimage(c.ring(), amb, lo, hi, cons);
    return h;
}

template <class S> PolyVector<S> KernelResult<S>::coordinates(const PolyVector<S>& x, const std::vector<int>& prec) const
{
    PolyVector<S> y(free_rows.size());
    for (std::size_t j = 0; j < free_rows.size(); ++j)
        y[j] = series_quotient(x[static_cast<std::size_t>(free_rows[j])], diag[j], prec[j]);
    return y;
}

template <class S> KernelResult<S> kernel(const LatticeMap<S>& f)
{
    const Lattice<S>& src = f.source;
    FieldScope<S> scope(src.ring()->field());
    const Ambient& sa = src.ambient();
    KernelResult<S> out;
    Ambient ka;
    ka.branches = sa.branches;
    std::vector<PolyVector<S>> cols;
    for (int b = 0; b < sa.branches; ++b) {
        const std::vector<int> ss = sa.slots_on(b);
        if (ss.empty()) continue;
        const std::vector<int> ts = f.target.ambient().slots_on(b);
        KernelBasis<S> kb = k_nullspace(f.matrix.submatrix(ts, ss));
        for (int j = 0; j < kb.dimension(); ++j) {
            PolyVector<S> col(static_cast<std::size_t>(sa.slots()));
            for (std::size_t i = 0; i < ss.size(); ++i) col[static_cast<std::size_t>(ss[i])] = kb.basis(static_cast<int>(i), j);
            cols.push_back(std::move(col));
            ka.slot_branch.push_back(b);
            out.free_rows.push_back(ss[static_cast<std::size_t>(kb.free_rows[static_cast<std::size_t>(j)])]);
            out.diag.push_back(kb.diag[static_cast<std::size_t>(j)]);
        }
    }
    out.inclusion = PolyMatrix<S>::from_columns(sa.slots(), cols);
    if (cols.empty()) {
        out.lattice = zero_lattice(src.ring());
        return out;
    }
    std::vector<int> lo, hi;
    for (int j = 0; j < ka.slots(); ++j) {
        lo.push_back(src.lo(out.free_rows[static_cast<std::size_t>(j)]) - out.diag[static_cast<std::size_t>(j)].valuation());
        int h = lo.back();
        for (int p = 0; p < sa.slots(); ++p)
            if (!out.inclusion(p, j).is_zero()) h = std::max(h, src.hi(p) - out.inclusion(p, j).valuation());
        hi.push_back(h);
    }
    out.lattice = preimage(src.ring(), ka, lo, hi, {Constraint<S>{&out.inclusion, &src}});
    return out;
}

template <class S> Lattice<S> image(const LatticeMap<S>& f)
{
    const Lattice<S>& src = f.source;
    FieldScope<S> scope(src.ring()->field());
    const Ambient& ta = f.target.ambient();
    std::vector<int> tail(static_cast<std::size_t>(ta.slots()), 0);
    for (int b = 0; b < ta.branches; ++b) {
        const std::vector<int> ts = ta.slots_on(b);
        if (ts.empty()) continue;
        const std::vector<int> ss = src.ambient().slots_on(b);
        FFReduction<S> red = ff_gauss_jordan(f.matrix.submatrix(ts, ss), true);
        if (red.rank() < static_cast<int>(ts.size()))
            throw EngineError(ErrorCode::NotFullRank, "image requires full row rank on every branch",
                              "branch " + std::to_string(b));
        // y_{P_i} = (U z)_i / d solves the system, so t^H lies in the image
        int h = INT_MIN;
        for (int i = 0; i < red.rank(); ++i) {
            int minu = kInfiniteValuation;
            for (int j = 0; j < red.transform.cols(); ++j) minu = std::min(minu, red.transform(i, j).valuation());
            const int q = ss[static_cast<std::size_t>(red.pivot_cols[static_cast<std::size_t>(i)])];
            h = std::max(h, src.hi(q) - minu + red.pivot.valuation());
        }
        for (int p : ts) tail[static_cast<std::size_t>(p)] = h;
    }
    std::vector<PolyVector<S>> gens;
    for (const auto& g : module_generators(src)) gens.push_back(f.matrix.apply(g));
    return span(src.ring(), ta, gens, tail);
}

template <class S> Lattice<S> sum(const Lattice<S>& a, const Lattice<S>& b)
{
    if (!(a.ambient() == b.ambient())) throw EngineError(ErrorCode::AmbientMismatch, "sum of lattices in different ambients");
    std::vector<PolyVector<S>> gens = a.window_vectors();
    for (auto& v : b.window_vectors()) gens.push_back(std::move(v));
    std::vector<int> tail;
    for (int s = 0; s < a.slots(); ++s) tail.push_back(std::min(a.hi(s), b.hi(s)));
    return span(a.ring(), a.ambient(), gens, tail);
}

template <class S> Lattice<S> direct_sum(const Lattice<S>& a, const Lattice<S>& b)
{
    if (a.ambient().branches != b.ambient().branches)
        throw EngineError(ErrorCode::AmbientMismatch, "direct sum over different branch sets");
    const Window<S>& x = a.window();
    const Window<S>& y = b.window();
    Window<S> w;
    w.amb = Ambient::concat(x.amb, y.amb);
    w.lo = x.lo;
    w.lo.insert(w.lo.end(), y.lo.begin(), y.lo.end());
    w.hi = x.hi;
    w.hi.insert(w.hi.end(), y.hi.begin(), y.hi.end());
    w.basis.rows = Mat<S>::Zero(x.rank() + y.rank(), x.dim() + y.dim());
    w.basis.rows.topLeftCorner(x.rank(), x.dim()) = x.basis.rows;
    w.basis.rows.bottomRightCorner(y.rank(), y.dim()) = y.basis.rows;
    w.basis.pivots = x.basis.pivots;
    for (int p : y.basis.pivots) w.basis.pivots.push_back(p + x.dim());
    return Lattice<S>(a.ring(), w, true);
}

template <class S> Lattice<S> direct_sum(const std::vector<Lattice<S>>& parts, const RingPtr<S>& ring)
{
    Lattice<S> acc = zero_lattice(ring);
    for (const auto& p : parts) acc = direct_sum(acc, p);
    return acc;
}

template <class S> Lattice<S> max_ideal_times(const Lattice<S>& l)
{
    const RingPtr<S>& r = l.ring();
    const auto& mg = r->max_ideal_generators();
    std::vector<PolyVector<S>> gens;
    for (const auto& g : l.r_generators())
        for (const auto& m : mg) gens.push_back(act(m, l.ambient(), g));
    std::vector<int> tail;
    for (int s = 0; s < l.slots(); ++s) tail.push_back(l.hi(s) + r->staircase(l.branch(s)));
    return span(r, l.ambient(), gens, tail);
}

template <class S> QuotientSpace<S>::QuotientSpace(const Lattice<S>& l, const Lattice<S>& sub)
{
    FieldScope<S> scope(l.ring()->field());
    const int n = l.slots();
    std::vector<int> lo, hi;
    for (int s = 0; s < n; ++s) {
        lo.push_back(std::min(l.lo(s), sub.lo(s)));
        hi.push_back(std::max(l.hi(s), sub.hi(s)));
    }
    frame_ = empty_frame<S>(l.ambient(), lo, hi);
    auto rows_of = [&](const Lattice<S>& x) {
        std::vector<RowVec<S>> rows;
        for (const auto& v : x.window_vectors()) rows.push_back(frame_.encode(v));
        for (int s = 0; s < n; ++s)
            for (int e = x.hi(s); e < hi[static_cast<std::size_t>(s)]; ++e) rows.push_back(frame_.encode(unit_vector<S>(n, s, e)));
        return rows;
    };
    sub_ = rref(stack(rows_of(sub), frame_.dim()));
    std::vector<RowVec<S>> rs = rows_of(l);
    for (auto& r : rs) reduce(sub_, r);
    quot_ = rref(stack(rs, frame_.dim()));
}

template <class S> RowVec<S> QuotientSpace<S>::residue(const PolyVector<S>& v) const
{
    RowVec<S> r = frame_.encode(v);
    reduce(sub_, r);
    RowVec<S> c(quot_.rank());
    for (int i = 0; i < quot_.rank(); ++i) c(i) = r(quot_.pivots[static_cast<std::size_t>(i)]);
    return c;
}

template <class S> std::vector<int> QuotientSpace<S>::choose_basis(const std::vector<PolyVector<S>>& candidates) const
{
    IncrementalBasis<S> chosen(dimension());
    std::vector<int> idx;
    for (std::size_t i = 0; i < candidates.size() && chosen.rank() < dimension(); ++i)
        if (chosen.add(residue(candidates[i]))) idx.push_back(static_cast<int>(i));
    return idx;
}

template <class S> bool QuotientSpace<S>::spans(const std::vector<PolyVector<S>>& vs) const
{
    return static_cast<int>(choose_basis(vs).size()) == dimension();
}

template <class S> std::vector<PolyVector<S>> minimal_generators(const Lattice<S>& l)
{
    if (!l.ring()->is_local()) throw EngineError(ErrorCode::NotLocal, "minimal generators need a local ring");
    if (l.is_zero()) return {};
    QuotientSpace<S> q(l, max_ideal_times(l));
    const auto cands = l.r_generators();
    std::vector<PolyVector<S>> out;
    for (int i : q.choose_basis(cands)) out.push_back(cands[static_cast<std::size_t>(i)]);
    return out;
}

template <class S> std::vector<PolyVector<S>> module_generators(const Lattice<S>& l)
{
    return l.ring()->is_local() ? minimal_generators(l) : l.r_generators();
}

template <class S> bool spans(const Lattice<S>& l, const std::vector<PolyVector<S>>& vs)
{
    if (l.is_zero()) return true;
    if (l.ring()->is_local()) return QuotientSpace<S>(l, max_ideal_times(l)).spans(vs);
    std::vector<int> tail;
    for (int s = 0; s < l.slots(); ++s) tail.push_back(l.hi(s) + l.ring()->staircase(l.branch(s)));
    return span(l.ring(), l.ambient(), vs, tail) == l;
}

template <class S> bool is_submodule(const Lattice<S>& sub, const Lattice<S>& l)
{
    if (!(sub.ambient() == l.ambient())) return false;
    for (const auto& v : sub.window_vectors())
        if (!l.contains(v)) return false;
    for (int s = 0; s < sub.slots(); ++s)
        if (sub.hi(s) < l.hi(s)) {
            // the tail of sub must also lie in l
            for (int e = sub.hi(s); e < l.hi(s); ++e)
                if (!l.contains(unit_vector<S>(sub.slots(), s, e))) return false;
        }
    return true;
}

template <class S> bool is_overring(const RingPtr<S>& s, const RingPtr<S>& base)
{
    if (s->branches() != base->branches() || s->support() != base->support()) return false;
    for (const auto& x : base->canonical_generators())
        if (!s->contains(x)) return false;
    return true;
}

template <class S> std::vector<BranchVector<S>> overring_module_generators(const RingPtr<S>& s, const RingPtr<S>& base)
{
    std::vector<BranchVector<S>> out;
    Lattice<S> l = ring_lattice(s, base);
    for (const auto& v : module_generators(l)) out.push_back(s->from_slots(v));
    return out;
}

template <class S> bool scalar_extension_test(const RingPtr<S>& s, const Lattice<S>& l)
{
    FieldScope<S> scope(s->field());
    if (!is_overring(s, l.ring())) throw EngineError(ErrorCode::NotAnOverring, "ring does not contain the base ring");
    const auto gens = l.r_generators();
    for (const auto& x : overring_module_generators(s, l.ring()))
        for (const auto& g : gens)
            if (!l.contains(act(x, l.ambient(), g))) return false;
    return true;
}

template <class S> Lattice<S> largest_submodule_over(const RingPtr<S>& s, const Lattice<S>& n)
{
    FieldScope<S> scope(s->field());
    if (!is_overring(s, n.ring())) throw EngineError(ErrorCode::NotAnOverring, "ring does not contain the base ring");
    std::vector<PolyMatrix<S>> maps;
    for (const auto& x : overring_module_generators(s, n.ring())) maps.push_back(action_matrix(n.ambient(), x));
    std::vector<Constraint<S>> cons;
    for (const auto& m : maps) cons.push_back({&m, &n});
    return preimage(n.ring(), n.ambient(), n.window().lo, n.window().hi, cons);
}

template <class S> Lattice<S> restrict_slots(const Lattice<S>& l, const std::vector<int>& slots, const RingPtr<S>& ring)
{
    const Window<S>& w = l.window();
    Window<S> out;
    out.amb.branches = w.amb.branches;
    std::vector<int> keep;
    for (int s : slots) {
        out.amb.slot_branch.push_back(w.amb.branch(s));
        out.lo.push_back(w.lo[static_cast<std::size_t>(s)]);
        out.hi.push_back(w.hi[static_cast<std::size_t>(s)]);
        for (int k = 0; k < w.width(s); ++k) keep.push_back(w.offset(s) + k);
    }
    Mat<S> rows(w.rank(), static_cast<Eigen::Index>(keep.size()));
    for (int i = 0; i < w.rank(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) rows(i, static_cast<Eigen::Index>(j)) = w.basis.rows(i, keep[j]);
    out.basis = rref(std::move(rows));
    return Lattice<S>(ring, out);
}

template <class S> FreeDecomposition<S> free_decomposition_over_dvr_product(const Lattice<S>& l)
{
    const RingPtr<S>& r = l.ring();
    FieldScope<S> scope(r->field());
    if (!r->is_dvr_product()) throw EngineError(ErrorCode::NotDvrProduct, "ring is not a product of DVRs");
    FreeDecomposition<S> out;
    out.ranks.assign(static_cast<std::size_t>(l.ambient().branches), 0);
    for (int b : r->support()) {
        const std::vector<int> ss = l.ambient().slots_on(b);
        if (ss.empty()) continue;
        RingPtr<S> fb = factor(r, {b});
        Lattice<S> part = restrict_slots(l, ss, fb);
        for (const auto& v : minimal_generators(part)) {
            PolyVector<S> full(static_cast<std::size_t>(l.slots()));
            for (std::size_t i = 0; i < ss.size(); ++i) full[static_cast<std::size_t>(ss[i])] = v[i];
            out.basis.push_back(std::move(full));
            out.basis_branch.push_back(b);
        }
        out.ranks[static_cast<std::size_t>(b)] = static_cast<int>(out.basis.size()) -
                                                 std::accumulate(out.ranks.begin(), out.ranks.end(), 0);
        if (out.ranks[static_cast<std::size_t>(b)] != static_cast<int>(ss.size()))
            throw EngineError(ErrorCode::Internal, "lattice over a DVR is not free of full rank");
    }
    return out;
}

template <class S> int quotient_dimension(const Lattice<S>& n, const Lattice<S>& n0)
{
    if (!(n.ambient() == n0.ambient())) throw EngineError(ErrorCode::AmbientMismatch, "different ambients");
    if (!is_submodule(n0, n)) throw EngineError(ErrorCode::NotASubmodule, "N0 is not contained in N");
    int d = n.window().rank() - n0.window().rank();
    for (int s = 0; s < n.slots(); ++s) d += n0.hi(s) - n.hi(s);
    return d;
}

template <class S> Lattice<S> shift(const Lattice<S>& l, const std::vector<int>& k)
{
    Window<S> w = l.window();
    for (int s = 0; s < w.slots(); ++s) {
        w.lo[static_cast<std::size_t>(s)] += k[static_cast<std::size_t>(s)];
        w.hi[static_cast<std::size_t>(s)] += k[static_cast<std::size_t>(s)];
    }
    return Lattice<S>(l.ring(), w, true);
}

template <class S> Lattice<S> scale(const Lattice<S>& l, const BranchVector<S>& x)
{
    std::vector<PolyVector<S>> gens;
    for (const auto& g : l.r_generators()) gens.push_back(act(x, l.ambient(), g));
    std::vector<int> tail;
    for (int s = 0; s < l.slots(); ++s) tail.push_back(l.hi(s) + x[static_cast<std::size_t>(l.branch(s))].valuation());
    return span(l.ring(), l.ambient(), gens, tail);
}

#define ENDOCHAIN_INSTANTIATE(S)                                                                                   \
    template class Lattice<S>;                                                                                     \
    template struct HomLattice<S>;                                                                                 \
    template struct KernelResult<S>;                                                                               \
    template class QuotientSpace<S>;                                                                               \
    template bool is_valid<S>(const LatticeMap<S>&);                                                               \
    template Lattice<S> zero_lattice<S>(const RingPtr<S>&);                                                        \
    template Lattice<S> span<S>(const RingPtr<S>&, const Ambient&, const std::vector<PolyVector<S>>&,              \
                                const std::vector<int>&);                                                          \
    template Lattice<S> ring_lattice<S>(const RingPtr<S>&, const RingPtr<S>&);                                     \
    template Lattice<S> maximal_ideal<S>(const RingPtr<S>&);                                                       \
    template Lattice<S> preimage<S>(const RingPtr<S>&, const Ambient&, const std::vector<int>&,                    \
                                    const std::vector<int>&, const std::vector<Constraint<S>>&);                   \
    template HomLattice<S> hom_lattice<S>(const Lattice<S>&, const Lattice<S>&);                                   \
    template KernelResult<S> kernel<S>(const LatticeMap<S>&);                                                      \
    template Lattice<S> image<S>(const LatticeMap<S>&);                                                            \
    template Lattice<S> sum<S>(const Lattice<S>&, const Lattice<S>&);                                              \
    template Lattice<S> direct_sum<S>(const Lattice<S>&, const Lattice<S>&);                                       \
    template Lattice<S> direct_sum<S>(const std::vector<Lattice<S>>&, const RingPtr<S>&);                          \
    template Lattice<S> max_ideal_times<S>(const Lattice<S>&);                                                     \
    template std::vector<PolyVector<S>> minimal_generators<S>(const Lattice<S>&);                                  \
    template std::vector<PolyVector<S>> module_generators<S>(const Lattice<S>&);                                   \
    template bool spans<S>(const Lattice<S>&, const std::vector<PolyVector<S>>&);                                  \
    template bool is_submodule<S>(const Lattice<S>&, const Lattice<S>&);                                           \
    template bool is_overring<S>(const RingPtr<S>&, const RingPtr<S>&);                                            \
    template std::vector<BranchVector<S>> overring_module_generators<S>(const RingPtr<S>&, const RingPtr<S>&);     \
    template bool scalar_extension_test<S>(const RingPtr<S>&, const Lattice<S>&);                                  \
    template Lattice<S> largest_submodule_over<S>(const RingPtr<S>&, const Lattice<S>&);                           \
    template Lattice<S> restrict_slots<S>(const Lattice<S>&, const std::vector<int>&, const RingPtr<S>&);          \
    template FreeDecomposition<S> free_decomposition_over_dvr_product<S>(const Lattice<S>&);                       \
    template int quotient_dimension<S>(const Lattice<S>&, const Lattice<S>&);                                      \
    template Lattice<S> shift<S>(const Lattice<S>&, const std::vector<int>&);                                      \
    template Lattice<S> scale<S>(const Lattice<S>&, const BranchVector<S>&);                                       \
    template PolyMatrix<S> action_matrix<S>(const Ambient&, const BranchVector<S>&);                               \
    template PolyVector<S> act<S>(const BranchVector<S>&, const Ambient&, const PolyVector<S>&);

ENDOCHAIN_INSTANTIATE(Rational)
ENDOCHAIN_INSTANTIATE(ModP)

} // namespace endochain
