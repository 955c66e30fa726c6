#ifndef ENDOCHAIN_WINDOW_HPP
#define ENDOCHAIN_WINDOW_HPP

/* The finite description of a lattice L inside prod_i F((t_i))^{r_i}.
 *
 * Each coordinate ("slot") s lives on a branch and carries an exponent range
 * [lo_s, hi_s). L is the set of vectors x with val(x_s) >= lo_s whose
 * truncation below hi lies in the row space of `basis`; every
 * t^{hi_s} F[[t]] e_s is contained in L (the tail). The canonical form has
 * every hi_s minimal, every lo_s maximal and the basis in reduced row echelon
 * form, so two canonical windows describe the same lattice iff they are
 * equal. */

#include <algorithm>
#include <numeric>
#include <vector>

#include "endochain/dense.hpp"
#include "endochain/polymatrix.hpp"

namespace endochain {

struct Ambient {
    std::vector<int> slot_branch;
    int branches = 0;

    int slots() const { return static_cast<int>(slot_branch.size()); }
    int branch(int s) const { return slot_branch[static_cast<std::size_t>(s)]; }

    std::vector<int> ranks() const
    {
        std::vector<int> r(static_cast<std::size_t>(branches), 0);
        for (int b : slot_branch) ++r[static_cast<std::size_t>(b)];
        return r;
    }
    std::vector<int> slots_on(int b) const
    {
        std::vector<int> out;
        for (int s = 0; s < slots(); ++s)
            if (branch(s) == b) out.push_back(s);
        return out;
    }

    /* One slot per listed branch. */
    static Ambient rank_one(const std::vector<int>& on_branches, int branches)
    {
        Ambient a;
        a.slot_branch = on_branches;
        a.branches = branches;
        return a;
    }
    /* Branch-major layout with r_i slots on branch i. */
    static Ambient from_ranks(const std::vector<int>& ranks)
    {
        Ambient a;
        a.branches = static_cast<int>(ranks.size());
        for (int b = 0; b < a.branches; ++b)
            for (int k = 0; k < ranks[static_cast<std::size_t>(b)]; ++k) a.slot_branch.push_back(b);
        return a;
    }
    static Ambient concat(const Ambient& x, const Ambient& y)
    {
        Ambient a = x;
        a.branches = std::max(x.branches, y.branches);
        a.slot_branch.insert(a.slot_branch.end(), y.slot_branch.begin(), y.slot_branch.end());
        return a;
    }

    bool operator==(const Ambient&) const = default;
};

template <class S> struct Window {
    Ambient amb;
    std::vector<int> lo, hi;
    Echelon<S> basis;

    int slots() const { return amb.slots(); }
    int width(int s) const { return hi[static_cast<std::size_t>(s)] - lo[static_cast<std::size_t>(s)]; }
    int offset(int s) const
    {
        int o = 0;
        for (int k = 0; k < s; ++k) o += width(k);
        return o;
    }
    int dim() const { return offset(slots()); }
    int rank() const { return basis.rank(); }

    /* Coefficients of v in window coordinates; terms outside [lo, hi) are dropped. */
    RowVec<S> encode(const PolyVector<S>& v) const
    {
        RowVec<S> row = RowVec<S>::Zero(dim());
        int off = 0;
        for (int s = 0; s < slots(); ++s) {
            for (const auto& [e, c] : v[static_cast<std::size_t>(s)].terms())
                if (e >= lo[static_cast<std::size_t>(s)] && e < hi[static_cast<std::size_t>(s)])
                    row(off + e - lo[static_cast<std::size_t>(s)]) = c;
            off += width(s);
        }
        return row;
    }
    /* encode() as (column, value) pairs. */
    std::vector<std::pair<int, S>> entries(const PolyVector<S>& v) const
    {
        std::vector<std::pair<int, S>> out;
        int off = 0;
        for (int s = 0; s < slots(); ++s) {
            for (const auto& [e, c] : v[static_cast<std::size_t>(s)].terms())
                if (e >= lo[static_cast<std::size_t>(s)] && e < hi[static_cast<std::size_t>(s)])
                    out.emplace_back(off + e - lo[static_cast<std::size_t>(s)], c);
            off += width(s);
        }
        return out;
    }
    PolyVector<S> decode(const RowVec<S>& row) const
    {
        PolyVector<S> v(static_cast<std::size_t>(slots()));
        int off = 0;
        for (int s = 0; s < slots(); ++s) {
            std::vector<typename LaurentPoly<S>::Term> ts;
            for (int k = 0; k < width(s); ++k)
                if (!Field<S>::is_zero(row(off + k))) ts.emplace_back(lo[static_cast<std::size_t>(s)] + k, row(off + k));
            v[static_cast<std::size_t>(s)] = LaurentPoly<S>::from_terms(std::move(ts));
            off += width(s);
        }
        return v;
    }
    std::vector<PolyVector<S>> vectors() const
    {
        std::vector<PolyVector<S>> out;
        for (int i = 0; i < rank(); ++i) out.push_back(decode(basis.rows.row(i)));
        return out;
    }

    bool contains(const PolyVector<S>& v) const
    {
        for (int s = 0; s < slots(); ++s)
            if (v[static_cast<std::size_t>(s)].valuation() < lo[static_cast<std::size_t>(s)]) return false;
        return in_row_space(basis, encode(v));
    }

    friend bool operator==(const Window& a, const Window& b)
    {
        return a.amb == b.amb && a.lo == b.lo && a.hi == b.hi && a.basis.pivots == b.basis.pivots &&
               a.basis.rows == b.basis.rows;
    }
};

/* Window from spanning rows over [lo, hi); the rows need not be reduced. */
template <class S>
Window<S> window_from_rows(const Ambient& amb, std::vector<int> lo, std::vector<int> hi, Mat<S> rows)
{
    Window<S> w;
    w.amb = amb;
    w.lo = std::move(lo);
    w.hi = std::move(hi);
    w.basis = rref(std::move(rows));
    return w;
}

/* Shrinks every tail and raises every lower bound as far as the lattice allows. */
template <class S> Window<S> canonicalize(const Window<S>& w)
{
    const int n = w.slots();
    std::vector<int> new_hi = w.hi, new_lo(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        int h = w.hi[static_cast<std::size_t>(s)];
        const int off = w.offset(s) - w.lo[static_cast<std::size_t>(s)];
        while (h > w.lo[static_cast<std::size_t>(s)]) {
            RowVec<S> u = RowVec<S>::Zero(w.dim());
            u(off + h - 1) = S(1);
            if (!in_row_space(w.basis, u)) break;
            --h;
        }
        new_hi[static_cast<std::size_t>(s)] = h;
    }
    // lowest exponent actually reached in each slot
    for (int s = 0; s < n; ++s) {
        const int off = w.offset(s);
        int lo = new_hi[static_cast<std::size_t>(s)];
        for (int k = 0; k < new_hi[static_cast<std::size_t>(s)] - w.lo[static_cast<std::size_t>(s)]; ++k) {
            bool hit = false;
            for (int i = 0; i < w.rank() && !hit; ++i) hit = !Field<S>::is_zero(w.basis.rows(i, off + k));
            if (hit) {
                lo = w.lo[static_cast<std::size_t>(s)] + k;
                break;
            }
        }
        new_lo[static_cast<std::size_t>(s)] = lo;
    }
    Window<S> out;
    out.amb = w.amb;
    out.lo = new_lo;
    out.hi = new_hi;
    std::vector<int> keep;
    for (int s = 0; s < n; ++s) {
        const int off = w.offset(s) - w.lo[static_cast<std::size_t>(s)];
        for (int e = new_lo[static_cast<std::size_t>(s)]; e < new_hi[static_cast<std::size_t>(s)]; ++e) keep.push_back(off + e);
    }
    Mat<S> rows(w.rank(), static_cast<Eigen::Index>(keep.size()));
    for (int i = 0; i < w.rank(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) rows(i, static_cast<Eigen::Index>(j)) = w.basis.rows(i, keep[j]);
    out.basis = rref(std::move(rows));
    return out;
}

} // namespace endochain

#endif
