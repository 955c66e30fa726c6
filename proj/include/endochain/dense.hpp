#ifndef ENDOCHAIN_DENSE_HPP
#define ENDOCHAIN_DENSE_HPP

/* Exact dense linear algebra over a field, on Eigen storage. All routines
 * are pivot-exact (no magnitude heuristics); they are meant for the window
 * matrices of the lattice layer, which are at most a few hundred wide. */

#include <algorithm>
#include <vector>

#include <Eigen/Core>

#include "endochain/scalar.hpp"

namespace endochain {

template <class S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S> using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

/* Row space in reduced row echelon form; pivots[i] is the pivot column of
 * rows.row(i), pivots increasing, pivot entries 1. */
template <class S> struct Echelon {
    Mat<S> rows;
    std::vector<int> pivots;

    int rank() const { return static_cast<int>(pivots.size()); }
    int cols() const { return static_cast<int>(rows.cols()); }
};

template <class S> Echelon<S> rref(Mat<S> m)
{
    const Eigen::Index nr = m.rows(), nc = m.cols();
    std::vector<int> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < nc && r < nr; ++c) {
        Eigen::Index p = -1;
        for (Eigen::Index i = r; i < nr; ++i)
            if (!Field<S>::is_zero(m(i, c))) { p = i; break; }
        if (p < 0) continue;
        if (p != r) m.row(p).swap(m.row(r));
        const S inv = S(1) / m(r, c);
        for (Eigen::Index j = c; j < nc; ++j)
            if (!Field<S>::is_zero(m(r, j))) m(r, j) *= inv;
        for (Eigen::Index i = 0; i < nr; ++i) {
            if (i == r || Field<S>::is_zero(m(i, c))) continue;
            const S f = m(i, c);
            for (Eigen::Index j = c; j < nc; ++j)
                if (!Field<S>::is_zero(m(r, j))) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    Echelon<S> e;
    e.rows = m.topRows(r);
    e.pivots = std::move(pivots);
    return e;
}

/* Basis of {x : a x = 0} as the columns of the result. */
template <class S> Mat<S> nullspace(const Mat<S>& a)
{
    const Eigen::Index n = a.cols();
    Echelon<S> e = rref(Mat<S>(a));
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
    Mat<S> out = Mat<S>::Zero(n, n - e.rank());
    Eigen::Index k = 0;
    for (Eigen::Index f = 0; f < n; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        out(f, k) = S(1);
        for (int i = 0; i < e.rank(); ++i) out(e.pivots[static_cast<std::size_t>(i)], k) = -e.rows(i, f);
        ++k;
    }
    return out;
}

/* Rows spanning the annihilator {q : q . v = 0 for every v in the row space}. */
template <class S> Mat<S> annihilator(const Echelon<S>& e)
{
    if (e.rank() == 0) return Mat<S>::Identity(e.cols(), e.cols());
    return nullspace<S>(e.rows).transpose();
}

/* Reduces v against the echelon rows in place; v is in the row space iff the
 * result is zero. */
template <class S> void reduce(const Echelon<S>& e, RowVec<S>& v)
{
    for (int i = 0; i < e.rank(); ++i) {
        const int p = e.pivots[static_cast<std::size_t>(i)];
        if (Field<S>::is_zero(v(p))) continue;
        const S f = v(p);
        for (Eigen::Index j = p; j < v.cols(); ++j)
            if (!Field<S>::is_zero(e.rows(i, j))) v(j) -= f * e.rows(i, j);
    }
}

template <class S> bool is_zero_vector(const RowVec<S>& v)
{
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        if (!Field<S>::is_zero(v(j))) return false;
    return true;
}

template <class S> bool in_row_space(const Echelon<S>& e, RowVec<S> v)
{
    reduce(e, v);
    return is_zero_vector(v);
}

template <class S> int rank(const Mat<S>& m) { return rref(Mat<S>(m)).rank(); }

/* Product with zero skipping; Eigen's generic kernel does not know that most
 * entries of our window matrices vanish. */
template <class S> Mat<S> sparse_product(const Mat<S>& a, const Mat<S>& b)
{
    Mat<S> out = Mat<S>::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            if (Field<S>::is_zero(a(i, k))) continue;
            const S& f = a(i, k);
            for (Eigen::Index j = 0; j < b.cols(); ++j)
                if (!Field<S>::is_zero(b(k, j))) out(i, j) += f * b(k, j);
        }
    return out;
}


/* Semi-echelon basis grown one vector at a time. Each stored row has a
 * distinct pivot and is reduced against the rows stored before it, so
 * reducing in insertion order is exact. */
template <class S> class IncrementalBasis {
  public:
    explicit IncrementalBasis(int cols = 0) : cols_(cols) {}

    int rank() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }

    void reduce(RowVec<S>& v) const
    {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const int p = pivots_[i];
            if (Field<S>::is_zero(v(p))) continue;
            const S f = v(p);
            for (int j : support_[i]) v(j) -= f * rows_[i](j);
        }
    }
    bool contains(RowVec<S> v) const
    {
        reduce(v);
        return is_zero_vector(v);
    }
    /* Adds v if it is independent of the stored rows; returns whether it was. */
    bool add(RowVec<S> v)
    {
        reduce(v);
        Eigen::Index p = 0;
        while (p < v.cols() && Field<S>::is_zero(v(p))) ++p;
        if (p == v.cols()) return false;
        const S inv = S(1) / v(p);
        std::vector<int> nz;
        for (Eigen::Index j = p; j < v.cols(); ++j)
            if (!Field<S>::is_zero(v(j))) {
                v(j) *= inv;
                nz.push_back(static_cast<int>(j));
            }
        rows_.push_back(std::move(v));
        pivots_.push_back(static_cast<int>(p));
        support_.push_back(std::move(nz));
        return true;
    }
    /* add() for the vector with these (column, value) entries, reduced in a
     * reused scratch row so that dependent vectors allocate nothing. */
    bool add_entries(const std::vector<std::pair<int, S>>& entries)
    {
        if (scratch_.cols() != cols_) {
            scratch_ = RowVec<S>::Zero(cols_);
            mark_.assign(static_cast<std::size_t>(cols_), 0);
        }
        auto touch = [&](int j) {
            if (!mark_[static_cast<std::size_t>(j)]) {
                mark_[static_cast<std::size_t>(j)] = 1;
                touched_.push_back(j);
            }
        };
        for (const auto& [j, c] : entries) {
            scratch_(j) += c;
            touch(j);
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const int p = pivots_[i];
            if (!mark_[static_cast<std::size_t>(p)] || Field<S>::is_zero(scratch_(p))) continue;
            const S f = scratch_(p);
            for (int j : support_[i]) {
                scratch_(j) -= f * rows_[i](j);
                touch(j);
            }
        }
        int p = cols_;
        for (int j : touched_)
            if (!Field<S>::is_zero(scratch_(j))) p = std::min(p, j);
        bool added = false;
        if (p < cols_) {
            RowVec<S> v = RowVec<S>::Zero(cols_);
            const S inv = S(1) / scratch_(p);
            std::sort(touched_.begin(), touched_.end());
            std::vector<int> nz;
            for (int j : touched_)
                if (!Field<S>::is_zero(scratch_(j))) {
                    v(j) = scratch_(j) * inv;
                    nz.push_back(j);
                }
            rows_.push_back(std::move(v));
            pivots_.push_back(p);
            support_.push_back(std::move(nz));
            added = true;
        }
        for (int j : touched_) {
            scratch_(j) = S(0);
            mark_[static_cast<std::size_t>(j)] = 0;
        }
        touched_.clear();
        return added;
    }
    Mat<S> matrix() const
    {
        Mat<S> m(rank(), cols_);
        for (int i = 0; i < rank(); ++i) m.row(i) = rows_[static_cast<std::size_t>(i)];
        return m;
    }
    /* Back-substitution on the stored rows, touching only nonzero entries. */
    Echelon<S> echelon() const
    {
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
        std::vector<RowVec<S>> rows;
        std::vector<std::vector<int>> supp;
        for (std::size_t i : order) {
            rows.push_back(rows_[i]);
            supp.push_back(support_[i]);
        }
        for (std::size_t i = rows.size(); i-- > 0;) {
            const int p = pivots_[order[i]];
            for (std::size_t k = 0; k < i; ++k) {
                if (Field<S>::is_zero(rows[k](p))) continue;
                const S f = rows[k](p);
                for (int j : supp[i]) rows[k](j) -= f * rows[i](j);
                std::vector<int> nz;
                for (Eigen::Index j = pivots_[order[k]]; j < rows[k].cols(); ++j)
                    if (!Field<S>::is_zero(rows[k](j))) nz.push_back(static_cast<int>(j));
                supp[k] = std::move(nz);
            }
        }
        Echelon<S> e;
        e.rows.resize(rank(), cols_);
        for (int i = 0; i < rank(); ++i) {
            e.rows.row(i) = rows[static_cast<std::size_t>(i)];
            e.pivots.push_back(pivots_[order[static_cast<std::size_t>(i)]]);
        }
        return e;
    }

  private:
    int cols_;
    std::vector<RowVec<S>> rows_;
    std::vector<int> pivots_;
    std::vector<std::vector<int>> support_; // nonzero columns of each row
    RowVec<S> scratch_;
    std::vector<char> mark_;
    std::vector<int> touched_;
};

} // namespace endochain

#endif
