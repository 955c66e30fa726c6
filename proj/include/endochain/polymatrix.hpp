#ifndef ENDOCHAIN_POLYMATRIX_HPP
#define ENDOCHAIN_POLYMATRIX_HPP

/* Matrices of Laurent polynomials: K-linear maps between ambients
 * prod_i F((t_i))^{r_i}, plus fraction-free elimination over F[t, 1/t]. */

#include <algorithm>
#include <vector>

#include "endochain/laurent.hpp"

namespace endochain {

template <class S> using PolyVector = std::vector<LaurentPoly<S>>;

template <class S> class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    {
    }

    static PolyMatrix identity(int n)
    {
        PolyMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = LaurentPoly<S>(S(1));
        return m;
    }
    /* Columns given as vectors; all of length rows. */
    static PolyMatrix from_columns(int rows, const std::vector<PolyVector<S>>& cols)
    {
        PolyMatrix m(rows, static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    LaurentPoly<S>& operator()(int i, int j) { return data_[idx(i, j)]; }
    const LaurentPoly<S>& operator()(int i, int j) const { return data_[idx(i, j)]; }

    PolyVector<S> column(int j) const
    {
        PolyVector<S> v(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) v[static_cast<std::size_t>(i)] = (*this)(i, j);
        return v;
    }

    PolyVector<S> apply(const PolyVector<S>& v) const
    {
        PolyVector<S> out(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                const auto& a = (*this)(i, j);
                const auto& b = v[static_cast<std::size_t>(j)];
                if (!a.is_zero() && !b.is_zero()) out[static_cast<std::size_t>(i)] += a * b;
            }
        return out;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b)
    {
        if (a.cols_ != b.rows_) throw EngineError(ErrorCode::Internal, "matrix shape mismatch in product");
        PolyMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const auto& x = a(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
            }
        return c;
    }
    friend PolyMatrix operator-(const PolyMatrix& a)
    {
        PolyMatrix r = a;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const auto& x) { return x.is_zero(); });
    }
    int min_valuation() const
    {
        int v = kInfiniteValuation;
        for (const auto& x : data_) v = std::min(v, x.valuation());
        return v;
    }

    PolyMatrix submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const
    {
        PolyMatrix m(static_cast<int>(rs.size()), static_cast<int>(cs.size()));
        for (int i = 0; i < m.rows_; ++i)
            for (int j = 0; j < m.cols_; ++j) m(i, j) = (*this)(rs[static_cast<std::size_t>(i)], cs[static_cast<std::size_t>(j)]);
        return m;
    }

    static PolyMatrix hconcat(const PolyMatrix& a, const PolyMatrix& b)
    {
        if (a.rows_ != b.rows_) throw EngineError(ErrorCode::Internal, "hconcat shape mismatch");
        PolyMatrix m(a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
            for (int j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
        }
        return m;
    }
    static PolyMatrix block_diagonal(const PolyMatrix& a, const PolyMatrix& b)
    {
        PolyMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) m(a.rows_ + i, a.cols_ + j) = b(i, j);
        return m;
    }

    void swap_rows(int a, int b)
    {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

  private:
    std::size_t idx(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }

    int rows_ = 0, cols_ = 0;
    std::vector<LaurentPoly<S>> data_;
};

/* Result of fraction-free Gauss-Jordan elimination: reduced = transform * a,
 * with every pivot column of reduced equal to pivot * (unit vector). */
template <class S> struct FFReduction {
    PolyMatrix<S> reduced;
    PolyMatrix<S> transform;
    std::vector<int> pivot_cols;
    LaurentPoly<S> pivot;

    int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/* Bareiss-style Gauss-Jordan over F[t, 1/t]: each step replaces row i by
 * (p*row_i - a_ic*row_r)/prev, which is an exact division. */
template <class S> FFReduction<S> ff_gauss_jordan(PolyMatrix<S> a, bool with_transform = false)
{
    const int m = a.rows(), n = a.cols();
    PolyMatrix<S> u = with_transform ? PolyMatrix<S>::identity(m) : PolyMatrix<S>();
    LaurentPoly<S> prev(S(1));
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int p = -1;
        std::size_t best = 0;
        for (int i = r; i < m; ++i) {
            const auto& x = a(i, c);
            if (x.is_zero()) continue;
            if (p < 0 || x.size() < best) { p = i; best = x.size(); }
        }
        if (p < 0) continue;
        if (p != r) {
            a.swap_rows(p, r);
            if (with_transform) u.swap_rows(p, r);
        }
        const LaurentPoly<S> piv = a(r, c);
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            const LaurentPoly<S> f = a(i, c);
            for (int j = 0; j < n; ++j) {
                if (f.is_zero() && a(i, j).is_zero()) continue;
                LaurentPoly<S> v = piv * a(i, j);
                if (!f.is_zero() && !a(r, j).is_zero()) v -= f * a(r, j);
                a(i, j) = divide_exact(std::move(v), prev);
            }
            if (with_transform)
                for (int j = 0; j < m; ++j) {
                    if (f.is_zero() && u(i, j).is_zero()) continue;
                    LaurentPoly<S> v = piv * u(i, j);
                    if (!f.is_zero() && !u(r, j).is_zero()) v -= f * u(r, j);
                    u(i, j) = divide_exact(std::move(v), prev);
                }
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }
    FFReduction<S> out;
    out.reduced = std::move(a);
    out.transform = std::move(u);
    out.pivot_cols = std::move(pivots);
    out.pivot = prev;
    return out;
}

/* Polynomial basis of the K-kernel of a, as columns. Column j is zero on all
 * free rows except free_rows[j], where it holds diag[j]; so a kernel vector x
 * has coordinates x[free_rows[j]] / diag[j]. */
template <class S> struct KernelBasis {
    PolyMatrix<S> basis;
    std::vector<int> free_rows;
    std::vector<LaurentPoly<S>> diag;

    int dimension() const { return basis.cols(); }
};

template <class S> KernelBasis<S> k_nullspace(const PolyMatrix<S>& a)
{
    const int n = a.cols();
    FFReduction<S> red = ff_gauss_jordan(a);
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int c : red.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = 1;
    KernelBasis<S> kb;
    std::vector<PolyVector<S>> cols;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        PolyVector<S> v(static_cast<std::size_t>(n));
        v[static_cast<std::size_t>(f)] = red.pivot;
        for (int i = 0; i < red.rank(); ++i) v[static_cast<std::size_t>(red.pivot_cols[static_cast<std::size_t>(i)])] = -red.reduced(i, f);
        LaurentPoly<S> g;
        int minv = kInfiniteValuation;
        for (const auto& x : v) {
            if (x.is_zero()) continue;
            g = gcd(g, x);
            minv = std::min(minv, x.valuation());
        }
        for (auto& x : v)
            if (!x.is_zero()) x = divide_exact(x, g).shifted(-minv);
        kb.free_rows.push_back(f);
        kb.diag.push_back(v[static_cast<std::size_t>(f)]);
        cols.push_back(std::move(v));
    }
    kb.basis = PolyMatrix<S>::from_columns(n, cols);
    return kb;
}

} // namespace endochain

#endif
