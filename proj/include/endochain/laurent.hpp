#ifndef ENDOCHAIN_LAURENT_HPP
#define ENDOCHAIN_LAURENT_HPP

#include <algorithm>
#include <climits>
#include <string>
#include <utility>
#include <vector>

#include "endochain/errors.hpp"
#include "endochain/scalar.hpp"

namespace endochain {

/// Valuation of the zero element.
constexpr int kInfiniteValuation = INT_MAX;

/* A Laurent polynomial sum_e c_e t^e with finitely many nonzero c_e. Terms
 * are kept sorted by exponent and zero coefficients are never stored, so the
 * representation is canonical and == is structural. */
template <class S> class LaurentPoly {
  public:
    using Term = std::pair<int, S>;

    LaurentPoly() = default;
    explicit LaurentPoly(const S& c) { if (!Field<S>::is_zero(c)) terms_.emplace_back(0, c); }

    static LaurentPoly monomial(const S& c, int e)
    {
        LaurentPoly r;
        if (!Field<S>::is_zero(c)) r.terms_.emplace_back(e, c);
        return r;
    }
    static LaurentPoly t_power(int e) { return monomial(S(1), e); }

    /* Builds from unsorted terms; equal exponents are summed. */
    static LaurentPoly from_terms(std::vector<Term> ts)
    {
        std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        LaurentPoly r;
        for (auto& [e, c] : ts) {
            if (!r.terms_.empty() && r.terms_.back().first == e)
                r.terms_.back().second += c;
            else
                r.terms_.emplace_back(e, c);
            if (Field<S>::is_zero(r.terms_.back().second)) r.terms_.pop_back();
        }
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    int valuation() const { return terms_.empty() ? kInfiniteValuation : terms_.front().first; }
    int degree() const { return terms_.empty() ? INT_MIN : terms_.back().first; }

    S coeff(int e) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, int x) { return t.first < x; });
        return (it != terms_.end() && it->first == e) ? it->second : S(0);
    }
    S leading_coeff() const { return terms_.back().second; }
    S lowest_coeff() const { return terms_.front().second; }

    /* Multiply by t^k. */
    LaurentPoly shifted(int k) const
    {
        LaurentPoly r = *this;
        for (auto& t : r.terms_) t.first += k;
        return r;
    }
    /* Drop all terms of exponent >= hi. */
    LaurentPoly truncated(int hi) const
    {
        LaurentPoly r;
        for (const auto& t : terms_) {
            if (t.first >= hi) break;
            r.terms_.push_back(t);
        }
        return r;
    }
    /* Terms with exponent in [lo, hi). */
    LaurentPoly slice(int lo, int hi) const
    {
        LaurentPoly r;
        for (const auto& t : terms_)
            if (t.first >= lo && t.first < hi) r.terms_.push_back(t);
        return r;
    }

    LaurentPoly operator-() const
    {
        LaurentPoly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return combine(a, b, false); }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return combine(a, b, true); }
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        const int lo = a.valuation() + b.valuation();
        const int hi = a.degree() + b.degree();
        std::vector<S> acc(static_cast<std::size_t>(hi - lo + 1), S(0));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) acc[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
        LaurentPoly r;
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (!Field<S>::is_zero(acc[i])) r.terms_.emplace_back(lo + static_cast<int>(i), std::move(acc[i]));
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend LaurentPoly operator*(const S& c, const LaurentPoly& a)
    {
        if (Field<S>::is_zero(c)) return {};
        LaurentPoly r = a;
        for (auto& t : r.terms_) t.second = c * t.second;
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b)
    {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
        return true;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /* "c*t^e + ..." in increasing exponent order; "0" for zero. */
    std::string to_string() const
    {
        if (terms_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) s += " + ";
            s += Field<S>::to_string(terms_[i].second) + "*t^" + std::to_string(terms_[i].first);
        }
        return s;
    }

  private:
    static LaurentPoly combine(const LaurentPoly& a, const LaurentPoly& b, bool subtract)
    {
        LaurentPoly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
                r.terms_.emplace_back(b.terms_[j].first, subtract ? -b.terms_[j].second : b.terms_[j].second);
                ++j;
            } else {
                S c = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
                if (!Field<S>::is_zero(c)) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<Term> terms_;
};

/* Elements of K = prod_i F((t_i)), one Laurent polynomial per branch. */
template <class S> using BranchVector = std::vector<LaurentPoly<S>>;

template <class S> LaurentPoly<S> add(const LaurentPoly<S>& a, const LaurentPoly<S>& b) { return a + b; }
template <class S> LaurentPoly<S> mul(const LaurentPoly<S>& a, const LaurentPoly<S>& b) { return a * b; }
template <class S> int valuation(const LaurentPoly<S>& a) { return a.valuation(); }

/* b with a*b = 1 mod t^order and exponents of b in [0, order). */
template <class S> LaurentPoly<S> invert_unit(const LaurentPoly<S>& a, int order)
{
    if (a.valuation() != 0) throw EngineError(ErrorCode::NotAUnit, "series is not a unit", a.to_string());
    if (order <= 0) return {};
    const S c0inv = S(1) / a.lowest_coeff();
    std::vector<S> b(static_cast<std::size_t>(order), S(0));
    b[0] = c0inv;
    for (int n = 1; n < order; ++n) {
        S acc(0);
        for (const auto& [e, c] : a.terms()) {
            if (e == 0) continue;
            if (e > n) break;
            acc += c * b[static_cast<std::size_t>(n - e)];
        }
        b[static_cast<std::size_t>(n)] = -(acc * c0inv);
    }
    std::vector<typename LaurentPoly<S>::Term> ts;
    for (int n = 0; n < order; ++n)
        if (!Field<S>::is_zero(b[static_cast<std::size_t>(n)])) ts.emplace_back(n, b[static_cast<std::size_t>(n)]);
    return LaurentPoly<S>::from_terms(std::move(ts));
}

/* Laurent expansion of a/b, keeping exponents < prec. */
template <class S> LaurentPoly<S> series_quotient(const LaurentPoly<S>& a, const LaurentPoly<S>& b, int prec)
{
    if (b.is_zero()) throw EngineError(ErrorCode::Internal, "series division by zero");
    if (a.is_zero()) return {};
    const int vb = b.valuation();
    const int va = a.valuation();
    const int need = prec + vb - va;
    if (need <= 0) return {};
    LaurentPoly<S> u = b.shifted(-vb);
    LaurentPoly<S> uinv = invert_unit(u, need);
    return (a * uinv).shifted(-vb).truncated(prec);
}

/* a/b when b divides a in F[t, 1/t]; throws otherwise. */
template <class S> LaurentPoly<S> divide_exact(LaurentPoly<S> a, const LaurentPoly<S>& b)
{
    if (b.is_zero()) throw EngineError(ErrorCode::Internal, "exact division by zero");
    if (a.is_zero()) return {};
    const int qlow = a.valuation() - b.valuation();
    const S lead_inv = S(1) / b.leading_coeff();
    std::vector<typename LaurentPoly<S>::Term> q;
    while (!a.is_zero()) {
        const int e = a.degree() - b.degree();
        if (e < qlow) throw EngineError(ErrorCode::Internal, "inexact Laurent division");
        S c = a.leading_coeff() * lead_inv;
        a -= LaurentPoly<S>::monomial(c, e) * b;
        q.emplace_back(e, c);
    }
    return LaurentPoly<S>::from_terms(std::move(q));
}

/* Monic gcd in F[t, 1/t] normalized to valuation 0 (t is a unit there). */
template <class S> LaurentPoly<S> gcd(LaurentPoly<S> a, LaurentPoly<S> b)
{
    if (a.is_zero() && b.is_zero()) return {};
    if (!a.is_zero()) a = a.shifted(-a.valuation());
    if (!b.is_zero()) b = b.shifted(-b.valuation());
    while (!b.is_zero()) {
        // polynomial remainder of a by b, both with valuation 0
        LaurentPoly<S> r = a;
        const S lead_inv = S(1) / b.leading_coeff();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            S c = r.leading_coeff() * lead_inv;
            r -= LaurentPoly<S>::monomial(c, r.degree() - b.degree()) * b;
        }
        if (!r.is_zero()) r = r.shifted(-r.valuation());
        a = std::move(b);
        b = std::move(r);
    }
    return (S(1) / a.leading_coeff()) * a;
}

} // namespace endochain

#endif
