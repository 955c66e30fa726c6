#ifndef ENDOCHAIN_SCALAR_HPP
#define ENDOCHAIN_SCALAR_HPP

/* Exact coefficient fields.
 *
 * Rational is a GMP-backed rational with expression templates disabled so
 * that it composes with Eigen dense matrices. ModP is a prime-field element
 * which carries its modulus; a modulus of 0 marks a small integer constant
 * (0, 1, -1, ...) that has not yet met an element of a concrete field, which
 * is what lets generic code write S(0) and S(1).
 */

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include "endochain/errors.hpp"

namespace endochain {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

struct FieldSpec {
    enum class Kind { rational, prime };
    Kind kind = Kind::rational;
    std::uint32_t p = 0;

    static FieldSpec rational() { return {}; }
    static FieldSpec prime(std::uint32_t p);

    std::uint32_t characteristic() const { return kind == Kind::rational ? 0 : p; }
    bool operator==(const FieldSpec&) const = default;
};

bool is_prime(std::uint64_t n);

inline FieldSpec FieldSpec::prime(std::uint32_t p)
{
    if (!is_prime(p) || p >= (1u << 31))
        throw EngineError(ErrorCode::SchemaError, "prime field modulus must be a prime below 2^31",
                          std::to_string(p));
    FieldSpec f;
    f.kind = Kind::prime;
    f.p = p;
    return f;
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class ModP {
  public:
    ModP() : p_(ambient()) {}
    ModP(int v) : v_(v), p_(ambient()) { if (p_) v_ = reduce(v_, p_); } // NOLINT: implicit small constants
    ModP(std::int64_t v, std::uint32_t p) : p_(p) { v_ = p ? reduce(v, p) : v; }

    /* Binds small integer constants created on this thread to p while alive. */
    class Scope {
      public:
        explicit Scope(std::uint32_t p) : saved_(ambient()) { ambient() = p; }
        ~Scope() { ambient() = saved_; }
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;

      private:
        std::uint32_t saved_;
    };

    std::uint32_t modulus() const { return p_; }
    std::int64_t value() const { return v_; }

    bool is_zero() const { return v_ == 0; }

    friend ModP operator+(const ModP& a, const ModP& b)
    {
        const std::uint32_t p = join(a, b);
        if (!p) return ModP(a.v_ + b.v_, 0);
        return ModP(a.in(p) + b.in(p), p);
    }
    friend ModP operator-(const ModP& a, const ModP& b)
    {
        const std::uint32_t p = join(a, b);
        if (!p) return ModP(a.v_ - b.v_, 0);
        return ModP(a.in(p) - b.in(p), p);
    }
    friend ModP operator*(const ModP& a, const ModP& b)
    {
        const std::uint32_t p = join(a, b);
        if (!p) return ModP(a.v_ * b.v_, 0);
        return ModP(static_cast<std::int64_t>((static_cast<std::uint64_t>(a.in(p)) *
                                               static_cast<std::uint64_t>(b.in(p))) % p),
                    p);
    }
    friend ModP operator/(const ModP& a, const ModP& b) { return a * b.inverse(); }
    ModP operator-() const { return p_ ? ModP(-v_, p_) : ModP(-v_, 0); }
    ModP& operator+=(const ModP& o) { return *this = *this + o; }
    ModP& operator-=(const ModP& o) { return *this = *this - o; }
    ModP& operator*=(const ModP& o) { return *this = *this * o; }
    ModP& operator/=(const ModP& o) { return *this = *this / o; }

    friend bool operator==(const ModP& a, const ModP& b)
    {
        const std::uint32_t p = join(a, b);
        if (!p) return a.v_ == b.v_;
        return a.in(p) == b.in(p);
    }
    friend bool operator!=(const ModP& a, const ModP& b) { return !(a == b); }

    ModP inverse() const
    {
        if (is_zero()) throw EngineError(ErrorCode::Internal, "division by zero in prime field");
        if (!p_) {
            if (v_ == 1 || v_ == -1) return *this;
            throw EngineError(ErrorCode::Internal, "inverse of an unbound integer constant");
        }
        std::uint64_t base = static_cast<std::uint64_t>(v_), e = p_ - 2, r = 1;
        while (e) {
            if (e & 1) r = r * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return ModP(static_cast<std::int64_t>(r), p_);
    }

    std::string to_string() const { return std::to_string(v_); }
    friend std::ostream& operator<<(std::ostream& os, const ModP& x) { return os << x.v_; }

  private:
    static std::uint32_t& ambient()
    {
        thread_local std::uint32_t p = 0;
        return p;
    }
    static std::int64_t reduce(std::int64_t v, std::uint32_t p)
    {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        return r < 0 ? r + p : r;
    }
    static std::uint32_t join(const ModP& a, const ModP& b)
    {
        if (a.p_ && b.p_ && a.p_ != b.p_)
            throw EngineError(ErrorCode::Internal, "mixing elements of different prime fields");
        return a.p_ ? a.p_ : b.p_;
    }
    std::int64_t in(std::uint32_t p) const { return p_ == p ? v_ : reduce(v_, p); }

    std::int64_t v_ = 0;
    std::uint32_t p_ = 0;
};

/* Field operations that the generic code needs beyond + - * /. */
template <class S> struct Field;

template <> struct Field<Rational> {
    static bool is_zero(const Rational& x) { return mpq_sgn(x.backend().data()) == 0; }
    static std::string to_string(const Rational& x) { return x.str(); }
    static Rational parse(const std::string& s, const FieldSpec&)
    {
        Rational r;
        try {
            r = Rational(s);
        } catch (const std::exception&) {
            throw EngineError(ErrorCode::SchemaError, "malformed rational coefficient", s);
        }
        // the string constructor keeps "2/4" as written
        if (mpz_sgn(mpq_denref(r.backend().data())) == 0)
            throw EngineError(ErrorCode::SchemaError, "zero denominator", s);
        mpq_canonicalize(r.backend().data());
        return r;
    }
    static Rational from_int(std::int64_t v, const FieldSpec&) { return Rational(v); }
};

template <> struct Field<ModP> {
    static bool is_zero(const ModP& x) { return x.is_zero(); }
    static std::string to_string(const ModP& x) { return x.to_string(); }
    static ModP parse(const std::string& s, const FieldSpec& f)
    {
        Rational r;
        try {
            r = Rational(s);
        } catch (const std::exception&) {
            throw EngineError(ErrorCode::SchemaError, "malformed coefficient", s);
        }
        const BigInt p(f.p);
        BigInt num = boost::multiprecision::numerator(r) % p;
        BigInt den = boost::multiprecision::denominator(r) % p;
        if (den == 0) throw EngineError(ErrorCode::SchemaError, "coefficient denominator divisible by p", s);
        ModP n(static_cast<std::int64_t>(num), f.p), d(static_cast<std::int64_t>(den), f.p);
        return n / d;
    }
    static ModP from_int(std::int64_t v, const FieldSpec& f) { return ModP(v, f.p); }
};

/* Makes S(0), S(1), ... elements of the given field for the current thread. */
template <class S> struct FieldScope {
    explicit FieldScope(const FieldSpec&) {}
};
template <> struct FieldScope<ModP> {
    explicit FieldScope(const FieldSpec& f) : scope(f.p) {}
    ModP::Scope scope;
};

} // namespace endochain

namespace Eigen {
template <> struct NumTraits<endochain::ModP> : GenericNumTraits<endochain::ModP> {
    using Real = endochain::ModP;
    using NonInteger = endochain::ModP;
    using Nested = endochain::ModP;
    using Literal = endochain::ModP;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static inline int digits10() { return 0; }
    static inline endochain::ModP epsilon() { return endochain::ModP(0); }
    static inline endochain::ModP dummy_precision() { return endochain::ModP(0); }
};
} // namespace Eigen

#endif
