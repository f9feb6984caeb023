#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "qulog/errors.hpp"

namespace qulog {

// A 2-adic number with tracked absolute precision: the value is known
// modulo 2^precision. Stored as 2^val * unit with unit odd; `unit` is a
// residue mod 2^(precision - val). Exact zero has infinite valuation.
//
// Precision propagates pessimistically: additive operations keep the
// minimum absolute precision of the operands, multiplicative ones the
// minimum relative precision.
class Dyadic {
public:
    static constexpr long kExact = 1L << 40; // sentinel: value known exactly

    Dyadic() : val_(0), unit_(0), prec_(0), zero_(true) {}

    static Dyadic exact_zero();
    static Dyadic from_integer(const mpz_class& n, long precision_bits);
    // Requires an odd denominator (2-adic integrality is the caller's business).
    static Dyadic from_rational(const mpq_class& x, long precision_bits);
    // Value 2^val * unit given directly; unit must be odd unless zero.
    static Dyadic from_parts(long val, mpz_class unit, long precision_bits);

    bool is_exact_zero() const { return zero_; }
    // True when no nonzero digit is visible: exact zero, or all digits
    // below the precision horizon vanish.
    bool is_zero_at_precision() const { return zero_ || val_ >= prec_; }

    // Certified valuation. Throws PrecisionExhausted when every visible
    // digit is zero but the value is not known to be exactly zero.
    long valuation() const;

    // Odd unit part as a residue mod 2^(precision - valuation).
    const mpz_class& unit_part() const { return unit_; }
    long precision() const { return prec_; }

    // Residue of the full value mod 2^k (k <= precision).
    mpz_class residue(long k) const;

    Dyadic operator-() const;
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator/(const Dyadic& a, const Dyadic& b);

    // a == b as far as both precisions can see, i.e. v(a-b) >= k.
    bool equal_at_precision(const Dyadic& b, long k) const;

private:
    long val_;       // 2-adic valuation (meaningless when zero_)
    mpz_class unit_; // odd residue mod 2^(prec_ - val_)
    long prec_;      // absolute precision in bits; kExact = exact value
    bool zero_;      // exact zero flag

    void normalize();
};

// Square root in Q_2. The input must carry at least 4 bits of relative
// precision. Returns the root whose unit part is the smaller residue
// mod 8 (callers wanting a different sign convention negate). Empty when
// the valuation is odd or the unit part is not 1 mod 8.
std::optional<Dyadic> sqrt_2adic(const Dyadic& a);

// Square root of an exact integer mod 2^k, same conventions; nullopt if
// not a square in Z_2. Convenience used by tower construction.
std::optional<mpz_class> sqrt_2adic_integer(const mpz_class& a, long k);

// Hilbert symbol (a,b)_2 over Q_2 by the closed-form exponent formula:
// (-1)^(eps(u)eps(v) + alpha*omega(v) + beta*omega(u)) for
// a = 2^alpha u, b = 2^beta v, eps(x) = (x-1)/2, omega(x) = (x^2-1)/8 mod 2.
int hilbert_2(const mpq_class& a, const mpq_class& b);

// Tame Hilbert symbol (a,b)_p for odd p:
// (-1)^(alpha*beta*eps(p)) * (u|p)^beta * (v|p)^alpha.
int hilbert_odd(long p, const mpq_class& a, const mpq_class& b);

// Hilbert symbol at the real place: -1 iff both arguments are negative.
int hilbert_infinity(const mpq_class& a, const mpq_class& b);

// Legendre symbol (a|p) for odd prime p.
int legendre(const mpz_class& a, long p);

// Splitting data of x^4 + q over Q_2: one (ramification index, residue
// degree) pair per irreducible factor, sorted with the ramified factor
// first. Decided by the Newton polygon of (x+1)^4 + q together with the
// residual polynomials along its segments.
struct LocalFactorization {
    std::vector<std::pair<int, int>> factors; // (e, f), sum of e*f = 4
};

LocalFactorization factor_quartic_over_Q2(long q);

} // namespace qulog
