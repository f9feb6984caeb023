#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>

#include "qulog/dyadic.hpp"
#include "qulog/errors.hpp"

namespace qulog {

enum class CaseTag { q3mod8, q7mod16, q15mod16 };

const char* to_string(CaseTag tag);
CaseTag case_tag_of(long q); // q = 3 mod 4 prime

// An element of the local quartic field, written c0 + c1*alpha over the
// base completion, alpha^2 = sqrt(-q). Base coordinates are themselves
// pairs (b0, b1) over {1, theta}:
//   q = 3 mod 8: base is the unramified quadratic Q_2(sqrt(-q)),
//                theta = (1 + sqrt(-q))/2, theta^2 = theta - (1+q)/4,
//                so each coordinate is b0 + b1*theta;
//   q = 7 mod 8: base is Q_2 itself and b1 is identically zero.
// All residues live mod 2^work_bits of the owning tower. `prec` is the
// certified absolute precision in bits of 2 (kExactBits for exact values
// such as embeddings of global integers).
struct TowerElement {
    mpz_class c[4]; // {c0.b0, c0.b1, c1.b0, c1.b1}
    long prec = 0;

    static constexpr long kExactBits = 1L << 40;
};

// The completion tower at the ramified prime above 2. Ramification index
// over Q_2 is 2 and ord is normalized so ord(alpha - 1) = 1, ord(2) = 2.
// The residue field is F_4 exactly when q = 3 mod 8.
class LocalTower {
public:
    LocalTower(long q, long precision_bits);

    long q() const { return q_; }
    CaseTag case_tag() const { return tag_; }
    long precision_bits() const { return prec_; }
    long work_bits() const { return work_; }
    const mpz_class& modulus() const { return mod_; } // 2^work_bits

    // The chosen sqrt(-q) of the base field. For q = 7 mod 8 this is the
    // 2-adic integer with the fixed residue convention (3 mod 8 when
    // q = 7 mod 16, 7 mod 8 when q = 15 mod 16); for q = 3 mod 8 it is
    // 2*theta - 1.
    TowerElement sqrt_mq() const;
    // Numeric sqrt(-q) in Z_2 (only for q = 7 mod 8).
    const mpz_class& sqrt_mq_numeric() const;

    TowerElement zero() const;
    TowerElement one() const;
    TowerElement from_integer(const mpz_class& n) const;
    TowerElement alpha() const;      // alpha^2 = sqrt(-q), a unit
    TowerElement uniformizer() const; // alpha - 1, ord exactly 1

    TowerElement add(const TowerElement& x, const TowerElement& y) const;
    TowerElement sub(const TowerElement& x, const TowerElement& y) const;
    TowerElement neg(const TowerElement& x) const;
    TowerElement mul(const TowerElement& x, const TowerElement& y) const;
    TowerElement inv(const TowerElement& x) const; // x a unit
    TowerElement pow(const TowerElement& x, unsigned long n) const;

    // Galois conjugate over the base: alpha -> -alpha.
    TowerElement conj(const TowerElement& x) const;
    // x * conj(x); the result has zero alpha-part (a base-field element).
    TowerElement local_norm(const TowerElement& x) const;

    // Certified ord with ord(alpha-1) = 1. nullopt means exactly zero.
    // Throws PrecisionExhausted when all digits visible at the certified
    // precision vanish but the element is not exact.
    std::optional<long> ord(const TowerElement& x) const;

    // 2-adic logarithm of w = 1 mod P, computed through w^4 (whose
    // argument has ord > 2, so the series converges) and divided by 4.
    // Throws DomainError if ord(w - 1) < 1.
    TowerElement log(const TowerElement& w) const;

    // Logarithm of an arbitrary unit: cubes first when the residue field
    // is F_4 (killing the residue torsion), then divides by 3.
    TowerElement log_unit(const TowerElement& u) const;

    // Exponential series; requires ord(x) >= 3 (DomainError otherwise).
    TowerElement exp(const TowerElement& x) const;

    // True iff -1 is a square in the local field. Decided by exhausting
    // residues mod P^5 and certifying any hit via Hensel's lemma.
    bool contains_sqrt_minus1() const;
    // The lifted square root of -1 (normalized to be = 1 mod P), when it exists.
    std::optional<TowerElement> sqrt_minus1() const;

    // Z_2-coordinates of an integral element over the O-basis
    // {1, theta, alpha, theta*alpha} (second and fourth vanish for
    // q = 7 mod 8), as residues mod 2^work_bits.
    std::array<mpz_class, 4> coordinates(const TowerElement& x) const;

private:
    long q_;
    CaseTag tag_;
    long prec_;  // requested certified precision
    long work_;  // working precision with headroom
    mpz_class mod_;
    mpz_class n0_; // (1+q)/4, the theta relation constant (q = 3 mod 8)
    mpz_class s_;  // numeric sqrt(-q) (q = 7 mod 8)

    // base-field helpers; elements are coordinate pairs over {1, theta}
    void bmul(const mpz_class& a0, const mpz_class& a1,
              const mpz_class& b0, const mpz_class& b1,
              mpz_class& r0, mpz_class& r1) const;
    void binv(const mpz_class& a0, const mpz_class& a1,
              mpz_class& r0, mpz_class& r1) const;
    long bord(const mpz_class& a0, const mpz_class& a1, long cap) const;

    TowerElement log_principal(const TowerElement& w) const; // ord(w-1) >= 1
};

} // namespace qulog
