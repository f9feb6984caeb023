#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "qulog/local_tower.hpp"

namespace qulog {

// Element of K = Q(sqrt(-q)) over the integral basis {1, t},
// t = (1 + sqrt(-q))/2, t^2 = t - (1+q)/4.
struct KElem {
    mpq_class c0, c1;

    bool operator==(const KElem&) const = default;
};

// Element of F = Q(alpha), alpha^4 = -q, over the power basis
// {1, alpha, alpha^2, alpha^3} with rational coordinates.
struct FElem {
    std::array<mpq_class, 4> c;

    bool operator==(const FElem&) const = default;
};

// Denominator-scaled Z-basis of the maximal order O_F over the power
// basis, plus the index of O_K[alpha] in O_F at 2 (1 when q = 3 mod 8,
// 2 when q = 7 mod 8).
struct IntegralBasis {
    std::array<std::array<mpq_class, 4>, 4> rows;
    int index_at_2 = 1;           // [O_F : O_K[alpha]]
    long disc_valuation_at_2 = 0; // v_2 of disc of this basis
};

// Exact arithmetic in K and F for one q, plus the embedding into the
// local tower. Immutable after construction; operations are pure.
class NumberField {
public:
    explicit NumberField(long q);

    long q() const { return q_; }
    const mpz_class& n0() const { return n0_; } // (1+q)/4
    const IntegralBasis& integral_basis() const { return basis_; }

    // --- K arithmetic ---
    KElem k_zero() const { return {0, 0}; }
    KElem k_one() const { return {1, 0}; }
    KElem k_sqrt_mq() const { return {-1, 2}; } // sqrt(-q) = 2t - 1
    KElem k_add(const KElem& x, const KElem& y) const;
    KElem k_sub(const KElem& x, const KElem& y) const;
    KElem k_neg(const KElem& x) const;
    KElem k_mul(const KElem& x, const KElem& y) const;
    KElem k_conj(const KElem& x) const; // sqrt(-q) -> -sqrt(-q)
    mpq_class k_norm(const KElem& x) const;
    KElem k_inv(const KElem& x) const;

    // Exact square root in K when it exists.
    std::optional<KElem> exact_sqrt_in_K(const KElem& x) const;

    // --- F arithmetic ---
    FElem f_zero() const;
    FElem f_one() const;
    FElem f_alpha() const;
    FElem from_K(const KElem& x) const; // sqrt(-q) = alpha^2
    FElem f_add(const FElem& x, const FElem& y) const;
    FElem f_sub(const FElem& x, const FElem& y) const;
    FElem f_neg(const FElem& x) const;
    FElem f_mul(const FElem& x, const FElem& y) const;
    FElem f_scale(const mpq_class& s, const FElem& x) const;
    FElem f_conj(const FElem& x) const; // alpha -> -alpha
    FElem f_inv(const FElem& x) const;
    FElem f_pow(const FElem& x, long n) const;

    // Relative norm to K: x * conj(x) = a^2 - b^2 sqrt(-q) for x = a + b*alpha.
    KElem norm_rel(const FElem& x) const;
    // Product over all four complex embeddings.
    mpq_class norm_abs(const FElem& x) const;
    mpq_class norm_abs_K(const KElem& x) const { return k_norm(x); }

    // Assemble gamma = a + b*alpha from K-coordinates.
    FElem gamma_from_ab(const KElem& a, const KElem& b) const;
    // Split x = a + b*alpha into K-parts (a, b).
    std::pair<KElem, KElem> split_ab(const FElem& x) const;

    // Is x in O_F? Decided exactly against the integral basis.
    bool is_integral(const FElem& x) const;
    // Z-coordinates of x over the integral basis (nullopt if not integral).
    std::optional<std::array<mpz_class, 4>> integral_coordinates(const FElem& x) const;

    // --- embeddings ---
    // The two non-conjugate complex embeddings (alpha -> q^(1/4) e^(i pi/4),
    // alpha -> q^(1/4) e^(3 i pi/4)).
    std::array<std::complex<double>, 2> complex_embeddings(const FElem& x) const;
    // max over all four embeddings of log |sigma(x)|.
    double height(const FElem& x) const;

    // Exact -> local. The element must be integral at 2 (odd denominators
    // are fine; 2-power denominators must cancel against the basis, which
    // is checked and throws DomainError otherwise).
    TowerElement embed(const FElem& x, const LocalTower& tower) const;
    TowerElement embed_K(const KElem& x, const LocalTower& tower) const;

    // --- canonical strings ("c0 + c1*a + c2*a^2 + c3*a^3", "c0 + c1*t") ---
    static std::string to_string(const FElem& x);
    static std::string to_string(const KElem& x);
    static std::optional<FElem> parse_F(const std::string& s);
    static std::optional<KElem> parse_K(const std::string& s);

private:
    long q_;
    mpz_class n0_;
    IntegralBasis basis_;
    std::array<std::array<mpq_class, 4>, 4> basis_inv_; // inverse of basis.rows

    void compute_integral_basis();
};

} // namespace qulog
