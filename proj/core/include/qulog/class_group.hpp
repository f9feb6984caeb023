#pragma once

#include <gmpxx.h>

#include <vector>

#include "qulog/number_field.hpp"

namespace qulog {

// Reduced binary quadratic form (A, B, C) of discriminant B^2 - 4AC = -q,
// representing an ideal class of K. Reduced means |B| <= A <= C with
// B >= 0 when |B| = A or A = C.
struct FormClass {
    mpz_class A, B, C;

    bool operator==(const FormClass&) const = default;
};

FormClass principal_form(long q);
FormClass reduce_form(FormClass f);
FormClass form_inverse(const FormClass& f);

// All reduced forms of discriminant -q; the class number is the length.
std::vector<FormClass> reduced_forms(long q);

// Gauss composition (Dirichlet's method), reduced.
FormClass compose(const FormClass& f, const FormClass& g);
FormClass form_pow(const FormClass& f, unsigned long n, long q);

// Order of a class in the form class group.
unsigned long class_order(const FormClass& f, long q);

// The class of the prime above 2 when 2 splits (q = 7 mod 8 only;
// DomainError when q = 3 mod 8, where 2 is inert and 2 O_K is already
// principal). The sign of B is fixed by the tower's sqrt(-q) convention
// so that the form represents the prime whose completion is the chosen one.
FormClass class_of_p2(long q, const LocalTower& tower);

// Minimal odd exponent m with p^m principal: 1 when q = 3 mod 8, else the
// order of class_of_p2 (odd, since the class number is odd).
unsigned long odd_generator_exponent(long q, const LocalTower& tower);

// Exact pi in O_K generating p^m. In the split case N(pi) = 2^m and the
// tower valuation ord(pi) = 2m picks p rather than its conjugate; found
// by bounded search on the norm form x^2 + xy + ((1+q)/4) y^2 = 2^m and
// normalized up to sign. For q = 3 mod 8 (p = 2 O_K inert, norm 4)
// returns pi = 2 directly.
KElem generator_of_p_power(long q, unsigned long m,
                           const NumberField& field, const LocalTower& tower);

} // namespace qulog
