#pragma once

#include <chrono>
#include <optional>
#include <variant>

#include "qulog/class_group.hpp"
#include "qulog/number_field.hpp"

namespace qulog {

enum class Provenance { builtin_search, imported };

// The verifiable object everything downstream consumes:
//   norm_rel(gamma) = sign_of_norm * pi      (when gamma is present)
//   eta * pi = gamma^2, norm_rel(eta) = 1, eta integral,
//   embed(eta) = 1 mod P (after torsion normalization for q = 3).
// parity_verified is true only for the gamma route, which guarantees eta
// is an odd power of the fundamental unit times a root of unity.
struct UnitCertificate {
    long q = 0;
    unsigned long m = 0;
    KElem pi;
    std::optional<FElem> gamma;
    FElem eta;
    int sign_of_norm = 0; // +1 or -1; 0 when gamma is absent
    Provenance provenance = Provenance::builtin_search;
    bool parity_verified = false;
};

struct NotFound {
    double height_bound = 0; // the bound that was exhausted
};

// Solve N_{F/K}(gamma) = +-pi exactly for gamma = a + b*alpha with a, b in
// O_K (half-integral coordinates allowed when q = 7 mod 8, where
// [O_F : O_K[alpha]] = 2). Enumerates b over the complex-embedding
// ellipse |sigma(b)| <= e^height_bound / q^(1/4), with mod-8 square-class
// and small-prime quadratic-residue sieves ahead of the exact
// perfect-square test of N_K(+-pi + sqrt(-q) b^2). Returns the solution
// of smallest height (deterministic tie-breaking), or NotFound.
std::variant<UnitCertificate, NotFound>
solve_gamma(const NumberField& field, const LocalTower& tower,
            unsigned long m, const KElem& pi, double height_bound);

// Completes the certificate: eta = gamma^2 / pi, exactness checks (norm 1,
// integrality), and the congruence eta = 1 mod P. For q = 3 the six
// torsion units are tried in a fixed order until the congruence holds.
// Throws InvariantViolation on any exact identity failure.
UnitCertificate eta_from_gamma(const NumberField& field, const LocalTower& tower,
                               UnitCertificate partial);

// Test oracle: enumerate integral elements inside the complex-embedding
// box of the given height bound and return the non-torsion unit of
// minimal positive height. Exponential in the regulator; small q only.
std::optional<FElem> bruteforce_fundamental_unit(const NumberField& field,
                                                 double height_bound);

// Express u = torsion * eta0^k exactly, k located by the float ratio of
// log-heights and then verified with exact arithmetic. nullopt when no
// nearby k works (caller escalates float precision or gives up).
struct PowerExpression {
    long k = 0;
    FElem torsion;
};
std::optional<PowerExpression> express_power(const NumberField& field,
                                             const FElem& u, const FElem& eta0);

// The global roots of unity of F: {+-1}, plus the six sixth roots for q = 3.
std::vector<FElem> torsion_units(const NumberField& field);

} // namespace qulog
