#include <doctest.h>

#include <cmath>

#include "qulog/certificate.hpp"
#include "qulog/unit_engine.hpp"

using namespace qulog;

namespace {

struct Frozen {
    long q;
    unsigned long m;
    const char* pi;
    const char* gamma;
    const char* eta;
    int sign;
};

// Deterministic outputs of the search, pinned for regression. Their
// correctness is established independently below: the exact identities
// norm(gamma) = sign*pi and eta*pi = gamma^2 are rechecked here, and for
// small q the unit is matched against the brute-force oracle.
const Frozen kFrozen[] = {
    {3, 1, "2 + 0*t", "1/2 + -1/2*a + -1/2*a^2 + 1/2*a^3",
     "1/2 + 1/2*a + -1/2*a^2 + 1/2*a^3", -1},
    {7, 1, "0 + -1*t", "1/4 + 1/4*a + 1/4*a^2 + 1/4*a^3",
     "3/4 + -1/4*a + -1/4*a^2 + -1/4*a^3", -1},
    {11, 1, "2 + 0*t", "5/2 + -1/2*a + -1/2*a^2 + 1/2*a^3",
     "9/2 + 3/2*a + -5/2*a^2 + 3/2*a^3", -1},
    {19, 1, "2 + 0*t", "45/2 + 61/2*a + 31/2*a^2 + 7/2*a^3",
     "-8115/2 + -689/2*a + 1395/2*a^2 + 1103/2*a^3", -1},
    {23, 3, "2 + -1*t", "1/4 + 5/4*a + -3/4*a^2 + 1/4*a^3",
     "-19/4 + 17/4*a + -7/4*a^2 + 1/4*a^3", +1},
    {31, 3, "0 + -1*t", "39/2 + 5*a + -13/2*a^2 + 3*a^3",
     "2199/2 + -377/2*a + -169/2*a^2 + 169/2*a^3", -1},
    {43, 1, "2 + 0*t", "4569/2 + -1861/2*a + 331/2*a^2 + 101/2*a^3",
     "8082321/2 + -4970221/2*a + 1512339/2*a^2 + -77261/2*a^3", -1},
    {47, 5, "-4 + -1*t", "8199/2 + -610*a + -537/2*a^2 + 234*a^3",
     "-1080673/2 + -3553413/2*a + 2076903/2*a^2 + -603459/2*a^3", -1},
};

UnitCertificate run_search(long q, double extra_height = 0.5) {
    NumberField N(q);
    LocalTower T(q, 128);
    unsigned long m = odd_generator_exponent(q, T);
    KElem pi = generator_of_p_power(q, m, N, T);
    const Frozen* fr = nullptr;
    for (const auto& f : kFrozen)
        if (f.q == q) fr = &f;
    REQUIRE(fr != nullptr);
    double H = N.height(*NumberField::parse_F(fr->gamma)) + extra_height;
    auto res = solve_gamma(N, T, m, pi, H);
    REQUIRE(std::holds_alternative<UnitCertificate>(res));
    return eta_from_gamma(N, T, std::get<UnitCertificate>(res));
}

} // namespace

TEST_CASE("search reproduces the pinned certificates and their exact identities") {
    for (const auto& fr : kFrozen) {
        CAPTURE(fr.q);
        NumberField N(fr.q);
        LocalTower T(fr.q, 128);
        UnitCertificate cert = run_search(fr.q);

        CHECK(cert.m == fr.m);
        CHECK(NumberField::to_string(cert.pi) == fr.pi);
        REQUIRE(cert.gamma.has_value());
        CHECK(NumberField::to_string(*cert.gamma) == fr.gamma);
        CHECK(NumberField::to_string(cert.eta) == fr.eta);
        CHECK(cert.sign_of_norm == fr.sign);
        CHECK(cert.parity_verified);

        // exact identities, independent of how the search got here
        FElem pif = N.from_K(cert.pi);
        KElem nll = N.norm_rel(*cert.gamma);
        CHECK(nll == (fr.sign > 0 ? cert.pi : N.k_neg(cert.pi)));
        CHECK(N.f_mul(cert.eta, pif) == N.f_mul(*cert.gamma, *cert.gamma));
        CHECK(N.norm_rel(cert.eta) == N.k_one());
        CHECK(N.is_integral(cert.eta));
        CHECK(N.is_integral(*cert.gamma));
        CHECK(abs(N.norm_abs(cert.eta)) == 1);

        // eta = 1 mod P
        auto o = T.ord(T.sub(N.embed(cert.eta, T), T.one()));
        REQUIRE(o.has_value());
        CHECK(*o >= 1);
    }
}

TEST_CASE("sign of the relative norm is -1 in the inert case") {
    for (long q : {3L, 11L, 19L, 43L}) {
        UnitCertificate cert = run_search(q);
        CAPTURE(q);
        CHECK(cert.sign_of_norm == -1);
    }
}

TEST_CASE("an exhausted height bound reports NotFound with the bound") {
    NumberField N(19);
    LocalTower T(19, 128);
    KElem pi = generator_of_p_power(19, 1, N, T);
    auto res = solve_gamma(N, T, 1, pi, 0.25);
    REQUIRE(std::holds_alternative<NotFound>(res));
    CHECK(std::get<NotFound>(res).height_bound == 0.25);
}

TEST_CASE("torsion units") {
    NumberField N7(7);
    auto t7 = torsion_units(N7);
    CHECK(t7.size() == 2);

    NumberField N3(3);
    auto t3 = torsion_units(N3);
    CHECK(t3.size() == 6);
    for (const FElem& u : t3) {
        CHECK(N3.f_pow(u, 6) == N3.f_one());
        CHECK(abs(N3.norm_abs(u)) == 1);
        CHECK(N3.height(u) < 1e-9);
        CHECK(N3.is_integral(u));
    }
    // all distinct
    for (size_t i = 0; i < t3.size(); ++i)
        for (size_t j = i + 1; j < t3.size(); ++j) CHECK_FALSE(t3[i] == t3[j]);
}

TEST_CASE("brute-force unit oracle agrees: eta is an odd power of the fundamental unit") {
    for (long q : {3L, 7L, 11L}) {
        CAPTURE(q);
        NumberField N(q);
        UnitCertificate cert = run_search(q);
        auto eta0 = bruteforce_fundamental_unit(N, N.height(cert.eta) + 0.2);
        REQUIRE(eta0.has_value());
        CHECK(abs(N.norm_abs(*eta0)) == 1);
        CHECK(N.is_integral(*eta0));
        CHECK(N.height(*eta0) > 1e-9);

        auto expr = express_power(N, cert.eta, *eta0);
        REQUIRE(expr.has_value());
        CHECK(expr->k % 2 != 0); // odd power: the parity claim
        // and the expression is exact
        FElem check = N.f_mul(expr->torsion, N.f_pow(*eta0, expr->k));
        CHECK(check == cert.eta);
    }
}

TEST_CASE("q = 3: certificate unit matches the closed-form unit up to torsion and odd power") {
    NumberField N(3);
    UnitCertificate cert = run_search(3);
    // (sqrt(-3) + 1)/2 - alpha, written over {1, t}
    FElem closed = N.f_sub(N.from_K({0, 1}), N.f_alpha());
    CHECK(abs(N.norm_abs(closed)) == 1);
    auto expr = express_power(N, cert.eta, closed);
    REQUIRE(expr.has_value());
    CHECK(expr->k % 2 != 0);
    CHECK(N.f_mul(expr->torsion, N.f_pow(closed, expr->k)) == cert.eta);

    // and the closed-form unit reproduces ord(log eta) = 0
    LocalTower T(3, 128);
    auto ol = T.ord(T.log_unit(N.embed(closed, T)));
    REQUIRE(ol.has_value());
    CHECK(*ol == 0);
}

TEST_CASE("express_power identifies plain torsion and rejects strangers") {
    NumberField N(11);
    UnitCertificate cert = run_search(11);
    auto expr = express_power(N, N.f_neg(N.f_one()), cert.eta);
    REQUIRE(expr.has_value());
    CHECK(expr->k == 0);
    CHECK(expr->torsion == N.f_neg(N.f_one()));

    // eta^3 is an exact odd power
    auto e3 = express_power(N, N.f_pow(cert.eta, 3), cert.eta);
    REQUIRE(e3.has_value());
    CHECK(e3->k == 3);

    // alpha is not a unit power of eta at all
    CHECK_FALSE(express_power(N, N.f_alpha(), cert.eta).has_value());
}
