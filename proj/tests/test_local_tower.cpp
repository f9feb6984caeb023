#include <doctest.h>

#include <random>

#include "qulog/local_tower.hpp"

using namespace qulog;

namespace {

TowerElement random_element(const LocalTower& T, std::mt19937_64& rng) {
    TowerElement x = T.zero();
    x.prec = TowerElement::kExactBits;
    bool quartic_base = T.case_tag() == CaseTag::q3mod8;
    for (int i = 0; i < 4; ++i) {
        if (!quartic_base && (i == 1 || i == 3)) continue;
        x.c[i] = mpz_class(rng()) % T.modulus();
    }
    return x;
}

// x and y agree at least to ord-level `bits` (indistinguishable counts)
bool agree(const LocalTower& T, const TowerElement& x, const TowerElement& y, long bits) {
    TowerElement d = T.sub(x, y);
    try {
        auto o = T.ord(d);
        return !o || *o >= bits;
    } catch (const PrecisionExhausted&) {
        return true;
    }
}

} // namespace

TEST_CASE("uniformizer, 2, and alpha have the advertised orders") {
    for (long q : {7L, 11L, 23L, 31L, 47L}) {
        LocalTower T(q, 128);
        CAPTURE(q);
        CHECK(T.ord(T.uniformizer()) == 1);
        CHECK(T.ord(T.from_integer(2)) == 2);
        CHECK(T.ord(T.alpha()) == 0);
        CHECK(T.ord(T.sqrt_mq()) == 0);
        CHECK(T.ord(T.one()) == 0);
        CHECK_FALSE(T.ord(T.zero()).has_value()); // exact zero
        // alpha^2 = sqrt(-q) and alpha^4 = -q
        CHECK(agree(T, T.mul(T.alpha(), T.alpha()), T.sqrt_mq(), 200));
        CHECK(agree(T, T.pow(T.alpha(), 4), T.from_integer(-q), 200));
    }
}

TEST_CASE("sqrt(-q) residue convention") {
    LocalTower t7(7, 128);   // 7 = 7 mod 16
    CHECK(t7.sqrt_mq_numeric() % 8 == 3);
    LocalTower t23(23, 128); // 23 = 7 mod 16
    CHECK(t23.sqrt_mq_numeric() % 8 == 3);
    LocalTower t31(31, 128); // 31 = 15 mod 16
    CHECK(t31.sqrt_mq_numeric() % 8 == 7);
    LocalTower t47(47, 128);
    CHECK(t47.sqrt_mq_numeric() % 8 == 7);
}

TEST_CASE("ord is additive on products") {
    std::mt19937_64 rng(0xA11CE);
    for (long q : {7L, 11L, 31L}) {
        LocalTower T(q, 128);
        for (int i = 0; i < 333; ++i) {
            TowerElement x = random_element(T, rng);
            TowerElement y = random_element(T, rng);
            auto ox = T.ord(x), oy = T.ord(y);
            if (!ox || !oy) continue;
            auto oxy = T.ord(T.mul(x, y));
            CAPTURE(q);
            REQUIRE(oxy.has_value());
            CHECK(*oxy == *ox + *oy);
        }
    }
}

TEST_CASE("conjugation, norm, inverse") {
    std::mt19937_64 rng(0xBEEF);
    for (long q : {7L, 11L, 47L}) {
        LocalTower T(q, 128);
        for (int i = 0; i < 50; ++i) {
            TowerElement x = random_element(T, rng);
            auto ox = T.ord(x);
            if (!ox) continue;
            // conj is an involution fixing the base field
            CHECK(agree(T, T.conj(T.conj(x)), x, 250));
            // the norm lands in the base field: no alpha part
            TowerElement n = T.local_norm(x);
            CHECK(n.c[2] == 0);
            CHECK(n.c[3] == 0);
            if (*ox == 0) {
                CHECK(agree(T, T.mul(x, T.inv(x)), T.one(), 200));
            }
        }
    }
}

TEST_CASE("logarithm is additive and preserves ord above the bound") {
    std::mt19937_64 rng(0x10C);
    for (long q : {7L, 11L, 31L}) {
        LocalTower T(q, 128);
        TowerElement pi3 = T.pow(T.uniformizer(), 3);
        for (int i = 0; i < 40; ++i) {
            TowerElement w1 = T.add(T.one(), T.mul(T.uniformizer(), random_element(T, rng)));
            TowerElement w2 = T.add(T.one(), T.mul(T.uniformizer(), random_element(T, rng)));
            CAPTURE(q);
            CHECK(agree(T, T.log(T.mul(w1, w2)), T.add(T.log(w1), T.log(w2)), 128));
            CHECK(agree(T, T.log(T.mul(w1, w1)), T.add(T.log(w1), T.log(w1)), 128));

            // above the convergence bound, log preserves the valuation
            TowerElement w = T.add(T.one(), T.mul(pi3, random_element(T, rng)));
            auto ow = T.ord(T.sub(w, T.one()));
            if (!ow) continue;
            auto ol = T.ord(T.log(w));
            REQUIRE(ol.has_value());
            CHECK(*ol == *ow);
        }
    }
}

TEST_CASE("log(-1) vanishes and log rejects arguments outside 1 + P") {
    LocalTower T(7, 128);
    TowerElement m1 = T.from_integer(-1);
    TowerElement l = T.log(m1);
    CHECK_FALSE(T.ord(l).has_value()); // exactly zero
    CHECK_THROWS_AS((void)T.log(T.from_integer(2)), DomainError);

    // alpha = 1 + (alpha - 1) is a legitimate argument
    CHECK_NOTHROW((void)T.log(T.alpha()));

    // over the F_4 residue field, theta is a unit with residue != 1
    LocalTower S(11, 128);
    TowerElement theta = S.zero();
    theta.c[1] = 1;
    theta.prec = TowerElement::kExactBits;
    CHECK_THROWS_AS((void)S.log(theta), DomainError);
    // but log_unit accepts it: theta^3 = 1 mod P
    CHECK_NOTHROW((void)S.log_unit(theta));
}

TEST_CASE("log_unit kills residue torsion and extends log") {
    std::mt19937_64 rng(0x5EED);
    for (long q : {7L, 11L}) {
        LocalTower T(q, 128);
        for (int i = 0; i < 30; ++i) {
            TowerElement u = random_element(T, rng);
            auto ou = T.ord(u);
            if (!ou || *ou != 0) continue;
            // log_unit agrees with log on 1 + P
            TowerElement w = T.add(T.one(), T.mul(T.uniformizer(), u));
            CHECK(agree(T, T.log_unit(w), T.log(w), 128));
            // log_unit(u^2) = 2 log_unit(u) for any unit
            CHECK(agree(T, T.log_unit(T.mul(u, u)), T.add(T.log_unit(u), T.log_unit(u)), 128));
        }
    }
}

TEST_CASE("exp and log are mutually inverse above the bound") {
    std::mt19937_64 rng(0xE4D);
    for (long q : {7L, 11L, 47L}) {
        LocalTower T(q, 128);
        TowerElement pi3 = T.pow(T.uniformizer(), 3);
        for (int i = 0; i < 30; ++i) {
            TowerElement x = T.mul(pi3, random_element(T, rng));
            auto ox = T.ord(x);
            if (!ox) continue;
            CAPTURE(q);
            CHECK(agree(T, T.log(T.exp(x)), x, 128));

            TowerElement w = T.add(T.one(), T.mul(pi3, random_element(T, rng)));
            CHECK(agree(T, T.exp(T.log(w)), w, 128));
        }
    }
}

TEST_CASE("exp rejects arguments below the convergence bound") {
    LocalTower T(7, 128);
    CHECK_THROWS_AS((void)T.exp(T.uniformizer()), DomainError);
    CHECK_THROWS_AS((void)T.exp(T.from_integer(2)), DomainError); // ord 2 is not enough
}

TEST_CASE("sqrt(-1) exists locally exactly for q = 15 mod 16") {
    CHECK_FALSE(LocalTower(3, 96).contains_sqrt_minus1());
    CHECK_FALSE(LocalTower(7, 96).contains_sqrt_minus1());
    CHECK_FALSE(LocalTower(11, 96).contains_sqrt_minus1());
    CHECK_FALSE(LocalTower(19, 96).contains_sqrt_minus1());
    CHECK_FALSE(LocalTower(23, 96).contains_sqrt_minus1());
    CHECK(LocalTower(31, 96).contains_sqrt_minus1());
    CHECK(LocalTower(47, 96).contains_sqrt_minus1());
    CHECK(LocalTower(79, 96).contains_sqrt_minus1());

    for (long q : {31L, 47L}) {
        LocalTower T(q, 128);
        auto i = T.sqrt_minus1();
        REQUIRE(i.has_value());
        CHECK(agree(T, T.mul(*i, *i), T.from_integer(-1), 200));
        // normalized into 1 + P
        auto o = T.ord(T.sub(*i, T.one()));
        REQUIRE(o.has_value());
        CHECK(*o >= 1);
    }
}

TEST_CASE("integral coordinates over the order basis") {
    LocalTower T(11, 128);
    auto ca = T.coordinates(T.alpha());
    CHECK(ca[0] == 0);
    CHECK(ca[1] == 0);
    CHECK(ca[2] == 1);
    CHECK(ca[3] == 0);
    // sqrt(-q) = -1 + 2 theta
    auto cs = T.coordinates(T.sqrt_mq());
    CHECK(cs[0] == T.modulus() - 1);
    CHECK(cs[1] == 2);

    LocalTower S(7, 128);
    auto c1 = S.coordinates(S.from_integer(5));
    CHECK(c1[0] == 5);
    CHECK(c1[1] == 0);
    CHECK(c1[3] == 0);
}

TEST_CASE("pow matches repeated multiplication") {
    std::mt19937_64 rng(0x9090);
    LocalTower T(31, 128);
    TowerElement x = random_element(T, rng);
    TowerElement acc = T.one();
    for (unsigned long n = 0; n < 8; ++n) {
        CHECK(agree(T, T.pow(x, n), acc, 300));
        acc = T.mul(acc, x);
    }
}
