#include <doctest.h>

#include <random>

#include "qulog/number_field.hpp"

using namespace qulog;

namespace {

mpq_class rnd_q(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-99, 99);
    const long dens[3] = {1, 3, 5}; // odd denominators stay 2-integral
    mpq_class r(num(rng), dens[rng() % 3]);
    r.canonicalize();
    return r;
}

FElem rnd_f(const NumberField& N, std::mt19937_64& rng) {
    FElem x = N.f_zero();
    for (auto& c : x.c) c = rnd_q(rng);
    return x;
}

KElem rnd_k(std::mt19937_64& rng) {
    return {rnd_q(rng), rnd_q(rng)};
}

// random element of the maximal order: integer combination of basis rows
FElem rnd_integral(const NumberField& N, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> d(-50, 50);
    FElem x = N.f_zero();
    for (const auto& row : N.integral_basis().rows) {
        long k = d(rng);
        for (int j = 0; j < 4; ++j) x.c[j] += k * row[j];
    }
    return x;
}

bool tower_agree(const LocalTower& T, const TowerElement& x, const TowerElement& y, long bits) {
    TowerElement d = T.sub(x, y);
    try {
        auto o = T.ord(d);
        return !o || *o >= bits;
    } catch (const PrecisionExhausted&) {
        return true;
    }
}

mpq_class det4(const std::array<std::array<mpq_class, 4>, 4>& m_in) {
    auto m = m_in;
    mpq_class det = 1;
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < 4; ++r) {
            mpq_class f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

} // namespace

TEST_CASE("field axioms hold on random elements") {
    std::mt19937_64 rng(0xF1E1D);
    for (long q : {7L, 11L, 23L}) {
        NumberField N(q);
        for (int i = 0; i < 200; ++i) {
            FElem x = rnd_f(N, rng), y = rnd_f(N, rng), z = rnd_f(N, rng);
            CHECK(N.f_mul(x, y) == N.f_mul(y, x));
            CHECK(N.f_mul(N.f_mul(x, y), z) == N.f_mul(x, N.f_mul(y, z)));
            CHECK(N.f_mul(x, N.f_add(y, z)) == N.f_add(N.f_mul(x, y), N.f_mul(x, z)));
            CHECK(N.f_conj(N.f_conj(x)) == x);
            if (x != N.f_zero() && N.norm_abs(x) != 0)
                CHECK(N.f_mul(x, N.f_inv(x)) == N.f_one());

            KElem a = rnd_k(rng), b = rnd_k(rng);
            CHECK(N.k_mul(a, b) == N.k_mul(b, a));
            CHECK(N.k_conj(N.k_conj(a)) == a);
            CHECK(N.k_norm(a) == N.k_mul(a, N.k_conj(a)).c0);
            CHECK(N.k_mul(a, N.k_conj(a)).c1 == 0);
            if (N.k_norm(a) != 0) CHECK(N.k_mul(a, N.k_inv(a)) == N.k_one());
        }
    }
}

TEST_CASE("alpha^4 = -q and sqrt(-q) = alpha^2") {
    for (long q : {3L, 7L, 31L}) {
        NumberField N(q);
        FElem a4 = N.f_pow(N.f_alpha(), 4);
        CHECK(a4 == N.f_scale(-q, N.f_one()));
        CHECK(N.from_K(N.k_sqrt_mq()) == N.f_mul(N.f_alpha(), N.f_alpha()));
    }
}

TEST_CASE("relative and absolute norms") {
    std::mt19937_64 rng(0x40414);
    for (long q : {7L, 11L, 47L}) {
        NumberField N(q);
        for (int i = 0; i < 100; ++i) {
            FElem x = rnd_f(N, rng);
            auto [a, b] = N.split_ab(x);
            CHECK(N.gamma_from_ab(a, b) == x);
            // N_{F/K}(a + b alpha) = a^2 - b^2 sqrt(-q)
            KElem expect = N.k_sub(N.k_mul(a, a), N.k_mul(N.k_mul(b, b), N.k_sqrt_mq()));
            CHECK(N.norm_rel(x) == expect);
            // norm tower: N_{F/Q} = N_{K/Q} after N_{F/K}
            CHECK(N.norm_abs(x) == N.k_norm(N.norm_rel(x)));
            FElem y = rnd_f(N, rng);
            CHECK(N.norm_abs(N.f_mul(x, y)) == N.norm_abs(x) * N.norm_abs(y));
        }
    }
}

TEST_CASE("integral basis determinant and discriminant valuation") {
    for (long q : {3L, 7L, 11L, 19L, 23L, 31L, 43L, 47L}) {
        NumberField N(q);
        const auto& B = N.integral_basis();
        CAPTURE(q);

        // index in the power order recovers v2(disc Z[alpha]) = 8
        mpq_class det = det4(B.rows);
        mpq_class adet = abs(det);
        long k = (8 - B.disc_valuation_at_2) / 2;
        CHECK(adet == mpq_class(1, mpz_class(1) << k));

        // disc via the exact trace form: Tr(sum c_i alpha^i) = 4 c_0
        std::array<std::array<mpq_class, 4>, 4> tr;
        for (int i = 0; i < 4; ++i) {
            FElem bi{B.rows[i]};
            for (int j = 0; j < 4; ++j) {
                FElem bj{B.rows[j]};
                tr[i][j] = 4 * N.f_mul(bi, bj).c[0];
            }
        }
        mpq_class disc = det4(tr);
        REQUIRE(disc.get_den() == 1);
        mpz_class dz = disc.get_num();
        long v2 = mpz_scan1(dz.get_mpz_t(), 0);
        CHECK(v2 == B.disc_valuation_at_2);
        mpz_class odd = abs(dz) >> v2;
        CHECK(odd == mpz_class(q) * q * q); // only q ramifies away from 2

        CHECK(B.index_at_2 == ((q % 8 == 3) ? 1 : 2));
    }
}

TEST_CASE("integrality and coordinates") {
    std::mt19937_64 rng(0x1B0B);
    for (long q : {7L, 11L, 31L}) {
        NumberField N(q);
        CHECK(N.is_integral(N.f_one()));
        CHECK(N.is_integral(N.f_alpha()));
        CHECK(N.is_integral(N.from_K({0, 1}))); // theta
        CHECK_FALSE(N.is_integral(N.f_scale(mpq_class(1, 2), N.f_alpha())));
        CHECK_FALSE(N.is_integral(N.f_scale(mpq_class(1, 3), N.f_one())));

        for (int i = 0; i < 100; ++i) {
            FElem x = rnd_integral(N, rng);
            REQUIRE(N.is_integral(x));
            auto co = N.integral_coordinates(x);
            REQUIRE(co.has_value());
            FElem back = N.f_zero();
            for (int r = 0; r < 4; ++r)
                for (int j = 0; j < 4; ++j)
                    back.c[j] += (*co)[r] * N.integral_basis().rows[r][j];
            CHECK(back == x);
            // the order is closed under multiplication
            CHECK(N.is_integral(N.f_mul(x, rnd_integral(N, rng))));
        }
    }
}

TEST_CASE("exact square roots in K") {
    std::mt19937_64 rng(0x5054);
    for (long q : {7L, 11L, 43L}) {
        NumberField N(q);
        for (int i = 0; i < 200; ++i) {
            KElem y = rnd_k(rng);
            KElem sq = N.k_mul(y, y);
            auto r = N.exact_sqrt_in_K(sq);
            REQUIRE(r.has_value());
            CHECK((*r == y || *r == N.k_neg(y)));
        }
        CHECK_FALSE(N.exact_sqrt_in_K({2, 0}).has_value());
        CHECK_FALSE(N.exact_sqrt_in_K({3, 0}).has_value());
        // -q is a square: sqrt(-q) = 2t - 1
        auto s = N.exact_sqrt_in_K({-q, 0});
        REQUIRE(s.has_value());
        CHECK((*s == N.k_sqrt_mq() || *s == N.k_neg(N.k_sqrt_mq())));
    }
}

TEST_CASE("complex embeddings and height") {
    NumberField N(7);
    auto em = N.complex_embeddings(N.f_alpha());
    CHECK(std::abs(std::abs(em[0]) - std::pow(7.0, 0.25)) < 1e-12);
    CHECK(std::abs(std::abs(em[1]) - std::pow(7.0, 0.25)) < 1e-12);
    auto e5 = N.complex_embeddings(N.f_scale(5, N.f_one()));
    CHECK(std::abs(e5[0] - std::complex<double>(5, 0)) < 1e-12);
    CHECK(N.height(N.f_one()) == 0);
    CHECK(std::abs(N.height(N.f_alpha()) - std::log(7.0) / 4) < 1e-12);
    CHECK(std::abs(N.height(N.f_neg(N.f_one()))) < 1e-12);
}

TEST_CASE("embedding into the tower is a ring homomorphism") {
    std::mt19937_64 rng(0xE3BED);
    for (long q : {7L, 11L, 31L}) {
        NumberField N(q);
        LocalTower T(q, 128);
        CHECK(tower_agree(T, N.embed(N.f_one(), T), T.one(), 250));
        CHECK(tower_agree(T, N.embed(N.f_alpha(), T), T.alpha(), 250));
        for (int i = 0; i < 333; ++i) {
            FElem x = rnd_integral(N, rng);
            FElem y = rnd_integral(N, rng);
            TowerElement ex = N.embed(x, T), ey = N.embed(y, T);
            CHECK(tower_agree(T, N.embed(N.f_add(x, y), T), T.add(ex, ey), 250));
            CHECK(tower_agree(T, N.embed(N.f_mul(x, y), T), T.mul(ex, ey), 250));
        }
    }
}

TEST_CASE("embedding valuation matches the norm at 2 (inert case)") {
    std::mt19937_64 rng(0xF00D);
    NumberField N(11);
    LocalTower T(11, 128);
    for (int i = 0; i < 100; ++i) {
        FElem x = rnd_integral(N, rng);
        mpq_class n = N.norm_abs(x);
        if (n == 0) continue;
        auto o = T.ord(N.embed(x, T));
        REQUIRE(o.has_value());
        mpz_class nz = n.get_num();
        CHECK(mpz_scan1(nz.get_mpz_t(), 0) == 2 * *o); // f = 2 above 2
    }
}

TEST_CASE("embedding rejects elements that are not 2-integral") {
    NumberField N(7);
    LocalTower T(7, 128);
    CHECK_THROWS_AS((void)N.embed(N.f_scale(mpq_class(1, 2), N.f_alpha()), T), DomainError);
    // odd denominators are fine
    TowerElement e = N.embed(N.f_scale(mpq_class(1, 3), N.f_one()), T);
    CHECK(tower_agree(T, T.mul(e, T.from_integer(3)), T.one(), 200));
    // theta = (1 + alpha^2)/2 is integral despite the 2 in the denominator
    CHECK_NOTHROW((void)N.embed(N.from_K({0, 1}), T));
}

TEST_CASE("canonical strings round trip") {
    std::mt19937_64 rng(0x57215);
    NumberField N(23);
    for (int i = 0; i < 200; ++i) {
        FElem x = rnd_f(N, rng);
        auto back = NumberField::parse_F(NumberField::to_string(x));
        REQUIRE(back.has_value());
        CHECK(*back == x);
        KElem a = rnd_k(rng);
        auto kb = NumberField::parse_K(NumberField::to_string(a));
        REQUIRE(kb.has_value());
        CHECK(*kb == a);
    }
    CHECK(NumberField::to_string(FElem{{mpq_class(1, 2), -1, 0, 3}}) ==
          "1/2 + -1*a + 0*a^2 + 3*a^3");
    CHECK(NumberField::to_string(KElem{mpq_class(-5, 3), 2}) == "-5/3 + 2*t");
    CHECK_FALSE(NumberField::parse_F("garbage").has_value());
    CHECK_FALSE(NumberField::parse_F("1 + 2*a").has_value());
    CHECK_FALSE(NumberField::parse_K("1/0 + 2*t").has_value());
}

TEST_CASE("q outside the residue class is rejected") {
    CHECK_THROWS_AS(NumberField(5), DomainError);
    CHECK_THROWS_AS(NumberField(13), DomainError);
    CHECK_THROWS_AS(NumberField(4), DomainError);
    CHECK_THROWS_AS(NumberField(-7), DomainError);
}
