#include <doctest.h>

#include <random>

#include "qulog/class_group.hpp"

using namespace qulog;

namespace {

bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> primes_3mod4(long lo, long hi) {
    std::vector<long> out;
    for (long q = lo | 3; q <= hi; q += 4)
        if (q % 4 == 3 && is_prime_long(q)) out.push_back(q);
    return out;
}

} // namespace

TEST_CASE("frozen class numbers") {
    CHECK(reduced_forms(3).size() == 1);
    CHECK(reduced_forms(7).size() == 1);
    CHECK(reduced_forms(11).size() == 1);
    CHECK(reduced_forms(19).size() == 1);
    CHECK(reduced_forms(23).size() == 3);
    CHECK(reduced_forms(31).size() == 3);
    CHECK(reduced_forms(43).size() == 1);
    CHECK(reduced_forms(47).size() == 5);
    CHECK(reduced_forms(71).size() == 7);
    CHECK(reduced_forms(479).size() == 25);
}

TEST_CASE("class number is odd for prime q = 3 mod 4 below 1000") {
    for (long q : primes_3mod4(3, 999)) {
        CAPTURE(q);
        CHECK(reduced_forms(q).size() % 2 == 1);
    }
}

TEST_CASE("every reduced form has the right discriminant and reduction is stable") {
    for (long q : {23L, 47L, 311L}) {
        for (const FormClass& f : reduced_forms(q)) {
            CHECK(f.B * f.B - 4 * f.A * f.C == -q);
            CHECK(reduce_form(f) == f);
            CHECK(abs(f.B) <= f.A);
            CHECK(f.A <= f.C);
        }
    }
}

TEST_CASE("composition makes the reduced forms an abelian group") {
    std::mt19937_64 rng(0xC1A55);
    for (long q : primes_3mod4(3, 299)) {
        auto forms = reduced_forms(q);
        FormClass e = principal_form(q);
        CAPTURE(q);
        for (const FormClass& f : forms) {
            CHECK(compose(f, e) == f);
            CHECK(compose(f, form_inverse(f)) == e);
            // Lagrange: f^h is principal
            CHECK(form_pow(f, forms.size(), q) == e);
            CHECK(forms.size() % class_order(f, q) == 0);
        }
        for (const FormClass& f : forms)
            for (const FormClass& g : forms) CHECK(compose(f, g) == compose(g, f));
        for (int i = 0; i < 20 && forms.size() > 1; ++i) {
            const FormClass& f = forms[rng() % forms.size()];
            const FormClass& g = forms[rng() % forms.size()];
            const FormClass& h = forms[rng() % forms.size()];
            CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        }
    }
}

TEST_CASE("class of the prime above 2") {
    LocalTower t7(7, 96);
    CHECK(class_order(class_of_p2(7, t7), 7) == 1);
    LocalTower t23(23, 96);
    CHECK(class_order(class_of_p2(23, t23), 23) == 3);
    LocalTower t31(31, 96);
    CHECK(class_order(class_of_p2(31, t31), 31) == 3);
    LocalTower t47(47, 96);
    CHECK(class_order(class_of_p2(47, t47), 47) == 5);

    // 2 is inert when q = 3 mod 8: there is no split prime to pick
    LocalTower t11(11, 96);
    CHECK_THROWS_AS((void)class_of_p2(11, t11), DomainError);
}

TEST_CASE("minimal odd exponent of the generator") {
    const std::pair<long, unsigned long> frozen[] = {
        {3, 1}, {7, 1}, {11, 1}, {19, 1}, {23, 3}, {31, 3}, {43, 1}, {47, 5}, {71, 7}, {79, 5}};
    for (auto [q, m] : frozen) {
        LocalTower T(q, 96);
        CAPTURE(q);
        CHECK(odd_generator_exponent(q, T) == m);
    }
}

TEST_CASE("the exponent is odd for every q = 7 mod 8 below 500") {
    for (long q : primes_3mod4(3, 499)) {
        if (q % 8 != 7) continue;
        LocalTower T(q, 96);
        CAPTURE(q);
        CHECK(odd_generator_exponent(q, T) % 2 == 1);
    }
}

TEST_CASE("generator of p^m has norm 2^m and the right completion") {
    const std::pair<long, KElem> frozen[] = {
        {3, {2, 0}},  {11, {2, 0}}, {19, {2, 0}},  {43, {2, 0}},
        {7, {0, -1}}, {23, {2, -1}}, {31, {0, -1}}, {47, {-4, -1}}};
    for (const auto& [q, expect] : frozen) {
        NumberField N(q);
        LocalTower T(q, 128);
        unsigned long m = odd_generator_exponent(q, T);
        KElem pi = generator_of_p_power(q, m, N, T);
        CAPTURE(q);
        CHECK(pi == expect);
        // split: N(pi) = 2^m; inert: pi = 2 with norm 4
        mpz_class expect_norm = (q % 8 == 3) ? mpz_class(4) : mpz_class(mpz_class(1) << m);
        CHECK(N.k_norm(pi) == expect_norm);
        // its completion valuation pins the prime: ord(pi) = 2m, not 0
        auto o = T.ord(N.embed_K(pi, T));
        REQUIRE(o.has_value());
        CHECK(*o == long(2 * m));
    }
}

TEST_CASE("generator search works for deeper exponents") {
    for (long q : {71L, 79L, 103L, 151L}) {
        NumberField N(q);
        LocalTower T(q, 128);
        unsigned long m = odd_generator_exponent(q, T);
        KElem pi = generator_of_p_power(q, m, N, T);
        CAPTURE(q);
        CHECK(N.k_norm(pi) == (mpz_class(1) << m));
        auto o = T.ord(N.embed_K(pi, T));
        REQUIRE(o.has_value());
        CHECK(*o == long(2 * m));
    }
}
