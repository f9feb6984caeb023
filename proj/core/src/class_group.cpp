#include "qulog/class_group.hpp"

#include <cassert>

namespace qulog {

namespace {

// discriminant of a form; all forms here have disc = -q
mpz_class disc_of(const FormClass& f) { return f.B * f.B - 4 * f.A * f.C; }

struct Row {
    mpz_class x, y; // x + y*omega, omega = (1 + sqrt(-q))/2
};

// Hermite form of the module spanned by rows: Z(m, 0) + Z(fx, fy).
void hnf2(std::vector<Row> rows, mpz_class& m, mpz_class& fx, mpz_class& fy) {
    m = 0;
    fx = 0;
    fy = 0;
    for (auto& r : rows) {
        if (r.y == 0) {
            mpz_gcd(m.get_mpz_t(), m.get_mpz_t(), r.x.get_mpz_t());
            continue;
        }
        if (fy == 0) {
            fx = r.x;
            fy = r.y;
            continue;
        }
        mpz_class g, u, v;
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(),
                   fy.get_mpz_t(), r.y.get_mpz_t());
        mpz_class nfx = u * fx + v * r.x;
        mpz_class pure = (fy / g) * r.x - (r.y / g) * fx;
        fx = nfx;
        fy = g;
        mpz_gcd(m.get_mpz_t(), m.get_mpz_t(), pure.get_mpz_t());
    }
    if (fy < 0) { fx = -fx; fy = -fy; }
    if (m < 0) m = -m;
    assert(m > 0 && fy > 0);
    mpz_fdiv_r(fx.get_mpz_t(), fx.get_mpz_t(), m.get_mpz_t());
}

} // namespace

FormClass principal_form(long q) {
    return {1, 1, (mpz_class(q) + 1) / 4};
}

FormClass reduce_form(FormClass f) {
    while (true) {
        if (f.B > f.A || f.B <= -f.A) {
            // shift B into (-A, A]
            mpz_class k;
            mpz_fdiv_q(k.get_mpz_t(), mpz_class(f.B + f.A - 1).get_mpz_t(),
                       mpz_class(2 * f.A).get_mpz_t());
            mpz_class nb = f.B - 2 * k * f.A;
            f.C = f.C - k * f.B + k * k * f.A;
            f.B = nb;
        }
        if (f.A > f.C) {
            f = {f.C, -f.B, f.A};
            continue;
        }
        if (f.A == f.C && f.B < 0) f.B = -f.B;
        break;
    }
    assert(-f.A < f.B && f.B <= f.A && f.A <= f.C);
    return f;
}

FormClass form_inverse(const FormClass& f) {
    return reduce_form({f.A, -f.B, f.C});
}

std::vector<FormClass> reduced_forms(long q) {
    std::vector<FormClass> out;
    for (mpz_class A = 1; 3 * A * A <= q; ++A) {
        // -q = 1 mod 4 forces B odd; the window (-A, A] keeps one of +-B = A
        mpz_class start = -A + 1;
        if (start % 2 == 0) ++start;
        for (mpz_class B = start; B <= A; B += 2) {
            mpz_class num = B * B + q;
            mpz_class den = 4 * A;
            if (num % den != 0) continue;
            mpz_class C = num / den;
            if (C < A) continue;
            if (A == C && B < 0) continue;
            out.push_back({A, B, C});
        }
    }
    return out;
}

FormClass compose(const FormClass& f, const FormClass& g) {
    assert(disc_of(f) == disc_of(g));
    mpz_class D = disc_of(f);
    mpz_class n0 = (1 - D) / 4; // omega^2 = omega - n0

    // form (a,b,c) <-> ideal a Z + (omega - h) Z, h = (b+1)/2
    mpz_class a1 = f.A, h1 = (f.B + 1) / 2;
    mpz_class a2 = g.A, h2 = (g.B + 1) / 2;

    // the four generator products of the ideal product, over {1, omega}
    std::vector<Row> rows = {
        {a1 * a2, 0},
        {-a1 * h2, a1},
        {-a2 * h1, a2},
        {h1 * h2 - n0, 1 - h1 - h2},
    };
    mpz_class m, fx, fy;
    hnf2(std::move(rows), m, fx, fy);
    assert(m * fy == a1 * a2); // module norm is multiplicative

    // divide out the content fy, leaving a primitive ideal of norm m/fy
    assert(m % fy == 0 && fx % fy == 0);
    mpz_class A3 = m / fy;
    mpz_class e = fx / fy;
    mpz_class B3 = -(2 * e + 1);
    mpz_class num = B3 * B3 - D;
    assert(num % (4 * A3) == 0);
    return reduce_form({A3, B3, num / (4 * A3)});
}

FormClass form_pow(const FormClass& f, unsigned long n, long q) {
    FormClass acc = principal_form(q);
    FormClass base = reduce_form(f);
    while (n) {
        if (n & 1) acc = compose(acc, base);
        base = compose(base, base);
        n >>= 1;
    }
    return acc;
}

unsigned long class_order(const FormClass& f, long q) {
    FormClass id = principal_form(q);
    FormClass g = reduce_form(f);
    unsigned long k = 1;
    while (!(g == id)) {
        g = compose(g, f);
        ++k;
        assert(k <= static_cast<unsigned long>(q)); // h(-q) < q
    }
    return k;
}

FormClass class_of_p2(long q, const LocalTower& tower) {
    if (tower.case_tag() == CaseTag::q3mod8)
        throw DomainError("2 is inert when q = 3 mod 8; no prime class of norm 2");
    // p = (2, theta): theta = (1 + sqrt(-q))/2 lands in 2 Z_2 under the
    // tower convention (s = 3 mod 4), so b = -1 in the form
    return reduce_form({2, -1, (mpz_class(q) + 1) / 8});
}

unsigned long odd_generator_exponent(long q, const LocalTower& tower) {
    if (tower.case_tag() == CaseTag::q3mod8) return 1;
    unsigned long m = class_order(class_of_p2(q, tower), q);
    assert(m % 2 == 1); // the class number of K is odd
    return m;
}

KElem generator_of_p_power(long q, unsigned long m,
                           const NumberField& field, const LocalTower& tower) {
    if (tower.case_tag() == CaseTag::q3mod8) {
        assert(m == 1);
        return {2, 0};
    }
    // N(x + y t) = x^2 + xy + n0 y^2 = 2^m; 4*2^m = (2x+y)^2 + q y^2
    mpz_class target = mpz_class(1) << (m + 2);
    for (mpz_class ay = 1; q * ay * ay <= target; ++ay) {
        mpz_class rem = target - q * ay * ay;
        if (!mpz_perfect_square_p(rem.get_mpz_t())) continue;
        mpz_class u;
        mpz_sqrt(u.get_mpz_t(), rem.get_mpz_t());
        for (int sy = 0; sy < 2; ++sy) {
            mpz_class y = sy ? -ay : ay;
            for (int su = 0; su < 2; ++su) {
                mpz_class t = su ? -u : u;
                if ((t - y) % 2 != 0) continue;
                mpz_class x = (t - y) / 2;
                KElem pi{mpq_class(x), mpq_class(y)};
                // the generator of p^m (not its conjugate) has full ord
                auto o = tower.ord(field.embed_K(pi, tower));
                if (!o || *o != 2 * static_cast<long>(m)) continue;
                if (y > 0) pi = field.k_neg(pi); // fix the unit ambiguity
                return pi;
            }
        }
    }
    throw DomainError("no generator of p^m found; is m the class order?");
}

} // namespace qulog
