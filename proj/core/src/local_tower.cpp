#include "qulog/local_tower.hpp"

#include <algorithm>
#include <cassert>

namespace qulog {

namespace {

long v2_residue(const mpz_class& r) {
    // valuation of a residue; caller handles zero
    return static_cast<long>(mpz_scan1(r.get_mpz_t(), 0));
}

mpz_class pow2(long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return r;
}

mpz_class mod_reduce(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class inv_odd(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    assert(ok);
    (void)ok;
    return r;
}

} // namespace

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::q3mod8: return "3mod8";
        case CaseTag::q7mod16: return "7mod16";
        case CaseTag::q15mod16: return "15mod16";
    }
    return "?";
}

CaseTag case_tag_of(long q) {
    if (q % 8 == 3) return CaseTag::q3mod8;
    if (q % 16 == 7) return CaseTag::q7mod16;
    if (q % 16 == 15) return CaseTag::q15mod16;
    throw DomainError("q must be a prime = 3 mod 4");
}

LocalTower::LocalTower(long q, long precision_bits)
    : q_(q), tag_(case_tag_of(q)), prec_(precision_bits), work_(precision_bits + 64) {
    mod_ = pow2(work_);
    if (tag_ == CaseTag::q3mod8) {
        n0_ = mpz_class(1 + mpz_class(q)) / 4;
    } else {
        auto s = sqrt_2adic_integer(mpz_class(-q), work_);
        if (!s) throw DomainError("-q is not a square in Z_2");
        // embedding convention: sqrt(-q) = 3 mod 8 for q = 7 mod 16,
        // 7 mod 8 for q = 15 mod 16
        mpz_class s8 = mod_reduce(*s, mpz_class(8));
        long want = (tag_ == CaseTag::q7mod16) ? 3 : 7;
        s_ = (s8 == want) ? mod_reduce(*s, mod_) : mod_reduce(-*s, mod_);
        assert(mod_reduce(s_, mpz_class(8)) == want);
    }
}

// --- base field helpers (pairs over {1, theta}; b1 = 0 over Q_2) ---

void LocalTower::bmul(const mpz_class& a0, const mpz_class& a1,
                      const mpz_class& b0, const mpz_class& b1,
                      mpz_class& r0, mpz_class& r1) const {
    if (tag_ == CaseTag::q3mod8) {
        // theta^2 = theta - n0
        mpz_class t = a1 * b1;
        r0 = mod_reduce(a0 * b0 - n0_ * t, mod_);
        r1 = mod_reduce(a0 * b1 + a1 * b0 + t, mod_);
    } else {
        r0 = mod_reduce(a0 * b0, mod_);
        r1 = 0;
    }
}

void LocalTower::binv(const mpz_class& a0, const mpz_class& a1,
                      mpz_class& r0, mpz_class& r1) const {
    if (tag_ == CaseTag::q3mod8) {
        // 1/(a0 + a1 th) = (a0 + a1 - a1 th) / (a0^2 + a0 a1 + n0 a1^2)
        mpz_class nrm = mod_reduce(a0 * a0 + a0 * a1 + n0_ * a1 * a1, mod_);
        assert(mpz_odd_p(nrm.get_mpz_t()));
        mpz_class ninv = inv_odd(nrm, mod_);
        r0 = mod_reduce((a0 + a1) * ninv, mod_);
        r1 = mod_reduce(-a1 * ninv, mod_);
    } else {
        assert(mpz_odd_p(a0.get_mpz_t()));
        r0 = inv_odd(a0, mod_);
        r1 = 0;
    }
}

long LocalTower::bord(const mpz_class& a0, const mpz_class& a1, long cap) const {
    // valuation of a0 + a1*theta = min of coordinate valuations: the
    // residues of 1 and theta are F_2-independent in the residue field
    long v = cap;
    if (a0 != 0) v = std::min(v, v2_residue(a0));
    if (a1 != 0) v = std::min(v, v2_residue(a1));
    return v;
}

// --- element constructors ---

TowerElement LocalTower::zero() const {
    TowerElement e;
    e.prec = TowerElement::kExactBits;
    return e;
}

TowerElement LocalTower::one() const { return from_integer(1); }

TowerElement LocalTower::from_integer(const mpz_class& n) const {
    TowerElement e;
    e.c[0] = mod_reduce(n, mod_);
    e.prec = TowerElement::kExactBits;
    return e;
}

TowerElement LocalTower::alpha() const {
    TowerElement e;
    e.c[2] = 1;
    e.prec = TowerElement::kExactBits;
    return e;
}

TowerElement LocalTower::uniformizer() const {
    TowerElement e;
    e.c[0] = mod_ - 1;
    e.c[2] = 1;
    e.prec = TowerElement::kExactBits;
    return e;
}

TowerElement LocalTower::sqrt_mq() const {
    TowerElement e;
    if (tag_ == CaseTag::q3mod8) {
        e.c[0] = mod_ - 1; // 2*theta - 1
        e.c[1] = 2;
    } else {
        e.c[0] = s_;
    }
    e.prec = TowerElement::kExactBits;
    return e;
}

const mpz_class& LocalTower::sqrt_mq_numeric() const {
    if (tag_ == CaseTag::q3mod8)
        throw DomainError("sqrt(-q) is not in Q_2 when q = 3 mod 8");
    return s_;
}

// --- arithmetic ---

TowerElement LocalTower::add(const TowerElement& x, const TowerElement& y) const {
    TowerElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = mod_reduce(x.c[i] + y.c[i], mod_);
    r.prec = std::min(x.prec, y.prec);
    return r;
}

TowerElement LocalTower::sub(const TowerElement& x, const TowerElement& y) const {
    TowerElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = mod_reduce(x.c[i] - y.c[i], mod_);
    r.prec = std::min(x.prec, y.prec);
    return r;
}

TowerElement LocalTower::neg(const TowerElement& x) const {
    TowerElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = mod_reduce(-x.c[i], mod_);
    r.prec = x.prec;
    return r;
}

TowerElement LocalTower::mul(const TowerElement& x, const TowerElement& y) const {
    // (x0 + x1 a)(y0 + y1 a) = x0 y0 + x1 y1 w + (x0 y1 + x1 y0) a, w = sqrt(-q)
    TowerElement r;
    mpz_class p00_0, p00_1, p11_0, p11_1, p01_0, p01_1, p10_0, p10_1;
    bmul(x.c[0], x.c[1], y.c[0], y.c[1], p00_0, p00_1);
    bmul(x.c[2], x.c[3], y.c[2], y.c[3], p11_0, p11_1);
    bmul(x.c[0], x.c[1], y.c[2], y.c[3], p01_0, p01_1);
    bmul(x.c[2], x.c[3], y.c[0], y.c[1], p10_0, p10_1);
    mpz_class w0, w1;
    if (tag_ == CaseTag::q3mod8) {
        // w = 2 theta - 1: w * (b0 + b1 th) = -b0 - 2 n0 b1 + (2 b0 + b1) th
        w0 = mod_reduce(-p11_0 - 2 * n0_ * p11_1, mod_);
        w1 = mod_reduce(2 * p11_0 + p11_1, mod_);
    } else {
        w0 = mod_reduce(s_ * p11_0, mod_);
        w1 = 0;
    }
    r.c[0] = mod_reduce(p00_0 + w0, mod_);
    r.c[1] = mod_reduce(p00_1 + w1, mod_);
    r.c[2] = mod_reduce(p01_0 + p10_0, mod_);
    r.c[3] = mod_reduce(p01_1 + p10_1, mod_);
    r.prec = std::min(x.prec, y.prec);
    return r;
}

TowerElement LocalTower::conj(const TowerElement& x) const {
    TowerElement r = x;
    r.c[2] = mod_reduce(-x.c[2], mod_);
    r.c[3] = mod_reduce(-x.c[3], mod_);
    return r;
}

TowerElement LocalTower::local_norm(const TowerElement& x) const {
    return mul(x, conj(x));
}

TowerElement LocalTower::inv(const TowerElement& x) const {
    // 1/x = conj(x) / N(x); requires x to be a unit of the local ring
    TowerElement cx = conj(x);
    TowerElement n = mul(x, cx);
    assert(n.c[2] == 0 && n.c[3] == 0);
    mpz_class i0, i1;
    binv(n.c[0], n.c[1], i0, i1);
    TowerElement r;
    bmul(cx.c[0], cx.c[1], i0, i1, r.c[0], r.c[1]);
    bmul(cx.c[2], cx.c[3], i0, i1, r.c[2], r.c[3]);
    r.prec = x.prec;
    return r;
}

TowerElement LocalTower::pow(const TowerElement& x, unsigned long n) const {
    TowerElement acc = one();
    TowerElement base = x;
    while (n) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

std::optional<long> LocalTower::ord(const TowerElement& x) const {
    long prec_eff = std::min(x.prec, work_);
    bool all_zero = true;
    long j = work_;
    for (const auto& c : x.c) {
        if (c != 0 && v2_residue(c) < prec_eff) {
            all_zero = false;
            j = std::min(j, v2_residue(c));
        }
    }
    if (all_zero) {
        if (x.prec >= TowerElement::kExactBits) return std::nullopt; // exactly zero
        throw PrecisionExhausted("ord: all digits vanish at certified precision");
    }
    // x = 2^j * x' with x' having a unit coordinate; ord(x) = 2j, plus one
    // if the residue of x' dies in O/P (alpha = 1 there, so the image is
    // the sum of the two base coordinates)
    mpz_class e0 = (x.c[0] + x.c[2]) >> static_cast<unsigned long>(j);
    mpz_class e1 = (x.c[1] + x.c[3]) >> static_cast<unsigned long>(j);
    bool residue_zero = mpz_even_p(e0.get_mpz_t()) && mpz_even_p(e1.get_mpz_t());
    long result = 2 * j + (residue_zero ? 1 : 0);
    if (result >= 2 * (prec_eff - 1))
        throw PrecisionExhausted("ord: value sits at the precision boundary");
    return result;
}

// --- logarithm ---

TowerElement LocalTower::log_principal(const TowerElement& w) const {
    TowerElement wm1 = sub(w, one());
    auto o = ord(wm1);
    if (!o) return zero(); // log 1 = 0
    if (*o < 1) throw DomainError("log requires w = 1 mod P");

    // z = w^4 - 1 has ord >= 3 > e/(p-1), where the series converges
    TowerElement w2 = mul(w, w);
    TowerElement z = sub(mul(w2, w2), one());
    auto oz_opt = ord(z);
    if (!oz_opt) return zero(); // w^4 = 1 exactly: torsion, log is 0
    long oz = *oz_opt;
    assert(oz >= 3);

    // sum_{n>=1} (-1)^(n+1) z^n / n; the term has ord >= n*oz - 2 v_2(n)
    long nmax = (2 * work_ + 16) / oz + 4;
    TowerElement zn = one();
    TowerElement acc = zero();
    long max_shift = 0;
    for (long n = 1; n <= nmax; ++n) {
        zn = mul(zn, z);
        long v2n = (n % 2 == 0) ? v2_residue(mpz_class(n)) : 0;
        mpz_class odd_n = mpz_class(n) >> static_cast<unsigned long>(v2n);
        mpz_class inv_n = inv_odd(odd_n, mod_);
        TowerElement term;
        for (int i = 0; i < 4; ++i) {
            mpz_class t = mod_reduce(zn.c[i] * inv_n, mod_);
            // divide by 2^v2n: the true coordinate has valuation >= v2n
            assert(t == 0 || v2n == 0 || v2_residue(t) >= v2n);
            term.c[i] = t >> static_cast<unsigned long>(v2n);
        }
        max_shift = std::max(max_shift, v2n);
        term.prec = TowerElement::kExactBits;
        acc = (n % 2 == 1) ? add(acc, term) : sub(acc, term);
    }
    // divide by 4: log w = log(w^4) / 4; coordinates are divisible since
    // log(w^4) = 4 log(w) with log(w) integral here
    TowerElement r;
    for (int i = 0; i < 4; ++i) {
        assert(acc.c[i] == 0 || v2_residue(acc.c[i]) >= 2);
        r.c[i] = acc.c[i] >> 2;
    }
    r.prec = std::min(w.prec, work_ - max_shift - 2);
    return r;
}

TowerElement LocalTower::log(const TowerElement& w) const {
    return log_principal(w);
}

TowerElement LocalTower::log_unit(const TowerElement& u) const {
    if (tag_ != CaseTag::q3mod8) return log_principal(u);
    // residue field F_4: cube to land in 1 + P, then divide by 3
    TowerElement u3 = mul(mul(u, u), u);
    TowerElement l = log_principal(u3);
    mpz_class inv3 = inv_odd(mpz_class(3), mod_);
    TowerElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = mod_reduce(l.c[i] * inv3, mod_);
    r.prec = l.prec;
    return r;
}

// --- exponential ---

TowerElement LocalTower::exp(const TowerElement& x) const {
    auto o = ord(x);
    if (!o) return one();
    if (*o <= 2) throw DomainError("exp requires ord(x) >= 3");

    // Dividing by n! costs up to n - s_2(n) bits of window, so the series
    // runs at a widened internal modulus; the lifted input differs from
    // the true value by O(2^work), far below the output precision.
    long nmax = 2 * prec_ + 16;
    long wide = work_ + nmax + 16;
    mpz_class wmod = pow2(wide);

    auto wide_bmul = [&](const mpz_class& a0, const mpz_class& a1,
                         const mpz_class& b0, const mpz_class& b1,
                         mpz_class& r0, mpz_class& r1) {
        if (tag_ == CaseTag::q3mod8) {
            mpz_class t = a1 * b1;
            r0 = mod_reduce(a0 * b0 - n0_ * t, wmod);
            r1 = mod_reduce(a0 * b1 + a1 * b0 + t, wmod);
        } else {
            r0 = mod_reduce(a0 * b0, wmod);
            r1 = 0;
        }
    };
    auto wide_mul = [&](const std::array<mpz_class, 4>& a,
                        const std::array<mpz_class, 4>& b) {
        std::array<mpz_class, 4> r;
        mpz_class p00_0, p00_1, p11_0, p11_1, p01_0, p01_1, p10_0, p10_1;
        wide_bmul(a[0], a[1], b[0], b[1], p00_0, p00_1);
        wide_bmul(a[2], a[3], b[2], b[3], p11_0, p11_1);
        wide_bmul(a[0], a[1], b[2], b[3], p01_0, p01_1);
        wide_bmul(a[2], a[3], b[0], b[1], p10_0, p10_1);
        mpz_class w0, w1;
        if (tag_ == CaseTag::q3mod8) {
            w0 = mod_reduce(-p11_0 - 2 * n0_ * p11_1, wmod);
            w1 = mod_reduce(2 * p11_0 + p11_1, wmod);
        } else {
            w0 = mod_reduce(s_ * p11_0, wmod);
            w1 = 0;
        }
        r[0] = mod_reduce(p00_0 + w0, wmod);
        r[1] = mod_reduce(p00_1 + w1, wmod);
        r[2] = mod_reduce(p01_0 + p10_0, wmod);
        r[3] = mod_reduce(p01_1 + p10_1, wmod);
        return r;
    };

    std::array<mpz_class, 4> xw = {x.c[0], x.c[1], x.c[2], x.c[3]};
    std::array<mpz_class, 4> xn = {1, 0, 0, 0};
    std::array<mpz_class, 4> acc = {1, 0, 0, 0};
    mpz_class odd_fact = 1;
    long shift_fact = 0;
    for (long n = 1; n <= nmax; ++n) {
        xn = wide_mul(xn, xw);
        long m = n;
        while (m % 2 == 0) { m /= 2; ++shift_fact; }
        odd_fact = mod_reduce(odd_fact * m, wmod);
        mpz_class inv_f = inv_odd(odd_fact, wmod);
        for (int i = 0; i < 4; ++i) {
            mpz_class t = mod_reduce(xn[i] * inv_f, wmod);
            assert(t == 0 || v2_residue(t) >= shift_fact);
            t >>= static_cast<unsigned long>(shift_fact);
            acc[i] = mod_reduce(acc[i] + t, wmod);
        }
    }
    TowerElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = mod_reduce(acc[i], mod_);
    r.prec = std::min(x.prec, work_ - 2);
    return r;
}

// --- sqrt(-1) ---

std::optional<TowerElement> LocalTower::sqrt_minus1() const {
    // Any root of x^2 + 1 = 0 mod P^5 lifts by Hensel: v(f(x)) >= 5 >
    // 4 = 2 v(f'(x)). Enumerate O/8O, which surjects onto O/P^5 (8 = P^6).
    const long span = 8;
    bool base_quadratic = (tag_ == CaseTag::q3mod8);
    TowerElement seed;
    bool found = false;
    mpz_class c[4];
    for (long a0 = 0; a0 < span && !found; ++a0)
        for (long a1 = 0; a1 < (base_quadratic ? span : 1) && !found; ++a1)
            for (long a2 = 0; a2 < span && !found; ++a2)
                for (long a3 = 0; a3 < (base_quadratic ? span : 1) && !found; ++a3) {
                    TowerElement x;
                    x.c[0] = a0; x.c[1] = a1; x.c[2] = a2; x.c[3] = a3;
                    x.prec = TowerElement::kExactBits;
                    TowerElement f = add(mul(x, x), one());
                    bool ok = true;
                    for (const auto& ci : f.c)
                        // ord >= 5 iff f in P^5, and P^5 contains 8O with
                        // the only lighter classes killed by coord v2 >= 2
                        if (ci != 0 && v2_residue(ci) < 2) ok = false;
                    if (ok) {
                        long j = 2;
                        mpz_class e0 = (f.c[0] + f.c[2]) >> j;
                        mpz_class e1 = (f.c[1] + f.c[3]) >> j;
                        // coords v2 >= 2 gives ord >= 4; need the O/P
                        // residue of f/4 to vanish too
                        ok = mpz_even_p(e0.get_mpz_t()) && mpz_even_p(e1.get_mpz_t());
                    }
                    if (ok) { seed = x; found = true; }
                }
    if (!found) return std::nullopt;

    // Newton: x <- x - (x^2+1)/(2x); each step doubles the contact order.
    // f/(2x) = (f >> 1) * inv(x): coordinates of f are divisible by 2.
    TowerElement x = seed;
    for (int it = 0; it < 64; ++it) {
        TowerElement f = add(mul(x, x), one());
        bool done = true;
        for (const auto& ci : f.c)
            if (ci != 0 && v2_residue(ci) < prec_) done = false;
        if (done) break;
        TowerElement half_f;
        for (int i = 0; i < 4; ++i) {
            assert(f.c[i] == 0 || v2_residue(f.c[i]) >= 1);
            half_f.c[i] = f.c[i] >> 1;
        }
        half_f.prec = TowerElement::kExactBits;
        x = sub(x, mul(half_f, inv(x)));
    }
    // verify and normalize into 1 + P
    TowerElement f = add(mul(x, x), one());
    for (const auto& ci : f.c)
        if (ci != 0 && v2_residue(ci) < prec_) return std::nullopt;
    auto om1 = ord(sub(x, one()));
    if (om1 && *om1 < 1) x = neg(x);
    x.prec = std::min(x.prec, work_ - 1);
    return x;
}

bool LocalTower::contains_sqrt_minus1() const { return sqrt_minus1().has_value(); }

std::array<mpz_class, 4> LocalTower::coordinates(const TowerElement& x) const {
    return {x.c[0], x.c[1], x.c[2], x.c[3]};
}

} // namespace qulog
