#include "qulog/dyadic.hpp"

#include <algorithm>
#include <cassert>

namespace qulog {

namespace {

// v_2 of a nonzero integer.
long v2(const mpz_class& n) {
    assert(n != 0);
    return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
}

mpz_class pow2(long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return r;
}

mpz_class mod_pow2(const mpz_class& n, long k) {
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// Inverse of an odd residue mod 2^k.
mpz_class inv_mod_pow2(const mpz_class& a, long k) {
    mpz_class m = pow2(k), r;
    int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    assert(ok);
    (void)ok;
    return r;
}

} // namespace

void Dyadic::normalize() {
    if (zero_) return;
    if (prec_ == kExact) return; // exact integers keep their full unit
    if (val_ >= prec_) {
        // nothing visible; keep as an inexact zero with this horizon
        unit_ = 0;
        return;
    }
    unit_ = mod_pow2(unit_, std::max<long>(prec_ - val_, 1));
}

Dyadic Dyadic::exact_zero() {
    Dyadic d;
    d.zero_ = true;
    d.prec_ = kExact;
    return d;
}

Dyadic Dyadic::from_integer(const mpz_class& n, long precision_bits) {
    Dyadic d;
    d.prec_ = precision_bits;
    if (n == 0) {
        d.zero_ = true;
        d.prec_ = kExact;
        return d;
    }
    d.zero_ = false;
    d.val_ = v2(n);
    d.unit_ = n >> static_cast<unsigned long>(d.val_);
    d.normalize();
    return d;
}

Dyadic Dyadic::from_rational(const mpq_class& x, long precision_bits) {
    if (x == 0) return exact_zero();
    mpz_class num = x.get_num(), den = x.get_den();
    long vd = (den == 1) ? 0 : v2(den);
    long vn = v2(num);
    mpz_class odd_num = num >> static_cast<unsigned long>(vn);
    mpz_class odd_den = den >> static_cast<unsigned long>(vd);
    Dyadic d;
    d.zero_ = false;
    d.prec_ = precision_bits;
    d.val_ = vn - vd;
    long rel = std::max<long>(precision_bits - d.val_, 1);
    d.unit_ = mod_pow2(odd_num * inv_mod_pow2(odd_den, rel), rel);
    return d;
}

Dyadic Dyadic::from_parts(long val, mpz_class unit, long precision_bits) {
    Dyadic d;
    if (unit == 0) return exact_zero();
    assert(mpz_odd_p(unit.get_mpz_t()));
    d.zero_ = false;
    d.val_ = val;
    d.unit_ = std::move(unit);
    d.prec_ = precision_bits;
    d.normalize();
    return d;
}

long Dyadic::valuation() const {
    if (zero_) throw PrecisionExhausted("valuation of exact zero is infinite");
    if (prec_ != kExact && val_ >= prec_)
        throw PrecisionExhausted("all digits below the precision horizon vanish");
    return val_;
}

mpz_class Dyadic::residue(long k) const {
    if (zero_) return 0;
    if (val_ >= k) return 0;
    return mod_pow2(unit_ << static_cast<unsigned long>(std::max<long>(val_, 0)), k);
}

Dyadic Dyadic::operator-() const {
    Dyadic d = *this;
    if (!d.zero_) {
        d.unit_ = -d.unit_;
        d.normalize();
    }
    return d;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.zero_) return b;
    if (b.zero_) return a;
    long prec = std::min(a.prec_, b.prec_);
    // align to valuation 0 scale: value = 2^val * unit
    long v = std::min(a.val_, b.val_);
    mpz_class sum = (a.unit_ << static_cast<unsigned long>(a.val_ - v)) +
                    (b.unit_ << static_cast<unsigned long>(b.val_ - v));
    if (sum == 0) {
        if (prec == Dyadic::kExact) return Dyadic::exact_zero();
        Dyadic d;
        d.zero_ = false;
        d.val_ = prec; // nothing visible below the horizon
        d.unit_ = 0;
        d.prec_ = prec;
        return d;
    }
    long vs = static_cast<long>(mpz_scan1(sum.get_mpz_t(), 0));
    Dyadic d;
    d.zero_ = false;
    d.val_ = v + vs;
    d.unit_ = sum >> static_cast<unsigned long>(vs);
    d.prec_ = prec;
    if (prec != Dyadic::kExact && d.val_ >= prec) d.unit_ = 0;
    d.normalize();
    return d;
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.zero_ || b.zero_) {
        if (a.zero_ && b.zero_) return Dyadic::exact_zero();
        // exact zero absorbs; inexact zero keeps its horizon shifted
        const Dyadic& z = a.zero_ ? a : b;
        const Dyadic& w = a.zero_ ? b : a;
        if (z.prec_ == Dyadic::kExact) return Dyadic::exact_zero();
        (void)w;
        return z;
    }
    Dyadic d;
    d.zero_ = false;
    d.val_ = a.val_ + b.val_;
    d.prec_ = std::min({a.prec_ == Dyadic::kExact ? Dyadic::kExact : a.prec_ - a.val_ + d.val_,
                        b.prec_ == Dyadic::kExact ? Dyadic::kExact : b.prec_ - b.val_ + d.val_});
    d.unit_ = a.unit_ * b.unit_;
    d.normalize();
    return d;
}

Dyadic operator/(const Dyadic& a, const Dyadic& b) {
    if (b.zero_) throw DomainError("division by exact zero");
    if (b.prec_ != Dyadic::kExact && b.val_ >= b.prec_)
        throw PrecisionExhausted("division by a value indistinguishable from zero");
    if (a.zero_) return Dyadic::exact_zero();
    Dyadic d;
    d.zero_ = false;
    d.val_ = a.val_ - b.val_;
    long rel_a = a.prec_ == Dyadic::kExact ? Dyadic::kExact : a.prec_ - a.val_;
    long rel_b = b.prec_ == Dyadic::kExact ? Dyadic::kExact : b.prec_ - b.val_;
    long rel = std::min(rel_a, rel_b);
    // a quotient of exact values is an infinite expansion in general; it
    // cannot honestly claim exactness, so it gets a wide finite window
    if (rel == Dyadic::kExact) rel = 4 * 64;
    d.prec_ = d.val_ + rel;
    long win = std::max<long>(rel, 1);
    d.unit_ = mod_pow2(a.unit_ * inv_mod_pow2(b.unit_, win), win);
    return d;
}

bool Dyadic::equal_at_precision(const Dyadic& b, long k) const {
    Dyadic diff = *this - b;
    if (diff.zero_) return true;
    if (diff.unit_ == 0) return diff.val_ >= k; // inexact zero
    return diff.val_ >= k;
}

std::optional<mpz_class> sqrt_2adic_integer(const mpz_class& a, long k) {
    if (a == 0) return mpz_class(0);
    long v = static_cast<long>(mpz_scan1(a.get_mpz_t(), 0));
    if (v & 1) return std::nullopt;
    mpz_class u = a >> static_cast<unsigned long>(v);
    if (mod_pow2(u, 3) != 1) return std::nullopt;
    // Hensel from r = 1 mod 8: double correct bits per Newton step on
    // r <- (r + u/r) / 2 is awkward at p = 2, so lift digit by digit:
    // maintain r^2 = u mod 2^j, j from 3; the next digit of r is forced.
    long target = std::max<long>(k - v / 2, 4);
    mpz_class r = 1;
    for (long j = 3; j < target + 1; ++j) {
        mpz_class err = mod_pow2(u - r * r, j + 1);
        if (err != 0) {
            // flip bit j-1 of r: (r + 2^(j-1))^2 = r^2 + 2^j r + 2^(2j-2)
            r += pow2(j - 1);
        }
    }
    r = mod_pow2(r, target);
    mpz_class r_neg = mod_pow2(-r, target);
    // canonical root: smaller residue mod 8
    if (mod_pow2(r_neg, 3) < mod_pow2(r, 3)) r = r_neg;
    return r << static_cast<unsigned long>(v / 2);
}

std::optional<Dyadic> sqrt_2adic(const Dyadic& a) {
    if (a.is_exact_zero()) return Dyadic::exact_zero();
    long v = a.valuation(); // throws PrecisionExhausted if invisible
    long rel = a.precision() == Dyadic::kExact ? 4 * 64 : a.precision() - v;
    if (rel < 4) throw PrecisionExhausted("need at least 4 relative bits for sqrt");
    if (v & 1) return std::nullopt;
    if (mod_pow2(a.unit_part(), 3) != 1) return std::nullopt;
    auto r = sqrt_2adic_integer(a.unit_part() << static_cast<unsigned long>(v), rel + v);
    if (!r) return std::nullopt;
    // roots are infinite expansions in general, so the result is always
    // finite-precision: one bit is lost in the lift
    long out_prec = v / 2 + (rel - 1);
    long rv = static_cast<long>(mpz_scan1(r->get_mpz_t(), 0));
    return Dyadic::from_parts(rv, *r >> static_cast<unsigned long>(rv), out_prec);
}

int legendre(const mpz_class& a, long p) {
    mpz_class pz(p);
    return mpz_legendre(a.get_mpz_t(), pz.get_mpz_t());
}

namespace {

// Split a nonzero rational as 2^e * u with u an odd rational; returns
// (e, u as integer mod 8) since only the square class matters.
std::pair<long, long> two_adic_split_mod8(const mpq_class& x) {
    assert(x != 0);
    mpz_class num = x.get_num(), den = x.get_den();
    long vn = (num == 0) ? 0 : static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
    long vd = (den == 1) ? 0 : static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
    mpz_class on = num >> static_cast<unsigned long>(vn);
    mpz_class od = den >> static_cast<unsigned long>(vd);
    // u mod 8 = on * od^-1 mod 8; od^2 = 1 mod 8 so od^-1 = od
    mpz_class u8 = ((on * od) % 8 + 8) % 8;
    return {vn - vd, u8.get_si()};
}

long eps_mod2(long u) { return ((u - 1) / 2) & 1; }       // (u-1)/2 mod 2
long omega_mod2(long u) { return ((u * u - 1) / 8) & 1; } // (u^2-1)/8 mod 2

// p-part split for odd p: x = p^e * u, returns (e, u mod p) and the full
// odd part for the Legendre symbol.
std::pair<long, mpz_class> p_adic_split(const mpq_class& x, long p) {
    mpz_class num = x.get_num(), den = x.get_den();
    long e = 0;
    while (mpz_divisible_ui_p(num.get_mpz_t(), p)) { num /= p; ++e; }
    while (mpz_divisible_ui_p(den.get_mpz_t(), p)) { den /= p; --e; }
    mpz_class pz(p), deninv;
    mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    mpz_class u = ((num * deninv) % pz + pz) % pz;
    return {e, u};
}

} // namespace

int hilbert_2(const mpq_class& a, const mpq_class& b) {
    if (a == 0 || b == 0) throw DomainError("hilbert symbol of zero");
    auto [al, u] = two_adic_split_mod8(a);
    auto [be, v] = two_adic_split_mod8(b);
    long e = eps_mod2(u) * eps_mod2(v) + al * omega_mod2(v) + be * omega_mod2(u);
    return (e & 1) ? -1 : 1;
}

int hilbert_odd(long p, const mpq_class& a, const mpq_class& b) {
    if (a == 0 || b == 0) throw DomainError("hilbert symbol of zero");
    assert(p > 2 && (p & 1));
    auto [al, u] = p_adic_split(a, p);
    auto [be, v] = p_adic_split(b, p);
    int sign = 1;
    if ((al & 1) && (be & 1) && (((p - 1) / 2) & 1)) sign = -sign;
    if (be & 1) sign *= legendre(u, p);
    if (al & 1) sign *= legendre(v, p);
    return sign;
}

int hilbert_infinity(const mpq_class& a, const mpq_class& b) {
    return (a < 0 && b < 0) ? -1 : 1;
}

LocalFactorization factor_quartic_over_Q2(long q) {
    if (q % 4 != 3) throw DomainError("factor_quartic_over_Q2: q must be 3 mod 4");
    // Work with g(x) = (x+1)^4 + q, whose Newton polygon is informative:
    // coefficient valuations (v_2(1+q), 2, 1, 2, 0) from degree 0 to 4.
    long v = static_cast<long>(mpz_scan1(mpz_class(1 + mpz_class(q)).get_mpz_t(), 0));
    LocalFactorization out;
    if (v == 2) {
        // single segment (0,2)-(4,0) of slope -1/2; the residual quadratic
        // is y^2 + y + n0 with n0 = (1+q)/4 odd, irreducible over F_2
        out.factors = {{2, 2}};
    } else if (v == 3) {
        // segments (0,3)-(2,1) slope -1 (residual y^2 + y + 1, irreducible)
        // and (2,1)-(4,0) slope -1/2 (ramified, residue degree 1)
        out.factors = {{2, 1}, {1, 2}};
    } else {
        // v >= 4: three segments, slopes (2-v), -1, -1/2; the two unit
        // roots are certified by explicit Hensel square roots below
        out.factors = {{2, 1}, {1, 1}, {1, 1}};
        // -q = 1 mod 16, so s = sqrt(-q) exists; one of +-s is 1 mod 8
        // and has a square root r with r^4 = -q, confirming the splitting.
        auto s = sqrt_2adic_integer(mpz_class(-q), 32);
        if (!s) throw PrecisionExhausted("expected sqrt(-q) in Z_2");
        mpz_class s8 = ((*s % 8) + 8) % 8;
        mpz_class cand = (s8 == 1) ? *s : mpz_class(-*s);
        if (!sqrt_2adic_integer(cand, 32))
            throw PrecisionExhausted("expected a 4th root of -q in Z_2");
    }
    int total = 0;
    for (auto [e, f] : out.factors) total += e * f;
    assert(total == 4);
    return out;
}

} // namespace qulog
