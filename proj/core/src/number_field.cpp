#include "qulog/number_field.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace qulog {

namespace {

mpq_class inv_q(const mpq_class& x) {
    assert(x != 0);
    mpq_class r;
    mpq_inv(r.get_mpq_t(), x.get_mpq_t());
    return r;
}

// exact rational square root
std::optional<mpq_class> sqrt_rational(const mpq_class& x) {
    if (x < 0) return std::nullopt;
    if (x == 0) return mpq_class(0);
    mpz_class num = x.get_num(), den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn) / mpq_class(rd);
}

using Mat4 = std::array<std::array<mpq_class, 4>, 4>;

// Gauss-Jordan inverse; the basis matrix is always invertible
Mat4 invert4(const Mat4& m) {
    Mat4 a = m;
    Mat4 inv{};
    for (int i = 0; i < 4; ++i) inv[i][i] = 1;
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        assert(piv >= 0);
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        mpq_class d = inv_q(a[col][col]);
        for (int j = 0; j < 4; ++j) { a[col][j] *= d; inv[col][j] *= d; }
        for (int r = 0; r < 4; ++r) {
            if (r == col || a[r][col] == 0) continue;
            mpq_class f = a[r][col];
            for (int j = 0; j < 4; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

std::string coeff_str(const mpq_class& c) {
    mpq_class r = c;
    r.canonicalize();
    return r.get_str();
}

std::optional<mpq_class> parse_coeff(const std::string& s) {
    if (s.empty()) return std::nullopt;
    mpq_class r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) return std::nullopt;
    if (r.get_den() == 0) return std::nullopt;
    r.canonicalize();
    return r;
}

std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(" + ", pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 3;
    }
    return out;
}

// strip a required suffix; nullopt if absent
std::optional<std::string> strip_suffix(const std::string& s, const std::string& suf) {
    if (s.size() <= suf.size() || s.compare(s.size() - suf.size(), suf.size(), suf) != 0)
        return std::nullopt;
    return s.substr(0, s.size() - suf.size());
}

} // namespace

NumberField::NumberField(long q) : q_(q) {
    case_tag_of(q); // validates the residue class
    n0_ = (mpz_class(1) + q) / 4;
    compute_integral_basis();
}

// --- K arithmetic over {1, t}, t^2 = t - n0 ---

KElem NumberField::k_add(const KElem& x, const KElem& y) const {
    return {x.c0 + y.c0, x.c1 + y.c1};
}

KElem NumberField::k_sub(const KElem& x, const KElem& y) const {
    return {x.c0 - y.c0, x.c1 - y.c1};
}

KElem NumberField::k_neg(const KElem& x) const { return {-x.c0, -x.c1}; }

KElem NumberField::k_mul(const KElem& x, const KElem& y) const {
    mpq_class t = x.c1 * y.c1;
    return {x.c0 * y.c0 - mpq_class(n0_) * t, x.c0 * y.c1 + x.c1 * y.c0 + t};
}

KElem NumberField::k_conj(const KElem& x) const {
    // t -> 1 - t
    return {x.c0 + x.c1, -x.c1};
}

mpq_class NumberField::k_norm(const KElem& x) const {
    return x.c0 * x.c0 + x.c0 * x.c1 + mpq_class(n0_) * x.c1 * x.c1;
}

KElem NumberField::k_inv(const KElem& x) const {
    mpq_class n = k_norm(x);
    if (n == 0) throw DomainError("division by zero in K");
    mpq_class d = inv_q(n);
    KElem c = k_conj(x);
    return {c.c0 * d, c.c1 * d};
}

std::optional<KElem> NumberField::exact_sqrt_in_K(const KElem& x) const {
    // write x = a + b*sqrt(-q); a root c + d*sqrt(-q) satisfies
    // c^2 - q d^2 = a, 2cd = b
    mpq_class b = x.c1 / 2;
    mpq_class a = x.c0 + b;
    auto from_w = [](const mpq_class& c, const mpq_class& d) {
        return KElem{c - d, 2 * d};
    };
    if (b == 0) {
        if (auto c = sqrt_rational(a)) return from_w(*c, 0);
        if (auto d = sqrt_rational(-a / q_)) return from_w(0, *d);
        return std::nullopt;
    }
    // c^2 = (a +- sqrt(a^2 + q b^2)) / 2, d = b / (2c)
    auto s = sqrt_rational(a * a + q_ * b * b);
    if (!s) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        mpq_class c2 = (sign == 0) ? mpq_class((a + *s) / 2) : mpq_class((a - *s) / 2);
        if (auto c = sqrt_rational(c2)) {
            if (*c == 0) continue;
            mpq_class d = b / (2 * *c);
            return from_w(*c, d);
        }
    }
    return std::nullopt;
}

// --- F arithmetic over the power basis, alpha^4 = -q ---

FElem NumberField::f_zero() const { return {{0, 0, 0, 0}}; }
FElem NumberField::f_one() const { return {{1, 0, 0, 0}}; }
FElem NumberField::f_alpha() const { return {{0, 1, 0, 0}}; }

FElem NumberField::from_K(const KElem& x) const {
    // t = (1 + alpha^2) / 2
    mpq_class h = x.c1 / 2;
    return {{x.c0 + h, 0, h, 0}};
}

FElem NumberField::f_add(const FElem& x, const FElem& y) const {
    FElem r;
    for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
    return r;
}

FElem NumberField::f_sub(const FElem& x, const FElem& y) const {
    FElem r;
    for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] - y.c[i];
    return r;
}

FElem NumberField::f_neg(const FElem& x) const {
    FElem r;
    for (int i = 0; i < 4; ++i) r.c[i] = -x.c[i];
    return r;
}

FElem NumberField::f_mul(const FElem& x, const FElem& y) const {
    std::array<mpq_class, 7> p{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p[i + j] += x.c[i] * y.c[j];
    FElem r;
    for (int k = 6; k >= 4; --k) p[k - 4] -= q_ * p[k];
    for (int i = 0; i < 4; ++i) r.c[i] = p[i];
    return r;
}

FElem NumberField::f_scale(const mpq_class& s, const FElem& x) const {
    FElem r;
    for (int i = 0; i < 4; ++i) r.c[i] = s * x.c[i];
    return r;
}

FElem NumberField::f_conj(const FElem& x) const {
    return {{x.c[0], -x.c[1], x.c[2], -x.c[3]}};
}

KElem NumberField::norm_rel(const FElem& x) const {
    FElem p = f_mul(x, f_conj(x));
    assert(p.c[1] == 0 && p.c[3] == 0);
    // (p0, p2) over {1, sqrt(-q)} -> {1, t}
    return {p.c[0] - p.c[2], 2 * p.c[2]};
}

mpq_class NumberField::norm_abs(const FElem& x) const { return k_norm(norm_rel(x)); }

FElem NumberField::f_inv(const FElem& x) const {
    KElem n = norm_rel(x);
    if (n == k_zero()) throw DomainError("division by zero in F");
    return f_mul(f_conj(x), from_K(k_inv(n)));
}

FElem NumberField::f_pow(const FElem& x, long n) const {
    FElem base = n < 0 ? f_inv(x) : x;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    FElem acc = f_one();
    while (e) {
        if (e & 1) acc = f_mul(acc, base);
        base = f_mul(base, base);
        e >>= 1;
    }
    return acc;
}

FElem NumberField::gamma_from_ab(const KElem& a, const KElem& b) const {
    FElem bf = from_K(b);
    return f_add(from_K(a), f_mul(bf, f_alpha()));
}

std::pair<KElem, KElem> NumberField::split_ab(const FElem& x) const {
    // even coords form a + ..., odd coords (shifted) form b
    auto to_K = [](const mpq_class& u0, const mpq_class& u2) {
        return KElem{u0 - u2, 2 * u2};
    };
    return {to_K(x.c[0], x.c[2]), to_K(x.c[1], x.c[3])};
}

// --- integral structure ---

void NumberField::compute_integral_basis() {
    Mat4& rows = basis_.rows;
    mpq_class h(1, 2), qu(1, 4);
    rows[0] = {1, 0, 0, 0};
    rows[1] = {h, 0, h, 0}; // t
    rows[2] = {0, 1, 0, 0}; // alpha
    if (q_ % 8 == 3) {
        rows[3] = {0, h, 0, h}; // t*alpha
        basis_.index_at_2 = 1;
        basis_.disc_valuation_at_2 = 4;
    } else {
        rows[3] = {qu, qu, qu, qu}; // (t + t*alpha)/2
        basis_.index_at_2 = 2;
        basis_.disc_valuation_at_2 = 2;
    }
    basis_inv_ = invert4(rows);

    // ring closure: all pairwise products of basis elements must have
    // integer coordinates over the basis
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            FElem bi{rows[i]}, bj{rows[j]};
            FElem p = f_mul(bi, bj);
            auto coords = integral_coordinates(p);
            assert(coords.has_value());
            (void)coords;
        }
}

bool NumberField::is_integral(const FElem& x) const {
    return integral_coordinates(x).has_value();
}

std::optional<std::array<mpz_class, 4>> NumberField::integral_coordinates(const FElem& x) const {
    std::array<mpz_class, 4> out;
    for (int j = 0; j < 4; ++j) {
        mpq_class m = 0;
        for (int i = 0; i < 4; ++i) m += x.c[i] * basis_inv_[i][j];
        m.canonicalize();
        if (m.get_den() != 1) return std::nullopt;
        out[j] = m.get_num();
    }
    return out;
}

// --- embeddings ---

std::array<std::complex<double>, 2> NumberField::complex_embeddings(const FElem& x) const {
    double root = std::pow(static_cast<double>(q_), 0.25);
    std::array<std::complex<double>, 2> out;
    for (int k = 0; k < 2; ++k) {
        double ang = (k == 0 ? 1.0 : 3.0) * M_PI / 4.0;
        std::complex<double> mu = root * std::complex<double>(std::cos(ang), std::sin(ang));
        std::complex<double> acc(0.0, 0.0);
        for (int i = 3; i >= 0; --i) acc = acc * mu + x.c[i].get_d();
        out[k] = acc;
    }
    return out;
}

double NumberField::height(const FElem& x) const {
    auto e = complex_embeddings(x);
    return std::max(std::log(std::abs(e[0])), std::log(std::abs(e[1])));
}

TowerElement NumberField::embed(const FElem& x, const LocalTower& tower) const {
    // pull out the 2-part of each denominator; odd parts invert mod 2^W
    long v = 0;
    for (const auto& ci : x.c) {
        mpz_class den = ci.get_den();
        if (den != 0 && ci != 0) {
            long v2 = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
            v = std::max(v, v2);
        }
    }
    long wide = tower.work_bits() + v + 4;
    mpz_class wmod;
    mpz_ui_pow_ui(wmod.get_mpz_t(), 2, static_cast<unsigned long>(wide));

    std::array<mpz_class, 4> y; // scaled coords: y[i] = 2^v * x.c[i] mod 2^wide
    bool exact = (v == 0);
    for (int i = 0; i < 4; ++i) {
        mpq_class s = x.c[i] * mpq_class(mpz_class(1) << static_cast<unsigned long>(v));
        s.canonicalize();
        mpz_class den = s.get_den();
        assert(mpz_odd_p(den.get_mpz_t()));
        if (den != 1) exact = false;
        mpz_class dinv;
        int ok = mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), wmod.get_mpz_t());
        assert(ok);
        (void)ok;
        mpz_class t;
        mpz_fdiv_r(t.get_mpz_t(), mpz_class(s.get_num() * dinv).get_mpz_t(), wmod.get_mpz_t());
        y[i] = t;
    }

    // 2^v * x = y0 + y1 a + y2 w + y3 w a, w = sqrt(-q) of the base
    std::array<mpz_class, 4> c;
    if (tower.case_tag() == CaseTag::q3mod8) {
        // w = 2 theta - 1
        c[0] = y[0] - y[2];
        c[1] = 2 * y[2];
        c[2] = y[1] - y[3];
        c[3] = 2 * y[3];
    } else {
        const mpz_class& s = tower.sqrt_mq_numeric();
        c[0] = y[0] + s * y[2];
        c[1] = 0;
        c[2] = y[1] + s * y[3];
        c[3] = 0;
    }
    TowerElement e;
    for (int i = 0; i < 4; ++i) {
        mpz_class t;
        mpz_fdiv_r(t.get_mpz_t(), c[i].get_mpz_t(), wmod.get_mpz_t());
        if (v > 0) {
            if (mpz_scan1(t.get_mpz_t(), 0) < static_cast<unsigned long>(v) && t != 0)
                throw DomainError("element is not integral at 2");
            t >>= static_cast<unsigned long>(v);
        }
        mpz_fdiv_r(e.c[i].get_mpz_t(), t.get_mpz_t(), tower.modulus().get_mpz_t());
    }
    e.prec = exact ? TowerElement::kExactBits : tower.work_bits();
    return e;
}

TowerElement NumberField::embed_K(const KElem& x, const LocalTower& tower) const {
    return embed(from_K(x), tower);
}

// --- canonical strings ---

std::string NumberField::to_string(const FElem& x) {
    std::ostringstream os;
    os << coeff_str(x.c[0]) << " + " << coeff_str(x.c[1]) << "*a + "
       << coeff_str(x.c[2]) << "*a^2 + " << coeff_str(x.c[3]) << "*a^3";
    return os.str();
}

std::string NumberField::to_string(const KElem& x) {
    std::ostringstream os;
    os << coeff_str(x.c0) << " + " << coeff_str(x.c1) << "*t";
    return os.str();
}

std::optional<FElem> NumberField::parse_F(const std::string& s) {
    auto terms = split_terms(s);
    if (terms.size() != 4) return std::nullopt;
    static const char* suffixes[4] = {nullptr, "*a", "*a^2", "*a^3"};
    FElem r;
    for (int i = 0; i < 4; ++i) {
        std::string body = terms[i];
        if (suffixes[i]) {
            auto stripped = strip_suffix(body, suffixes[i]);
            if (!stripped) return std::nullopt;
            body = *stripped;
        }
        auto c = parse_coeff(body);
        if (!c) return std::nullopt;
        r.c[i] = *c;
    }
    return r;
}

std::optional<KElem> NumberField::parse_K(const std::string& s) {
    auto terms = split_terms(s);
    if (terms.size() != 2) return std::nullopt;
    auto body = strip_suffix(terms[1], "*t");
    if (!body) return std::nullopt;
    auto c0 = parse_coeff(terms[0]);
    auto c1 = parse_coeff(*body);
    if (!c0 || !c1) return std::nullopt;
    return KElem{*c0, *c1};
}

} // namespace qulog
