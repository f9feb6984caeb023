#include "qulog/unit_engine.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace qulog {

namespace {

long lmod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// acceptance table for one sieve modulus: marks residue pairs
// (B0, B1) mod p for which z = sign*pi*k^2 + sqrt(-q)*B^2 can still be
// a square, judged by N(z) mod p being a quadratic residue (or 0)
struct SieveTable {
    long p;
    std::vector<uint8_t> ok[2]; // [sign index][r0 * p + r1]
};

// all of n0p, p0, p1 are residues already reduced mod p
SieveTable build_table(long p, long n0p, long p0, long p1) {
    SieveTable t;
    t.p = p;
    std::vector<uint8_t> sq(p, 0);
    sq[0] = 1;
    for (long r = 1; r < p; ++r) sq[r * r % p] = 1;
    for (int si = 0; si < 2; ++si) {
        long sgn = si == 0 ? 1 : -1;
        t.ok[si].assign(p * p, 0);
        for (long r0 = 0; r0 < p; ++r0)
            for (long r1 = 0; r1 < p; ++r1) {
                long s0 = lmod(r0 * r0 - n0p * r1 * r1, p);
                long s1 = lmod(2 * r0 * r1 + r1 * r1, p);
                // sqrt(-q) * B^2 = (2 th - 1)(s0 + s1 th)
                long z0 = lmod(sgn * p0 - s0 - 2 * n0p * s1, p);
                long z1 = lmod(sgn * p1 + 2 * s0 + s1, p);
                long n = lmod(z0 * z0 + z0 * z1 + n0p * z1 * z1, p);
                t.ok[si][r0 * p + r1] = sq[n];
            }
    }
    return t;
}

} // namespace

std::vector<FElem> torsion_units(const NumberField& field) {
    std::vector<FElem> out;
    out.push_back(field.f_one());
    out.push_back(field.f_neg(field.f_one()));
    if (field.q() == 3) {
        KElem zeta{-1, 1}; // (-1 + sqrt(-3))/2
        FElem w = field.from_K(zeta);
        FElem w2 = field.f_mul(w, w);
        out.push_back(w);
        out.push_back(field.f_neg(w));
        out.push_back(w2);
        out.push_back(field.f_neg(w2));
    }
    return out;
}

std::variant<UnitCertificate, NotFound>
solve_gamma(const NumberField& field, const LocalTower& tower,
            unsigned long m, const KElem& pi, double height_bound) {
    long q = field.q();
    bool half = (tower.case_tag() != CaseTag::q3mod8);
    long k = half ? 2 : 1; // enumerate B = k*b so B is integral over {1, t}
    mpz_class n0z = field.n0();

    // pi has integer coordinates; scale by k^2
    assert(pi.c0.get_den() == 1 && pi.c1.get_den() == 1);
    mpz_class P0 = pi.c0.get_num() * k * k;
    mpz_class P1 = pi.c1.get_num() * k * k;

    // mpz_fdiv_ui floors, so residues of negative values land in [0, p)
    auto res = [](const mpz_class& x, long p) {
        return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p)));
    };

    // sieve tables: mod 8 square classes of O_K, then quadratic residues
    // of the norm at four small odd primes
    bool s8[64] = {};
    {
        long n0m8 = res(n0z, 8);
        for (long x = 0; x < 8; ++x)
            for (long y = 0; y < 8; ++y) {
                long a = lmod(x * x - n0m8 * y * y, 8);
                long b = lmod(2 * x * y + y * y, 8);
                s8[a * 8 + b] = true;
            }
    }
    uint8_t ok8[2][64];
    {
        long n0m8 = res(n0z, 8), p0m8 = res(P0, 8), p1m8 = res(P1, 8);
        for (int si = 0; si < 2; ++si) {
            long sgn = si == 0 ? 1 : -1;
            for (long r0 = 0; r0 < 8; ++r0)
                for (long r1 = 0; r1 < 8; ++r1) {
                    long s0 = lmod(r0 * r0 - n0m8 * r1 * r1, 8);
                    long s1 = lmod(2 * r0 * r1 + r1 * r1, 8);
                    long z0 = lmod(sgn * p0m8 - s0 - 2 * n0m8 * s1, 8);
                    long z1 = lmod(sgn * p1m8 + 2 * s0 + s1, 8);
                    ok8[si][r0 * 8 + r1] = s8[z0 * 8 + z1];
                }
        }
    }
    std::vector<SieveTable> tables;
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L}) {
        if (q % p == 0) continue;
        tables.push_back(build_table(p, res(n0z, p), res(P0, p), res(P1, p)));
        if (tables.size() == 4) break;
    }

    double rB = k * std::exp(height_bound) / std::pow(static_cast<double>(q), 0.25);
    long b1max = static_cast<long>(std::floor(2.0 * rB / std::sqrt(static_cast<double>(q))));

    std::optional<FElem> best;
    double best_h = 0;
    int best_sign = 0;

    mpq_class kq(k);
    for (long B1 = 0; B1 <= b1max; ++B1) {
        double under = rB * rB - static_cast<double>(q) * B1 * B1 / 4.0;
        if (under < 0) break;
        double halfw = std::sqrt(under);
        long lo = static_cast<long>(std::ceil(-B1 / 2.0 - halfw));
        long hi = static_cast<long>(std::floor(-B1 / 2.0 + halfw));
        if (B1 == 0) lo = std::max(lo, 0L); // B and -B give the same square
        for (long B0 = lo; B0 <= hi; ++B0) {
            long r0m8 = lmod(B0, 8), r1m8 = lmod(B1, 8);
            for (int si = 0; si < 2; ++si) {
                if (!ok8[si][r0m8 * 8 + r1m8]) continue;
                bool pass = true;
                for (const auto& t : tables)
                    if (!t.ok[si][lmod(B0, t.p) * t.p + lmod(B1, t.p)]) { pass = false; break; }
                if (!pass) continue;

                // exact stage: z = sign*k^2*pi + sqrt(-q)*B^2
                long sgn = si == 0 ? 1 : -1;
                mpz_class s0 = mpz_class(B0) * B0 - n0z * B1 * B1;
                mpz_class s1 = 2 * mpz_class(B0) * B1 + mpz_class(B1) * B1;
                mpz_class z0 = sgn * P0 - s0 - 2 * n0z * s1;
                mpz_class z1 = sgn * P1 + 2 * s0 + s1;
                mpz_class nz = z0 * z0 + z0 * z1 + n0z * z1 * z1;
                if (!mpz_perfect_square_p(nz.get_mpz_t())) continue;
                auto A = field.exact_sqrt_in_K(KElem{mpq_class(z0), mpq_class(z1)});
                if (!A) continue;

                KElem bK{mpq_class(B0) / kq, mpq_class(B1) / kq};
                for (int as = 0; as < 2; ++as) {
                    KElem aK = as == 0 ? *A : field.k_neg(*A);
                    aK = {aK.c0 / kq, aK.c1 / kq};
                    FElem gamma = field.gamma_from_ab(aK, bK);
                    if (!field.is_integral(gamma)) continue;
                    double h = field.height(gamma);
                    if (!best || h < best_h - 1e-12) {
                        best = gamma;
                        best_h = h;
                        best_sign = sgn;
                    }
                }
            }
        }
    }

    if (!best) return NotFound{height_bound};
    UnitCertificate cert;
    cert.q = q;
    cert.m = m;
    cert.pi = pi;
    cert.gamma = *best;
    cert.sign_of_norm = best_sign;
    cert.provenance = Provenance::builtin_search;
    return cert;
}

UnitCertificate eta_from_gamma(const NumberField& field, const LocalTower& tower,
                               UnitCertificate cert) {
    if (!cert.gamma)
        throw InvariantViolation("gamma_present", "certificate has no gamma to square");
    const FElem& g = *cert.gamma;

    KElem nr = field.norm_rel(g);
    int sign;
    if (nr == cert.pi) sign = 1;
    else if (nr == field.k_neg(cert.pi)) sign = -1;
    else throw InvariantViolation("norm_rel(gamma) = sign*pi",
                                  "relative norm of gamma is not +-pi");
    if (cert.sign_of_norm != 0 && cert.sign_of_norm != sign)
        throw InvariantViolation("sign_of_norm", "recorded sign does not match norm_rel(gamma)");
    cert.sign_of_norm = sign;

    FElem eta = field.f_mul(field.f_mul(g, g), field.from_K(field.k_inv(cert.pi)));
    if (!field.is_integral(eta))
        throw InvariantViolation("eta integral", "gamma^2/pi is not an algebraic integer");
    if (!(field.norm_rel(eta) == field.k_one()))
        throw InvariantViolation("norm_rel(eta) = 1", "gamma^2/pi does not have relative norm 1");

    // normalize into 1 + P; the torsion twists are only available for q = 3
    bool fixed = false;
    for (const FElem& t : torsion_units(field)) {
        FElem cand = field.f_mul(eta, t);
        if (!(field.norm_rel(cand) == field.k_one())) continue;
        auto o = tower.ord(tower.sub(field.embed(cand, tower), tower.one()));
        if (!o || *o >= 1) {
            eta = cand;
            fixed = true;
            break;
        }
    }
    if (!fixed)
        throw InvariantViolation("eta = 1 mod P",
                                 "no torsion twist of gamma^2/pi is congruent to 1 mod P");

    cert.eta = eta;
    cert.parity_verified = true;
    return cert;
}

std::optional<FElem> bruteforce_fundamental_unit(const NumberField& field,
                                                 double height_bound) {
    // real 4x4 embedding matrix of the integral basis; invert to bound
    // the integer coordinates of anything inside the height box
    double E[4][4];
    for (int i = 0; i < 4; ++i) {
        FElem bi{field.integral_basis().rows[i]};
        auto em = field.complex_embeddings(bi);
        E[i][0] = em[0].real();
        E[i][1] = em[0].imag();
        E[i][2] = em[1].real();
        E[i][3] = em[1].imag();
    }
    // Gauss-Jordan with partial pivoting
    double inv[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    {
        double a[4][4];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a[i][j] = E[i][j];
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
            for (int j = 0; j < 4; ++j) {
                std::swap(a[piv][j], a[col][j]);
                std::swap(inv[piv][j], inv[col][j]);
            }
            double d = 1.0 / a[col][col];
            for (int j = 0; j < 4; ++j) { a[col][j] *= d; inv[col][j] *= d; }
            for (int r = 0; r < 4; ++r) {
                if (r == col) continue;
                double f = a[r][col];
                for (int j = 0; j < 4; ++j) {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    double box = std::exp(height_bound);
    long bound[4];
    for (int i = 0; i < 4; ++i) {
        double s = 0;
        for (int j = 0; j < 4; ++j) s += std::fabs(inv[j][i]);
        bound[i] = static_cast<long>(std::floor(box * s)) + 1;
    }

    std::optional<FElem> best;
    double best_h = 0;
    std::vector<FElem> tors = torsion_units(field);
    std::array<long, 4> mv{};
    for (mv[0] = -bound[0]; mv[0] <= bound[0]; ++mv[0])
        for (mv[1] = -bound[1]; mv[1] <= bound[1]; ++mv[1])
            for (mv[2] = -bound[2]; mv[2] <= bound[2]; ++mv[2])
                for (mv[3] = -bound[3]; mv[3] <= bound[3]; ++mv[3]) {
                    if (mv[0] == 0 && mv[1] == 0 && mv[2] == 0 && mv[3] == 0) continue;
                    FElem u = field.f_zero();
                    for (int i = 0; i < 4; ++i)
                        u = field.f_add(u, field.f_scale(mpq_class(mv[i]),
                                                         FElem{field.integral_basis().rows[i]}));
                    mpq_class n = field.norm_abs(u);
                    if (n != 1 && n != -1) continue;
                    double h = field.height(u);
                    if (h < 1e-9) continue; // torsion
                    if (!best || h < best_h - 1e-12) {
                        best = u;
                        best_h = h;
                    }
                }
    return best;
}

std::optional<PowerExpression> express_power(const NumberField& field,
                                             const FElem& u, const FElem& eta0) {
    double hu = field.height(u);
    double h0 = field.height(eta0);
    if (h0 < 1e-9) return std::nullopt;
    long k0 = std::lround(hu / h0);
    std::vector<FElem> tors = torsion_units(field);
    for (long dk : {0L, -1L, 1L}) {
        for (int sgn = 0; sgn < 2; ++sgn) {
            long k = (sgn == 0 ? 1 : -1) * (k0 + dk);
            FElem t = field.f_mul(u, field.f_pow(eta0, -k));
            for (const FElem& z : tors)
                if (t == z) return PowerExpression{k, t};
            if (k == 0) break; // +-0 are the same candidate
        }
    }
    return std::nullopt;
}

} // namespace qulog
