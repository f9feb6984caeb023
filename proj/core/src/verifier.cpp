#include "qulog/verifier.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace qulog {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_prime(long q) {
    mpz_class z(q);
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

// --- Z_2 row reduction helpers (rows are length-4 Dyadic vectors) ---

using DRow = std::vector<Dyadic>;

long val_or_horizon(const Dyadic& d) {
    if (d.is_zero_at_precision()) return Dyadic::kExact;
    return d.valuation();
}

// Upper-triangular Z_2-basis by column order; basis[c] has its pivot at
// column c and zero entries left of it.
struct Triangular {
    std::array<std::optional<DRow>, 4> basis;
};

Triangular triangularize(std::vector<DRow> rows) {
    Triangular t;
    for (int col = 0; col < 4; ++col) {
        long best = Dyadic::kExact;
        size_t pick = rows.size();
        for (size_t r = 0; r < rows.size(); ++r) {
            long v = val_or_horizon(rows[r][col]);
            if (v < best) { best = v; pick = r; }
        }
        if (pick == rows.size()) continue; // no pivot in this column
        DRow piv = std::move(rows[pick]);
        rows.erase(rows.begin() + pick);
        for (auto& r : rows) {
            if (r[col].is_zero_at_precision()) continue;
            Dyadic f = r[col] / piv[col];
            for (int j = col; j < 4; ++j) r[j] = r[j] - f * piv[j];
        }
        t.basis[col] = std::move(piv);
    }
    return t;
}

// Coordinates of v over the triangular basis; nullopt when v is not a
// Z_2-combination (a coefficient escapes Z_2 or a residual digit remains).
std::optional<std::array<Dyadic, 4>> coords_in(const Triangular& t, DRow v) {
    std::array<Dyadic, 4> c{Dyadic::exact_zero(), Dyadic::exact_zero(),
                            Dyadic::exact_zero(), Dyadic::exact_zero()};
    for (int col = 0; col < 4; ++col) {
        if (v[col].is_zero_at_precision()) continue;
        if (!t.basis[col]) return std::nullopt;
        const DRow& piv = *t.basis[col];
        Dyadic f = v[col] / piv[col];
        if (f.valuation() < 0) return std::nullopt; // not a 2-adic integer
        for (int j = col; j < 4; ++j) v[j] = v[j] - f * piv[j];
        c[col] = f;
    }
    for (int j = 0; j < 4; ++j)
        if (!v[j].is_zero_at_precision()) return std::nullopt;
    return c;
}

// The eight standard generators of 1 + P O and their logs as coordinate
// rows over {1, theta, alpha, theta*alpha}. Only for residue field F_4.
std::vector<DRow> unit_log_rows(const LocalTower& tower) {
    if (tower.case_tag() != CaseTag::q3mod8)
        throw DomainError("the unit-log lattice generators require q = 3 mod 8");
    TowerElement theta = tower.zero();
    theta.c[1] = 1;
    theta.prec = TowerElement::kExactBits;
    TowerElement theta_alpha = tower.zero();
    theta_alpha.c[3] = 1;
    theta_alpha.prec = TowerElement::kExactBits;
    std::array<TowerElement, 4> bs = {tower.one(), theta, tower.alpha(), theta_alpha};

    TowerElement pi1 = tower.uniformizer();
    TowerElement pi2 = tower.mul(pi1, pi1);
    std::vector<DRow> rows;
    for (const TowerElement& p : {pi1, pi2})
        for (const TowerElement& b : bs) {
            TowerElement g = tower.add(tower.one(), tower.mul(p, b));
            TowerElement lg = tower.log(g);
            long prec = std::min(lg.prec, tower.work_bits());
            DRow row;
            for (const auto& coord : tower.coordinates(lg))
                row.push_back(Dyadic::from_integer(coord, prec));
            rows.push_back(std::move(row));
        }
    return rows;
}

DRow element_row(const LocalTower& tower, const TowerElement& x) {
    long prec = std::min(x.prec, tower.work_bits());
    DRow row;
    for (const auto& coord : tower.coordinates(x))
        row.push_back(Dyadic::from_integer(coord, prec));
    return row;
}

} // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::PASS: return "PASS";
        case Status::FAIL: return "FAIL";
        case Status::SKIPPED: return "SKIPPED";
    }
    return "?";
}

VerifyOptions VerifyOptions::defaults() { return {}; }

mpz_class coates_wiles_index(long ord_log) {
    if (ord_log < 2)
        throw AnomalyFlag("ord(log eta) < 2 contradicts the valuation bound");
    if (ord_log % 2 != 0)
        throw AnomalyFlag("odd ord(log eta) contradicts the parity lemma");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>((ord_log - 2) / 2));
    return r;
}

std::vector<long> snf_Z2(const std::vector<std::vector<Dyadic>>& matrix,
                         long precision_bits) {
    std::vector<std::vector<Dyadic>> m = matrix;
    size_t nrows = m.size();
    size_t ncols = nrows ? m[0].size() : 0;
    std::vector<bool> row_used(nrows, false), col_used(ncols, false);
    std::vector<long> divisors;
    while (true) {
        long best = Dyadic::kExact;
        size_t br = nrows, bc = ncols;
        for (size_t r = 0; r < nrows; ++r) {
            if (row_used[r]) continue;
            for (size_t c = 0; c < ncols; ++c) {
                if (col_used[c]) continue;
                long v = val_or_horizon(m[r][c]);
                if (v < best) { best = v; br = r; bc = c; }
            }
        }
        if (br == nrows) break; // nothing visible remains
        if (best >= precision_bits - 8)
            throw PrecisionExhausted("snf_Z2: pivot too close to the precision horizon");
        divisors.push_back(best);
        // min-valuation pivot divides every active entry, so one row
        // sweep empties its column; the pivot row leaves with it
        for (size_t r = 0; r < nrows; ++r) {
            if (row_used[r] || r == br || m[r][bc].is_zero_at_precision()) continue;
            Dyadic f = m[r][bc] / m[br][bc];
            for (size_t c = 0; c < ncols; ++c) {
                if (col_used[c]) continue;
                m[r][c] = m[r][c] - f * m[br][c];
            }
        }
        row_used[br] = true;
        col_used[bc] = true;
    }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

UMod4Result u_mod4_check(const NumberField& field, const LocalTower& tower,
                         const UnitCertificate& cert) {
    if (tower.case_tag() == CaseTag::q3mod8)
        throw DomainError("u mod 4 is defined only when 2 splits (q = 7 mod 8)");
    if (cert.sign_of_norm == 0)
        throw DomainError("u mod 4 needs the norm sign, which requires gamma");
    KElem signed_pi = cert.sign_of_norm == 1 ? cert.pi : field.k_neg(cert.pi);
    TowerElement e = field.embed_K(signed_pi, tower);

    UMod4Result res;
    auto o = tower.ord(e);
    res.pass = o.has_value() && *o == 2 * static_cast<long>(cert.m);
    if (!res.pass) return res;
    mpz_class u = e.c[0] >> static_cast<unsigned long>(cert.m);
    long u8 = static_cast<long>(mpz_fdiv_ui(u.get_mpz_t(), 8));
    res.residue = static_cast<int>(u8 % 4);
    res.hilbert_consistent =
        hilbert_2(mpq_class(2 * u8), mpq_class(-tower.q())) == 1;
    return res;
}

CorollaryResult corollary_check(const NumberField& field, const LocalTower& tower,
                                const UnitCertificate& cert) {
    CorollaryResult out;
    std::vector<DRow> rows = unit_log_rows(tower);

    std::vector<std::vector<Dyadic>> mat(rows.begin(), rows.end());
    out.divisor_valuations = snf_Z2(mat, tower.precision_bits());

    Triangular basis = triangularize(rows);

    // sampled principal units must have logs inside the lattice
    std::mt19937_64 rng(0xC0DE0000ull + static_cast<unsigned long>(tower.q()));
    bool span_ok = true;
    TowerElement pi1 = tower.uniformizer();
    for (int trial = 0; trial < 20 && span_ok; ++trial) {
        TowerElement r = tower.zero();
        for (int i = 0; i < 4; ++i) r.c[i] = mpz_class(rng());
        r.prec = TowerElement::kExactBits;
        TowerElement u = tower.add(tower.one(), tower.mul(pi1, r));
        TowerElement lu = tower.log(u);
        if (!coords_in(basis, element_row(tower, lu))) span_ok = false;
    }
    out.span_verified = span_ok;

    // primitivity of log(eta): some basis coefficient must be a unit
    TowerElement leta = tower.log(field.embed(cert.eta, tower));
    auto coeffs = coords_in(basis, element_row(tower, leta));
    if (!coeffs)
        throw InvariantViolation("log(eta) in unit-log lattice",
                                 "log of eta escapes the principal-unit log lattice");
    bool primitive = false;
    for (const auto& c : *coeffs)
        if (!c.is_zero_at_precision() && c.valuation() == 0) primitive = true;
    out.free = primitive;
    out.rank = 3;
    return out;
}

bool log_is_primitive_in_unit_log_lattice(const LocalTower& tower,
                                          const TowerElement& log_value) {
    Triangular basis = triangularize(unit_log_rows(tower));
    auto coeffs = coords_in(basis, element_row(tower, log_value));
    if (!coeffs)
        throw InvariantViolation("lattice membership",
                                 "value is not in the unit-log lattice");
    for (const auto& c : *coeffs)
        if (!c.is_zero_at_precision() && c.valuation() == 0) return true;
    return false;
}

bool sqrt_minus1_second_proof(long q, long precision_bits) {
    if (q % 16 != 15)
        throw DomainError("the local sqrt(-1) argument applies only to q = 15 mod 16");
    LocalTower tower(q, precision_bits);
    auto root = tower.sqrt_minus1();
    if (!root) return false;
    auto o = tower.ord(tower.sub(*root, tower.one()));
    return !o || *o >= 1;
}

namespace {

// ords and case checks shared by the search and import paths; returns a
// list of failed identities (empty = pass)
std::vector<std::string> analyze(const NumberField& field, const LocalTower& tower,
                                 const UnitCertificate& cert, VerificationRecord& rec) {
    std::vector<std::string> problems;

    TowerElement e = field.embed(cert.eta, tower);
    TowerElement einv = field.embed(field.f_inv(cert.eta), tower);
    TowerElement e2 = tower.mul(e, e);
    TowerElement e4 = tower.mul(e2, e2);

    auto must_ord = [&](const TowerElement& x, const char* what) -> long {
        auto o = tower.ord(x);
        if (!o)
            throw InvariantViolation(what, std::string(what) + " is exactly zero");
        return *o;
    };

    long ord_plus = must_ord(tower.add(e, einv), "eta + eta^-1");
    long ord_minus = must_ord(tower.sub(e, einv), "eta - eta^-1");
    long ord_eta4 = must_ord(tower.sub(e4, tower.one()), "eta^4 - 1");
    long ord_log = must_ord(tower.log_unit(e), "log(eta)");

    rec.ord_plus = ord_plus;
    rec.ord_eta4 = ord_eta4;
    rec.ord_log = ord_log;

    // pi really generates P^(2m)
    auto opi = tower.ord(field.embed_K(cert.pi, tower));
    if (!opi || *opi != 2 * static_cast<long>(cert.m))
        problems.push_back("ord(pi) != 2m");

    if (ord_eta4 != ord_plus + ord_minus)
        problems.push_back("ord(eta^4-1) != ord(eta+eta^-1) + ord(eta-eta^-1)");
    if (ord_log != ord_eta4 - 4)
        problems.push_back("ord(log eta) != ord(eta^4-1) - 4");

    if (rec.case_tag == CaseTag::q3mod8) {
        rec.ord_minus = ord_minus;
        if (ord_plus != 2) problems.push_back("ord(eta+eta^-1) != 2");
        if (ord_minus != 2) problems.push_back("ord(eta-eta^-1) != 2");
        if (ord_eta4 != 4) problems.push_back("ord(eta^4-1) != 4");
        if (ord_log != 0) problems.push_back("ord(log eta) != 0");
        CorollaryResult cor = corollary_check(field, tower, cert);
        rec.corollary_rank = cor.rank;
        if (!cor.free) problems.push_back("log(eta) is not primitive (torsion detected)");
        if (!cor.span_verified) problems.push_back("sampled unit log escaped the lattice");
        if (cor.divisor_valuations != std::vector<long>{0, 0, 1, 2})
            problems.push_back("unit-log lattice divisors are not [0,0,1,2]");
    } else {
        if (ord_minus != 2) problems.push_back("ord(eta-eta^-1) != 2");
        if (ord_log < 2 || ord_log % 2 != 0)
            problems.push_back("ord(log eta) is not an even value >= 2");
        try {
            rec.cw_index = coates_wiles_index(ord_log);
        } catch (const AnomalyFlag& a) {
            problems.push_back(a.what());
        }
        if (cert.sign_of_norm != 0) {
            UMod4Result u = u_mod4_check(field, tower, cert);
            if (!u.pass) {
                problems.push_back("odd part of embedded pi has wrong valuation");
            } else {
                rec.u_mod4 = u.residue;
                if (!u.hilbert_consistent)
                    problems.push_back("hilbert_2(2u, -q) != 1");
                if ((u.residue == 3) != (ord_log == 2))
                    problems.push_back("u mod 4 contradicts ord(log eta) trichotomy");
                if (u.residue == 1 && ord_log < 6)
                    problems.push_back("u = 1 mod 4 but ord(log eta) < 6");
            }
        } else if (ord_log != 2 && ord_log < 6) {
            problems.push_back("ord(log eta) is neither 2 nor >= 6");
        }
    }
    return problems;
}

// reported ord close to the horizon: retry with more precision
bool near_horizon(const VerificationRecord& rec, long precision_bits) {
    long horizon = 2 * precision_bits - 8;
    auto close = [&](const std::optional<long>& o) { return o && *o >= horizon; };
    return close(rec.ord_plus) || close(rec.ord_minus) || close(rec.ord_eta4) ||
           close(rec.ord_log);
}

} // namespace

VerificationRecord verify_theorem(long q, const VerifyOptions& opts,
                                  UnitCertificate* out_cert) {
    auto t0 = Clock::now();
    if (q < 3 || q % 4 != 3 || !is_prime(q))
        throw DomainError("q must be a prime congruent to 3 mod 4");

    VerificationRecord rec;
    rec.q = q;
    rec.case_tag = case_tag_of(q);

    NumberField field(q);
    long prec = opts.precision_bits;
    auto tower = std::make_unique<LocalTower>(q, prec);

    unsigned long m = odd_generator_exponent(q, *tower);
    KElem pi = generator_of_p_power(q, m, field, *tower);
    rec.m = m;

    // height schedule: quadruple the search ellipse until found or out of
    // budget; a caller-specified height is used as a single round
    std::vector<double> schedule;
    if (opts.initial_height > 0) {
        schedule.push_back(opts.initial_height);
    } else {
        for (double r : {64.0, 256.0, 1024.0, 4096.0})
            schedule.push_back(std::log(r) + 0.25 * std::log(static_cast<double>(q)));
    }

    std::optional<UnitCertificate> cert;
    double last_height = 0;
    for (double h : schedule) {
        last_height = h;
        auto res = solve_gamma(field, *tower, m, pi, h);
        if (std::holds_alternative<UnitCertificate>(res)) {
            cert = std::get<UnitCertificate>(std::move(res));
            break;
        }
        if (elapsed_secs(t0) > opts.timeout_secs) break;
    }
    rec.precision_used = prec;
    rec.seconds = static_cast<long>(elapsed_secs(t0));
    if (!cert) {
        rec.status = Status::SKIPPED;
        std::ostringstream os;
        os << "no gamma found with height <= " << last_height;
        rec.note = os.str();
        return rec;
    }

    try {
        *cert = eta_from_gamma(field, *tower, std::move(*cert));
        rec.sign_of_norm = cert->sign_of_norm;
        rec.parity_verified = cert->parity_verified;
        if (out_cert) *out_cert = *cert;

        std::vector<std::string> problems;
        for (int attempt = 0;; ++attempt) {
            try {
                VerificationRecord scratch = rec;
                problems = analyze(field, *tower, *cert, scratch);
                if (near_horizon(scratch, prec) && opts.escalate_precision && attempt < 2) {
                    prec = std::max(256L, 2 * prec);
                    tower = std::make_unique<LocalTower>(q, prec);
                    continue;
                }
                rec = scratch;
                break;
            } catch (const PrecisionExhausted&) {
                if (!opts.escalate_precision || attempt >= 2) throw;
                prec = std::max(256L, 2 * prec);
                tower = std::make_unique<LocalTower>(q, prec);
            }
        }
        rec.precision_used = prec;
        rec.status = problems.empty() ? Status::PASS : Status::FAIL;
        if (!problems.empty()) {
            std::ostringstream os;
            for (size_t i = 0; i < problems.size(); ++i)
                os << (i ? "; " : "") << problems[i];
            rec.note = os.str();
        }
    } catch (const InvariantViolation& v) {
        rec.status = Status::FAIL;
        rec.note = std::string("invariant failed [") + v.identity() + "]: " + v.what();
    } catch (const PrecisionExhausted& p) {
        rec.status = Status::FAIL;
        rec.note = std::string("precision exhausted: ") + p.what();
    }
    rec.seconds = static_cast<long>(elapsed_secs(t0));
    return rec;
}

VerificationRecord verify_certificate(const UnitCertificate& cert,
                                      const VerifyOptions& opts) {
    auto t0 = Clock::now();
    long q = cert.q;
    if (q < 3 || q % 4 != 3 || !is_prime(q))
        throw DomainError("certificate q must be a prime congruent to 3 mod 4");

    VerificationRecord rec;
    rec.q = q;
    rec.case_tag = case_tag_of(q);
    rec.m = cert.m;

    NumberField field(q);
    long prec = opts.precision_bits;
    auto tower = std::make_unique<LocalTower>(q, prec);

    UnitCertificate work = cert;
    try {
        if (work.gamma) {
            work = eta_from_gamma(field, *tower, std::move(work));
        } else {
            work.sign_of_norm = 0;
            work.parity_verified = false;
        }
        rec.sign_of_norm = work.sign_of_norm;
        rec.parity_verified = work.parity_verified;

        std::vector<std::string> problems;
        for (int attempt = 0;; ++attempt) {
            try {
                VerificationRecord scratch = rec;
                problems = analyze(field, *tower, work, scratch);
                if (near_horizon(scratch, prec) && opts.escalate_precision && attempt < 2) {
                    prec = std::max(256L, 2 * prec);
                    tower = std::make_unique<LocalTower>(q, prec);
                    continue;
                }
                rec = scratch;
                break;
            } catch (const PrecisionExhausted&) {
                if (!opts.escalate_precision || attempt >= 2) throw;
                prec = std::max(256L, 2 * prec);
                tower = std::make_unique<LocalTower>(q, prec);
            }
        }
        rec.precision_used = prec;
        rec.status = problems.empty() ? Status::PASS : Status::FAIL;
        std::ostringstream os;
        for (size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
        if (!work.parity_verified) {
            if (os.tellp() > 0) os << "; ";
            os << "parity not verified (no gamma)";
        }
        rec.note = os.str();
    } catch (const InvariantViolation& v) {
        rec.status = Status::FAIL;
        rec.note = std::string("invariant failed [") + v.identity() + "]: " + v.what();
    } catch (const PrecisionExhausted& p) {
        rec.status = Status::FAIL;
        rec.note = std::string("precision exhausted: ") + p.what();
    }
    rec.seconds = static_cast<long>(elapsed_secs(t0));
    return rec;
}

} // namespace qulog
