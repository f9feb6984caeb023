#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qulog/dyadic.hpp"
#include "qulog/unit_engine.hpp"

namespace qulog {

enum class Status { PASS, FAIL, SKIPPED };
const char* to_string(Status s);

// One row of results for a single q. ord_plus = ord(eta + eta^-1),
// ord_minus = ord(eta - eta^-1) (only meaningful for q = 3 mod 8),
// ord_eta4 = ord(eta^4 - 1), ord_log = ord(log eta).
struct VerificationRecord {
    long q = 0;
    CaseTag case_tag = CaseTag::q3mod8;
    unsigned long m = 0;
    std::optional<long> ord_plus;
    std::optional<long> ord_minus;
    std::optional<long> ord_eta4;
    std::optional<long> ord_log;
    std::optional<int> u_mod4;          // q = 7 mod 8 only
    std::optional<mpz_class> cw_index;  // q = 7 mod 8 only
    std::optional<int> corollary_rank;  // q = 3 mod 8 only
    Status status = Status::SKIPPED;
    long precision_used = 0;
    long seconds = 0;           // wall clock, whole seconds
    bool parity_verified = false;
    int sign_of_norm = 0;
    std::string note;           // failure/skip reason, empty on clean PASS
};

struct VerifyOptions {
    long precision_bits = 128;
    double timeout_secs = 60.0;   // per-q budget for the unit search
    double initial_height = 0.0;  // 0 = built-in default schedule
    bool escalate_precision = true;

    static VerifyOptions defaults();
};

// Full per-q pipeline: tower, class data, unit certificate, valuations,
// case checks. Search exhaustion inside the budget yields SKIPPED, a
// contradiction with the expected valuations yields FAIL. When out_cert
// is given, the certificate that was found is copied there (export path).
VerificationRecord verify_theorem(long q, const VerifyOptions& opts,
                                  UnitCertificate* out_cert = nullptr);

// Same pipeline on an existing certificate (the import path). When the
// certificate has no gamma, parity is not verifiable and equality claims
// are downgraded to consistency checks.
VerificationRecord verify_certificate(const UnitCertificate& cert,
                                      const VerifyOptions& opts);

// u mod 4 for q = 7 mod 8: the odd part of embed(sign_of_norm * pi),
// which is the element that is a relative norm. Cross-checked against
// hilbert_2(2u, -q) = +1. DomainError for q = 3 mod 8.
struct UMod4Result {
    int residue = 0;
    bool pass = false;
    bool hilbert_consistent = false;
};
UMod4Result u_mod4_check(const NumberField& field, const LocalTower& tower,
                         const UnitCertificate& cert);

// 2^((ord_log - 2)/2), the predicted index of the classical module.
// Throws AnomalyFlag when ord_log is odd or < 2.
mpz_class coates_wiles_index(long ord_log);

// Elementary divisor valuations of a matrix over Z_2, certified at the
// given precision: a reported valuation v means the pivot is 2^v * unit
// with the unit visible below the precision horizon. Rows are matrix[i].
std::vector<long> snf_Z2(const std::vector<std::vector<Dyadic>>& matrix,
                         long precision_bits);

// The rank-3 freeness check for q = 3 mod 8. Builds the log-lattice of
// 1 + P O from eight generators {1 + (alpha-1) b_i, 1 + (alpha-1)^2 b_i},
// samples random principal units to confirm their logs stay inside the
// lattice, and tests primitivity of log(eta) in it.
struct CorollaryResult {
    int rank = 0;              // free rank of the quotient by <log eta>
    bool free = true;          // false = TorsionDetected (would be news)
    bool span_verified = false;
    std::vector<long> divisor_valuations; // SNF of the generator logs
};
CorollaryResult corollary_check(const NumberField& field, const LocalTower& tower,
                                const UnitCertificate& cert);

// Primitivity of a vector inside the lattice spanned by the generator
// logs; exposed for the 2*log(eta) negative control. Throws
// PrecisionExhausted if membership cannot be decided.
bool log_is_primitive_in_unit_log_lattice(const LocalTower& tower,
                                          const TowerElement& log_value);

// Second-proof reproduction for q = 15 mod 16: sqrt(-1) exists locally
// and lies in 1 + P. DomainError for other residue classes.
bool sqrt_minus1_second_proof(long q, long precision_bits);

} // namespace qulog
