#pragma once

#include <string>

#include "qulog/unit_engine.hpp"

namespace qulog {

// Certificate file format: a single JSON document with exact rational
// coordinates in the canonical element strings.
//   { "schema_version": 1, "q": ..., "m": ..., "pi": "c0 + c1*t",
//     "gamma": "c0 + c1*a + c2*a^2 + c3*a^3" (optional),
//     "eta": "...", "basis": "OK[alpha]" | [[...], ...] }

// Thrown on structurally invalid input (missing fields, bad types,
// unparseable coordinates). CLI maps this to exit 65.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

std::string certificate_to_json(const NumberField& field, const UnitCertificate& cert);
// Parses and validates structure only; exact invariants are checked by
// validate_certificate. Throws SchemaError.
UnitCertificate certificate_from_json(const std::string& text);

// Exact invariant checks (norm_rel(gamma) = sign*pi, eta*pi = gamma^2,
// norm_rel(eta) = 1, integrality). Throws InvariantViolation naming the
// failing identity. CLI maps this to exit 66.
void validate_certificate(const NumberField& field, const UnitCertificate& cert);

void write_certificate_file(const std::string& path, const NumberField& field,
                            const UnitCertificate& cert);
UnitCertificate read_certificate_file(const std::string& path);

} // namespace qulog
