#include "qulog/certificate.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qulog/class_group.hpp"

namespace qulog {

namespace {

using nlohmann::json;

json basis_to_json(const IntegralBasis& basis) {
    if (basis.index_at_2 == 1) return json("OK[alpha]");
    json rows = json::array();
    for (const auto& row : basis.rows) {
        json r = json::array();
        for (const auto& c : row) {
            mpq_class v = c;
            v.canonicalize();
            r.push_back(v.get_str());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void check_basis_field(const json& j) {
    const json& b = j.at("basis");
    if (b.is_string()) {
        if (b.get<std::string>() != "OK[alpha]")
            throw SchemaError("basis string must be exactly \"OK[alpha]\"");
        return;
    }
    if (!b.is_array() || b.size() != 4)
        throw SchemaError("basis must be \"OK[alpha]\" or a 4x4 matrix");
    for (const auto& row : b) {
        if (!row.is_array() || row.size() != 4)
            throw SchemaError("basis matrix rows must have 4 entries");
        for (const auto& c : row) {
            if (!c.is_string()) throw SchemaError("basis entries must be rational strings");
            mpq_class v;
            if (mpq_set_str(v.get_mpq_t(), c.get<std::string>().c_str(), 10) != 0 ||
                v.get_den() == 0)
                throw SchemaError("unparseable basis entry: " + c.get<std::string>());
        }
    }
}

} // namespace

std::string certificate_to_json(const NumberField& field, const UnitCertificate& cert) {
    json j;
    j["schema_version"] = 1;
    j["q"] = cert.q;
    j["m"] = cert.m;
    j["pi"] = NumberField::to_string(cert.pi);
    if (cert.gamma) j["gamma"] = NumberField::to_string(*cert.gamma);
    j["eta"] = NumberField::to_string(cert.eta);
    j["basis"] = basis_to_json(field.integral_basis());
    return j.dump(2) + "\n";
}

UnitCertificate certificate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw SchemaError("top level must be an object");
        if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
            j["schema_version"].get<long>() != 1)
            throw SchemaError("schema_version must be the integer 1");
        for (const char* key : {"q", "m"})
            if (!j.contains(key) || !j[key].is_number_integer())
                throw SchemaError(std::string(key) + " must be an integer");
        for (const char* key : {"pi", "eta"})
            if (!j.contains(key) || !j[key].is_string())
                throw SchemaError(std::string(key) + " must be a string");
        if (!j.contains("basis")) throw SchemaError("basis is required");
        check_basis_field(j);

        UnitCertificate cert;
        cert.q = j["q"].get<long>();
        if (cert.q < 3) throw SchemaError("q must be a positive integer >= 3");
        long m = j["m"].get<long>();
        if (m < 1) throw SchemaError("m must be a positive integer");
        cert.m = static_cast<unsigned long>(m);

        auto pi = NumberField::parse_K(j["pi"].get<std::string>());
        if (!pi) throw SchemaError("pi is not a canonical K-element string");
        cert.pi = *pi;

        auto eta = NumberField::parse_F(j["eta"].get<std::string>());
        if (!eta) throw SchemaError("eta is not a canonical F-element string");
        cert.eta = *eta;

        if (j.contains("gamma")) {
            if (!j["gamma"].is_string()) throw SchemaError("gamma must be a string");
            auto g = NumberField::parse_F(j["gamma"].get<std::string>());
            if (!g) throw SchemaError("gamma is not a canonical F-element string");
            cert.gamma = *g;
        }
        cert.provenance = Provenance::imported;
        cert.parity_verified = cert.gamma.has_value();
        cert.sign_of_norm = 0;
        return cert;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed certificate: ") + e.what());
    }
}

void validate_certificate(const NumberField& field, const UnitCertificate& cert) {
    if (cert.q != field.q())
        throw InvariantViolation("q", "certificate q does not match the field");
    if (cert.m % 2 == 0)
        throw InvariantViolation("m odd", "m must be odd");

    if (cert.pi.c0.get_den() != 1 || cert.pi.c1.get_den() != 1)
        throw InvariantViolation("pi integral", "pi must have integer coordinates");

    if (field.q() % 8 == 3) {
        if (cert.m != 1)
            throw InvariantViolation("m = 1", "2 is inert, so m must be 1");
        if (!(cert.pi == KElem{2, 0}))
            throw InvariantViolation("pi = 2", "2 is inert, so pi must be 2");
    } else {
        mpz_class expect;
        mpz_ui_pow_ui(expect.get_mpz_t(), 2, cert.m);
        if (field.norm_abs_K(cert.pi) != expect)
            throw InvariantViolation("N(pi) = 2^m", "pi does not have norm 2^m");
        unsigned long order = class_order(
            reduce_form({2, -1, (mpz_class(field.q()) + 1) / 8}), field.q());
        if (cert.m != order)
            throw InvariantViolation("m minimal",
                                     "m is not the order of the class of the prime above 2");
    }

    if (cert.gamma) {
        if (!field.is_integral(*cert.gamma))
            throw InvariantViolation("gamma integral", "gamma is not an algebraic integer");
        KElem nr = field.norm_rel(*cert.gamma);
        if (!(nr == cert.pi) && !(nr == field.k_neg(cert.pi)))
            throw InvariantViolation("norm_rel(gamma) = sign*pi",
                                     "relative norm of gamma is not +-pi");
        FElem lhs = field.f_mul(cert.eta, field.from_K(cert.pi));
        FElem rhs = field.f_mul(*cert.gamma, *cert.gamma);
        if (!(lhs == rhs))
            throw InvariantViolation("eta*pi = gamma^2", "eta*pi does not equal gamma^2");
    }

    if (!field.is_integral(cert.eta))
        throw InvariantViolation("eta integral", "eta is not an algebraic integer");
    if (!(field.norm_rel(cert.eta) == field.k_one()))
        throw InvariantViolation("norm_rel(eta) = 1", "eta does not have relative norm 1");
}

void write_certificate_file(const std::string& path, const NumberField& field,
                            const UnitCertificate& cert) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open certificate file for writing: " + path);
    out << certificate_to_json(field, cert);
    if (!out) throw SchemaError("failed writing certificate file: " + path);
}

UnitCertificate read_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open certificate file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    UnitCertificate cert = certificate_from_json(buf.str());

    // the basis block is derivable from q; a mismatch is corrupt content
    try {
        NumberField field(cert.q);
        const IntegralBasis& basis = field.integral_basis();
        json b = json::parse(buf.str()).at("basis");
        if (b.is_string()) {
            if (basis.index_at_2 != 1)
                throw InvariantViolation("integral basis",
                                         "OK[alpha] claimed but the maximal order is larger");
        } else {
            if (basis.index_at_2 == 1)
                throw InvariantViolation("integral basis",
                                         "matrix given but the maximal order is OK[alpha]");
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    mpq_class v;
                    mpq_set_str(v.get_mpq_t(), b[i][j].get<std::string>().c_str(), 10);
                    v.canonicalize();
                    if (v != basis.rows[i][j])
                        throw InvariantViolation(
                            "integral basis",
                            "basis block does not match the maximal order for q");
                }
        }
    } catch (const DomainError& e) {
        throw InvariantViolation("q residue class", e.what());
    }
    return cert;
}

} // namespace qulog
