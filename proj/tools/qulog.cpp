#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qulog/certificate.hpp"
#include "qulog/report.hpp"
#include "qulog/sweep.hpp"
#include "qulog/verifier.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

int status_code(qulog::Status s) {
    switch (s) {
        case qulog::Status::PASS: return 0;
        case qulog::Status::FAIL: return 2;
        case qulog::Status::SKIPPED: return 3;
    }
    return 1;
}

qulog::ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return qulog::ReportFormat::csv;
    if (s == "json") return qulog::ReportFormat::json;
    return qulog::ReportFormat::human;
}

void print_record(const qulog::VerificationRecord& rec, qulog::ReportFormat f,
                  bool with_csv_header) {
    switch (f) {
        case qulog::ReportFormat::csv:
            if (with_csv_header) std::cout << qulog::kCsvHeader << '\n';
            std::cout << qulog::record_to_csv(rec) << '\n';
            break;
        case qulog::ReportFormat::json:
            std::cout << qulog::record_to_json(rec) << '\n';
            break;
        case qulog::ReportFormat::human:
            std::cout << qulog::record_to_human(rec);
            break;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verify fundamental-unit logarithm valuations for Q((-q)^(1/4))"};
    app.require_subcommand(1);

    long prec = 128;
    double timeout = 60.0;
    std::string format = "human";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision-bits", prec, "certified 2-adic precision")
            ->envname("QULOG_PRECISION_BITS")
            ->check(CLI::Range(32L, 65536L));
        sub->add_option("--timeout-secs", timeout, "budget for the unit search");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"human", "csv", "json"}));
    };

    auto* cmd_verify = app.add_subcommand("verify", "run the full check for one q");
    long q = 0;
    std::string export_path;
    cmd_verify->add_option("--q", q, "prime q = 3 mod 4")->required();
    cmd_verify->add_option("--export-cert", export_path, "write the certificate as JSON");
    add_common(cmd_verify);

    auto* cmd_sweep = app.add_subcommand("sweep", "run over all q in a range");
    long q_min = 3, q_max = 0;
    int jobs = 1;
    cmd_sweep->add_option("--q-min", q_min, "lower bound (inclusive)");
    cmd_sweep->add_option("--q-max", q_max, "upper bound (inclusive)")->required();
    cmd_sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    add_common(cmd_sweep);

    auto* cmd_import = app.add_subcommand("import", "verify an existing certificate file");
    std::string cert_path;
    cmd_import->add_option("file", cert_path, "certificate JSON file")->required();
    add_common(cmd_import);

    // sweep defaults to csv; the single-record commands default to human
    format.clear();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }
    if (format.empty()) format = cmd_sweep->parsed() ? "csv" : "human";
    qulog::ReportFormat fmt = parse_format(format);

    qulog::VerifyOptions opts;
    opts.precision_bits = prec;
    opts.timeout_secs = timeout;

    if (cmd_verify->parsed()) {
        try {
            qulog::UnitCertificate cert;
            qulog::VerificationRecord rec = qulog::verify_theorem(q, opts, &cert);
            if (!export_path.empty()) {
                if (rec.parity_verified) {
                    qulog::NumberField field(q);
                    qulog::write_certificate_file(export_path, field, cert);
                } else {
                    std::cerr << "qulog: no certificate to export (search "
                              << qulog::to_string(rec.status) << ")\n";
                }
            }
            print_record(rec, fmt, true);
            return status_code(rec.status);
        } catch (const qulog::DomainError& e) {
            std::cerr << "qulog: " << e.what() << '\n';
            return 64;
        } catch (const std::exception& e) {
            std::cerr << "qulog: " << e.what() << '\n';
            return 1;
        }
    }

    if (cmd_sweep->parsed()) {
        std::signal(SIGINT, on_sigint);
        qulog::SweepConfig cfg;
        cfg.q_min = q_min;
        cfg.q_max = q_max;
        cfg.precision_bits = prec;
        cfg.timeout_secs = timeout;
        cfg.jobs = jobs;
        cfg.format = fmt;
        try {
            if (fmt == qulog::ReportFormat::csv) std::cout << qulog::kCsvHeader << '\n';
            qulog::SweepSummary summary = qulog::run_sweep(
                cfg, [&](const qulog::VerificationRecord& rec) { print_record(rec, fmt, false); },
                &g_interrupted);
            std::cout << qulog::summary_line(summary) << '\n';
            std::cout.flush();
            if (g_interrupted.load()) return 130;
            return summary.failed > 0 ? 2 : 0;
        } catch (const std::exception& e) {
            std::cerr << "qulog: " << e.what() << '\n';
            return 1;
        }
    }

    if (cmd_import->parsed()) {
        try {
            qulog::UnitCertificate cert = qulog::read_certificate_file(cert_path);
            qulog::NumberField field(cert.q);
            qulog::validate_certificate(field, cert);
            qulog::VerificationRecord rec = qulog::verify_certificate(cert, opts);
            print_record(rec, fmt, true);
            return status_code(rec.status);
        } catch (const qulog::SchemaError& e) {
            std::cerr << "qulog: schema: " << e.what() << '\n';
            return 65;
        } catch (const qulog::InvariantViolation& e) {
            std::cerr << "qulog: invariant [" << e.identity() << "]: " << e.what() << '\n';
            return 66;
        } catch (const qulog::DomainError& e) {
            std::cerr << "qulog: invariant [q domain]: " << e.what() << '\n';
            return 66;
        } catch (const std::exception& e) {
            std::cerr << "qulog: " << e.what() << '\n';
            return 1;
        }
    }
    return 64;
}
