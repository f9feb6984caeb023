#include "qulog/report.hpp"

#include <sstream>

namespace qulog {

const char* const kCsvHeader =
    "q,case,m,ord_plus,ord_minus,ord_eta4,ord_log,u_mod4,cw_index,"
    "corollary_rank,status,precision,seconds";

namespace {

template <typename T>
std::string opt_str(const std::optional<T>& o) {
    if (!o) return "";
    std::ostringstream os;
    os << *o;
    return os.str();
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

template <typename T>
std::string json_opt_num(const std::optional<T>& o) {
    if (!o) return "null";
    std::ostringstream os;
    os << *o;
    return os.str();
}

} // namespace

std::string record_to_csv(const VerificationRecord& rec) {
    std::ostringstream os;
    os << rec.q << ',' << to_string(rec.case_tag) << ',' << rec.m << ','
       << opt_str(rec.ord_plus) << ',' << opt_str(rec.ord_minus) << ','
       << opt_str(rec.ord_eta4) << ',' << opt_str(rec.ord_log) << ','
       << opt_str(rec.u_mod4) << ',' << opt_str(rec.cw_index) << ','
       << opt_str(rec.corollary_rank) << ',' << to_string(rec.status) << ','
       << rec.precision_used << ',' << rec.seconds;
    return os.str();
}

std::string record_to_json(const VerificationRecord& rec) {
    std::ostringstream os;
    os << "{\"q\":" << rec.q
       << ",\"case\":\"" << to_string(rec.case_tag) << '"'
       << ",\"m\":" << rec.m
       << ",\"ord_plus\":" << json_opt_num(rec.ord_plus)
       << ",\"ord_minus\":" << json_opt_num(rec.ord_minus)
       << ",\"ord_eta4\":" << json_opt_num(rec.ord_eta4)
       << ",\"ord_log\":" << json_opt_num(rec.ord_log)
       << ",\"u_mod4\":" << json_opt_num(rec.u_mod4);
    os << ",\"cw_index\":";
    if (rec.cw_index) os << '"' << rec.cw_index->get_str() << '"';
    else os << "null";
    os << ",\"corollary_rank\":" << json_opt_num(rec.corollary_rank)
       << ",\"status\":\"" << to_string(rec.status) << '"'
       << ",\"precision\":" << rec.precision_used
       << ",\"seconds\":" << rec.seconds
       << ",\"parity_verified\":" << (rec.parity_verified ? "true" : "false")
       << ",\"sign_of_norm\":" << rec.sign_of_norm
       << ",\"note\":\"" << json_escape(rec.note) << "\"}";
    return os.str();
}

std::string record_to_human(const VerificationRecord& rec) {
    std::ostringstream os;
    os << "q = " << rec.q << "  [" << to_string(rec.case_tag) << "]  "
       << to_string(rec.status) << '\n';
    os << "  m                " << rec.m << '\n';
    auto line = [&os](const char* label, const std::string& v) {
        os << "  " << label << (v.empty() ? "-" : v) << '\n';
    };
    line("ord(eta+eta^-1)  ", opt_str(rec.ord_plus));
    line("ord(eta-eta^-1)  ", opt_str(rec.ord_minus));
    line("ord(eta^4-1)     ", opt_str(rec.ord_eta4));
    line("ord(log eta)     ", opt_str(rec.ord_log));
    line("u mod 4          ", opt_str(rec.u_mod4));
    line("module index     ", rec.cw_index ? rec.cw_index->get_str() : "");
    line("quotient rank    ", opt_str(rec.corollary_rank));
    os << "  precision        " << rec.precision_used << " bits\n";
    os << "  seconds          " << rec.seconds << '\n';
    if (rec.status == Status::PASS) {
        if (rec.parity_verified)
            os << "  verified: eta is an odd power of the fundamental unit and "
                  "all valuations match\n";
        else
            os << "  consistent with the expected valuations (parity not "
                  "verified: no gamma)\n";
    }
    if (!rec.note.empty()) os << "  note: " << rec.note << '\n';
    return os.str();
}

std::string summary_line(const SweepSummary& s) {
    std::ostringstream os;
    os << "# summary pass=" << s.passed << " fail=" << s.failed
       << " skipped=" << s.skipped;
    return os.str();
}

} // namespace qulog
