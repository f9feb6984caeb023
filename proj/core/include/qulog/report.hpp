#pragma once

#include <string>

#include "qulog/verifier.hpp"

namespace qulog {

enum class ReportFormat { human, csv, json };

// Fixed CSV column set; fields that do not apply to the case are empty.
extern const char* const kCsvHeader;

std::string record_to_csv(const VerificationRecord& rec);
std::string record_to_json(const VerificationRecord& rec); // one line, no trailing \n
std::string record_to_human(const VerificationRecord& rec);

struct SweepSummary {
    int passed = 0, failed = 0, skipped = 0;
};
std::string summary_line(const SweepSummary& s);

} // namespace qulog
