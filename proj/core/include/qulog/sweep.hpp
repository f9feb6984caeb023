#pragma once

#include <atomic>
#include <functional>
#include <vector>

#include "qulog/report.hpp"

namespace qulog {

struct SweepConfig {
    long q_min = 3;
    long q_max = 0;
    long precision_bits = 128;
    double timeout_secs = 60.0; // per q
    int jobs = 1;
    ReportFormat format = ReportFormat::csv;
};

// Primes q = 3 mod 4 in [q_min, q_max], ascending.
std::vector<long> sweep_primes(long q_min, long q_max);

// Parallel map over the primes with a bounded worker pool. Records are
// handed to `emit` in ascending q regardless of completion order, so the
// output is deterministic for any job count. `interrupted` (may be null)
// is polled between tasks; on interruption, finished records are still
// flushed in order and the summary reflects only those.
SweepSummary run_sweep(const SweepConfig& config,
                       const std::function<void(const VerificationRecord&)>& emit,
                       const std::atomic<bool>* interrupted = nullptr);

} // namespace qulog
