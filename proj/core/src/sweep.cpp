#include "qulog/sweep.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>

namespace qulog {

std::vector<long> sweep_primes(long q_min, long q_max) {
    std::vector<long> out;
    for (long q = std::max(q_min, 3L); q <= q_max; ++q) {
        if (q % 4 != 3) continue;
        mpz_class z(q);
        if (mpz_probab_prime_p(z.get_mpz_t(), 40)) out.push_back(q);
    }
    return out;
}

SweepSummary run_sweep(const SweepConfig& config,
                       const std::function<void(const VerificationRecord&)>& emit,
                       const std::atomic<bool>* interrupted) {
    std::vector<long> primes = sweep_primes(config.q_min, config.q_max);
    const size_t n = primes.size();

    VerifyOptions opts;
    opts.precision_bits = config.precision_bits;
    opts.timeout_secs = config.timeout_secs;

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::optional<VerificationRecord>> results(n);
    size_t next_index = 0; // next task to hand out
    bool stop = false;     // set once interruption is observed

    auto worker = [&] {
        while (true) {
            size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (stop || next_index >= n) return;
                if (interrupted && interrupted->load()) {
                    stop = true;
                    cv.notify_all();
                    return;
                }
                i = next_index++;
            }
            VerificationRecord rec;
            try {
                rec = verify_theorem(primes[i], opts);
            } catch (const std::exception& e) {
                rec.q = primes[i];
                rec.case_tag = case_tag_of(primes[i]);
                rec.status = Status::FAIL;
                rec.note = e.what();
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                results[i] = std::move(rec);
            }
            cv.notify_all();
        }
    };

    int jobs = std::max(1, config.jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);

    // emit in ascending q; on interruption every task that was started
    // still finishes and is flushed, so the output is a clean prefix
    SweepSummary summary;
    size_t emitted = 0;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (emitted < n) {
            cv.wait(lock, [&] {
                return results[emitted].has_value() ||
                       (stop && emitted >= next_index);
            });
            if (!results[emitted].has_value()) break; // interrupted before start
            const VerificationRecord& rec = *results[emitted];
            switch (rec.status) {
                case Status::PASS: ++summary.passed; break;
                case Status::FAIL: ++summary.failed; break;
                case Status::SKIPPED: ++summary.skipped; break;
            }
            lock.unlock();
            emit(rec);
            lock.lock();
            ++emitted;
        }
    }
    for (auto& t : pool) t.join();
    return summary;
}

} // namespace qulog
