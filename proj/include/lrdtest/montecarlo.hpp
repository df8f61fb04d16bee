#pragma once

// Monte Carlo driver for empirical size and power.
//
// Replication r draws from the substream Rng(seed, r), so a result depends on
// the configuration and seed only, never on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "lrdtest/changepoint.hpp"
#include "lrdtest/simulate.hpp"
#include "lrdtest/variance.hpp"

namespace lrdtest {

struct TestSpec {
    Procedure procedure = Procedure::Wilcoxon;
    VarianceConfig variance;
};

// Wilcoxon with the rank-based Carlstein scale and CUSUM with the Carlstein
// variance; block lengths from the robust rho when the data carry outliers.
std::vector<TestSpec> default_tests(bool outliers);

using Dgp = std::variant<Ar1Config, FgnConfig>;

struct McConfig {
    Dgp dgp = Ar1Config{};
    bool outliers = false;
    std::size_t replications = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::vector<TestSpec> tests = default_tests(false);
    unsigned workers = 0;  // 0: hardware concurrency; does not affect results

    void validate() const;
};

struct McTestResult {
    TestSpec spec;
    std::size_t rejections = 0;
    std::size_t failures = 0;  // degenerate-segment / zero-scale replications
    std::size_t replications_used = 0;
    double rejection_rate = 0.0;  // rejections / replications_used
};

struct McCell {
    std::size_t replications = 0;
    std::vector<McTestResult> tests;
};

McCell run_mc(const McConfig& cfg);

// Calls fn(r) for r in [0, count) on up to `workers` threads and returns the
// results in index order. The first exception thrown by fn is rethrown.
template <class T, class Fn>
std::vector<T> run_replications(std::size_t count, unsigned workers, Fn&& fn) {
    std::vector<T> out(count);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    constexpr std::size_t chunk = 16;

    auto work = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= count || failed.load()) return;
            const std::size_t end = std::min(count, begin + chunk);
            try {
                for (std::size_t r = begin; r < end; ++r) out[r] = fn(r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace lrdtest
