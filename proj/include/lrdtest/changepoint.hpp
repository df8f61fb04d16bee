#pragma once

// CUSUM and Wilcoxon change-point statistics, the split point estimators and
// the two split-sample tests for "short memory with one mean shift" against
// "stationary long memory".
//
// Index arguments m, n and returned split points are 1-based, inclusive, as in
// X_m, ..., X_n. A profile over m..n has n - m + 1 entries; entry [k - m]
// holds the statistic at split k.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lrdtest/variance.hpp"

namespace lrdtest {

// A Wilcoxon statistic value, a sum of +-1/2 terms, kept as the exact integer 2W.
struct HalfIntStat {
    std::int64_t doubled = 0;

    [[nodiscard]] double value() const noexcept { return 0.5 * static_cast<double>(doubled); }
    friend bool operator==(HalfIntStat, HalfIntStat) = default;
};

using CusumProfile = std::vector<double>;

/// 2 W_{m,n}(k) for k = m..n, where
/// W_{m,n}(k) = sum_{i=m..k} sum_{j=k+1..n} (1{x_i <= x_j} - 1/2).
/// O(N log N) for N = n - m + 1: one sort, then a running rank sum.
std::vector<HalfIntStat> wilcoxon_profile(std::span<const double> x, std::size_t m, std::size_t n);

/// C(k) = sum_{i=m..k} x_i - (k-m+1)/N * sum_{i=m..n} x_i for k = m..n,
/// with N = n - m + 1 (the subsample is treated as a sample of its own).
CusumProfile cusum_profile(std::span<const double> x, std::size_t m, std::size_t n);

/// Smallest k in 1..n-1 maximizing |W_{1,n}(k)|.
std::size_t estimate_changepoint_wilcoxon(std::span<const double> x);

/// Smallest k in 1..n maximizing |C_{1,n}(k)|.
std::size_t estimate_changepoint_cusum(std::span<const double> x);

/// n^{-3/2} max_{1<=k<=n} |W_{1,n}(k)| for the passed (sub)sample.
double t_statistic_wilcoxon(std::span<const double> x);

/// max_{1<=k<=n} |C_{1,n}(k)| for the passed (sub)sample.
double cusum_max_abs(std::span<const double> x);

enum class Procedure { Wilcoxon, Cusum };

const char* to_string(Procedure p) noexcept;

struct TestReport {
    Procedure procedure = Procedure::Wilcoxon;
    std::size_t n = 0;
    std::size_t k_hat = 0;
    double t1 = 0.0;  // unnormalized segment statistics
    double t2 = 0.0;
    double sigma1 = 0.0;  // long-run scale of each segment
    double sigma2 = 0.0;
    // block length (Carlstein) or bandwidth q (Bartlett) used per segment
    std::size_t block1 = 0;
    std::size_t block2 = 0;
    double statistic = 0.0;  // max(t1/sigma1, t2/sigma2)
    double alpha = 0.05;
    double critical_value = 0.0;
    bool reject = false;
};

/// Wilcoxon-type test: split at the Wilcoxon estimate, T_i = len^{-3/2} max|W|
/// on each segment, each studentized by the rank-based Carlstein scale of its
/// own segment. Requires n >= 4 and cfg.kind == CarlsteinW.
///
/// A constant series raises ZeroScaleError. A segment that cannot host the
/// variance estimator raises DegenerateSegmentError naming the segment.
TestReport test_wilcoxon(std::span<const double> x, double alpha, const VarianceConfig& cfg);

/// CUSUM-type test: split at the CUSUM estimate, each segment statistic is
/// max|C| / (sigma_hat * sqrt(len)) with sigma_hat^2 from the Bartlett or
/// Carlstein estimator of that segment. Requires n >= 4 and cfg.kind Bartlett
/// or CarlsteinC. Errors as for test_wilcoxon.
TestReport test_cusum(std::span<const double> x, double alpha, const VarianceConfig& cfg);

}  // namespace lrdtest
