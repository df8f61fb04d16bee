#pragma once

// Long-run variance and scale estimators, and the lag-1 autocorrelation
// estimators used to pick their block length.
//
// All autocovariances use divisor n at every lag. All estimators take the
// segment they are applied to as a whole sample: means, totals and empirical
// CDFs refer to that segment only.

#include <cstddef>
#include <optional>
#include <span>

namespace lrdtest {

enum class VarianceKind {
    Bartlett,    // kernel estimator of sigma_c^2 (CUSUM)
    CarlsteinC,  // block subsampling estimator of sigma_c^2 (CUSUM)
    CarlsteinW,  // rank-based block estimator of sigma (Wilcoxon)
};

enum class BlockRule { CarlsteinAR1 };

enum class RhoSource {
    SampleAcf,  // gamma(1) / gamma(0)
    RobustQ,    // Ma-Genton estimator built on Qn
};

struct VarianceConfig {
    VarianceKind kind = VarianceKind::CarlsteinW;
    double bandwidth_c = 15.0;  // Bartlett q(n) = floor(bandwidth_c * log10(n))
    BlockRule block_rule = BlockRule::CarlsteinAR1;
    RhoSource rho_source = RhoSource::SampleAcf;
    std::optional<std::size_t> fixed_block;

    // Throws std::invalid_argument.
    void validate() const;
};

const char* to_string(VarianceKind kind) noexcept;
const char* to_string(RhoSource source) noexcept;

/// Bartlett-kernel long-run variance with bandwidth q:
/// gamma(0) + 2 * sum_{j=1..q} (1 - j/(q+1)) * gamma(j).
/// Requires n >= 2 and q < n.
double bartlett_lrv(std::span<const double> x, std::size_t q);

/// floor(c * log10(n)) for n >= 1.
std::size_t bartlett_bandwidth(std::size_t n, double c);

/// Non-overlapping block estimator of the long-run variance. Uses
/// floor(n/block) full blocks; a trailing partial block is ignored but still
/// contributes to the total sum used for centering.
/// Throws DegenerateSegmentError when fewer than two blocks fit.
double carlstein_lrv(std::span<const double> x, std::size_t block);

/// Rank-based block estimator of the long-run *scale* sigma (not sigma^2) of
/// F(X). F_n is the empirical CDF of x itself, so the value depends on x only
/// through the ranks. Computed in integer arithmetic up to the final scaling.
double carlstein_wilcoxon_scale(std::span<const double> x, std::size_t block);

/// Block length for an AR(1) with lag-1 autocorrelation rho:
/// max(ceil(n^{1/3} * |2 rho / (1 - rho^2)|^{2/3}), 1). Negative rho uses the
/// magnitude. Throws std::invalid_argument unless |rho| < 1.
std::size_t block_length_ar1(double rho, std::size_t n);

/// gamma(1) / gamma(0). Throws ZeroScaleError for a constant series.
double sample_acf1(std::span<const double> x);

/// Qn scale: 2.21914 times the k-th smallest pairwise distance |x_i - x_j|,
/// i < j, with k = max(1, floor(C(n,2)/4)). O(n log n) selection.
double qn_scale(std::span<const double> x);

/// Same value by full enumeration of the C(n,2) distances. O(n^2) time and
/// memory; kept as a reference and for small inputs.
double qn_scale_naive(std::span<const double> x);

inline constexpr double kQnConstant = 2.21914;

/// Ma-Genton robust lag-1 autocorrelation from Qn of u+v and u-v, where
/// u = x_1..x_{n-1}, v = x_2..x_n. Throws ZeroScaleError when both scales vanish.
double robust_acf1(std::span<const double> x);

/// Block length for the Carlstein estimators: cfg.fixed_block when set,
/// otherwise the AR(1) rule with rho estimated on x itself.
/// An estimated |rho| of 1 (e.g. a linear segment) has no finite block length
/// and raises DegenerateSegmentError.
std::size_t resolve_block(std::span<const double> x, const VarianceConfig& cfg);

}  // namespace lrdtest
