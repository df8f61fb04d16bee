#pragma once

// Data-generating processes for the size/power study: AR(1) with one mean
// shift, fractional Gaussian noise, and the multiplicative outlier scheme.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "lrdtest/series.hpp"

namespace lrdtest {

// Reproducible random stream; (seed, stream) pairs give independent substreams.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double normal() { return normal_(engine_); }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct Ar1Config {
    double rho = 0.4;
    std::size_t n = 1000;
    double theta = 0.5;
    double delta = 0.0;
    double mu = 0.0;

    void validate() const;
    // k* = floor(n * theta)
    [[nodiscard]] std::size_t change_index() const;
};

/// X_i = Y_i + mu (+ delta for i > k*), Y_i = rho Y_{i-1} + eps_i, eps iid
/// N(0,1), Y_0 drawn from the stationary law N(0, 1/(1 - rho^2)).
Series gen_ar1_changepoint(const Ar1Config& cfg, Rng& rng);

struct FgnConfig {
    double d = 0.4;  // memory parameter, H = d + 1/2
    std::size_t n = 1000;
    // H = 1/2 (white noise) is accepted for testing; the alternative uses d in (0, 1/2).
    bool allow_boundary = false;

    void validate() const;
    [[nodiscard]] double hurst() const noexcept { return d + 0.5; }
};

/// gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2
double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact fGn sampler by circulant embedding (Davies-Harte). The eigenvalues
/// of the size-2n circulant and the FFT plan are computed once; sample() is
/// safe to call concurrently from several threads with their own Rng.
class FgnSampler {
public:
    explicit FgnSampler(const FgnConfig& cfg);
    ~FgnSampler();
    FgnSampler(const FgnSampler&) = delete;
    FgnSampler& operator=(const FgnSampler&) = delete;
    FgnSampler(FgnSampler&&) noexcept;
    FgnSampler& operator=(FgnSampler&&) noexcept;

    Series sample(Rng& rng) const;

    [[nodiscard]] const FgnConfig& config() const noexcept;
    // Circulant eigenvalues after clamping; all >= 0.
    [[nodiscard]] const std::vector<double>& eigenvalues() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Negative circulant eigenvalue below -1e-9.
class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One-shot convenience; builds a sampler per call.
Series gen_fgn(const FgnConfig& cfg, Rng& rng);

/// Copy of x with the entries at 1-based positions floor(0.2n), floor(0.4n),
/// floor(0.6n), floor(0.8n) multiplied by 50. Requires n >= 5.
Series inject_outliers(std::span<const double> x);

/// The four 1-based positions touched by inject_outliers.
std::vector<std::size_t> outlier_positions(std::size_t n);

}  // namespace lrdtest
