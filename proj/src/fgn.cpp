#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "lrdtest/simulate.hpp"

namespace lrdtest {
namespace {

// The FFTW planner is not thread-safe; executing an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

}  // namespace

void FgnConfig::validate() const {
    const bool ok = allow_boundary ? (d >= 0.0 && d < 0.5) : (d > 0.0 && d < 0.5);
    if (!ok) throw std::invalid_argument("FgnConfig: d must lie in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("FgnConfig: n must be >= 1");
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::fabs(k - 1.0), e));
}

struct FgnSampler::Impl {
    FgnConfig cfg;
    std::size_t m = 0;  // circulant size 2n
    std::vector<double> eigen;
    std::vector<double> amplitude;  // sqrt(lambda_k / m)
    fftw_plan plan = nullptr;

    ~Impl() {
        if (plan != nullptr) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

FgnSampler::FgnSampler(const FgnConfig& cfg) : impl_(std::make_unique<Impl>()) {
    cfg.validate();
    auto& s = *impl_;
    s.cfg = cfg;
    const std::size_t n = cfg.n;
    s.m = 2 * n;
    const double h = cfg.hurst();

    FftwBuffer in(s.m), out(s.m);
    for (std::size_t k = 0; k <= n; ++k) {
        in.data[k][0] = fgn_autocovariance(h, k);
        in.data[k][1] = 0.0;
    }
    for (std::size_t k = n + 1; k < s.m; ++k) {
        in.data[k][0] = in.data[s.m - k][0];
        in.data[k][1] = 0.0;
    }

    fftw_plan eig_plan;
    {
        std::lock_guard lock(planner_mutex());
        eig_plan = fftw_plan_dft_1d(static_cast<int>(s.m), in.data, out.data, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
        s.plan = fftw_plan_dft_1d(static_cast<int>(s.m), in.data, out.data, FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(eig_plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(eig_plan);
    }

    s.eigen.resize(s.m);
    s.amplitude.resize(s.m);
    for (std::size_t k = 0; k < s.m; ++k) {
        double lambda = out.data[k][0];
        if (lambda < -1e-9) {
            throw EmbeddingError("fGn circulant embedding: eigenvalue " + std::to_string(k) +
                                 " is " + std::to_string(lambda));
        }
        if (lambda < 0.0) lambda = 0.0;
        s.eigen[k] = lambda;
        s.amplitude[k] = std::sqrt(lambda / static_cast<double>(s.m));
    }
}

FgnSampler::~FgnSampler() = default;
FgnSampler::FgnSampler(FgnSampler&&) noexcept = default;
FgnSampler& FgnSampler::operator=(FgnSampler&&) noexcept = default;

const FgnConfig& FgnSampler::config() const noexcept { return impl_->cfg; }

const std::vector<double>& FgnSampler::eigenvalues() const noexcept { return impl_->eigen; }

Series FgnSampler::sample(Rng& rng) const {
    const auto& s = *impl_;
    FftwBuffer in(s.m), out(s.m);
    for (std::size_t k = 0; k < s.m; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        in.data[k][0] = s.amplitude[k] * re;
        in.data[k][1] = s.amplitude[k] * im;
    }
    fftw_execute_dft(s.plan, in.data, out.data);
    std::vector<double> x(s.cfg.n);
    for (std::size_t j = 0; j < s.cfg.n; ++j) x[j] = out.data[j][0];
    return Series(std::move(x));
}

Series gen_fgn(const FgnConfig& cfg, Rng& rng) { return FgnSampler(cfg).sample(rng); }

}  // namespace lrdtest
