#include "lrdtest/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrdtest {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
}

void Ar1Config::validate() const {
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("Ar1Config: |rho| must be < 1");
    if (n < 1) throw std::invalid_argument("Ar1Config: n must be >= 1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("Ar1Config: theta must lie in (0, 1)");
    if (!std::isfinite(delta) || !std::isfinite(mu))
        throw std::invalid_argument("Ar1Config: delta and mu must be finite");
}

std::size_t Ar1Config::change_index() const {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta));
}

Series gen_ar1_changepoint(const Ar1Config& cfg, Rng& rng) {
    cfg.validate();
    const std::size_t k_star = cfg.change_index();
    std::vector<double> x(cfg.n);
    double y = rng.normal() / std::sqrt(1.0 - cfg.rho * cfg.rho);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        y = cfg.rho * y + rng.normal();
        x[i] = y + cfg.mu + (i + 1 > k_star ? cfg.delta : 0.0);
    }
    return Series(std::move(x));
}

std::vector<std::size_t> outlier_positions(std::size_t n) {
    if (n < 5) throw std::invalid_argument("inject_outliers: need n >= 5");
    std::vector<std::size_t> pos;
    for (int q : {2, 4, 6, 8}) pos.push_back(n * static_cast<std::size_t>(q) / 10);
    return pos;
}

Series inject_outliers(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t p : outlier_positions(x.size())) out[p - 1] *= 50.0;
    return Series(std::move(out));
}

}  // namespace lrdtest
