#include "lrdtest/variance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrdtest/kernels.hpp"
#include "lrdtest/series.hpp"

namespace lrdtest {
namespace {

// x - mean(x), computed as (x - x_1) - mean(x - x_1) so that a constant input
// centers to exact zeros.
std::vector<double> centered(std::span<const double> x) {
    const auto& k = kernels::active();
    std::vector<double> out(x.size());
    k.shift(x.data(), x.size(), x.front(), out.data());
    const double mean = k.sum(out.data(), out.size()) / static_cast<double>(out.size());
    k.shift(out.data(), out.size(), mean, out.data());
    return out;
}

void require_blocks(std::size_t n, std::size_t block, const char* who) {
    if (block < 1) throw std::invalid_argument(std::string(who) + ": block length must be >= 1");
    if (n / block < 2) {
        throw DegenerateSegmentError(std::string(who) + ": length " + std::to_string(n) +
                                     " holds fewer than 2 blocks of length " +
                                     std::to_string(block));
    }
}

// k-th smallest (1-based) of y[i] - y[j], 0 <= j < i < n, for ascending y.
// Row i holds the values for j = 0..i-1, decreasing in j. Each round picks the
// weighted median of the row medians of the surviving candidates and discards
// the side that cannot hold the answer.
double kth_pairwise_difference(const std::vector<double>& y, std::uint64_t k) {
    const std::size_t n = y.size();
    std::vector<std::ptrdiff_t> lo(n, 0), hi(n);
    for (std::size_t i = 0; i < n; ++i) hi[i] = static_cast<std::ptrdiff_t>(i) - 1;

    // p[i] = first j in [0, i) with y[i] - y[j] < t (or <= t). Row values
    // shrink as j grows and grow with i, so p is nondecreasing in i.
    auto sweep = [&](double t, bool inclusive, std::vector<std::ptrdiff_t>& p) {
        std::uint64_t count = 0;
        std::size_t j = 0;
        for (std::size_t i = 1; i < n; ++i) {
            while (j < i && !(inclusive ? y[i] - y[j] <= t : y[i] - y[j] < t)) ++j;
            p[i] = static_cast<std::ptrdiff_t>(j);
            count += i - j;
        }
        return count;
    };

    std::vector<std::pair<double, std::uint64_t>> medians;
    medians.reserve(n);
    std::vector<std::ptrdiff_t> p_lt(n), p_le(n);

    for (;;) {
        std::uint64_t total = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (hi[i] >= lo[i]) total += static_cast<std::uint64_t>(hi[i] - lo[i] + 1);

        if (total <= std::max<std::uint64_t>(n, 64)) {
            std::uint64_t below = 0;
            std::vector<double> rest;
            rest.reserve(total);
            for (std::size_t i = 1; i < n; ++i) {
                below += static_cast<std::uint64_t>(static_cast<std::ptrdiff_t>(i) - 1 - hi[i]);
                for (std::ptrdiff_t j = lo[i]; j <= hi[i]; ++j) rest.push_back(y[i] - y[j]);
            }
            const auto r = static_cast<std::ptrdiff_t>(k - below - 1);
            std::nth_element(rest.begin(), rest.begin() + r, rest.end());
            return rest[r];
        }

        medians.clear();
        std::uint64_t weight = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (hi[i] < lo[i]) continue;
            const std::ptrdiff_t mid = lo[i] + (hi[i] - lo[i]) / 2;
            const auto w = static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
            medians.emplace_back(y[i] - y[mid], w);
            weight += w;
        }
        std::sort(medians.begin(), medians.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double trial = medians.back().first;
        std::uint64_t acc = 0;
        for (const auto& [v, w] : medians) {
            acc += w;
            if (2 * acc >= weight) {
                trial = v;
                break;
            }
        }

        const std::uint64_t n_lt = sweep(trial, false, p_lt);
        const std::uint64_t n_le = sweep(trial, true, p_le);

        if (k <= n_lt) {
            for (std::size_t i = 1; i < n; ++i) lo[i] = std::max(lo[i], p_lt[i]);
        } else if (k > n_le) {
            for (std::size_t i = 1; i < n; ++i) hi[i] = std::min(hi[i], p_le[i] - 1);
        } else {
            return trial;
        }
    }
}

std::uint64_t qn_order(std::size_t n) {
    const auto pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return std::max<std::uint64_t>(1, pairs / 4);
}

void require_qn_input(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("qn_scale: need at least 2 observations");
}

}  // namespace

void VarianceConfig::validate() const {
    if (!(bandwidth_c > 0.0) || !std::isfinite(bandwidth_c))
        throw std::invalid_argument("VarianceConfig: bandwidth_c must be positive");
    if (fixed_block && *fixed_block < 1)
        throw std::invalid_argument("VarianceConfig: fixed_block must be >= 1");
}

const char* to_string(VarianceKind kind) noexcept {
    switch (kind) {
        case VarianceKind::Bartlett: return "bartlett";
        case VarianceKind::CarlsteinC: return "carlstein";
        case VarianceKind::CarlsteinW: return "carlstein-wilcoxon";
    }
    return "?";
}

const char* to_string(RhoSource source) noexcept {
    return source == RhoSource::SampleAcf ? "acf" : "robust";
}

double bartlett_lrv(std::span<const double> x, std::size_t q) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("bartlett_lrv: need at least 2 observations");
    if (q >= n) throw std::invalid_argument("bartlett_lrv: bandwidth q must be < n");

    const auto& k = kernels::active();
    const auto xc = centered(x);
    const double nd = static_cast<double>(n);
    const double gamma0 = k.dot(xc.data(), xc.data(), n) / nd;
    double s2 = gamma0;
    for (std::size_t j = 1; j <= q; ++j) {
        const double gamma_j = k.dot(xc.data(), xc.data() + j, n - j) / nd;
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(q + 1);
        s2 += 2.0 * w * gamma_j;
    }
    // PSD weights; only rounding can push the sum below zero
    if (s2 < 0.0) {
        if (s2 < -1e-10 * gamma0 * static_cast<double>(q + 1))
            throw std::logic_error("bartlett_lrv: negative estimate " + std::to_string(s2));
        s2 = 0.0;
    }
    return s2;
}

std::size_t bartlett_bandwidth(std::size_t n, double c) {
    if (n < 1) throw std::invalid_argument("bartlett_bandwidth: n must be >= 1");
    return static_cast<std::size_t>(std::floor(c * std::log10(static_cast<double>(n))));
}

double carlstein_lrv(std::span<const double> x, std::size_t block) {
    const std::size_t n = x.size();
    require_blocks(n, block, "carlstein_lrv");

    const auto& k = kernels::active();
    std::vector<double> shifted(n);
    k.shift(x.data(), n, x.front(), shifted.data());
    const double total = k.sum(shifted.data(), n);
    const double share = static_cast<double>(block) / static_cast<double>(n) * total;

    const std::size_t blocks = n / block;
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double d = k.sum(shifted.data() + b * block, block) - share;
        acc += d * d / static_cast<double>(block);
    }
    return acc / static_cast<double>(blocks);
}

double carlstein_wilcoxon_scale(std::span<const double> x, std::size_t block) {
    const std::size_t n = x.size();
    require_blocks(n, block, "carlstein_wilcoxon_scale");

    // counts[j] = n * F_n(x_j) = #{i : x_i <= x_j}
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> counts(n);
    for (std::size_t j = 0; j < n; ++j)
        counts[j] = std::upper_bound(sorted.begin(), sorted.end(), x[j]) - sorted.begin();

    const auto nn = static_cast<std::int64_t>(n);
    const auto ll = static_cast<std::int64_t>(block);
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});

    // |S_b/n - (l/n) T/n| = |n S_b - l T| / n^2, exact in integers
    const std::size_t blocks = n / block;
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto first = counts.begin() + static_cast<std::ptrdiff_t>(b * block);
        const std::int64_t s = std::accumulate(first, first + ll, std::int64_t{0});
        acc += static_cast<double>(std::llabs(nn * s - ll * total));
    }
    const double nd = static_cast<double>(n);
    return std::sqrt(std::numbers::pi / 2.0) * acc /
           (static_cast<double>(blocks) * nd * nd * std::sqrt(static_cast<double>(block)));
}

std::size_t block_length_ar1(double rho, std::size_t n) {
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("block_length_ar1: |rho| must be < 1, got " +
                                    std::to_string(rho));
    if (n < 1) throw std::invalid_argument("block_length_ar1: n must be >= 1");
    const double ratio = std::fabs(2.0 * rho / (1.0 - rho * rho));
    const double len = std::cbrt(static_cast<double>(n)) * std::pow(ratio, 2.0 / 3.0);
    const double up = std::ceil(len);
    return up < 1.0 ? 1 : static_cast<std::size_t>(up);
}

double sample_acf1(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("sample_acf1: need at least 2 observations");
    const auto& k = kernels::active();
    const auto xc = centered(x);
    const double g0 = k.dot(xc.data(), xc.data(), n);
    if (g0 == 0.0) throw ZeroScaleError("sample_acf1: series has zero variance");
    const double g1 = k.dot(xc.data(), xc.data() + 1, n - 1);
    return std::clamp(g1 / g0, -1.0, 1.0);
}

double qn_scale(std::span<const double> x) {
    require_qn_input(x);
    std::vector<double> y(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return kQnConstant * kth_pairwise_difference(y, qn_order(x.size()));
}

double qn_scale_naive(std::span<const double> x) {
    require_qn_input(x);
    const std::size_t n = x.size();
    const auto& k = kernels::active();
    std::vector<double> dist(n * (n - 1) / 2);
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        k.abs_diff(x.data() + i + 1, n - i - 1, x[i], dist.data() + at);
        at += n - i - 1;
    }
    const auto r = static_cast<std::ptrdiff_t>(qn_order(n) - 1);
    std::nth_element(dist.begin(), dist.begin() + r, dist.end());
    return kQnConstant * dist[static_cast<std::size_t>(r)];
}

double robust_acf1(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("robust_acf1: need at least 3 observations");
    std::vector<double> sum(n - 1), diff(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sum[i] = x[i] + x[i + 1];
        diff[i] = x[i] - x[i + 1];
    }
    const double qs = qn_scale(sum);
    const double qd = qn_scale(diff);
    const double den = qs * qs + qd * qd;
    if (den == 0.0) throw ZeroScaleError("robust_acf1: Qn of both u+v and u-v is zero");
    return std::clamp((qs * qs - qd * qd) / den, -1.0, 1.0);
}

std::size_t resolve_block(std::span<const double> x, const VarianceConfig& cfg) {
    cfg.validate();
    if (cfg.fixed_block) return *cfg.fixed_block;
    const double rho = cfg.rho_source == RhoSource::SampleAcf ? sample_acf1(x) : robust_acf1(x);
    if (!(std::fabs(rho) < 1.0)) {
        throw DegenerateSegmentError("resolve_block: estimated lag-1 autocorrelation is " +
                                     std::to_string(rho) + "; block length undefined");
    }
    return block_length_ar1(rho, x.size());
}

}  // namespace lrdtest
