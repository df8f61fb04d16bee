#include "lrdtest/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lrdtest/limit_dist.hpp"
#include "lrdtest/series.hpp"

namespace lrdtest {
namespace {

std::span<const double> checked_range(std::span<const double> x, std::size_t m, std::size_t n,
                                      const char* who) {
    if (m < 1 || m > n || n > x.size()) {
        throw std::invalid_argument(std::string(who) + ": need 1 <= m <= n <= length, got m=" +
                                    std::to_string(m) + " n=" + std::to_string(n) +
                                    " length=" + std::to_string(x.size()));
    }
    return x.subspan(m - 1, n - m + 1);
}

void require_length(std::span<const double> x, std::size_t min, const char* who) {
    if (x.size() < min) {
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(min) +
                                    " observations, got " + std::to_string(x.size()));
    }
}

// Re-throws a data error with the failing segment named in the message.
template <class Fn>
auto on_segment(int which, std::size_t from, std::size_t to, Fn&& fn) {
    const auto where = "segment " + std::to_string(which) + " (X_" + std::to_string(from) +
                       "..X_" + std::to_string(to) + "): ";
    try {
        return fn();
    } catch (const ZeroScaleError& e) {
        throw ZeroScaleError(where + e.what());
    } catch (const DegenerateSegmentError& e) {
        throw DegenerateSegmentError(where + e.what());
    }
}

struct SegmentScale {
    double sigma;
    std::size_t block;
};

SegmentScale segment_scale(std::span<const double> seg, const VarianceConfig& cfg) {
    const std::size_t len = seg.size();
    if (cfg.kind == VarianceKind::Bartlett) {
        const std::size_t q = bartlett_bandwidth(len, cfg.bandwidth_c);
        if (len < 2 || q >= len) {
            throw DegenerateSegmentError("length " + std::to_string(len) +
                                         " too short for Bartlett bandwidth " + std::to_string(q));
        }
        const double s2 = bartlett_lrv(seg, q);
        if (!(s2 > 0.0)) throw ZeroScaleError("Bartlett long-run variance is zero");
        return {std::sqrt(s2), q};
    }

    const std::size_t min_len = cfg.rho_source == RhoSource::RobustQ ? 3 : 2;
    if (!cfg.fixed_block && len < min_len) {
        throw DegenerateSegmentError("length " + std::to_string(len) +
                                     " too short to estimate the block length");
    }
    const std::size_t block = resolve_block(seg, cfg);
    if (len / block < 2) {
        throw DegenerateSegmentError("length " + std::to_string(len) +
                                     " holds fewer than 2 blocks of length " +
                                     std::to_string(block));
    }
    const double sigma = cfg.kind == VarianceKind::CarlsteinW
                             ? carlstein_wilcoxon_scale(seg, block)
                             : std::sqrt(carlstein_lrv(seg, block));
    if (!(sigma > 0.0)) throw ZeroScaleError("long-run scale estimate is zero");
    return {sigma, block};
}

void check_test_inputs(std::span<const double> x, double alpha, const VarianceConfig& cfg,
                       const char* who) {
    require_length(x, 4, who);
    require_finite(x, who);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument(std::string(who) + ": alpha must lie in (0, 1)");
    cfg.validate();
    if (is_constant(x)) throw ZeroScaleError(std::string(who) + ": series is constant");
}

template <class SegmentStat>
TestReport split_test(Procedure proc, std::span<const double> x, std::size_t k_hat, double alpha,
                      const VarianceConfig& cfg, SegmentStat&& stat) {
    const std::size_t n = x.size();
    const auto seg1 = x.first(k_hat);
    const auto seg2 = x.subspan(k_hat);

    const auto s1 = on_segment(1, 1, k_hat, [&] { return segment_scale(seg1, cfg); });
    const auto s2 = on_segment(2, k_hat + 1, n, [&] { return segment_scale(seg2, cfg); });

    TestReport r;
    r.procedure = proc;
    r.n = n;
    r.k_hat = k_hat;
    r.t1 = stat(seg1);
    r.t2 = stat(seg2);
    r.sigma1 = s1.sigma;
    r.sigma2 = s2.sigma;
    r.block1 = s1.block;
    r.block2 = s2.block;
    r.statistic = std::max(r.t1 / r.sigma1, r.t2 / r.sigma2);
    r.alpha = alpha;
    r.critical_value = critical_value(alpha);
    r.reject = r.statistic > r.critical_value;
    return r;
}

}  // namespace

const char* to_string(Procedure p) noexcept {
    return p == Procedure::Wilcoxon ? "wilcoxon" : "cusum";
}

std::vector<HalfIntStat> wilcoxon_profile(std::span<const double> x, std::size_t m,
                                          std::size_t n) {
    const auto seg = checked_range(x, m, n, "wilcoxon_profile");
    const std::size_t len = seg.size();

    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return seg[a] < seg[b] || (seg[a] == seg[b] && a < b);
    });

    // dense rank of each value and #{j : x_j >= x_i} over the segment
    std::vector<std::size_t> dense(len);
    std::vector<std::int64_t> at_least(len);
    std::size_t rank = 0;
    for (std::size_t pos = 0; pos < len;) {
        std::size_t end = pos;
        while (end < len && seg[order[end]] == seg[order[pos]]) ++end;
        for (std::size_t t = pos; t < end; ++t) {
            dense[order[t]] = rank;
            at_least[order[t]] = static_cast<std::int64_t>(len - pos);
        }
        ++rank;
        pos = end;
    }

    // For a left part L of size k:
    //   #{i in L, j not in L : x_i <= x_j}
    //     = sum_{i in L} at_least_i - #{(i, j) in L x L : x_i <= x_j}
    //     = sum_{i in L} at_least_i - (k + k(k-1)/2 + tied pairs in L)
    // and 2W = 2 * that - k (N - k).
    std::vector<std::int64_t> tie_count(rank, 0);
    std::vector<HalfIntStat> out(len);
    const auto N = static_cast<std::int64_t>(len);
    std::int64_t sum_at_least = 0;
    std::int64_t tied_pairs = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const auto k = static_cast<std::int64_t>(i + 1);
        sum_at_least += at_least[i];
        tied_pairs += tie_count[dense[i]]++;
        const std::int64_t cross_le = sum_at_least - (k + k * (k - 1) / 2 + tied_pairs);
        out[i].doubled = 2 * cross_le - k * (N - k);
    }
    return out;
}

CusumProfile cusum_profile(std::span<const double> x, std::size_t m, std::size_t n) {
    const auto seg = checked_range(x, m, n, "cusum_profile");
    const std::size_t len = seg.size();
    // shifting by the first value leaves C unchanged and makes constant input exact
    const double ref = seg.front();
    CusumProfile partial(len);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        acc += seg[i] - ref;
        partial[i] = acc;
    }
    const double total = acc;
    const double N = static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i)
        partial[i] -= static_cast<double>(i + 1) / N * total;
    return partial;
}

std::size_t estimate_changepoint_wilcoxon(std::span<const double> x) {
    require_length(x, 2, "estimate_changepoint_wilcoxon");
    const auto w = wilcoxon_profile(x, 1, x.size());
    std::size_t best = 0;
    std::int64_t best_abs = -1;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const std::int64_t a = std::llabs(w[i].doubled);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best + 1;
}

std::size_t estimate_changepoint_cusum(std::span<const double> x) {
    require_length(x, 2, "estimate_changepoint_cusum");
    const auto c = cusum_profile(x, 1, x.size());
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double a = std::fabs(c[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best + 1;
}

double t_statistic_wilcoxon(std::span<const double> x) {
    require_length(x, 2, "t_statistic_wilcoxon");
    const auto w = wilcoxon_profile(x, 1, x.size());
    std::int64_t max_abs = 0;
    for (const auto& v : w) max_abs = std::max<std::int64_t>(max_abs, std::llabs(v.doubled));
    const double n = static_cast<double>(x.size());
    return 0.5 * static_cast<double>(max_abs) / (n * std::sqrt(n));
}

double cusum_max_abs(std::span<const double> x) {
    require_length(x, 1, "cusum_max_abs");
    const auto c = cusum_profile(x, 1, x.size());
    double m = 0.0;
    for (double v : c) m = std::max(m, std::fabs(v));
    return m;
}

TestReport test_wilcoxon(std::span<const double> x, double alpha, const VarianceConfig& cfg) {
    check_test_inputs(x, alpha, cfg, "test_wilcoxon");
    if (cfg.kind != VarianceKind::CarlsteinW)
        throw std::invalid_argument("test_wilcoxon: variance kind must be CarlsteinW");
    const std::size_t k_hat = estimate_changepoint_wilcoxon(x);
    return split_test(Procedure::Wilcoxon, x, k_hat, alpha, cfg,
                      [](std::span<const double> seg) { return t_statistic_wilcoxon(seg); });
}

TestReport test_cusum(std::span<const double> x, double alpha, const VarianceConfig& cfg) {
    check_test_inputs(x, alpha, cfg, "test_cusum");
    if (cfg.kind == VarianceKind::CarlsteinW)
        throw std::invalid_argument("test_cusum: variance kind must be Bartlett or CarlsteinC");
    const std::size_t k_hat = estimate_changepoint_cusum(x);
    // the CUSUM estimate may land on n when the profile vanishes; that leaves
    // an empty second segment
    if (k_hat >= x.size())
        throw DegenerateSegmentError("test_cusum: split estimate leaves an empty second segment");
    return split_test(Procedure::Cusum, x, k_hat, alpha, cfg, [](std::span<const double> seg) {
        return cusum_max_abs(seg) / std::sqrt(static_cast<double>(seg.size()));
    });
}

}  // namespace lrdtest
