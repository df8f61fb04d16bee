#include "lrdtest/limit_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrdtest {

double kolmogorov_cdf(double x) {
    if (std::isnan(x) || x < 0.0) throw std::invalid_argument("kolmogorov_cdf: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    if (x < 1.0) {
        // sqrt(2 pi)/x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2)); all terms positive
        const double a = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
        double s = 0.0;
        for (int k = 1;; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * a);
            s += term;
            if (term < 1e-16 * s || term == 0.0) break;
        }
        return std::min(1.0, std::sqrt(2.0 * std::numbers::pi) / x * s);
    }

    // 1 + 2 sum_{k>=1} (-1)^k exp(-2 k^2 x^2)
    double s = 1.0;
    for (int k = 1;; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1) ? -term : term;
        if (term < 1e-14) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

double critical_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("critical_value: alpha must lie in (0, 1)");
    const double target = std::sqrt(1.0 - alpha);
    double lo = 0.0, hi = 10.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_cdf(mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double limit_pvalue(double statistic) {
    const double k = kolmogorov_cdf(std::max(0.0, statistic));
    return 1.0 - k * k;
}

CriticalValueTable CriticalValueTable::build(std::span<const double> alphas) {
    CriticalValueTable t;
    for (double a : alphas) t.entries.emplace_back(a, critical_value(a));
    std::sort(t.entries.begin(), t.entries.end());
    return t;
}

}  // namespace lrdtest
