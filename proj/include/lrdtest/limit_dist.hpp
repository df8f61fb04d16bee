#pragma once

// Null limit of the split-sample tests: Z = max of sup|B| over two independent
// Brownian bridges, so P(Z <= c) = K(c)^2 with K the Kolmogorov distribution.

#include <span>
#include <utility>
#include <vector>

namespace lrdtest {

/// K(x) = P(sup_{0<=t<=1} |B(t)| <= x). Throws std::invalid_argument for x < 0.
double kolmogorov_cdf(double x);

/// The c with K(c)^2 = 1 - alpha, by bisection on [0, 10] to 1e-10.
double critical_value(double alpha);

/// P(Z > m) = 1 - K(m)^2 for an observed statistic m >= 0.
double limit_pvalue(double statistic);

struct CriticalValueTable {
    // (alpha, c_alpha), alpha ascending
    std::vector<std::pair<double, double>> entries;

    static CriticalValueTable build(std::span<const double> alphas);
};

}  // namespace lrdtest
