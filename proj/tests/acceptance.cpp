// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lrdtest/changepoint.hpp"
#include "lrdtest/limit_dist.hpp"
#include "lrdtest/montecarlo.hpp"
#include "lrdtest/simulate.hpp"
#include "lrdtest/variance.hpp"
#include "oracles.hpp"

using namespace lrdtest;

namespace {

constexpr std::uint64_t kSeed = 20180404;
constexpr std::size_t kReps = 2000;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

McConfig ar1_cell(bool outliers, unsigned workers) {
    McConfig cfg;
    Ar1Config a;
    a.rho = 0.4;
    a.n = 1000;
    a.theta = 0.5;
    a.delta = 1.0;
    cfg.dgp = a;
    cfg.outliers = outliers;
    cfg.replications = kReps;
    cfg.seed = kSeed;
    cfg.tests = default_tests(outliers);
    cfg.workers = workers;
    return cfg;
}

McConfig fgn_cell(std::size_t n, bool outliers, unsigned workers) {
    McConfig cfg;
    FgnConfig f;
    f.d = 0.4;
    f.n = n;
    cfg.dgp = f;
    cfg.outliers = outliers;
    cfg.replications = kReps;
    cfg.seed = kSeed;
    cfg.tests = default_tests(outliers);
    cfg.workers = workers;
    return cfg;
}

double pct(const McCell& c, Procedure p) {
    for (const auto& t : c.tests)
        if (t.spec.procedure == p) return 100.0 * t.rejection_rate;
    return NAN;
}

std::vector<std::size_t> counts(const McCell& c) {
    std::vector<std::size_t> v;
    for (const auto& t : c.tests) {
        v.push_back(t.rejections);
        v.push_back(t.failures);
    }
    return v;
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

}  // namespace

int main() {
    std::printf("acceptance: seed %llu, %zu replications per Monte Carlo cell\n",
                static_cast<unsigned long long>(kSeed), kReps);

    report(1, "Wilcoxon profile equals brute force", [] {
        std::mt19937_64 g(kSeed);
        std::normal_distribution<double> z;
        std::uniform_int_distribution<int> small(0, 9);
        std::size_t mismatches = 0, series = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const std::size_t n = 2 + g() % 299;
            std::vector<double> x(n);
            for (auto& v : x) v = rep % 4 == 0 ? small(g) : z(g);
            const auto fast = wilcoxon_profile(x, 1, n);
            const auto slow = oracle::wilcoxon_doubled(x, 1, n);
            bool same = fast.size() == slow.size();
            for (std::size_t k = 0; same && k < n; ++k) same = fast[k].doubled == slow[k];
            mismatches += !same;
            ++series;
        }
        return Outcome{mismatches == 0, std::to_string(series) + " series, " +
                                            std::to_string(mismatches) + " mismatches"};
    });

    report(2, "critical value at 5%", [] {
        const double c = critical_value(0.05);
        return Outcome{std::fabs(c - 1.478) <= 5e-4, fmt("c = %.6f, target 1.478 +/- 0.0005", c)};
    });

    McCell t2, t3, t4, t5;

    report(3, "Table 2 size, AR(1) n=1000", [&] {
        t2 = run_mc(ar1_cell(false, 0));
        const double w = pct(t2, Procedure::Wilcoxon), c = pct(t2, Procedure::Cusum);
        return Outcome{std::fabs(w - 4.68) <= 2.0 && std::fabs(c - 5.11) <= 2.0,
                       fmt("Wilcoxon %.2f%% (4.68 +/- 2), CUSUM %.2f%% (5.11 +/- 2)", w, c)};
    });

    report(4, "Table 3 size with outliers, n=1000", [&] {
        t3 = run_mc(ar1_cell(true, 0));
        const double w = pct(t3, Procedure::Wilcoxon), c = pct(t3, Procedure::Cusum);
        return Outcome{std::fabs(w - 4.72) <= 2.0 && c < 2.5,
                       fmt("Wilcoxon %.2f%% (4.72 +/- 2), CUSUM %.2f%% (< 2.5)", w, c)};
    });

    report(5, "Table 4 power, fGn d=0.4 n=1000", [&] {
        t4 = run_mc(fgn_cell(1000, false, 0));
        const double w = pct(t4, Procedure::Wilcoxon), c = pct(t4, Procedure::Cusum);
        return Outcome{std::fabs(w - 46.06) <= 5.0 && std::fabs(c - 50.22) <= 5.0,
                       fmt("Wilcoxon %.2f%% (46.06 +/- 5), CUSUM %.2f%% (50.22 +/- 5)", w, c)};
    });

    report(6, "Table 5 power with outliers, n=1000", [&] {
        t5 = run_mc(fgn_cell(1000, true, 0));
        const double w = pct(t5, Procedure::Wilcoxon), c = pct(t5, Procedure::Cusum);
        return Outcome{std::fabs(w - 46.18) <= 5.0 && w - c >= 15.0,
                       fmt("Wilcoxon %.2f%% (46.18 +/- 5), CUSUM %.2f%%, gap %.2f pp (>= 15)", w, c, w - c)};
    });

    report(7, "Table 1 Bartlett CUSUM power, n=1000", [] {
        McConfig cfg = fgn_cell(1000, false, 0);
        TestSpec b{Procedure::Cusum, {}};
        b.variance.kind = VarianceKind::Bartlett;
        cfg.tests = {b};
        const double c = pct(run_mc(cfg), Procedure::Cusum);
        return Outcome{std::fabs(c - 7.62) <= 4.0, fmt("CUSUM %.2f%% (7.62 +/- 4)", c)};
    });

    report(8, "Wilcoxon power increases with n", [&] {
        std::vector<double> p;
        for (std::size_t n : {200, 500}) {
            McConfig cfg = fgn_cell(n, false, 0);
            cfg.tests = {default_tests(false)[0]};
            p.push_back(pct(run_mc(cfg), Procedure::Wilcoxon));
        }
        p.push_back(t4.tests.empty() ? NAN : pct(t4, Procedure::Wilcoxon));
        int inversions = 0;
        bool ok = true;
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (!(p[i] > p[i - 1])) {
                ++inversions;
                if (!(p[i - 1] - p[i] < 2.0)) ok = false;
            }
        }
        ok = ok && inversions <= 1;
        return Outcome{ok, fmt("n=200 %.2f%%, n=500 %.2f%%, n=1000 %.2f%%", p[0], p[1], p[2])};
    });

    report(9, "fGn autocovariances, H=0.9", [] {
        FgnConfig f;
        f.d = 0.4;
        f.n = 5000;
        const FgnSampler sampler(f);
        std::vector<double> acc(6, 0.0);
        for (std::uint64_t r = 0; r < 50; ++r) {
            Rng rng(kSeed, r);
            const Series x = sampler.sample(rng);
            // the mean is known to be 0; centering at the sample mean would subtract about
            // Var(xbar) = n^{2H-2}, roughly 0.18 here
            for (std::size_t k = 0; k < 6; ++k) {
                double s = 0;
                for (std::size_t i = 0; i + k < 5000; ++i) s += x[i] * x[i + k];
                acc[k] += s / 5000.0 / 50.0;
            }
        }
        double worst = 0;
        std::string detail;
        for (std::size_t k = 0; k < 6; ++k) {
            const double want = fgn_autocovariance(0.9, k);
            worst = std::max(worst, std::fabs(acc[k] - want));
            detail += (k ? " " : "") + fmt("%.3f/%.3f", acc[k], want);
        }
        return Outcome{worst <= 0.05, "lag 0..5 sample/closed " + detail + fmt(", max error %.4f", worst)};
    });

    report(10, "robust vs sample rho under outliers", [] {
        Ar1Config a;
        a.n = 500;
        a.rho = 0.4;
        const auto pairs = run_replications<std::pair<double, double>>(10000, 0, [&](std::size_t r) {
            Rng rng(kSeed, r);
            const Series x = inject_outliers(gen_ar1_changepoint(a, rng));
            return std::make_pair(robust_acf1(x), sample_acf1(x));
        });
        std::vector<double> q, s;
        for (const auto& [rq, rs] : pairs) {
            q.push_back(rq);
            s.push_back(rs);
        }
        const double mq = median(q), ms = median(s);
        return Outcome{std::fabs(mq - 0.4) <= 0.05 && ms < 0.2,
                       fmt("median robust %.4f (0.4 +/- 0.05), median sample %.4f (< 0.2)", mq, ms)};
    });

    report(11, "criteria 3-6 independent of worker count", [&] {
        const unsigned alt = 3;
        const bool same = counts(run_mc(ar1_cell(false, alt))) == counts(t2) &&
                          counts(run_mc(ar1_cell(true, alt))) == counts(t3) &&
                          counts(run_mc(fgn_cell(1000, false, alt))) == counts(t4) &&
                          counts(run_mc(fgn_cell(1000, true, alt))) == counts(t5);
        return Outcome{same && !t2.tests.empty(),
                       same ? "identical rejection and failure counts with 3 workers"
                            : "counts differ between worker counts"};
    });

    std::printf("acceptance: %d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
