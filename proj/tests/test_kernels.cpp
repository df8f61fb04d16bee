#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lrdtest/changepoint.hpp"
#include "lrdtest/kernels.hpp"
#include "lrdtest/simulate.hpp"
#include "lrdtest/variance.hpp"

using namespace lrdtest;
namespace k = lrdtest::kernels;

namespace {

std::vector<const k::KernelTable*> variants() {
    std::vector<const k::KernelTable*> v;
    if (auto* t = k::avx2()) v.push_back(t);
    if (auto* t = k::neon()) v.push_back(t);
    return v;
}

// Restores the active table on scope exit.
struct IsaGuard {
    k::Isa saved = k::active().isa;
    ~IsaGuard() { k::select(saved); }
};

}  // namespace

TEST(Kernels, ParseIsa) {
    EXPECT_EQ(k::parse_isa("scalar"), k::Isa::Scalar);
    EXPECT_EQ(k::parse_isa("avx2"), k::Isa::Avx2);
    EXPECT_EQ(k::parse_isa("neon"), k::Isa::Neon);
    EXPECT_FALSE(k::parse_isa("sse9"));
    EXPECT_EQ(k::scalar().isa, k::Isa::Scalar);
}

TEST(Kernels, VectorVariantsMatchScalar) {
    const auto& ref = k::scalar();
    auto list = variants();
    if (list.empty()) GTEST_SKIP() << "no vector kernels on this machine";
    std::mt19937_64 g(1);
    std::normal_distribution<double> z;
    for (const auto* t : list) {
        for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 33, 64, 100, 1001, 4099}) {
            std::vector<double> a(n), b(n), o1(n), o2(n);
            for (auto& v : a) v = 10.0 * z(g) + 3.0;
            for (auto& v : b) v = z(g);
            double abs_sum = 0, abs_dot = 0;
            for (std::size_t i = 0; i < n; ++i) {
                abs_sum += std::fabs(a[i]);
                abs_dot += std::fabs(a[i] * b[i]);
            }
            EXPECT_NEAR(t->sum(a.data(), n), ref.sum(a.data(), n), 1e-13 * (1 + abs_sum)) << t->name << n;
            EXPECT_NEAR(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), 1e-13 * (1 + abs_dot))
                << t->name << n;
            t->shift(a.data(), n, 1.25, o1.data());
            ref.shift(a.data(), n, 1.25, o2.data());
            EXPECT_EQ(o1, o2);
            t->abs_diff(a.data(), n, -0.5, o1.data());
            ref.abs_diff(a.data(), n, -0.5, o2.data());
            EXPECT_EQ(o1, o2);
        }
    }
}

TEST(Kernels, SelectUnavailableIsRejected) {
    IsaGuard guard;
    EXPECT_TRUE(k::select(k::Isa::Scalar));
    EXPECT_EQ(k::active().isa, k::Isa::Scalar);
    if (!k::neon()) {
        EXPECT_FALSE(k::select(k::Isa::Neon));
        EXPECT_EQ(k::active().isa, k::Isa::Scalar);
    }
}

TEST(Kernels, EstimatorsAgreeAcrossVariants) {
    auto list = variants();
    if (list.empty()) GTEST_SKIP() << "no vector kernels on this machine";
    IsaGuard guard;
    FgnConfig f;
    f.n = 1500;
    const FgnSampler s(f);
    VarianceConfig c;
    c.kind = VarianceKind::CarlsteinC;
    VarianceConfig b;
    b.kind = VarianceKind::Bartlett;
    for (int r = 0; r < 10; ++r) {
        Rng rng(2, r);
        const Series x = s.sample(rng);
        k::select(k::Isa::Scalar);
        const auto w0 = test_wilcoxon(x, 0.05, {});
        const auto c0 = test_cusum(x, 0.05, c);
        const auto b0 = test_cusum(x, 0.05, b);
        const double q0 = qn_scale(x), a0 = sample_acf1(x);
        for (const auto* t : list) {
            k::select(t->isa);
            const auto w1 = test_wilcoxon(x, 0.05, {});
            const auto c1 = test_cusum(x, 0.05, c);
            const auto b1 = test_cusum(x, 0.05, b);
            EXPECT_EQ(w1.k_hat, w0.k_hat);
            EXPECT_NEAR(w1.statistic, w0.statistic, 1e-10 * w0.statistic);
            EXPECT_NEAR(c1.statistic, c0.statistic, 1e-10 * c0.statistic);
            EXPECT_NEAR(b1.statistic, b0.statistic, 1e-10 * b0.statistic);
            EXPECT_EQ(qn_scale(x), q0);
            EXPECT_NEAR(sample_acf1(x), a0, 1e-12);
        }
    }
}
