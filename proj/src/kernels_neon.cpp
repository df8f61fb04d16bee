#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace lrdtest::kernels {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(a + i), vld1q_f64(b + i));
        a1 = vfmaq_f64(a1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void shift_neon(const double* x, std::size_t n, double c, double* out) {
    const float64x2_t vc = vdupq_n_f64(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vc));
    for (; i < n; ++i) out[i] = x[i] - c;
}

void abs_diff_neon(const double* x, std::size_t n, double pivot, double* out) {
    const float64x2_t vp = vdupq_n_f64(pivot);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vabdq_f64(vld1q_f64(x + i), vp));
    for (; i < n; ++i) out[i] = std::fabs(x[i] - pivot);
}

constexpr KernelTable kNeon{Isa::Neon, "neon", sum_neon, dot_neon, shift_neon, abs_diff_neon};

}  // namespace

const KernelTable& detail::neon_table() { return kNeon; }

}  // namespace lrdtest::kernels
