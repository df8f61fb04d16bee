#include "lrdtest/kernels.hpp"

#include <cmath>

namespace lrdtest::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void shift_scalar(const double* x, std::size_t n, double c, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - c;
}

void abs_diff_scalar(const double* x, std::size_t n, double pivot, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i] - pivot);
}

constexpr KernelTable kScalar{Isa::Scalar, "scalar", sum_scalar, dot_scalar, shift_scalar,
                              abs_diff_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace lrdtest::kernels
