#pragma once

// Data-parallel inner loops used by the estimators. Each kernel has a scalar
// reference implementation and, where the target supports it, an AVX2 (x86-64)
// or NEON (aarch64) variant. The variant is chosen once at runtime from the CPU
// features; LRDTEST_ISA=scalar|avx2|neon in the environment overrides it.
//
// Vector variants reassociate floating sums, so they agree with the scalar
// reference to rounding error, not bit for bit.

#include <cstddef>
#include <optional>
#include <string_view>

namespace lrdtest::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    const char* name;
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // out[i] = x[i] - c
    void (*shift)(const double* x, std::size_t n, double c, double* out);
    // out[i] = |x[i] - pivot|
    void (*abs_diff)(const double* x, std::size_t n, double pivot, double* out);
};

const KernelTable& scalar();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2();
const KernelTable* neon();

// The table every estimator goes through.
const KernelTable& active();

// Forces a variant; returns false (and changes nothing) if it is unavailable.
// Not synchronized with concurrent kernel callers; call before starting work.
bool select(Isa isa);

std::optional<Isa> parse_isa(std::string_view name);

}  // namespace lrdtest::kernels
