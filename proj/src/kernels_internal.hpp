#pragma once

#include "lrdtest/kernels.hpp"

namespace lrdtest::kernels::detail {

// Defined only in the translation unit built for the matching ISA.
const KernelTable& avx2_table();
const KernelTable& neon_table();

}  // namespace lrdtest::kernels::detail
