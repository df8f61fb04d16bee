#include <atomic>
#include <cstdlib>

#include "kernels_internal.hpp"

namespace lrdtest::kernels {
namespace {

const KernelTable* detect() {
    if (const char* env = std::getenv("LRDTEST_ISA")) {
        if (auto isa = parse_isa(env)) {
            switch (*isa) {
                case Isa::Scalar: return &scalar();
                case Isa::Avx2:
                    if (auto* t = avx2()) return t;
                    break;
                case Isa::Neon:
                    if (auto* t = neon()) return t;
                    break;
            }
        }
    }
    if (auto* t = avx2()) return t;
    if (auto* t = neon()) return t;
    return &scalar();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

}  // namespace

const KernelTable* avx2() {
#if defined(LRDTEST_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon() {
#if defined(LRDTEST_HAVE_NEON)
    return &detail::neon_table();  // mandatory on aarch64
#else
    return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) {
    const KernelTable* t = nullptr;
    switch (isa) {
        case Isa::Scalar: t = &scalar(); break;
        case Isa::Avx2: t = avx2(); break;
        case Isa::Neon: t = neon(); break;
    }
    if (t == nullptr) return false;
    current().store(t, std::memory_order_release);
    return true;
}

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    if (name == "neon") return Isa::Neon;
    return std::nullopt;
}

}  // namespace lrdtest::kernels
