#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace chankit::kernels {

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "?";
}

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* simd_table() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool has_avx2 = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return has_avx2 ? &detail::kAvx2Table : nullptr;
#elif defined(__aarch64__)
    return &detail::kNeonTable;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* select_default() noexcept {
    if (const char* env = std::getenv("CHANKIT_SIMD"); env && std::string_view(env) == "scalar")
        return &scalar_table();
    const KernelTable* simd = simd_table();
    return simd ? simd : &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> table{select_default()};
    return table;
}

} // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) noexcept { slot().store(&table, std::memory_order_release); }

} // namespace chankit::kernels
