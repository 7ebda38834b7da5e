#pragma once

// Data-parallel inner loops shared by the render, extraction, metrics and
// fitting code. Every kernel has a scalar reference implementation and,
// where the target supports it, an AVX2 (x86-64) or NEON (aarch64) variant.
// The variant is picked once at startup from the CPU feature bits; setting
// CHANKIT_SIMD=scalar in the environment forces the reference path.
//
// Elementwise kernels (axpy, clamp_min, max_value) are bit-identical across
// variants. Reductions (sum, dot, weighted_sq_dev) reassociate and agree to
// within a few ulps of the scalar result.

#include <cstddef>
#include <span>
#include <string_view>

namespace chankit::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    // y[i] += a * x[i]
    void (*axpy)(double* y, const double* x, std::size_t n, double a);
    // y[i] = max(y[i], lo)
    void (*clamp_min)(double* y, std::size_t n, double lo);
    // max over x; -inf for n == 0
    double (*max_value)(const double* x, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum w[i] * (x[i] - center)^2
    double (*weighted_sq_dev)(const double* w, const double* x, std::size_t n, double center);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* simd_table() noexcept;

// Table used by the span wrappers below.
const KernelTable& active() noexcept;
// Overrides the active table (tests, benchmarking). Not thread-safe against
// concurrent kernel calls.
void set_active(const KernelTable& table) noexcept;

inline void axpy(std::span<double> y, std::span<const double> x, double a) noexcept {
    active().axpy(y.data(), x.data(), y.size() < x.size() ? y.size() : x.size(), a);
}
inline void clamp_min(std::span<double> y, double lo) noexcept { active().clamp_min(y.data(), y.size(), lo); }
inline double max_value(std::span<const double> x) noexcept { return active().max_value(x.data(), x.size()); }
inline double sum(std::span<const double> x) noexcept { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
    return active().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}
inline double weighted_sq_dev(std::span<const double> w, std::span<const double> x, double center) noexcept {
    return active().weighted_sq_dev(w.data(), x.data(), w.size() < x.size() ? w.size() : x.size(), center);
}

} // namespace chankit::kernels
