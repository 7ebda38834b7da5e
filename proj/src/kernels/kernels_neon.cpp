#include <arm_neon.h>

#include <limits>

#include "kernels_internal.hpp"

namespace chankit::kernels::detail {
namespace {

void axpy_neon(double* y, const double* x, std::size_t n, double a) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    // vmulq + vaddq rather than vfmaq: must round like the scalar path.
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void clamp_min_neon(double* y, std::size_t n, double lo) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(y + i);
        vst1q_f64(y + i, vbslq_f64(vcltq_f64(v, vlo), vlo, v));
    }
    for (; i < n; ++i) y[i] = y[i] < lo ? lo : y[i];
}

double max_value_neon(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 2) {
        float64x2_t vm = vdupq_n_f64(m);
        for (; i + 2 <= n; i += 2) {
            const float64x2_t v = vld1q_f64(x + i);
            vm = vbslq_f64(vcgtq_f64(v, vm), v, vm);
        }
        const double a = vgetq_lane_f64(vm, 0), b = vgetq_lane_f64(vm, 1);
        m = a > m ? a : m;
        m = b > m ? b : m;
    }
    for (; i < n; ++i) m = x[i] > m ? x[i] : m;
    return m;
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_sq_dev_neon(const double* w, const double* x, std::size_t n, double center) {
    const float64x2_t vc = vdupq_n_f64(center);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vc);
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + i), vmulq_f64(d, d)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - center;
        s += w[i] * (d * d);
    }
    return s;
}

} // namespace

const KernelTable kNeonTable{
    Isa::neon, axpy_neon, clamp_min_neon, max_value_neon, sum_neon, dot_neon, weighted_sq_dev_neon,
};

} // namespace chankit::kernels::detail
