#include <limits>

#include "kernels_internal.hpp"

namespace chankit::kernels::detail {
namespace {

void axpy_scalar(double* y, const double* x, std::size_t n, double a) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void clamp_min_scalar(double* y, std::size_t n, double lo) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] < lo ? lo : y[i];
}

double max_value_scalar(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
    return m;
}

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_sq_dev_scalar(const double* w, const double* x, std::size_t n, double center) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - center;
        s += w[i] * (d * d);
    }
    return s;
}

} // namespace

const KernelTable kScalarTable{
    Isa::scalar, axpy_scalar, clamp_min_scalar, max_value_scalar, sum_scalar, dot_scalar, weighted_sq_dev_scalar,
};

} // namespace chankit::kernels::detail
