#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "chankit/kernels.hpp"

using namespace chankit;

namespace {

std::vector<double> random_vec(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(gen);
    return v;
}

// Naive long-double reference for reductions.
long double ref_sum(const std::vector<double>& x) {
    long double s = 0;
    for (double v : x) s += v;
    return s;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 1023, 4097};

} // namespace

TEST_CASE("dispatch reports a consistent table") {
    const auto& s = kernels::scalar_table();
    CHECK(s.isa == kernels::Isa::scalar);
    CHECK(kernels::to_string(s.isa) == "scalar");
    if (const auto* simd = kernels::simd_table()) CHECK(simd->isa != kernels::Isa::scalar);
    const auto& before = kernels::active();
    kernels::set_active(s);
    CHECK(&kernels::active() == &s);
    kernels::set_active(before);
}

TEST_CASE("scalar reference kernels") {
    const auto& k = kernels::scalar_table();
    std::vector<double> y{1, 2, 3}, x{1, 1, 1};
    k.axpy(y.data(), x.data(), 3, 2.0);
    CHECK(y == std::vector<double>{3, 4, 5});
    k.clamp_min(y.data(), 3, 4.0);
    CHECK(y == std::vector<double>{4, 4, 5});
    CHECK(k.max_value(y.data(), 3) == 5);
    CHECK(k.max_value(y.data(), 0) == -std::numeric_limits<double>::infinity());
    CHECK(k.sum(y.data(), 3) == 13);
    CHECK(k.sum(y.data(), 0) == 0);
    CHECK(k.dot(y.data(), x.data(), 3) == 13);
    const std::vector<double> w{1, 2, 1}, t{0, 5, 10};
    CHECK(k.weighted_sq_dev(w.data(), t.data(), 3, 5.0) == 50);
}

TEST_CASE("simd kernels match the scalar reference") {
    const auto* simd = kernels::simd_table();
    if (!simd) {
        MESSAGE("no SIMD variant on this CPU; equivalence trivially holds");
        return;
    }
    const auto& ref = kernels::scalar_table();
    std::mt19937_64 gen(42);
    for (int rep = 0; rep < 5; ++rep) {
        for (std::size_t n : kLengths) {
            CAPTURE(n);
            const auto x = random_vec(gen, n, -1e3, 1e3);
            const auto base = random_vec(gen, n, -1e3, 1e3);
            const double a = std::uniform_real_distribution<double>(-5, 5)(gen);

            // Elementwise kernels: bit-identical.
            auto y1 = base, y2 = base;
            ref.axpy(y1.data(), x.data(), n, a);
            simd->axpy(y2.data(), x.data(), n, a);
            CHECK(y1 == y2);

            auto c1 = base, c2 = base;
            ref.clamp_min(c1.data(), n, 12.5);
            simd->clamp_min(c2.data(), n, 12.5);
            CHECK(c1 == c2);

            CHECK(ref.max_value(x.data(), n) == simd->max_value(x.data(), n));

            // Reductions: reassociation only.
            const double tol = 1e-12 * (1.0 + static_cast<double>(n));
            const double s_ref = ref.sum(x.data(), n), s_simd = simd->sum(x.data(), n);
            CHECK(std::abs(s_ref - s_simd) <= tol * 1e3);
            CHECK(std::abs(s_simd - static_cast<double>(ref_sum(x))) <= tol * 1e3);
            const double d_ref = ref.dot(x.data(), base.data(), n), d_simd = simd->dot(x.data(), base.data(), n);
            CHECK(std::abs(d_ref - d_simd) <= tol * 1e6);

            const auto w = random_vec(gen, n, 0, 1);
            const double v_ref = ref.weighted_sq_dev(w.data(), x.data(), n, 3.0);
            const double v_simd = simd->weighted_sq_dev(w.data(), x.data(), n, 3.0);
            CHECK(std::abs(v_ref - v_simd) <= 1e-13 * std::max(1.0, v_ref) * (1.0 + static_cast<double>(n)));
        }
    }
}

TEST_CASE("span wrappers use the shorter length") {
    std::vector<double> y{0, 0, 0, 0};
    const std::vector<double> x{1, 1};
    kernels::axpy(y, x, 1.0);
    CHECK(y == std::vector<double>{1, 1, 0, 0});
    CHECK(kernels::dot(y, x) == 2);
}

TEST_CASE("max_value propagates infinities and handles -inf inputs") {
    for (const auto* t : {&kernels::scalar_table(), kernels::simd_table()}) {
        if (!t) continue;
        std::vector<double> v(13, -std::numeric_limits<double>::infinity());
        CHECK(t->max_value(v.data(), v.size()) == -std::numeric_limits<double>::infinity());
        v[12] = -3;
        CHECK(t->max_value(v.data(), v.size()) == -3);
        v[5] = std::numeric_limits<double>::infinity();
        CHECK(t->max_value(v.data(), v.size()) == std::numeric_limits<double>::infinity());
    }
}
