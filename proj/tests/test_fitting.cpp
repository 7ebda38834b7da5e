#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chankit/errors.hpp"
#include "chankit/fitting.hpp"

using namespace chankit;

namespace {

std::vector<PathLossSample> samples_of(const std::vector<std::pair<double, double>>& d_pl) {
    std::vector<PathLossSample> out;
    for (std::size_t i = 0; i < d_pl.size(); ++i)
        out.push_back({"S" + std::to_string(i), d_pl[i].first, Scenario::los, d_pl[i].second});
    return out;
}

// Normal equations for y = alpha + beta * x, solved with Cramer's rule in
// long double.
std::pair<double, double> ols_oracle(const std::vector<PathLossSample>& s) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : s) {
        const long double x = 10.0L * std::log10(static_cast<long double>(p.distance));
        const long double y = p.path_loss;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const long double det = n * sxx - sx * sx;
    return {static_cast<double>((sy * sxx - sx * sxy) / det), static_cast<double>((n * sxy - sx * sy) / det)};
}

} // namespace

TEST_CASE("CIM on free-space samples") {
    std::vector<std::pair<double, double>> v;
    for (double d : {1.5, 3.0, 7.0, 20.0, 44.0}) v.emplace_back(d, fspl(28e9, d));
    const CimFit f = fit_cim(samples_of(v));
    CHECK(f.n == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.sigma <= 1e-9);
    CHECK(f.fspl_d0 == fspl(28e9, 1.0));
    CHECK(f.n_points == 5);
}

TEST_CASE("CIM noiseless regeneration") {
    const double a0 = fspl(28e9, 1.0);
    std::vector<std::pair<double, double>> v;
    for (double d : {10.0, 20.0, 30.0, 40.0, 50.0}) v.emplace_back(d, a0 + 10 * 2.11 * std::log10(d));
    const CimFit f = fit_cim(samples_of(v));
    CHECK(std::abs(f.n - 2.11) <= 1e-9);
    CHECK(f.sigma <= 1e-9);

    const FimFit g = fit_fim(samples_of(v));
    CHECK(std::abs(g.alpha - a0) <= 1e-6);
    CHECK(std::abs(g.beta - 2.11) <= 1e-9);
}

TEST_CASE("CIM two-point closed form") {
    const double a0 = fspl(28e9, 1.0);
    const CimFit f = fit_cim(samples_of({{1.0, a0 + 3}, {10.0, a0 + 17}}));
    CHECK(f.n == doctest::Approx(1.7).epsilon(1e-12));
    // Residuals are (3, 0); divisor K gives sqrt(9/2).
    CHECK(f.sigma == doctest::Approx(std::sqrt(4.5)).epsilon(1e-12));
}

TEST_CASE("CIM errors") {
    CHECK_THROWS_AS(fit_cim(samples_of({{10, 80}})), InsufficientDataError);
    CHECK_THROWS_AS(fit_cim(samples_of({{10, 80}, {10, 82}})), InsufficientDataError);
    CHECK_THROWS_AS(fit_cim(samples_of({{0.5, 60}, {10, 82}})), DomainError);
    CHECK_THROWS_AS(fit_cim(samples_of({{10, 80}, {20, 86}}), 0.0), DomainError);
    // d == d0 everywhere leaves the slope undetermined.
    CHECK_THROWS_AS(fit_cim(samples_of({{1, 62}, {1, 63}})), InsufficientDataError);
}

TEST_CASE("FIM exact line and errors") {
    const FimFit f = fit_fim(samples_of({{1, 60}, {10, 80}, {100, 100}}));
    CHECK(f.alpha == doctest::Approx(60.0).epsilon(1e-12));
    CHECK(f.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.sigma <= 1e-9);
    CHECK_THROWS_AS(fit_fim(samples_of({{10, 80}})), InsufficientDataError);
    CHECK_THROWS_AS(fit_fim(samples_of({{10, 80}, {10, 90}})), InsufficientDataError);
    CHECK_THROWS_AS(fit_fim(samples_of({{-1, 80}, {10, 90}})), DomainError);
}

TEST_CASE("FIM matches the OLS oracle and never fits worse than CIM") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> logd(0, std::log10(80.0)), noise(-8, 8), slope(1.5, 4);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::pair<double, double>> v;
        const double n = slope(gen);
        const std::size_t k = 2 + gen() % 30;
        for (std::size_t i = 0; i < k; ++i) {
            const double d = std::pow(10.0, logd(gen)) + 1.0;
            v.emplace_back(d, 61.4 + 10 * n * std::log10(d) + noise(gen));
        }
        const auto s = samples_of(v);
        const FimFit f = fit_fim(s);
        const auto [alpha, beta] = ols_oracle(s);
        CHECK(f.alpha == doctest::Approx(alpha).epsilon(1e-9));
        CHECK(f.beta == doctest::Approx(beta).epsilon(1e-9));
        CHECK(f.sigma <= fit_cim(s).sigma + 1e-12);
    }
}

TEST_CASE("predictions") {
    const CimFit c = make_cim(2.11);
    CHECK(predict_cim(c, 1.0) == c.fspl_d0);
    CHECK(predict_cim(c, 10.0) - predict_cim(c, 1.0) == doctest::Approx(21.1).epsilon(1e-12));
    CHECK_THROWS_AS(predict_cim(c, 0.5), DomainError);
    CHECK(predict_fim(make_fim(60, 2), 100) == doctest::Approx(100.0));
    CHECK_THROWS_AS(predict_fim(make_fim(60, 2), 0.0), DomainError);
    CHECK(make_cim(3, 2.0).fspl_d0 == fspl(28e9, 2.0));
}

TEST_CASE("CIM shift equivariance follows the closed form") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> d(1, 60), pl(60, 130), c(-5, 5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::pair<double, double>> v(3 + gen() % 10);
        for (auto& [x, y] : v) x = d(gen), y = pl(gen);
        const double shift = c(gen);
        auto shifted = v;
        for (auto& [x, y] : shifted) y += shift;
        double sb = 0, sbb = 0;
        for (auto [x, y] : v) {
            const double b = 10 * std::log10(x);
            sb += b;
            sbb += b * b;
        }
        const double n0 = fit_cim(samples_of(v)).n;
        const double n1 = fit_cim(samples_of(shifted)).n;
        CHECK(n1 - n0 == doctest::Approx(shift * sb / sbb).epsilon(1e-9));
    }
}

TEST_CASE("fits are permutation invariant") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> d(1, 60), pl(60, 130);
    std::vector<std::pair<double, double>> v(25);
    for (auto& [x, y] : v) x = d(gen), y = pl(gen);
    const CimFit c = fit_cim(samples_of(v));
    const FimFit f = fit_fim(samples_of(v));
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(v.begin(), v.end(), gen);
        CHECK(fit_cim(samples_of(v)).n == doctest::Approx(c.n).epsilon(1e-13));
        CHECK(fit_cim(samples_of(v)).sigma == doctest::Approx(c.sigma).epsilon(1e-12));
        CHECK(fit_fim(samples_of(v)).alpha == doctest::Approx(f.alpha).epsilon(1e-12));
        CHECK(fit_fim(samples_of(v)).beta == doctest::Approx(f.beta).epsilon(1e-12));
    }
}

TEST_CASE("stochastic consistency of the CIM estimate") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> logd(1, std::log10(50.0));
    std::normal_distribution<double> noise(0, 3.0);
    const double a0 = fspl(28e9, 1.0);
    for (double n_true : {2.11, 3.25}) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<std::pair<double, double>> v;
            std::vector<double> b;
            for (int i = 0; i < 19; ++i) {
                const double dist = std::pow(10.0, logd(gen));
                b.push_back(10 * std::log10(dist));
                v.emplace_back(dist, a0 + 10 * n_true * std::log10(dist) + noise(gen));
            }
            const double mean = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
            double var = 0;
            for (double x : b) var += (x - mean) * (x - mean);
            const double sd = std::sqrt(var / b.size());
            const double bound = 3 * 3.0 / (std::sqrt(19.0) * sd);
            CHECK(std::abs(fit_cim(samples_of(v)).n - n_true) <= bound);
        }
    }
}
