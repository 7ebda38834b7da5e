#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chankit/errors.hpp"
#include "chankit/metrics.hpp"

using namespace chankit;

namespace {

Padp padp_of(std::vector<std::pair<double, double>> tau_power) {
    Padp p;
    for (auto [t, pw] : tau_power) p.mpcs.push_back({t, pw, Direction(0, 0), Direction(0, 0)});
    return p;
}

double dbm(double mw) { return 10.0 * std::log10(mw); }

} // namespace

TEST_CASE("omnidirectional power") {
    CHECK(omni_rx_power(padp_of({{1, -70}})) == doctest::Approx(-70.0).epsilon(1e-14));
    CHECK(omni_rx_power(padp_of({{1, -70}, {2, -70}})) == doctest::Approx(-66.9897).epsilon(1e-6));
    CHECK(omni_rx_power(padp_of({{1, -70}, {2, -90}})) == doctest::Approx(-69.9568).epsilon(1e-6));
    CHECK_THROWS_AS(omni_rx_power(Padp{}), NoSignalError);
    CHECK_THROWS_AS(omni_rx_power(std::vector<double>{}), NoSignalError);

    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-150, -40);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> p(1 + gen() % 20);
        for (auto& v : p) v = u(gen);
        CHECK(omni_rx_power(p) >= *std::max_element(p.begin(), p.end()));
    }
}

TEST_CASE("path loss") {
    auto v = path_loss(-10, -80, 17, 17);
    CHECK(v.db == 104.0);
    CHECK_FALSE(v.suspicious);
    v = path_loss(-10, -10, 0, 0);
    CHECK(v.db == 0.0);
    CHECK(v.suspicious);
    v = path_loss(-10, -178, 17, 17);
    CHECK(v.db == 202.0);
    CHECK(v.suspicious);
    CHECK(path_loss(-10, -150, 17, 17).suspicious == false);
    CHECK(path_loss(-10 + 7.5, -80 + 7.5, 17, 17).db == doctest::Approx(104.0));
}

TEST_CASE("path-loss sample validation") {
    CHECK_NOTHROW(PathLossSample({"a", 10, Scenario::los, 80}).validate());
    CHECK_THROWS_AS(PathLossSample({"a", 10, Scenario::los, 0}).validate(), ValidationError);
    CHECK_THROWS_AS(PathLossSample({"a", 10, Scenario::los, 250}).validate(), ValidationError);
    CHECK_THROWS_AS(PathLossSample({"a", 0, Scenario::los, 80}).validate(), ValidationError);
}

TEST_CASE("delay statistics") {
    auto s = delay_stats(padp_of({{42.0, -80}}));
    CHECK(s.tau_rms == 0.0);
    CHECK(s.tau_avg == 42.0);

    s = delay_stats(padp_of({{0, -80}, {10, -80}}));
    CHECK(s.tau_avg == doctest::Approx(5.0));
    CHECK(s.tau_rms == doctest::Approx(5.0));

    s = delay_stats(padp_of({{0, dbm(1)}, {5, dbm(2)}, {10, dbm(1)}}));
    CHECK(s.tau_avg == doctest::Approx(5.0));
    CHECK(s.tau_rms == doctest::Approx(3.5355).epsilon(1e-5));

    CHECK_THROWS_AS(delay_stats(Padp{}), NoSignalError);
}

TEST_CASE("delay statistics invariances") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> tau(0, 300), pw(-130, -60), shift(-50, 500), scale(-30, 30);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<std::pair<double, double>> v(2 + gen() % 12);
        for (auto& [t, p] : v) t = tau(gen), p = pw(gen);
        const auto base = delay_stats(padp_of(v));
        CHECK(base.tau_rms >= 0);

        const double k = scale(gen);
        auto scaled = v;
        for (auto& [t, p] : scaled) p += k;
        const auto s = delay_stats(padp_of(scaled));
        CHECK(s.tau_avg == doctest::Approx(base.tau_avg).epsilon(1e-12));
        CHECK(s.tau_rms == doctest::Approx(base.tau_rms).epsilon(1e-12));

        const double d = shift(gen);
        auto shifted = v;
        for (auto& [t, p] : shifted) t = std::max(0.0, t) + d + 50;
        const auto sh = delay_stats(padp_of(shifted));
        CHECK(sh.tau_avg == doctest::Approx(base.tau_avg + d + 50).epsilon(1e-12));
        CHECK(sh.tau_rms == doctest::Approx(base.tau_rms).epsilon(1e-9));

        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        CHECK(base.tau_avg >= lo->first);
        CHECK(base.tau_avg <= hi->first);
    }
}

TEST_CASE("empirical cdf") {
    CHECK(empirical_cdf({1.0}) == std::vector<CdfPoint>{{1.0, 1.0}});
    const auto c = empirical_cdf({3, 1, 2});
    REQUIRE(c.size() == 3);
    CHECK(c[0].value == 1);
    CHECK(c[0].probability == doctest::Approx(1.0 / 3));
    CHECK(c[1].value == 2);
    CHECK(c[1].probability == doctest::Approx(2.0 / 3));
    CHECK(c[2].value == 3);
    CHECK(c[2].probability == 1.0);
    CHECK_THROWS_AS(empirical_cdf({}), DomainError);
    CHECK(cdf_quantile(c, 0.5) == 2);
    CHECK(cdf_quantile(c, 1.0) == 3);
}

TEST_CASE("empirical cdf of uniform draws is close to the identity") {
    std::mt19937_64 gen(1000);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> v(1000);
    for (auto& x : v) x = u(gen);
    const auto c = empirical_cdf(v);
    double ks = 0, prev = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c[i].probability >= prev);
        prev = c[i].probability;
        const double below = static_cast<double>(i) / c.size();
        ks = std::max({ks, std::abs(c[i].probability - c[i].value), std::abs(below - c[i].value)});
    }
    CHECK(c.back().probability == 1.0);
    CHECK(ks < 0.06);
}
