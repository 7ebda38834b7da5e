#include <doctest.h>

#include <cmath>
#include <random>

#include "chankit/core.hpp"
#include "chankit/errors.hpp"
#include "chankit/pulse.hpp"

using namespace chankit;

TEST_CASE("fspl matches a hand evaluation of the Friis relation") {
    // lambda = c / f; FSPL = 20 log10(4 pi d / lambda)
    const double lambda = 299792458.0 / 28e9;
    const double oracle = 20.0 * std::log10(4.0 * 3.141592653589793 * 1.0 / lambda);
    CHECK(std::abs(oracle - 61.385) <= 0.01);
    CHECK(std::abs(fspl(28e9, 1.0) - 61.385) <= 0.01);
    CHECK(std::abs(fspl(28e9, 1.0) - oracle) <= 1e-12);
}

TEST_CASE("fspl distance scaling") {
    CHECK(fspl(28e9, 2.0) - fspl(28e9, 1.0) == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK(std::abs(fspl(28e9, 10.0) - fspl(28e9, 1.0) - 20.0) <= 1e-12);
}

TEST_CASE("fspl rejects non-positive arguments") {
    CHECK_THROWS_AS(fspl(28e9, 0.0), DomainError);
    CHECK_THROWS_AS(fspl(28e9, -1.0), DomainError);
    CHECK_THROWS_AS(fspl(0.0, 1.0), DomainError);
}

TEST_CASE("antenna gain") {
    const AntennaPattern p;
    CHECK(antenna_gain(p, 0, 0) == 17.0);
    CHECK(antenna_gain(p, 12, 0) == doctest::Approx(14.0));
    CHECK(antenna_gain(p, -12, 0) == doctest::Approx(14.0));
    CHECK(antenna_gain(p, 0, 13) == doctest::Approx(14.0));
    CHECK(antenna_gain(p, 120, 0) == -10.0);
    CHECK(antenna_gain(p, 180, 90) == -10.0);
    // 350 deg of offset is 10 deg the other way.
    CHECK(antenna_gain(p, 350, 0) == doctest::Approx(antenna_gain(p, -10, 0)));
}

TEST_CASE("gain is bounded by floor and peak") {
    const AntennaPattern p;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> az(-400, 400), el(-90, 90);
    for (int i = 0; i < 2000; ++i) {
        const double g = antenna_gain(p, az(gen), el(gen));
        CHECK(g <= p.peak_gain);
        CHECK(g >= p.floor_gain);
    }
}

TEST_CASE("dB conversions") {
    CHECK(db_from_linear(1.0) == 0.0);
    CHECK(db_from_linear(1e-7) == doctest::Approx(-70.0));
    CHECK_THROWS_AS(db_from_linear(0.0), DomainError);
    CHECK_THROWS_AS(db_from_linear(-1.0), DomainError);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> expo(-15, 3);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, expo(gen));
        CHECK(std::abs(linear_from_db(db_from_linear(x)) - x) <= 1e-12 * x);
    }
}

TEST_CASE("direction wraps azimuth and bounds elevation") {
    CHECK(Direction(190, 0).az() == doctest::Approx(-170));
    CHECK(Direction(180, 0).az() == -180);
    CHECK(Direction(-180, 0).az() == -180);
    CHECK(Direction(540, 10).az() == -180);
    CHECK(Direction(-190, 0).az() == doctest::Approx(170));
    CHECK_NOTHROW(Direction(0, 90));
    CHECK_NOTHROW(Direction(0, -90));
    CHECK_THROWS_AS(Direction(0, 90.5), DomainError);
    CHECK_THROWS_AS(Direction(0, -91), DomainError);
    CHECK_THROWS_AS(Direction(0, std::nan("")), DomainError);
}

TEST_CASE("angular distance uses the shorter way round in azimuth") {
    CHECK(angular_distance(Direction(170, 0), Direction(-170, 0)) == doctest::Approx(20));
    CHECK(angular_distance(Direction(0, -20), Direction(10, 20)) == doctest::Approx(40));
    CHECK(angular_distance(Direction(5, 5), Direction(5, 5)) == 0);
}

TEST_CASE("standard grid") {
    const AngleGrid g = AngleGrid::standard();
    REQUIRE(g.azimuths.size() == 19);
    REQUIRE(g.elevations.size() == 3);
    CHECK(g.azimuths.front() == -167.98);
    CHECK(g.azimuths.back() == doctest::Approx(167.98));
    CHECK(g.elevations == std::vector<double>{-20, 0, 20});
    CHECK(g.azimuth_step() == doctest::Approx(335.96 / 18));
    CHECK(g.azimuth_step() <= 20.0);
    CHECK_NOTHROW(g.validate());
    const auto dirs = g.directions();
    CHECK(dirs.size() == 57);
    CHECK(dirs[0] == Direction(-167.98, -20));
    CHECK(dirs[19].el() == 0);
    for (const auto& d : dirs) CHECK(g.contains(d));
    CHECK(g.contains(Direction(0, 0)));
    CHECK_FALSE(g.contains(Direction(5, 0)));
    CHECK_FALSE(g.contains(Direction(0, 10)));
}

TEST_CASE("grid validation") {
    AngleGrid g{{0, 20, 10}, {0}};
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = {{0, 20}, {}};
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = {{0, 20}, {0, 95}};
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = {{0, 0}, {0}};
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = {{-10, 10}, {0}};
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("config validation") {
    SounderConfig c;
    CHECK_NOTHROW(c.validate());
    c.delay_bin = 0.7;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.sample_rate = -1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.sequence_length = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    AntennaPattern p;
    p.hpbw_az = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("scenario names") {
    for (Scenario s : {Scenario::los, Scenario::nlos, Scenario::nlos_glass})
        CHECK(scenario_from_string(to_string(s)) == s);
    CHECK(to_string(Scenario::nlos_glass) == "NLOS_GLASS");
    CHECK_THROWS_AS(scenario_from_string("los"), ParseError);
    CHECK(fit_pool(Scenario::nlos_glass) == Scenario::nlos);
    CHECK(fit_pool(Scenario::los) == Scenario::los);
}

TEST_CASE("delay and distance conversions") {
    CHECK(ns_from_metres(30.0) == doctest::Approx(100.069).epsilon(1e-5));
    CHECK(metres_from_ns(ns_from_metres(12.5)) == doctest::Approx(12.5));
}

TEST_CASE("rrc pulse") {
    const RrcPulse p;
    CHECK(p.amplitude(0) == 1.0);
    CHECK(p.amplitude(1.0 / (4 * 0.22)) == doctest::Approx(p.amplitude(1.0 / (4 * 0.22) + 1e-7)).epsilon(1e-5));
    // Power loss at sub-bin offsets, checked against an independent evaluation.
    CHECK(10 * std::log10(p.power(0.5)) == doctest::Approx(-4.59).epsilon(0.005));
    CHECK(10 * std::log10(p.power(0.1)) == doctest::Approx(-0.166).epsilon(0.01));
    CHECK(p.amplitude(0.3) == doctest::Approx(p.amplitude(-0.3)));
    CHECK(10 * std::log10(p.sidelobe_envelope(2)) < -13.0);
    CHECK(p.sidelobe_envelope(6) < p.sidelobe_envelope(3));

    for (double delta : {0.0, 0.05, 0.2, 0.35, 0.5}) {
        const double ratio = std::abs(p.amplitude(1 - delta)) / std::abs(p.amplitude(delta));
        if (delta >= 0.2) CHECK(p.offset_from_neighbour_ratio(ratio) == doctest::Approx(delta).epsilon(1e-3));
    }
    CHECK(p.offset_from_neighbour_ratio(5.0) == 0.5);
}
