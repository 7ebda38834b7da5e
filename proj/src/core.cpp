#include "chankit/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chankit/errors.hpp"

namespace chankit {

void SounderConfig::validate() const {
    if (!(carrier_freq > 0) || !(bandwidth > 0) || !(sample_rate > 0) || !(delay_bin > 0) ||
        !(dynamic_range > 0) || !(max_measurable_pl > 0) || sequence_length <= 0)
        throw ValidationError("sounder config: all parameters except tx_power must be positive");
    if (!std::isfinite(tx_power)) throw ValidationError("sounder config: tx_power must be finite");
    // Two samples per delay bin.
    const double expected_ns = 2.0 / sample_rate * 1e9;
    if (std::abs(delay_bin - expected_ns) > 0.01 * expected_ns)
        throw ValidationError("sounder config: delay_bin " + std::to_string(delay_bin) +
                              " ns inconsistent with sample_rate");
}

void AntennaPattern::validate() const {
    if (!(peak_gain > floor_gain)) throw ValidationError("antenna pattern: peak_gain must exceed floor_gain");
    if (!(hpbw_az > 0 && hpbw_az < 360) || !(hpbw_el > 0 && hpbw_el < 360))
        throw ValidationError("antenna pattern: beamwidths must lie in (0, 360)");
}

double wrap_deg(double deg) noexcept {
    double w = std::fmod(deg + 180.0, 360.0);
    if (w < 0) w += 360.0;
    w -= 180.0;
    // fmod can land exactly on +180 after the shift for inputs like -180 - eps.
    return w >= 180.0 ? w - 360.0 : w;
}

Direction::Direction(double az_deg, double el_deg) {
    if (!std::isfinite(az_deg) || !std::isfinite(el_deg))
        throw DomainError("direction: non-finite angle");
    if (el_deg < -90.0 || el_deg > 90.0)
        throw DomainError("direction: elevation " + std::to_string(el_deg) + " outside [-90, 90]");
    az_ = wrap_deg(az_deg);
    el_ = el_deg;
}

double angular_distance(const Direction& a, const Direction& b) noexcept {
    return std::max(std::abs(wrap_deg(a.az() - b.az())), std::abs(a.el() - b.el()));
}

AngleGrid AngleGrid::standard() {
    AngleGrid g;
    constexpr int n = 19;
    constexpr double lo = -167.98, hi = 167.98;
    g.azimuths.reserve(n);
    for (int i = 0; i < n; ++i) g.azimuths.push_back(lo + (hi - lo) * i / (n - 1));
    g.azimuths.back() = hi;
    g.elevations = {-20.0, 0.0, 20.0};
    return g;
}

namespace {

void check_axis(const std::vector<double>& v, double lo, double hi, bool hi_open, const char* name) {
    if (v.empty()) throw ValidationError(std::string("angle grid: empty ") + name);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < lo || v[i] > hi || (hi_open && v[i] == hi))
            throw ValidationError(std::string("angle grid: ") + name + " value out of range");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw ValidationError(std::string("angle grid: ") + name + " not strictly increasing");
    }
}

bool on_axis(const std::vector<double>& v, double x) noexcept {
    constexpr double tol = 1e-9;
    return std::any_of(v.begin(), v.end(), [&](double g) { return std::abs(g - x) <= tol; });
}

} // namespace

void AngleGrid::validate() const {
    check_axis(azimuths, -180.0, 180.0, true, "azimuths");
    check_axis(elevations, -90.0, 90.0, false, "elevations");
}

bool AngleGrid::contains(const Direction& d) const noexcept {
    return on_axis(azimuths, d.az()) && on_axis(elevations, d.el());
}

std::vector<Direction> AngleGrid::directions() const {
    std::vector<Direction> out;
    out.reserve(azimuths.size() * elevations.size());
    for (double el : elevations)
        for (double az : azimuths) out.emplace_back(az, el);
    return out;
}

double AngleGrid::azimuth_step() const noexcept {
    double step = 0.0;
    for (std::size_t i = 1; i < azimuths.size(); ++i) step = std::max(step, azimuths[i] - azimuths[i - 1]);
    return step;
}

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::los: return "LOS";
    case Scenario::nlos: return "NLOS";
    case Scenario::nlos_glass: return "NLOS_GLASS";
    }
    return "?";
}

Scenario scenario_from_string(std::string_view s) {
    if (s == "LOS") return Scenario::los;
    if (s == "NLOS") return Scenario::nlos;
    if (s == "NLOS_GLASS") return Scenario::nlos_glass;
    throw ParseError(0, "unknown scenario '" + std::string(s) + "'");
}

Scenario fit_pool(Scenario s) noexcept {
    return s == Scenario::nlos_glass ? Scenario::nlos : s;
}

double fspl(double freq_hz, double dist_m) {
    if (!(freq_hz > 0) || !(dist_m > 0)) throw DomainError("fspl: frequency and distance must be positive");
    return 20.0 * std::log10(4.0 * kPi * dist_m * freq_hz / kSpeedOfLight);
}

double antenna_gain(const AntennaPattern& p, double offset_az_deg, double offset_el_deg) noexcept {
    const double az = wrap_deg(offset_az_deg) / p.hpbw_az;
    const double el = wrap_deg(offset_el_deg) / p.hpbw_el;
    return std::max(p.floor_gain, p.peak_gain - 12.0 * (az * az + el * el));
}

double db_from_linear(double mw) {
    if (!(mw > 0)) throw DomainError("db_from_linear: power must be positive");
    return 10.0 * std::log10(mw);
}

double linear_from_db(double dbm) noexcept {
    return std::pow(10.0, dbm / 10.0);
}

} // namespace chankit
