#pragma once

#include <compare>
#include <string_view>
#include <vector>

namespace chankit {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Sounder front-end constants. Defaults describe a 28 GHz sounder with a
// 2048-chip sequence oversampled by 2 at 3.072 GS/s.
struct SounderConfig {
    double carrier_freq = 28e9;       // Hz
    double bandwidth = 2e9;           // Hz
    double sample_rate = 3.072e9;     // samples/s
    double delay_bin = 0.651;         // ns
    double tx_power = -10.0;          // dBm
    double dynamic_range = 60.0;      // dB
    double max_measurable_pl = 185.0; // dB
    int sequence_length = 2048;

    void validate() const;
    friend bool operator==(const SounderConfig&, const SounderConfig&) = default;
};

// Horn antenna: Gaussian main lobe (in dB) with a flat sidelobe floor.
struct AntennaPattern {
    double peak_gain = 17.0;  // dBi
    double hpbw_az = 24.0;    // deg
    double hpbw_el = 26.0;    // deg
    double floor_gain = -10.0; // dBi

    void validate() const;
    friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

// Wraps an angle in degrees onto [-180, 180).
double wrap_deg(double deg) noexcept;

// Pointing direction. Azimuth is wrapped onto [-180, 180) on construction;
// elevation outside [-90, 90] throws DomainError.
class Direction {
public:
    Direction() = default;
    Direction(double az_deg, double el_deg);

    double az() const noexcept { return az_; }
    double el() const noexcept { return el_; }

    friend bool operator==(const Direction&, const Direction&) = default;
    friend auto operator<=>(const Direction&, const Direction&) = default;

private:
    double az_ = 0.0;
    double el_ = 0.0;
};

// Largest per-axis separation in degrees, azimuth taken modulo 360.
double angular_distance(const Direction& a, const Direction& b) noexcept;

// Scanned beam directions. Both axes strictly increasing and inside the
// Direction bounds.
struct AngleGrid {
    std::vector<double> azimuths;
    std::vector<double> elevations;

    // 19 azimuths evenly spaced over [-167.98, 167.98] and elevations
    // {-20, 0, 20}.
    static AngleGrid standard();

    void validate() const;
    bool contains(const Direction& d) const noexcept;
    std::vector<Direction> directions() const; // elevation-major order
    double azimuth_step() const noexcept;       // largest gap between neighbours

    friend bool operator==(const AngleGrid&, const AngleGrid&) = default;
};

enum class Scenario { los, nlos, nlos_glass };

std::string_view to_string(Scenario s) noexcept;
Scenario scenario_from_string(std::string_view s); // throws ParseError
// NLOS_GLASS links are pooled with NLOS for model fitting.
Scenario fit_pool(Scenario s) noexcept;

// Free-space path loss in dB, 20 log10(4 pi d f / c).
double fspl(double freq_hz, double dist_m);

// Pattern gain at an angular offset from boresight. Offsets are wrapped to
// [-180, 180) first.
double antenna_gain(const AntennaPattern& pattern, double offset_az_deg, double offset_el_deg) noexcept;

double db_from_linear(double mw); // throws DomainError for mw <= 0
double linear_from_db(double dbm) noexcept;

// Converts ns of propagation delay to metres and back.
inline constexpr double metres_from_ns(double ns) noexcept { return ns * 1e-9 * kSpeedOfLight; }
inline constexpr double ns_from_metres(double m) noexcept { return m / kSpeedOfLight * 1e9; }

} // namespace chankit
