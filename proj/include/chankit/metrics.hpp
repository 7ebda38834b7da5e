#pragma once

#include <span>
#include <string>
#include <vector>

#include "chankit/core.hpp"
#include "chankit/padp.hpp"

namespace chankit {

struct PathLossSample {
    std::string link_id;
    double distance = 1.0; // m
    Scenario scenario = Scenario::los;
    double path_loss = 0.0; // dB

    void validate() const; // 0 < path_loss < 250, distance > 0
    friend bool operator==(const PathLossSample&, const PathLossSample&) = default;
};

struct DelayStats {
    double tau_avg = 0.0; // ns
    double tau_rms = 0.0; // ns
};

// Path loss with a flag raised when the value is implausible: outside
// (0, 250) dB or above the sounder's largest measurable loss.
struct PathLossValue {
    double db = 0.0;
    bool suspicious = false;
};

// Omnidirectional received power: linear sum of all path powers. Throws
// NoSignalError on an empty profile.
double omni_rx_power(const Padp& padp);
// Same sum over arbitrary per-beam detections, for the literal "sum over
// every TX/RX angle" reading.
double omni_rx_power(std::span<const double> powers_dbm);

PathLossValue path_loss(double tx_power_dbm, double p_rx_dbm, double g_tx_dbi, double g_rx_dbi,
                        double max_measurable_pl = 185.0);

// Power-weighted mean delay and RMS delay spread, weights in linear mW.
DelayStats delay_stats(const Padp& padp);
DelayStats delay_stats(std::span<const double> taus_ns, std::span<const double> powers_mw);

struct CdfPoint {
    double value = 0.0;
    double probability = 0.0;
    friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

// Right-continuous empirical CDF: i-th smallest value paired with i/N.
std::vector<CdfPoint> empirical_cdf(std::vector<double> values);

// Value at which the empirical CDF first reaches p (0 < p <= 1).
double cdf_quantile(std::span<const CdfPoint> cdf, double p);

} // namespace chankit
