#pragma once

#include <string>
#include <vector>

#include "chankit/core.hpp"

namespace chankit {

struct LinkMeta {
    std::string link_id;
    std::string tx_id;
    std::string rx_id;
    double distance = 1.0; // m
    Scenario scenario = Scenario::los;
    double tx_height = 1.8; // m
    double rx_height = 1.5; // m
    int floor_tx = 0;
    int floor_rx = 0;

    void validate() const;
    friend bool operator==(const LinkMeta&, const LinkMeta&) = default;
};

// Power delay profile captured with one TX/RX beam pair. samples[k] is the
// power (dBm) in delay bin k.
struct DirectionalPdp {
    Direction tx_dir;
    Direction rx_dir;
    double capture_time = 0.0; // s since sweep start
    std::vector<double> samples;

    friend bool operator==(const DirectionalPdp&, const DirectionalPdp&) = default;
};

struct SweepRecord {
    SounderConfig config;
    AntennaPattern pattern;
    AngleGrid grid;
    LinkMeta meta;
    std::vector<DirectionalPdp> pdps;

    // Checks every invariant of the record and its parts; throws
    // ValidationError on the first violation.
    void validate() const;
    std::size_t bins() const noexcept { return pdps.empty() ? 0 : pdps.front().samples.size(); }

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

// Weakest power a PDP sample may carry: tx power plus both peak gains minus
// the largest measurable path loss, with a 20 dB guard band.
double min_valid_sample_dbm(const SounderConfig& config, const AntennaPattern& pattern) noexcept;

} // namespace chankit
