#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "chankit/extraction.hpp"
#include "chankit/fitting.hpp"
#include "chankit/padp.hpp"
#include "chankit/sweep.hpp"

namespace chankit {

using PathLossModel = std::variant<CimFit, FimFit>;

double predict(const PathLossModel& model, double d);

// Ground-truth generator parameters for one link.
struct ScenarioSpec {
    double distance = 10.0; // m
    Scenario scenario = Scenario::los;
    int n_mpcs = 1;
    PathLossModel pl_model = make_cim(2.0);
    double shadow_sigma_db = 0.0;
    // Expected RMS delay spread, ns. Must be 0 for a single path and > 0
    // otherwise.
    double delay_spread_target = 0.0;
    double power_decay = 0.03; // dB/ns of excess delay
    std::uint64_t seed = 0;

    // Per-path lognormal power variation (std, dB).
    double mpc_power_sigma_db = 3.0;
    // Coefficient of variation of the per-draw RMS delay spread around the
    // target.
    double spread_cv = 0.3;
    // Mean extra delay of the first arrival for obstructed links, ns.
    double nlos_excess_mean_ns = 5.0;

    void validate() const; // throws SpecError
};

// Draws a ground-truth PADP. Path powers are what boresight-aligned horns
// would measure, so that the path loss tx_power - P_rx + G_tx + G_rx
// of the result equals the model prediction plus the shadowing draw.
Padp gen_mpcs(const ScenarioSpec& spec, const SounderConfig& config = {}, const AntennaPattern& pattern = {},
              const AngleGrid& grid = AngleGrid::standard());

struct RenderOptions {
    double noise_floor_dbm = -140.0;
    // Per-bin noise power is uniform in noise_floor +- noise_jitter_db.
    double noise_jitter_db = 1.0;
    bool noise = true;
    double rrc_roll_off = 0.22;
    // Beam pairs are captured back to back this far apart, TX-major.
    double capture_interval_s = 0.01;
    // PDP length; extended when a path (plus pulse tail) would fall past it.
    std::size_t min_bins = 1024;
    unsigned threads = 0; // 0: hardware concurrency
};

// Renders a full sweep over grid x grid beam pairs from a ground truth.
// Each beam's PDP is the power-domain sum of every path's RRC pulse
// weighted by both pattern gains (relative to boresight), delayed by the
// geometry/clock offsets `params` describes, plus the noise floor, clipped
// at dynamic_range below the sweep maximum. Beams draw noise from
// independent sub-seeds, so the result does not depend on `threads`.
SweepRecord render_sweep(const Padp& truth, const SounderConfig& config, const AntennaPattern& pattern,
                         const AngleGrid& grid, const CorrectionParams& params, const RenderOptions& opts,
                         std::uint64_t seed);

// Path-loss samples around a model curve with Gaussian (in dB) shadowing.
std::vector<PathLossSample> gen_pathloss_samples(const PathLossModel& model, std::span<const double> distances,
                                                 double sigma_db, std::uint64_t seed,
                                                 Scenario scenario = Scenario::los);

} // namespace chankit
