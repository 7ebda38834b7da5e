#pragma once

#include <span>
#include <vector>

#include "chankit/padp.hpp"
#include "chankit/pulse.hpp"
#include "chankit/sweep.hpp"

namespace chankit {

// Parametric model of the delay errors a rotating-horn sounder adds: the
// horn phase centre sits `phase_center_radius` metres off the rotation axis,
// and the RX clock runs `drift_rate` seconds per second fast.
struct CorrectionParams {
    double phase_center_radius = 0.0; // m
    double drift_rate = 0.0;          // s/s
    double reference_az = 0.0;        // deg

    void validate() const; // radius >= 0, all finite
};

struct Peak {
    double tau = 0.0;   // ns
    double power = 0.0; // dBm
    friend bool operator==(const Peak&, const Peak&) = default;
};

struct BeamPair {
    Direction tx_dir;
    Direction rx_dir;
    double capture_time = 0.0; // s
};

struct BeamPeaks {
    BeamPair beam;
    std::vector<Peak> peaks;
    double noise_floor = 0.0; // dBm
};

struct ExtractOptions {
    double threshold_db = 6.0;
    double gate_tau_ns = 1.302;
    double gate_angle_deg = 20.0;
    CorrectionParams correction;
    // Undo the sub-bin sampling loss of the pulse peak using the neighbouring
    // bins, and remove the noise contribution from the peak bin.
    bool refine_power = true;
    // Drop peaks that sit under the pulse sidelobe envelope of a stronger
    // peak in the same beam, relaxed by `sidelobe_margin_db`.
    bool reject_sidelobes = true;
    double sidelobe_margin_db = 1.0;
    // Drop detections that another beam's stronger detection at the same
    // delay explains through the antenna pattern (horn sidelobe leakage),
    // relaxed by `leakage_margin_db`.
    bool reject_leakage = true;
    double leakage_margin_db = 3.0;
    double rrc_roll_off = 0.22;
    unsigned threads = 0; // 0: hardware concurrency
};

// Median of the samples (mean of the two middle values for even counts).
double estimate_noise_floor(std::span<const double> samples_dbm);
inline double estimate_noise_floor(const DirectionalPdp& pdp) { return estimate_noise_floor(pdp.samples); }

// Local maxima strictly above both neighbours (a plateau counts once, at its
// first bin; bins past either end count as -inf) whose power exceeds
// floor + threshold. tau = bin index * delay_bin.
std::vector<Peak> detect_peaks(std::span<const double> samples_dbm, double delay_bin_ns, double floor_dbm,
                               double threshold_db = 6.0);
inline std::vector<Peak> detect_peaks(const DirectionalPdp& pdp, double delay_bin_ns, double floor_dbm,
                                      double threshold_db = 6.0) {
    return detect_peaks(pdp.samples, delay_bin_ns, floor_dbm, threshold_db);
}

// Delay offset the sounder geometry and clock add for one beam pair, ns.
double rotation_offset_ns(const BeamPair& beam, const CorrectionParams& params) noexcept;
double drift_offset_ns(const BeamPair& beam, const CorrectionParams& params) noexcept;

// Subtracts both offsets from every peak delay; negative results clamp to 0.
std::vector<Peak> correct_delays(std::span<const Peak> peaks, const BeamPair& beam, const CorrectionParams& params);

// Replaces each peak's power by the estimated path power: noise-floor
// subtracted and scaled up by the pulse loss implied by the larger
// neighbouring bin. Delays are untouched.
std::vector<Peak> refine_peak_powers(std::span<const Peak> peaks, std::span<const double> samples_dbm,
                                     double delay_bin_ns, double floor_dbm, const RrcPulse& pulse);

// Removes peaks explainable as sidelobes of a stronger peak in the same PDP:
// a peak is dropped when it lies under the pulse sidelobe envelope scaled to
// the stronger peak's power, allowing for that peak's worst-case sub-bin
// loss and relaxed by margin_db.
std::vector<Peak> reject_sidelobes(std::span<const Peak> peaks, double delay_bin_ns, const RrcPulse& pulse,
                                   double margin_db);

// Removes detections explainable as pattern leakage of a stronger detection
// in another beam: within gate_tau of a kept stronger peak and no more than
// margin_db above that peak's power plus the relative pattern gain between
// the two TX pointings and the two RX pointings.
std::vector<BeamPeaks> reject_pattern_leakage(std::span<const BeamPeaks> per_beam, const AntennaPattern& pattern,
                                              double gate_tau_ns, double margin_db);

// Merges detections of the same path seen through several beams. Two peaks
// are linked when their delays differ by at most gate_tau and both their TX
// and RX directions lie within gate_angle (largest per-axis separation);
// linked peaks form clusters transitively and each cluster is represented by
// its strongest member.
Padp consolidate_mpcs(std::span<const BeamPeaks> per_beam, double gate_tau_ns, double gate_angle_deg);

// Per-beam stages (floor, peaks, refinement, correction) for every PDP.
std::vector<BeamPeaks> extract_beam_peaks(const SweepRecord& rec, const ExtractOptions& opts = {});

// Cross-beam steps of the pipeline (leakage rejection, consolidation) over
// precomputed per-beam results; noise_floor is the median of the per-beam
// floors.
Padp padp_from_beam_peaks(const SweepRecord& rec, std::span<const BeamPeaks> per_beam, const ExtractOptions& opts = {});

// Full pipeline: extract_beam_peaks followed by padp_from_beam_peaks.
Padp extract_padp(const SweepRecord& rec, const ExtractOptions& opts = {});

} // namespace chankit
