#include "chankit/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chankit/errors.hpp"
#include "parallel.hpp"

namespace chankit {

namespace {
constexpr double kGateEps = 1e-9;
}

void CorrectionParams::validate() const {
    if (!(phase_center_radius >= 0) || !std::isfinite(phase_center_radius))
        throw DomainError("correction: phase_center_radius must be >= 0");
    if (!std::isfinite(drift_rate) || !std::isfinite(reference_az))
        throw DomainError("correction: non-finite parameter");
}

double estimate_noise_floor(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("noise floor: empty PDP");
    std::vector<double> v(samples.begin(), samples.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<Peak> detect_peaks(std::span<const double> x, double delay_bin_ns, double floor_dbm, double threshold_db) {
    if (!(threshold_db > 0)) throw DomainError("detect_peaks: threshold must be positive");
    std::vector<Peak> out;
    const double level = floor_dbm + threshold_db;
    const std::size_t n = x.size();
    std::size_t i = 0;
    while (i < n) {
        // [i, j) is a run of equal values.
        std::size_t j = i + 1;
        while (j < n && x[j] == x[i]) ++j;
        const bool above_left = i == 0 || x[i] > x[i - 1];
        const bool above_right = j == n || x[i] > x[j];
        if (above_left && above_right && x[i] > level)
            out.push_back({static_cast<double>(i) * delay_bin_ns, x[i]});
        i = j;
    }
    return out;
}

double rotation_offset_ns(const BeamPair& beam, const CorrectionParams& p) noexcept {
    if (p.phase_center_radius == 0.0) return 0.0;
    const double rad = kPi / 180.0;
    const double tx = 1.0 - std::cos((beam.tx_dir.az() - p.reference_az) * rad);
    const double rx = 1.0 - std::cos((beam.rx_dir.az() - p.reference_az) * rad);
    return ns_from_metres(p.phase_center_radius) * (tx + rx);
}

double drift_offset_ns(const BeamPair& beam, const CorrectionParams& p) noexcept {
    return p.drift_rate * beam.capture_time * 1e9;
}

std::vector<Peak> correct_delays(std::span<const Peak> peaks, const BeamPair& beam, const CorrectionParams& params) {
    const double shift = rotation_offset_ns(beam, params) + drift_offset_ns(beam, params);
    std::vector<Peak> out(peaks.begin(), peaks.end());
    if (shift == 0.0) return out;
    for (auto& p : out) p.tau = std::max(0.0, p.tau - shift);
    return out;
}

std::vector<Peak> refine_peak_powers(std::span<const Peak> peaks, std::span<const double> x, double delay_bin_ns,
                                     double floor_dbm, const RrcPulse& pulse) {
    const double floor_mw = linear_from_db(floor_dbm);
    const auto excess = [&](std::size_t k) { return std::max(0.0, linear_from_db(x[k]) - floor_mw); };
    std::vector<Peak> out(peaks.begin(), peaks.end());
    for (auto& p : out) {
        const auto k = static_cast<std::size_t>(std::llround(p.tau / delay_bin_ns));
        if (k >= x.size()) continue;
        const double peak = excess(k);
        if (!(peak > 0)) continue;
        const double left = k > 0 ? excess(k - 1) : 0.0;
        const double right = k + 1 < x.size() ? excess(k + 1) : 0.0;
        const double ratio = std::min(1.0, std::sqrt(std::max(left, right) / peak));
        const double offset = pulse.offset_from_neighbour_ratio(ratio);
        p.power = db_from_linear(peak / pulse.power(offset));
    }
    return out;
}

std::vector<Peak> reject_sidelobes(std::span<const Peak> peaks, double delay_bin_ns, const RrcPulse& pulse,
                                   double margin_db) {
    std::vector<std::size_t> order(peaks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return peaks[a].power > peaks[b].power;
    });
    // A sampled peak can sit up to half a bin off the path and read low by
    // the pulse loss there, so the mask is referenced to the largest path
    // power consistent with the stronger peak.
    const double margin = linear_from_db(margin_db) / pulse.power(0.5);
    std::vector<bool> keep(peaks.size(), false);
    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        const auto bin = std::llround(peaks[idx].tau / delay_bin_ns);
        const double p = linear_from_db(peaks[idx].power);
        const bool masked = std::any_of(kept.begin(), kept.end(), [&](std::size_t s) {
            const auto dist = static_cast<int>(std::llabs(bin - std::llround(peaks[s].tau / delay_bin_ns)));
            return p <= linear_from_db(peaks[s].power) * pulse.sidelobe_envelope(dist) * margin;
        });
        if (!masked) {
            keep[idx] = true;
            kept.push_back(idx);
        }
    }
    std::vector<Peak> out;
    for (std::size_t i = 0; i < peaks.size(); ++i)
        if (keep[i]) out.push_back(peaks[i]);
    return out;
}

namespace {

struct Detection {
    double tau;
    double power;
    Direction tx;
    Direction rx;
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

bool stronger(const Detection& a, const Detection& b) {
    if (a.power != b.power) return a.power > b.power;
    return a.tau < b.tau;
}

} // namespace

Padp consolidate_mpcs(std::span<const BeamPeaks> per_beam, double gate_tau_ns, double gate_angle_deg) {
    std::vector<Detection> dets;
    for (const auto& bp : per_beam)
        for (const auto& p : bp.peaks) dets.push_back({p.tau, p.power, bp.beam.tx_dir, bp.beam.rx_dir});
    // Stable order independent of beam iteration: by delay, ties by input order.
    std::stable_sort(dets.begin(), dets.end(), [](const auto& a, const auto& b) { return a.tau < b.tau; });

    DisjointSets sets(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        for (std::size_t j = i + 1; j < dets.size() && dets[j].tau - dets[i].tau <= gate_tau_ns + kGateEps; ++j) {
            if (angular_distance(dets[i].tx, dets[j].tx) <= gate_angle_deg + kGateEps &&
                angular_distance(dets[i].rx, dets[j].rx) <= gate_angle_deg + kGateEps)
                sets.unite(i, j);
        }
    }

    std::vector<std::size_t> best(dets.size(), dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const std::size_t root = sets.find(i);
        if (best[root] == dets.size() || stronger(dets[i], dets[best[root]])) best[root] = i;
    }

    Padp padp;
    for (std::size_t r = 0; r < dets.size(); ++r) {
        if (best[r] == dets.size()) continue;
        const auto& d = dets[best[r]];
        padp.mpcs.push_back({d.tau, d.power, d.tx, d.rx});
    }
    std::stable_sort(padp.mpcs.begin(), padp.mpcs.end(), [](const Mpc& a, const Mpc& b) {
        if (a.tau != b.tau) return a.tau < b.tau;
        return a.power > b.power;
    });
    return padp;
}

std::vector<BeamPeaks> extract_beam_peaks(const SweepRecord& rec, const ExtractOptions& opts) {
    if (!(opts.threshold_db > 0)) throw DomainError("extract: threshold must be positive");
    opts.correction.validate();
    const RrcPulse pulse(opts.rrc_roll_off);
    const double bin = rec.config.delay_bin;

    std::vector<BeamPeaks> out(rec.pdps.size());
    detail::parallel_for(rec.pdps.size(), opts.threads, [&](std::size_t i) {
        const auto& pdp = rec.pdps[i];
        BeamPeaks& bp = out[i];
        bp.beam = {pdp.tx_dir, pdp.rx_dir, pdp.capture_time};
        bp.noise_floor = estimate_noise_floor(pdp.samples);
        auto peaks = detect_peaks(pdp.samples, bin, bp.noise_floor, opts.threshold_db);
        if (opts.reject_sidelobes) peaks = reject_sidelobes(peaks, bin, pulse, opts.sidelobe_margin_db);
        if (opts.refine_power) peaks = refine_peak_powers(peaks, pdp.samples, bin, bp.noise_floor, pulse);
        bp.peaks = correct_delays(peaks, bp.beam, opts.correction);
    });
    return out;
}

std::vector<BeamPeaks> reject_pattern_leakage(std::span<const BeamPeaks> per_beam, const AntennaPattern& pattern,
                                              double gate_tau_ns, double margin_db) {
    struct Ref {
        std::size_t beam;
        std::size_t peak;
    };
    std::vector<Ref> order;
    for (std::size_t b = 0; b < per_beam.size(); ++b)
        for (std::size_t k = 0; k < per_beam[b].peaks.size(); ++k) order.push_back({b, k});
    const auto peak_of = [&](const Ref& r) -> const Peak& { return per_beam[r.beam].peaks[r.peak]; };
    std::stable_sort(order.begin(), order.end(), [&](const Ref& a, const Ref& b) {
        return peak_of(a).power > peak_of(b).power;
    });

    // Relative pattern gain between two pointings, dB (<= 0).
    const auto leak_db = [&](const Direction& from, const Direction& to) {
        return antenna_gain(pattern, to.az() - from.az(), to.el() - from.el()) - pattern.peak_gain;
    };

    std::vector<std::vector<bool>> keep(per_beam.size());
    for (std::size_t b = 0; b < per_beam.size(); ++b) keep[b].assign(per_beam[b].peaks.size(), false);
    std::multimap<double, Ref> kept; // by delay
    for (const Ref& r : order) {
        const Peak& p = peak_of(r);
        const BeamPair& beam = per_beam[r.beam].beam;
        bool masked = false;
        for (auto it = kept.lower_bound(p.tau - gate_tau_ns - kGateEps);
             it != kept.end() && it->first <= p.tau + gate_tau_ns + kGateEps && !masked; ++it) {
            const BeamPair& ref = per_beam[it->second.beam].beam;
            const double predicted = peak_of(it->second).power + leak_db(ref.tx_dir, beam.tx_dir) +
                                     leak_db(ref.rx_dir, beam.rx_dir);
            masked = it->second.beam != r.beam && p.power <= predicted + margin_db;
        }
        if (!masked) {
            keep[r.beam][r.peak] = true;
            kept.emplace(p.tau, r);
        }
    }

    std::vector<BeamPeaks> out(per_beam.begin(), per_beam.end());
    for (std::size_t b = 0; b < out.size(); ++b) {
        out[b].peaks.clear();
        for (std::size_t k = 0; k < per_beam[b].peaks.size(); ++k)
            if (keep[b][k]) out[b].peaks.push_back(per_beam[b].peaks[k]);
    }
    return out;
}

namespace {

void check_gates(const SweepRecord& rec, const ExtractOptions& opts) {
    if (opts.gate_tau_ns < rec.config.delay_bin - kGateEps)
        throw DomainError("extract: gate_tau must be at least one delay bin");
    if (opts.gate_angle_deg < rec.grid.azimuth_step() - kGateEps)
        throw DomainError("extract: gate_angle must be at least the azimuth grid step");
}

} // namespace

Padp extract_padp(const SweepRecord& rec, const ExtractOptions& opts) {
    check_gates(rec, opts);
    return padp_from_beam_peaks(rec, extract_beam_peaks(rec, opts), opts);
}

Padp padp_from_beam_peaks(const SweepRecord& rec, std::span<const BeamPeaks> per_beam, const ExtractOptions& opts) {
    check_gates(rec, opts);
    Padp padp;
    if (opts.reject_leakage) {
        const auto clean = reject_pattern_leakage(per_beam, rec.pattern, opts.gate_tau_ns, opts.leakage_margin_db);
        padp = consolidate_mpcs(clean, opts.gate_tau_ns, opts.gate_angle_deg);
    } else {
        padp = consolidate_mpcs(per_beam, opts.gate_tau_ns, opts.gate_angle_deg);
    }
    padp.meta = rec.meta;
    if (!per_beam.empty()) {
        std::vector<double> floors;
        floors.reserve(per_beam.size());
        for (const auto& bp : per_beam) floors.push_back(bp.noise_floor);
        padp.noise_floor = estimate_noise_floor(floors);
    }
    return padp;
}

} // namespace chankit
