#include "chankit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chankit/errors.hpp"
#include "chankit/ingest.hpp"
#include "chankit/kernels.hpp"
#include "chankit/pulse.hpp"
#include "chankit/random.hpp"
#include "parallel.hpp"

namespace chankit {

double predict(const PathLossModel& model, double d) {
    return std::visit(
        [d](const auto& fit) {
            if constexpr (std::is_same_v<std::decay_t<decltype(fit)>, CimFit>) return predict_cim(fit, d);
            else return predict_fim(fit, d);
        },
        model);
}

void ScenarioSpec::validate() const {
    if (!(distance > 0) || !std::isfinite(distance)) throw SpecError("scenario: distance must be positive");
    if (n_mpcs < 1) throw SpecError("scenario: n_mpcs must be >= 1");
    if (!(delay_spread_target >= 0) || !std::isfinite(delay_spread_target))
        throw SpecError("scenario: delay_spread_target must be >= 0");
    if (n_mpcs == 1 && delay_spread_target > 0)
        throw SpecError("scenario: a single path cannot have a positive delay spread");
    if (n_mpcs > 1 && delay_spread_target == 0)
        throw SpecError("scenario: multiple paths need a positive delay spread target");
    if (!(shadow_sigma_db >= 0) || !(mpc_power_sigma_db >= 0) || !(spread_cv >= 0) || !(nlos_excess_mean_ns >= 0))
        throw SpecError("scenario: spreads must be non-negative");
    if (!(power_decay >= 0) || !std::isfinite(power_decay)) throw SpecError("scenario: power_decay must be >= 0");
    if (const auto* cim = std::get_if<CimFit>(&pl_model); cim && distance < cim->d0)
        throw SpecError("scenario: distance below the CIM reference distance");
}

namespace {

// RMS spread of delays s * x with powers 10^((eps_i - decay * s * x_i) / 10).
double scaled_rms(double s, const std::vector<double>& x, const std::vector<double>& eps, double decay) {
    std::vector<double> w(x.size()), t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        t[i] = s * x[i];
        w[i] = linear_from_db(eps[i] - decay * t[i]);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += w[i] * t[i];
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) var += w[i] * (t[i] - mean) * (t[i] - mean);
    return std::sqrt(var / total);
}

// Smallest scale on the rising branch with scaled_rms == target, or a
// negative value when the decay caps the spread below the target.
double solve_scale(double target, const std::vector<double>& x, const std::vector<double>& eps, double decay) {
    const double unit = scaled_rms(1.0, x, eps, 0.0);
    if (!(unit > 0)) return -1.0;
    const double linear = target / unit;
    if (decay == 0.0) return linear;
    double lo = 0.0;
    double hi = linear * std::pow(1.05, -20);
    for (int k = 0; k < 400 && scaled_rms(hi, x, eps, decay) < target; ++k) {
        lo = hi;
        hi *= 1.05;
        if (scaled_rms(hi, x, eps, decay) < scaled_rms(lo, x, eps, decay)) return -1.0; // past the maximum
    }
    if (scaled_rms(hi, x, eps, decay) < target) return -1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (scaled_rms(mid, x, eps, decay) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Padp gen_mpcs(const ScenarioSpec& spec, const SounderConfig& config, const AntennaPattern& pattern,
              const AngleGrid& grid) {
    spec.validate();
    config.validate();
    pattern.validate();
    grid.validate();
    Rng rng(spec.seed);

    double first = ns_from_metres(spec.distance);
    if (spec.scenario != Scenario::los) first += rng.exponential(spec.nlos_excess_mean_ns);

    const auto n = static_cast<std::size_t>(spec.n_mpcs);
    std::vector<double> taus(n, first);
    std::vector<double> rel_db(n, 0.0);
    if (n > 1) {
        // Per-draw spread target, lognormal with mean delay_spread_target.
        const double s2 = std::log1p(spec.spread_cv * spec.spread_cv);
        const double target = spec.delay_spread_target * std::exp(std::sqrt(s2) * rng.normal() - 0.5 * s2);
        bool solved = false;
        for (int attempt = 0; attempt < 64 && !solved; ++attempt) {
            std::vector<double> x(n, 0.0), eps(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (i > 0) x[i] = rng.exponential(1.0);
                eps[i] = spec.mpc_power_sigma_db * rng.normal();
            }
            const double s = solve_scale(target, x, eps, spec.power_decay);
            if (!(s > 0)) continue;
            for (std::size_t i = 0; i < n; ++i) {
                taus[i] = first + s * x[i];
                rel_db[i] = eps[i] - spec.power_decay * s * x[i];
            }
            solved = true;
        }
        if (!solved) throw SpecError("scenario: delay spread target unreachable with this power decay");
    }

    const double shadow = spec.shadow_sigma_db > 0 ? spec.shadow_sigma_db * rng.normal() : 0.0;
    const double pl = predict(spec.pl_model, spec.distance) + shadow;
    const double total_dbm = config.tx_power + 2.0 * pattern.peak_gain - pl;
    double rel_total = 0.0;
    for (double r : rel_db) rel_total += linear_from_db(r);
    const double offset = total_dbm - db_from_linear(rel_total);

    const auto dirs = grid.directions();
    Padp padp;
    padp.meta.distance = spec.distance;
    padp.meta.scenario = spec.scenario;
    for (std::size_t i = 0; i < n; ++i) {
        Mpc m;
        m.tau = taus[i];
        m.power = rel_db[i] + offset;
        m.aod = dirs[rng.index(dirs.size())];
        m.aoa = dirs[rng.index(dirs.size())];
        padp.mpcs.push_back(m);
    }
    std::stable_sort(padp.mpcs.begin(), padp.mpcs.end(), [](const Mpc& a, const Mpc& b) { return a.tau < b.tau; });
    return padp;
}

SweepRecord render_sweep(const Padp& truth, const SounderConfig& config, const AntennaPattern& pattern,
                         const AngleGrid& grid, const CorrectionParams& params, const RenderOptions& opts,
                         std::uint64_t seed) {
    config.validate();
    pattern.validate();
    grid.validate();
    params.validate();
    for (const auto& m : truth.mpcs) m.validate();
    if (!opts.noise && truth.mpcs.empty()) throw SpecError("render: nothing to render without noise or paths");

    const RrcPulse pulse(opts.rrc_roll_off);
    const auto dirs = grid.directions();
    const std::size_t n_pairs = dirs.size() * dirs.size();
    const double bin = config.delay_bin;

    std::vector<BeamPair> beams(n_pairs);
    double latest = 0.0;
    for (std::size_t t = 0; t < dirs.size(); ++t)
        for (std::size_t r = 0; r < dirs.size(); ++r) {
            const std::size_t p = t * dirs.size() + r;
            beams[p] = {dirs[t], dirs[r], static_cast<double>(p) * opts.capture_interval_s};
        }

    for (const auto& m : truth.mpcs)
        for (const auto& b : beams)
            latest = std::max(latest, m.tau + rotation_offset_ns(b, params) + drift_offset_ns(b, params));
    const auto needed = static_cast<std::size_t>(std::ceil(latest / bin)) + RrcPulse::kSupport + 1;
    const std::size_t n_bins = std::max(opts.min_bins, needed);

    std::vector<std::vector<double>> lin(n_pairs);
    detail::parallel_for(n_pairs, opts.threads, [&](std::size_t p) {
        auto& acc = lin[p];
        acc.assign(n_bins, 0.0);
        const auto& beam = beams[p];
        const double offset = rotation_offset_ns(beam, params) + drift_offset_ns(beam, params);
        std::vector<double> taps;
        for (const auto& m : truth.mpcs) {
            const double gain = antenna_gain(pattern, m.aod.az() - beam.tx_dir.az(), m.aod.el() - beam.tx_dir.el()) +
                                antenna_gain(pattern, m.aoa.az() - beam.rx_dir.az(), m.aoa.el() - beam.rx_dir.el()) -
                                2.0 * pattern.peak_gain;
            const double centre = (m.tau + offset) / bin;
            const auto first = std::max<long long>(0, static_cast<long long>(std::floor(centre)) - RrcPulse::kSupport);
            const auto last = std::min<long long>(static_cast<long long>(n_bins) - 1,
                                                  static_cast<long long>(std::ceil(centre)) + RrcPulse::kSupport);
            if (last < first) continue;
            taps.resize(static_cast<std::size_t>(last - first + 1));
            for (long long k = first; k <= last; ++k)
                taps[static_cast<std::size_t>(k - first)] = pulse.power(static_cast<double>(k) - centre);
            kernels::axpy(std::span(acc).subspan(static_cast<std::size_t>(first), taps.size()), taps,
                          linear_from_db(m.power + gain));
        }
        if (opts.noise) {
            Rng rng(derive_seed(seed, p));
            for (auto& v : acc) v += linear_from_db(opts.noise_floor_dbm + opts.noise_jitter_db * (2.0 * rng.uniform() - 1.0));
        }
    });

    double peak = 0.0;
    for (const auto& v : lin) peak = std::max(peak, kernels::max_value(v));
    const double clip = peak * linear_from_db(-config.dynamic_range);

    SweepRecord rec;
    rec.config = config;
    rec.pattern = pattern;
    rec.grid = grid;
    rec.meta = truth.meta;
    rec.pdps.resize(n_pairs);
    detail::parallel_for(n_pairs, opts.threads, [&](std::size_t p) {
        kernels::clamp_min(lin[p], clip);
        auto& pdp = rec.pdps[p];
        pdp.tx_dir = beams[p].tx_dir;
        pdp.rx_dir = beams[p].rx_dir;
        pdp.capture_time = beams[p].capture_time;
        pdp.samples.resize(n_bins);
        for (std::size_t k = 0; k < n_bins; ++k) pdp.samples[k] = quantize_sample(db_from_linear(lin[p][k]));
        std::vector<double>().swap(lin[p]);
    });
    return rec;
}

std::vector<PathLossSample> gen_pathloss_samples(const PathLossModel& model, std::span<const double> distances,
                                                 double sigma_db, std::uint64_t seed, Scenario scenario) {
    if (!(sigma_db >= 0)) throw SpecError("path loss samples: sigma must be >= 0");
    Rng rng(seed);
    std::vector<PathLossSample> out;
    out.reserve(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        PathLossSample s;
        s.link_id = "S" + std::to_string(i + 1);
        s.distance = distances[i];
        s.scenario = scenario;
        const double draw = rng.normal();
        s.path_loss = predict(model, distances[i]) + (sigma_db > 0 ? sigma_db * draw : 0.0);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace chankit
