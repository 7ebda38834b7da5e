#include "chankit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "chankit/errors.hpp"
#include "chankit/kernels.hpp"

namespace chankit {

void PathLossSample::validate() const {
    if (!(distance > 0) || !std::isfinite(distance)) throw ValidationError("path loss sample: distance must be positive");
    if (!(path_loss > 0 && path_loss < 250)) throw ValidationError("path loss sample: path loss outside (0, 250) dB");
}

double omni_rx_power(std::span<const double> powers_dbm) {
    if (powers_dbm.empty()) throw NoSignalError("omni power: no paths");
    std::vector<double> lin(powers_dbm.size());
    std::transform(powers_dbm.begin(), powers_dbm.end(), lin.begin(), linear_from_db);
    return db_from_linear(kernels::sum(lin));
}

double omni_rx_power(const Padp& padp) {
    std::vector<double> p(padp.mpcs.size());
    std::transform(padp.mpcs.begin(), padp.mpcs.end(), p.begin(), [](const Mpc& m) { return m.power; });
    return omni_rx_power(p);
}

PathLossValue path_loss(double tx_power_dbm, double p_rx_dbm, double g_tx_dbi, double g_rx_dbi,
                        double max_measurable_pl) {
    PathLossValue v;
    v.db = tx_power_dbm - p_rx_dbm + g_tx_dbi + g_rx_dbi;
    v.suspicious = !(v.db > 0 && v.db < 250) || v.db > max_measurable_pl;
    return v;
}

DelayStats delay_stats(std::span<const double> taus, std::span<const double> powers_mw) {
    if (taus.empty() || taus.size() != powers_mw.size()) throw NoSignalError("delay stats: no paths");
    const double total = kernels::sum(powers_mw);
    if (!(total > 0)) throw DomainError("delay stats: total power must be positive");
    DelayStats s;
    s.tau_avg = kernels::dot(powers_mw, taus) / total;
    // Two-pass: the central moment keeps precision when the mean delay is
    // large compared to the spread.
    s.tau_rms = std::sqrt(kernels::weighted_sq_dev(powers_mw, taus, s.tau_avg) / total);
    if (taus.size() == 1) s.tau_rms = 0.0;
    // Rounding can push the mean a hair outside the delay span.
    const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
    s.tau_avg = std::clamp(s.tau_avg, *lo, *hi);
    return s;
}

DelayStats delay_stats(const Padp& padp) {
    std::vector<double> taus, powers;
    taus.reserve(padp.size());
    powers.reserve(padp.size());
    for (const auto& m : padp.mpcs) {
        taus.push_back(m.tau);
        powers.push_back(linear_from_db(m.power));
    }
    return delay_stats(taus, powers);
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
    if (values.empty()) throw DomainError("empirical cdf: no values");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::vector<CdfPoint> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.push_back({values[i], static_cast<double>(i + 1) / n});
    return out;
}

double cdf_quantile(std::span<const CdfPoint> cdf, double p) {
    if (cdf.empty()) throw DomainError("cdf quantile: empty cdf");
    const auto it = std::find_if(cdf.begin(), cdf.end(), [&](const CdfPoint& c) { return c.probability >= p - 1e-12; });
    return it == cdf.end() ? cdf.back().value : it->value;
}

} // namespace chankit
