#include "chankit/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "chankit/core.hpp"
#include "chankit/errors.hpp"

namespace chankit {
namespace {

constexpr int kRatioSteps = 2000; // table resolution over [0, 0.5]

double rrc_raw(double t, double beta) noexcept {
    if (std::abs(t) < 1e-12) return 1.0 - beta + 4.0 * beta / kPi;
    const double singular = 1.0 / (4.0 * beta);
    if (beta > 0 && std::abs(std::abs(t) - singular) < 1e-9) {
        const double s = std::sin(kPi / (4.0 * beta));
        const double c = std::cos(kPi / (4.0 * beta));
        return beta / std::sqrt(2.0) * ((1.0 + 2.0 / kPi) * s + (1.0 - 2.0 / kPi) * c);
    }
    const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
    const double den = kPi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    return num / den;
}

} // namespace

RrcPulse::RrcPulse(double roll_off) : roll_off_(roll_off) {
    if (!(roll_off > 0.0 && roll_off <= 1.0)) throw DomainError("rrc pulse: roll-off must lie in (0, 1]");
    peak_ = rrc_raw(0.0, roll_off_);

    // Envelope by dense sampling of |x| in [m - 0.5, kSupport].
    constexpr int per_bin = 64;
    std::vector<double> tail(static_cast<std::size_t>(kSupport + 1) * per_bin + 1);
    for (std::size_t i = 0; i < tail.size(); ++i) tail[i] = power(static_cast<double>(i) / per_bin);
    envelope_.assign(kSupport + 2, 0.0);
    for (int m = kSupport + 1; m >= 0; --m) {
        const double from = std::max(0.0, m - 0.5);
        const auto start = static_cast<std::size_t>(std::ceil(from * per_bin));
        double best = 0.0;
        for (std::size_t i = start; i < tail.size(); ++i) best = std::max(best, tail[i]);
        envelope_[static_cast<std::size_t>(m)] = best;
    }

    ratio_table_.resize(kRatioSteps + 1);
    std::size_t argmin = 0;
    for (int i = 0; i <= kRatioSteps; ++i) {
        const double delta = 0.5 * i / kRatioSteps;
        ratio_table_[static_cast<std::size_t>(i)] = std::abs(amplitude(1.0 - delta)) / std::abs(amplitude(delta));
        if (ratio_table_[static_cast<std::size_t>(i)] < ratio_table_[argmin]) argmin = static_cast<std::size_t>(i);
    }
    ratio_branch_start_ = 0.5 * static_cast<double>(argmin) / kRatioSteps;
}

double RrcPulse::amplitude(double x) const noexcept { return rrc_raw(x, roll_off_) / peak_; }

double RrcPulse::sidelobe_envelope(int bins) const noexcept {
    if (bins <= 0) return 1.0;
    if (bins >= static_cast<int>(envelope_.size())) return 0.0;
    return envelope_[static_cast<std::size_t>(bins)];
}

double RrcPulse::offset_from_neighbour_ratio(double ratio) const noexcept {
    // Ratio rises monotonically on [branch_start, 0.5]; below the branch the
    // correction is negligible and the branch start is returned.
    const auto first = static_cast<std::size_t>(std::lround(ratio_branch_start_ * 2.0 * kRatioSteps));
    if (!(ratio > ratio_table_[first])) return ratio_branch_start_;
    if (ratio >= ratio_table_.back()) return 0.5;
    const auto it = std::lower_bound(ratio_table_.begin() + static_cast<std::ptrdiff_t>(first), ratio_table_.end(), ratio);
    const auto hi = static_cast<std::size_t>(it - ratio_table_.begin());
    const std::size_t lo = hi - 1;
    const double frac = (ratio - ratio_table_[lo]) / (ratio_table_[hi] - ratio_table_[lo]);
    return 0.5 * (static_cast<double>(lo) + frac) / kRatioSteps;
}

} // namespace chankit
