#pragma once

#include <vector>

namespace chankit {

// Root-raised-cosine pulse expressed in units of the delay bin. amplitude()
// is peak-normalised (amplitude(0) == 1); power() is its square, i.e. the
// fraction of a path's power that lands in a bin `x` bins away from the
// path's true delay.
class RrcPulse {
public:
    explicit RrcPulse(double roll_off = 0.22);

    double roll_off() const noexcept { return roll_off_; }
    double amplitude(double x) const noexcept;
    double power(double x) const noexcept { const double a = amplitude(x); return a * a; }

    // Largest power() over |x| >= bins - 0.5. Any local maximum of a sampled
    // lone pulse found `bins` bins from its main peak stays below this.
    double sidelobe_envelope(int bins) const noexcept;

    // Sub-bin offset in [0, 0.5] of the true delay from the peak bin, given
    // the amplitude ratio of the larger neighbour to the peak bin.
    double offset_from_neighbour_ratio(double ratio) const noexcept;

    // Half-width (bins) beyond which the pulse is treated as zero when rendering.
    static constexpr int kSupport = 48;

private:
    double roll_off_;
    double peak_;                  // unnormalised amplitude at 0
    std::vector<double> envelope_; // indexed by bin distance
    std::vector<double> ratio_table_;
    double ratio_branch_start_;    // offset where the neighbour ratio is minimal
};

} // namespace chankit
