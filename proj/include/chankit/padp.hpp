#pragma once

#include <optional>
#include <vector>

#include "chankit/core.hpp"
#include "chankit/sweep.hpp"

namespace chankit {

// One resolvable propagation path.
struct Mpc {
    double tau = 0.0;     // ns
    double power = 0.0;   // dBm
    Direction aod;
    Direction aoa;

    void validate() const;
    friend bool operator==(const Mpc&, const Mpc&) = default;
};

// Power angular-delay profile of one link: the consolidated paths, sorted
// by delay.
struct Padp {
    std::vector<Mpc> mpcs;
    LinkMeta meta;
    std::optional<double> noise_floor; // dBm; absent for generated ground truth

    bool empty() const noexcept { return mpcs.empty(); }
    std::size_t size() const noexcept { return mpcs.size(); }
    friend bool operator==(const Padp&, const Padp&) = default;
};

} // namespace chankit
