#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chankit/fitting.hpp"
#include "chankit/metrics.hpp"
#include "chankit/padp.hpp"
#include "chankit/sweep.hpp"

namespace chankit {

// Sweep file: `key = value` header, blank line, then per beam pair an
// `@beam tx_az tx_el rx_az rx_el t_capture_s` line followed by one dBm value
// per delay bin. Header reals use the shortest round-trip representation;
// samples are written with 4 decimals.
SweepRecord parse_sweep(std::string_view text);
std::string write_sweep(const SweepRecord& rec);

// Rounds a dBm value to the 1e-4 resolution the sweep file stores.
double quantize_sample(double dbm) noexcept;

inline constexpr std::string_view kMpcHeader = "tau_ns,power_dbm,aod_az,aod_el,aoa_az,aoa_el";

// MPC CSV: delay and power with 4 decimals, angles in shortest round-trip
// form so grid directions survive exactly. The Padp overload prefixes `# key = value` comment lines carrying
// the link metadata and noise floor; the span overload writes the bare table.
std::string write_mpcs(const Padp& padp);
std::string write_mpcs(std::span<const Mpc> mpcs);
Padp parse_mpcs(std::string_view text);

inline constexpr std::string_view kPathLossHeader = "link_id,distance_m,scenario,path_loss_db";
std::string write_pathloss_table(std::span<const PathLossSample> samples);
std::vector<PathLossSample> parse_pathloss_table(std::string_view text);

inline constexpr std::string_view kFitReportHeader = "model,scenario,param1,param2,sigma_db,n_points";
struct FitReportRow {
    std::string model;    // "cim" or "fim"
    std::string scenario; // pool label
    double param1 = 0.0;  // n (CIM) or alpha (FIM)
    double param2 = 0.0;  // d0 (CIM) or beta (FIM)
    double sigma_db = 0.0;
    std::size_t n_points = 0;
    friend bool operator==(const FitReportRow&, const FitReportRow&) = default;
};
FitReportRow report_row(const CimFit& fit, std::string_view scenario);
FitReportRow report_row(const FimFit& fit, std::string_view scenario);
std::string write_fit_report(std::span<const FitReportRow> rows);
std::vector<FitReportRow> parse_fit_report(std::string_view text);

inline constexpr std::string_view kStatsHeader = "link_id,scenario,tau_avg_ns,tau_rms_ns";
struct StatsRow {
    std::string link_id;
    Scenario scenario = Scenario::los;
    DelayStats stats;
};
std::string write_stats(std::span<const StatsRow> rows);

// Campaign index: `file,link_id,tx_id,rx_id,distance_m,scenario`; file
// paths are relative to the index's directory.
inline constexpr std::string_view kIndexHeader = "file,link_id,tx_id,rx_id,distance_m,scenario";
struct CampaignEntry {
    std::string file;
    LinkMeta meta;
    friend bool operator==(const CampaignEntry&, const CampaignEntry&) = default;
};
std::string write_index(std::span<const CampaignEntry> entries);
std::vector<CampaignEntry> parse_index(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Number formatting shared by every writer.
std::string format_shortest(double v);
std::string format_fixed(double v, int decimals);

} // namespace chankit
