#include "chankit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#include "chankit/errors.hpp"

namespace chankit {

// ---------------------------------------------------------------------------
// Formatting and tokenising

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[128];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

// Splits into lines, dropping the terminator. A final newline does not
// produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t end = s.find(sep, pos);
        out.push_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

double parse_real(std::string_view s, std::size_t line, std::string_view field) {
    s = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, "field '" + std::string(field) + "': cannot parse '" + std::string(s) + "' as a number");
    if (!std::isfinite(v))
        throw ParseError(line, "field '" + std::string(field) + "': non-finite value");
    return v;
}

long long parse_int(std::string_view s, std::size_t line, std::string_view field) {
    s = trim(s);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, "field '" + std::string(field) + "': cannot parse '" + std::string(s) + "' as an integer");
    return v;
}

std::vector<double> parse_real_list(std::string_view s, std::size_t line, std::string_view field) {
    std::vector<double> out;
    for (auto tok : split(s, ',')) out.push_back(parse_real(tok, line, field));
    return out;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_shortest(v[i]);
    }
    return out;
}

bool valid_id(std::string_view id, bool allow_empty) {
    if (id.empty()) return allow_empty;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
               c == '.';
    });
}

Scenario parse_scenario(std::string_view s, std::size_t line) {
    try {
        return scenario_from_string(trim(s));
    } catch (const ParseError& e) {
        throw ParseError(line, e.what());
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Value-type validation

void LinkMeta::validate() const {
    if (!valid_id(link_id, false)) throw ValidationError("link meta: link_id must be non-empty [A-Za-z0-9_.-]");
    if (!valid_id(tx_id, true) || !valid_id(rx_id, true))
        throw ValidationError("link meta: tx_id/rx_id must use [A-Za-z0-9_.-]");
    if (!(distance > 0) || !std::isfinite(distance)) throw ValidationError("link meta: distance must be positive");
    if (!(tx_height > 0) || !(rx_height > 0) || !std::isfinite(tx_height) || !std::isfinite(rx_height))
        throw ValidationError("link meta: heights must be positive");
}

double min_valid_sample_dbm(const SounderConfig& config, const AntennaPattern& pattern) noexcept {
    return config.tx_power + 2.0 * pattern.peak_gain - config.max_measurable_pl - 20.0;
}

void SweepRecord::validate() const {
    config.validate();
    pattern.validate();
    grid.validate();
    meta.validate();
    if (pdps.empty()) throw ValidationError("sweep: no beam pairs");
    const double floor_dbm = min_valid_sample_dbm(config, pattern);
    const std::size_t n = pdps.front().samples.size();
    std::set<std::tuple<double, double, double, double>> seen;
    for (std::size_t i = 0; i < pdps.size(); ++i) {
        const auto& p = pdps[i];
        const std::string where = "sweep: beam pair " + std::to_string(i) + ": ";
        if (!grid.contains(p.tx_dir) || !grid.contains(p.rx_dir)) throw ValidationError(where + "direction off grid");
        if (!seen.emplace(p.tx_dir.az(), p.tx_dir.el(), p.rx_dir.az(), p.rx_dir.el()).second)
            throw ValidationError(where + "duplicate beam pair");
        if (!(p.capture_time >= 0) || !std::isfinite(p.capture_time))
            throw ValidationError(where + "capture_time must be >= 0");
        if (p.samples.empty()) throw ValidationError(where + "empty PDP");
        if (p.samples.size() != n) throw ValidationError(where + "PDP length mismatch");
        for (double s : p.samples)
            if (!std::isfinite(s) || s < floor_dbm)
                throw ValidationError(where + "sample " + format_shortest(s) + " dBm below measurable floor");
    }
}

void Mpc::validate() const {
    if (!(tau >= 0) || !std::isfinite(tau)) throw ValidationError("mpc: tau must be >= 0");
    if (!(power > -200) || !std::isfinite(power)) throw ValidationError("mpc: power must exceed -200 dBm");
}

double quantize_sample(double dbm) noexcept { return std::round(dbm * 1e4) / 1e4; }

// ---------------------------------------------------------------------------
// Sweep files

namespace {

constexpr std::string_view kRequiredKeys[] = {
    "freq_hz", "bandwidth_hz", "sample_rate", "delay_bin_ns", "tx_power_dbm", "peak_gain_dbi", "hpbw_az_deg",
    "hpbw_el_deg", "grid_az", "grid_el", "link_id", "distance_m", "scenario", "tx_height_m", "rx_height_m",
};
constexpr std::string_view kOptionalKeys[] = {
    "dynamic_range_db", "max_pl_db", "sequence_length", "floor_gain_dbi", "tx_id", "rx_id", "floor_tx", "floor_rx",
};

bool known_key(std::string_view k) {
    return std::find(std::begin(kRequiredKeys), std::end(kRequiredKeys), k) != std::end(kRequiredKeys) ||
           std::find(std::begin(kOptionalKeys), std::end(kOptionalKeys), k) != std::end(kOptionalKeys);
}

} // namespace

SweepRecord parse_sweep(std::string_view text) {
    const auto lines = split_lines(text);
    std::map<std::string, std::pair<std::string_view, std::size_t>, std::less<>> header;
    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) break;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(i + 1, "expected 'key = value' in header");
        const std::string key(trim(line.substr(0, eq)));
        if (!known_key(key)) throw ParseError(i + 1, "unknown header key '" + key + "'");
        if (!header.emplace(key, std::pair{trim(line.substr(eq + 1)), i + 1}).second)
            throw ParseError(i + 1, "duplicate header key '" + key + "'");
    }
    if (i == lines.size()) throw ParseError(i, "missing blank line after header");
    for (auto k : kRequiredKeys)
        if (!header.contains(k)) throw ParseError(0, "missing header key '" + std::string(k) + "'");

    const auto real = [&](std::string_view k) {
        const auto& [v, ln] = header.find(k)->second;
        return parse_real(v, ln, k);
    };
    const auto integer = [&](std::string_view k) {
        const auto& [v, ln] = header.find(k)->second;
        return parse_int(v, ln, k);
    };
    const auto text_of = [&](std::string_view k) { return std::string(header.find(k)->second.first); };

    SweepRecord rec;
    rec.config.carrier_freq = real("freq_hz");
    rec.config.bandwidth = real("bandwidth_hz");
    rec.config.sample_rate = real("sample_rate");
    rec.config.delay_bin = real("delay_bin_ns");
    rec.config.tx_power = real("tx_power_dbm");
    if (header.contains("dynamic_range_db")) rec.config.dynamic_range = real("dynamic_range_db");
    if (header.contains("max_pl_db")) rec.config.max_measurable_pl = real("max_pl_db");
    if (header.contains("sequence_length")) rec.config.sequence_length = static_cast<int>(integer("sequence_length"));
    rec.pattern.peak_gain = real("peak_gain_dbi");
    rec.pattern.hpbw_az = real("hpbw_az_deg");
    rec.pattern.hpbw_el = real("hpbw_el_deg");
    if (header.contains("floor_gain_dbi")) rec.pattern.floor_gain = real("floor_gain_dbi");
    {
        const auto& [v, ln] = header.find("grid_az")->second;
        rec.grid.azimuths = parse_real_list(v, ln, "grid_az");
    }
    {
        const auto& [v, ln] = header.find("grid_el")->second;
        rec.grid.elevations = parse_real_list(v, ln, "grid_el");
    }
    rec.meta.link_id = text_of("link_id");
    if (header.contains("tx_id")) rec.meta.tx_id = text_of("tx_id");
    if (header.contains("rx_id")) rec.meta.rx_id = text_of("rx_id");
    rec.meta.distance = real("distance_m");
    {
        const auto& [v, ln] = header.find("scenario")->second;
        rec.meta.scenario = parse_scenario(v, ln);
    }
    rec.meta.tx_height = real("tx_height_m");
    rec.meta.rx_height = real("rx_height_m");
    if (header.contains("floor_tx")) rec.meta.floor_tx = static_cast<int>(integer("floor_tx"));
    if (header.contains("floor_rx")) rec.meta.floor_rx = static_cast<int>(integer("floor_rx"));

    // Beam blocks.
    for (++i; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.starts_with("@beam")) {
            std::vector<std::string_view> tok;
            for (auto t : split(trim(line.substr(5)), ' '))
                if (!trim(t).empty()) tok.push_back(t);
            if (tok.size() != 5) throw ParseError(i + 1, "@beam needs tx_az tx_el rx_az rx_el t_capture_s");
            DirectionalPdp p;
            try {
                p.tx_dir = Direction(parse_real(tok[0], i + 1, "tx_az"), parse_real(tok[1], i + 1, "tx_el"));
                p.rx_dir = Direction(parse_real(tok[2], i + 1, "rx_az"), parse_real(tok[3], i + 1, "rx_el"));
            } catch (const DomainError& e) {
                throw ValidationError("line " + std::to_string(i + 1) + ": " + e.what());
            }
            p.capture_time = parse_real(tok[4], i + 1, "t_capture_s");
            rec.pdps.push_back(std::move(p));
        } else {
            if (rec.pdps.empty()) throw ParseError(i + 1, "sample before first @beam");
            rec.pdps.back().samples.push_back(parse_real(line, i + 1, "sample"));
        }
    }
    rec.validate();
    return rec;
}

std::string write_sweep(const SweepRecord& rec) {
    rec.validate();
    std::string out;
    out.reserve(256 + rec.pdps.size() * (48 + rec.bins() * 10));
    const auto kv = [&](std::string_view k, const std::string& v) {
        out.append(k).append(" = ").append(v).push_back('\n');
    };
    kv("freq_hz", format_shortest(rec.config.carrier_freq));
    kv("bandwidth_hz", format_shortest(rec.config.bandwidth));
    kv("sample_rate", format_shortest(rec.config.sample_rate));
    kv("delay_bin_ns", format_shortest(rec.config.delay_bin));
    kv("tx_power_dbm", format_shortest(rec.config.tx_power));
    kv("dynamic_range_db", format_shortest(rec.config.dynamic_range));
    kv("max_pl_db", format_shortest(rec.config.max_measurable_pl));
    kv("sequence_length", std::to_string(rec.config.sequence_length));
    kv("peak_gain_dbi", format_shortest(rec.pattern.peak_gain));
    kv("hpbw_az_deg", format_shortest(rec.pattern.hpbw_az));
    kv("hpbw_el_deg", format_shortest(rec.pattern.hpbw_el));
    kv("floor_gain_dbi", format_shortest(rec.pattern.floor_gain));
    kv("grid_az", join_reals(rec.grid.azimuths));
    kv("grid_el", join_reals(rec.grid.elevations));
    kv("link_id", rec.meta.link_id);
    kv("tx_id", rec.meta.tx_id);
    kv("rx_id", rec.meta.rx_id);
    kv("distance_m", format_shortest(rec.meta.distance));
    kv("scenario", std::string(to_string(rec.meta.scenario)));
    kv("tx_height_m", format_shortest(rec.meta.tx_height));
    kv("rx_height_m", format_shortest(rec.meta.rx_height));
    kv("floor_tx", std::to_string(rec.meta.floor_tx));
    kv("floor_rx", std::to_string(rec.meta.floor_rx));
    out.push_back('\n');

    char buf[64];
    for (const auto& p : rec.pdps) {
        out.append("@beam ")
            .append(format_shortest(p.tx_dir.az())).append(" ")
            .append(format_shortest(p.tx_dir.el())).append(" ")
            .append(format_shortest(p.rx_dir.az())).append(" ")
            .append(format_shortest(p.rx_dir.el())).append(" ")
            .append(format_shortest(p.capture_time)).push_back('\n');
        for (double s : p.samples) {
            const auto res = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::fixed, 4);
            out.append(buf, res.ptr).push_back('\n');
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// MPC files

namespace {

void append_mpc_rows(std::string& out, std::span<const Mpc> mpcs) {
    out.append(kMpcHeader).push_back('\n');
    for (const auto& m : mpcs) {
        out.append(format_fixed(m.tau, 4)).append(",")
            .append(format_fixed(m.power, 4)).append(",")
            .append(format_shortest(m.aod.az())).append(",")
            .append(format_shortest(m.aod.el())).append(",")
            .append(format_shortest(m.aoa.az())).append(",")
            .append(format_shortest(m.aoa.el())).push_back('\n');
    }
}

} // namespace

std::string write_mpcs(std::span<const Mpc> mpcs) {
    std::string out;
    append_mpc_rows(out, mpcs);
    return out;
}

std::string write_mpcs(const Padp& padp) {
    std::string out;
    const auto& m = padp.meta;
    out.append("# link_id = ").append(m.link_id).push_back('\n');
    out.append("# tx_id = ").append(m.tx_id).push_back('\n');
    out.append("# rx_id = ").append(m.rx_id).push_back('\n');
    out.append("# distance_m = ").append(format_shortest(m.distance)).push_back('\n');
    out.append("# scenario = ").append(to_string(m.scenario)).push_back('\n');
    if (padp.noise_floor) out.append("# noise_floor_dbm = ").append(format_fixed(*padp.noise_floor, 4)).push_back('\n');
    append_mpc_rows(out, padp.mpcs);
    return out;
}

Padp parse_mpcs(std::string_view text) {
    const auto lines = split_lines(text);
    Padp padp;
    std::size_t i = 0;
    for (; i < lines.size() && trim(lines[i]).starts_with('#'); ++i) {
        const std::string_view body = trim(trim(lines[i]).substr(1));
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) continue; // free-form comment
        const std::string_view key = trim(body.substr(0, eq));
        const std::string_view val = trim(body.substr(eq + 1));
        if (key == "link_id") padp.meta.link_id = std::string(val);
        else if (key == "tx_id") padp.meta.tx_id = std::string(val);
        else if (key == "rx_id") padp.meta.rx_id = std::string(val);
        else if (key == "distance_m") padp.meta.distance = parse_real(val, i + 1, key);
        else if (key == "scenario") padp.meta.scenario = parse_scenario(val, i + 1);
        else if (key == "noise_floor_dbm") padp.noise_floor = parse_real(val, i + 1, key);
    }
    if (i == lines.size() || trim(lines[i]) != kMpcHeader)
        throw ParseError(i + 1, "expected MPC header '" + std::string(kMpcHeader) + "'");
    const std::size_t header_line = i;
    for (++i; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty() && i + 1 == lines.size()) break;
        const std::string row = "row " + std::to_string(i - header_line);
        const auto cols = split(line, ',');
        if (cols.size() != 6) throw ParseError(i + 1, row + ": expected 6 columns, got " + std::to_string(cols.size()));
        Mpc m;
        try {
            m.tau = parse_real(cols[0], i + 1, "tau_ns");
            m.power = parse_real(cols[1], i + 1, "power_dbm");
            m.aod = Direction(parse_real(cols[2], i + 1, "aod_az"), parse_real(cols[3], i + 1, "aod_el"));
            m.aoa = Direction(parse_real(cols[4], i + 1, "aoa_az"), parse_real(cols[5], i + 1, "aoa_el"));
            m.validate();
        } catch (const ParseError& e) {
            throw ParseError(i + 1, row + ": " + e.what());
        } catch (const std::exception& e) {
            throw ParseError(i + 1, row + ": " + e.what());
        }
        padp.mpcs.push_back(m);
    }
    return padp;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

template <typename F>
void for_each_row(std::string_view text, std::string_view header, std::size_t n_cols, F&& f) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != header)
        throw ParseError(1, "expected header '" + std::string(header) + "'");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != n_cols)
            throw ParseError(i + 1, "row " + std::to_string(i) + ": expected " + std::to_string(n_cols) + " columns");
        f(cols, i + 1);
    }
}

} // namespace

std::string write_pathloss_table(std::span<const PathLossSample> samples) {
    std::string out(kPathLossHeader);
    out.push_back('\n');
    for (const auto& s : samples) {
        out.append(s.link_id).append(",")
            .append(format_shortest(s.distance)).append(",")
            .append(to_string(s.scenario)).append(",")
            .append(format_shortest(s.path_loss)).push_back('\n');
    }
    return out;
}

std::vector<PathLossSample> parse_pathloss_table(std::string_view text) {
    std::vector<PathLossSample> out;
    for_each_row(text, kPathLossHeader, 4, [&](const auto& c, std::size_t ln) {
        PathLossSample s;
        s.link_id = std::string(trim(c[0]));
        s.distance = parse_real(c[1], ln, "distance_m");
        s.scenario = parse_scenario(c[2], ln);
        s.path_loss = parse_real(c[3], ln, "path_loss_db");
        try {
            s.validate();
        } catch (const ValidationError& e) {
            throw ParseError(ln, e.what());
        }
        out.push_back(std::move(s));
    });
    return out;
}

FitReportRow report_row(const CimFit& fit, std::string_view scenario) {
    return {"cim", std::string(scenario), fit.n, fit.d0, fit.sigma, fit.n_points};
}

FitReportRow report_row(const FimFit& fit, std::string_view scenario) {
    return {"fim", std::string(scenario), fit.alpha, fit.beta, fit.sigma, fit.n_points};
}

std::string write_fit_report(std::span<const FitReportRow> rows) {
    std::string out(kFitReportHeader);
    out.push_back('\n');
    for (const auto& r : rows) {
        out.append(r.model).append(",")
            .append(r.scenario).append(",")
            .append(format_fixed(r.param1, 6)).append(",")
            .append(format_fixed(r.param2, 6)).append(",")
            .append(format_fixed(r.sigma_db, 6)).append(",")
            .append(std::to_string(r.n_points)).push_back('\n');
    }
    return out;
}

std::vector<FitReportRow> parse_fit_report(std::string_view text) {
    std::vector<FitReportRow> out;
    for_each_row(text, kFitReportHeader, 6, [&](const auto& c, std::size_t ln) {
        FitReportRow r;
        r.model = std::string(trim(c[0]));
        r.scenario = std::string(trim(c[1]));
        r.param1 = parse_real(c[2], ln, "param1");
        r.param2 = parse_real(c[3], ln, "param2");
        r.sigma_db = parse_real(c[4], ln, "sigma_db");
        r.n_points = static_cast<std::size_t>(parse_int(c[5], ln, "n_points"));
        out.push_back(std::move(r));
    });
    return out;
}

std::string write_stats(std::span<const StatsRow> rows) {
    std::string out(kStatsHeader);
    out.push_back('\n');
    for (const auto& r : rows) {
        out.append(r.link_id).append(",")
            .append(to_string(r.scenario)).append(",")
            .append(format_fixed(r.stats.tau_avg, 4)).append(",")
            .append(format_fixed(r.stats.tau_rms, 4)).push_back('\n');
    }
    return out;
}

std::string write_index(std::span<const CampaignEntry> entries) {
    std::string out(kIndexHeader);
    out.push_back('\n');
    for (const auto& e : entries) {
        out.append(e.file).append(",")
            .append(e.meta.link_id).append(",")
            .append(e.meta.tx_id).append(",")
            .append(e.meta.rx_id).append(",")
            .append(format_shortest(e.meta.distance)).append(",")
            .append(to_string(e.meta.scenario)).push_back('\n');
    }
    return out;
}

std::vector<CampaignEntry> parse_index(std::string_view text) {
    std::vector<CampaignEntry> out;
    std::set<std::string> ids;
    for_each_row(text, kIndexHeader, 6, [&](const auto& c, std::size_t ln) {
        CampaignEntry e;
        e.file = std::string(trim(c[0]));
        e.meta.link_id = std::string(trim(c[1]));
        e.meta.tx_id = std::string(trim(c[2]));
        e.meta.rx_id = std::string(trim(c[3]));
        e.meta.distance = parse_real(c[4], ln, "distance_m");
        e.meta.scenario = parse_scenario(c[5], ln);
        if (e.file.empty()) throw ParseError(ln, "empty file path");
        try {
            e.meta.validate();
        } catch (const ValidationError& err) {
            throw ParseError(ln, err.what());
        }
        if (!ids.insert(e.meta.link_id).second) throw ParseError(ln, "duplicate link_id '" + e.meta.link_id + "'");
        out.push_back(std::move(e));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace chankit
