#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "chankit/errors.hpp"
#include "chankit/extraction.hpp"
#include "chankit/fitting.hpp"
#include "chankit/ingest.hpp"
#include "chankit/metrics.hpp"
#include "chankit/random.hpp"
#include "chankit/synth.hpp"
#include "svg.hpp"

namespace chankit::cli {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::shared_ptr<spdlog::logger> logger() {
    static const auto log = [] {
        auto l = spdlog::stderr_color_mt("chankit");
        l->set_pattern("chankit: %l: %v");
        return l;
    }();
    const char* env = std::getenv("CHANKIT_LOG");
    log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return log;
}

// Raised for bad input data; maps to kExitData.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared flags

struct ExtractFlags {
    double threshold_db = 6.0;
    double gate_tau_ns = 1.302;
    double gate_angle_deg = 20.0;
    double pc_radius_m = 0.0;
    double drift_rate = 0.0;
    double reference_az_deg = 0.0;
    bool no_refine = false;
    bool keep_sidelobes = false;
    bool keep_leakage = false;
    unsigned threads = 0;

    ExtractOptions options() const {
        ExtractOptions o;
        o.threshold_db = threshold_db;
        o.gate_tau_ns = gate_tau_ns;
        o.gate_angle_deg = gate_angle_deg;
        o.correction = {pc_radius_m, drift_rate, reference_az_deg};
        o.refine_power = !no_refine;
        o.reject_sidelobes = !keep_sidelobes;
        o.reject_leakage = !keep_leakage;
        o.threads = threads;
        return o;
    }
};

void add_extract_flags(CLI::App& cmd, ExtractFlags& f) {
    cmd.add_option("--threshold-db", f.threshold_db, "Peak threshold above the median noise floor (dB)")
        ->capture_default_str();
    cmd.add_option("--gate-tau-ns", f.gate_tau_ns, "Delay gate for merging beam detections (ns)")->capture_default_str();
    cmd.add_option("--gate-angle-deg", f.gate_angle_deg, "Angle gate for merging beam detections (deg)")
        ->capture_default_str();
    cmd.add_option("--pc-radius-m", f.pc_radius_m, "Horn phase-centre offset from the rotation axis (m)")
        ->capture_default_str();
    cmd.add_option("--drift-rate", f.drift_rate, "Clock drift (s/s)")->capture_default_str();
    cmd.add_option("--reference-az-deg", f.reference_az_deg, "Azimuth of zero rotation offset (deg)")
        ->capture_default_str();
    cmd.add_flag("--no-refine", f.no_refine, "Report raw peak-bin powers");
    cmd.add_flag("--keep-sidelobes", f.keep_sidelobes, "Do not reject pulse sidelobe detections");
    cmd.add_flag("--keep-leakage", f.keep_leakage, "Do not reject detections explained by horn pattern leakage");
    cmd.add_option("--threads", f.threads, "Worker threads (0: all cores)");
}

struct FitFlags {
    std::string model = "both";
    std::string scenario = "all";
    double d0_m = 1.0;
    double freq_hz = 28e9;
    bool split_glass = false;
};

void add_fit_flags(CLI::App& cmd, FitFlags& f, bool with_model) {
    if (with_model)
        cmd.add_option("--model", f.model, "cim, fim or both")
            ->check(CLI::IsMember({"cim", "fim", "both"}))
            ->capture_default_str();
    cmd.add_option("--scenario", f.scenario, "Fit pool: LOS, NLOS, NLOS_GLASS or all")
        ->check(CLI::IsMember({"LOS", "NLOS", "NLOS_GLASS", "all"}))
        ->capture_default_str();
    cmd.add_option("--d0-m", f.d0_m, "CIM reference distance (m)")->capture_default_str();
    cmd.add_option("--freq-hz", f.freq_hz, "Carrier frequency for the CIM anchor (Hz)")->capture_default_str();
    cmd.add_flag("--split-glass", f.split_glass, "Fit NLOS_GLASS separately instead of pooling it with NLOS");
}

std::string pool_label(Scenario s, bool split_glass) {
    return std::string(to_string(split_glass ? s : fit_pool(s)));
}

// Samples grouped by fit pool in LOS, NLOS, NLOS_GLASS order.
std::vector<std::pair<std::string, std::vector<PathLossSample>>> make_pools(const std::vector<PathLossSample>& samples,
                                                                            bool split_glass,
                                                                            const std::string& filter) {
    std::vector<std::pair<std::string, std::vector<PathLossSample>>> pools;
    for (Scenario s : {Scenario::los, Scenario::nlos, Scenario::nlos_glass}) {
        const std::string label = pool_label(s, split_glass);
        if (filter != "all" && filter != label) continue;
        if (std::any_of(pools.begin(), pools.end(), [&](const auto& p) { return p.first == label; })) continue;
        std::vector<PathLossSample> members;
        for (const auto& x : samples)
            if (pool_label(x.scenario, split_glass) == label) members.push_back(x);
        if (!members.empty()) pools.emplace_back(label, std::move(members));
    }
    return pools;
}

struct FitOutputs {
    std::vector<FitReportRow> rows;
    std::string residuals;
    std::string lines;
    std::vector<svg::Panel> panels;
};

FitOutputs run_fits(const std::vector<PathLossSample>& samples, const FitFlags& flags) {
    FitOutputs out;
    out.residuals = "model,scenario,link_id,distance_m,path_loss_db,predicted_db,residual_db\n";
    out.lines = "model,scenario,distance_m,path_loss_db\n";
    const bool want_cim = flags.model != "fim";
    const bool want_fim = flags.model != "cim";

    for (const auto& [label, pool] : make_pools(samples, flags.split_glass, flags.scenario)) {
        std::optional<CimFit> cim;
        std::optional<FimFit> fim;
        try {
            if (want_cim) cim = fit_cim(pool, flags.d0_m, flags.freq_hz);
            if (want_fim) fim = fit_fim(pool);
        } catch (const InsufficientDataError& e) {
            logger()->warn("{} pool: {}", label, e.what());
            continue;
        }
        const auto [dmin, dmax] = std::minmax_element(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
            return a.distance < b.distance;
        });
        svg::Panel panel{label + " path loss", "distance (m)", "path loss (dB)", true, {}};
        svg::Series pts{"measured", "points", {}};
        for (const auto& s : pool) pts.xy.emplace_back(s.distance, s.path_loss);
        panel.series.push_back(std::move(pts));

        const auto emit = [&](const std::string& model, auto&& predict_at, const FitReportRow& row) {
            out.rows.push_back(row);
            for (const auto& s : pool) {
                const double p = predict_at(s.distance);
                out.residuals += model + "," + label + "," + s.link_id + "," + format_shortest(s.distance) + "," +
                                 format_fixed(s.path_loss, 4) + "," + format_fixed(p, 4) + "," +
                                 format_fixed(s.path_loss - p, 4) + "\n";
            }
            svg::Series line{model + " fit", model, {}};
            constexpr int steps = 50;
            const double lo = std::log10(dmin->distance), hi = std::log10(dmax->distance);
            for (int k = 0; k <= steps; ++k) {
                const double d = std::pow(10.0, lo + (hi - lo) * k / steps);
                const double p = predict_at(d);
                out.lines += model + "," + label + "," + format_fixed(d, 4) + "," + format_fixed(p, 4) + "\n";
                line.xy.emplace_back(d, p);
            }
            panel.series.push_back(std::move(line));
        };
        if (cim) emit("cim", [&](double d) { return predict_cim(*cim, d); }, report_row(*cim, label));
        if (fim) emit("fim", [&](double d) { return predict_fim(*fim, d); }, report_row(*fim, label));
        out.panels.push_back(std::move(panel));
    }
    return out;
}

struct StatsOutputs {
    std::string stats_csv;
    std::string cdf_csv;
    std::string svg;
};

StatsOutputs run_stats(const std::vector<StatsRow>& rows, bool split_glass) {
    StatsOutputs out;
    out.stats_csv = write_stats(rows);
    out.cdf_csv = "scenario,tau_rms_ns,probability\n";
    svg::Panel panel{"RMS delay spread CDF", "RMS delay spread (ns)", "CDF", false, {}};
    for (Scenario s : {Scenario::los, Scenario::nlos, Scenario::nlos_glass}) {
        const std::string label = pool_label(s, split_glass);
        if (std::any_of(panel.series.begin(), panel.series.end(), [&](const auto& x) { return x.label == label; }))
            continue;
        std::vector<double> values;
        for (const auto& r : rows)
            if (pool_label(r.scenario, split_glass) == label) values.push_back(r.stats.tau_rms);
        if (values.empty()) continue;
        svg::Series series{label, "cdf", {}};
        for (const auto& c : empirical_cdf(values)) {
            out.cdf_csv += label + "," + format_fixed(c.value, 4) + "," + format_fixed(c.probability, 6) + "\n";
            series.xy.emplace_back(c.value, c.probability);
        }
        panel.series.push_back(std::move(series));
    }
    out.svg = svg::render({panel});
    return out;
}

// ---------------------------------------------------------------------------
// synth

struct SynthFlags {
    std::string spec;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

PathLossModel parse_model(const json& j) {
    const std::string kind = j.value("model", "cim");
    if (kind == "cim") return make_cim(j.at("n").get<double>(), j.value("d0_m", 1.0), j.value("freq_hz", 28e9));
    if (kind == "fim") return make_fim(j.at("alpha").get<double>(), j.at("beta").get<double>());
    throw DataError("unknown path-loss model '" + kind + "'");
}

void cmd_synth(const SynthFlags& f) {
    json spec;
    try {
        spec = json::parse(read_file(f.spec));
    } catch (const json::exception& e) {
        throw DataError(std::string("spec: ") + e.what());
    }
    try {
        const std::uint64_t seed = f.seed ? *f.seed : spec.value("seed", std::uint64_t{0});
        const auto& links = spec.at("links");
        if (!links.is_array() || links.empty()) throw DataError("spec: 'links' must be a non-empty array");

        SounderConfig config;
        AntennaPattern pattern;
        AngleGrid grid = AngleGrid::standard();
        if (spec.contains("grid")) {
            const auto& g = spec["grid"];
            if (g.contains("azimuths")) grid.azimuths = g["azimuths"].get<std::vector<double>>();
            if (g.contains("elevations")) grid.elevations = g["elevations"].get<std::vector<double>>();
        }
        CorrectionParams params;
        if (spec.contains("correction")) {
            const auto& c = spec["correction"];
            params.phase_center_radius = c.value("pc_radius_m", 0.0);
            params.drift_rate = c.value("drift_rate", 0.0);
            params.reference_az = c.value("reference_az_deg", 0.0);
        }
        RenderOptions render;
        render.noise_floor_dbm = spec.value("noise_floor_dbm", render.noise_floor_dbm);
        render.noise_jitter_db = spec.value("noise_jitter_db", render.noise_jitter_db);
        render.capture_interval_s = spec.value("capture_interval_s", render.capture_interval_s);
        render.min_bins = spec.value("min_bins", render.min_bins);
        render.threads = f.threads;

        std::map<std::string, std::pair<PathLossModel, double>> models;
        for (const auto& [name, m] : spec.at("models").items())
            models.emplace(name, std::pair{parse_model(m), m.value("sigma_db", 0.0)});

        fs::create_directories(f.out);
        std::vector<CampaignEntry> index;
        for (std::size_t i = 0; i < links.size(); ++i) {
            const auto& l = links[i];
            LinkMeta meta;
            meta.link_id = l.at("link_id").get<std::string>();
            meta.tx_id = l.value("tx_id", "");
            meta.rx_id = l.value("rx_id", "");
            meta.distance = l.at("distance_m").get<double>();
            meta.scenario = scenario_from_string(l.at("scenario").get<std::string>());
            meta.tx_height = l.value("tx_height_m", 1.8);
            meta.rx_height = l.value("rx_height_m", 1.5);
            meta.floor_tx = l.value("floor_tx", 0);
            meta.floor_rx = l.value("floor_rx", 0);
            meta.validate();
            if (std::any_of(index.begin(), index.end(), [&](const auto& e) { return e.meta.link_id == meta.link_id; }))
                throw DataError("spec: duplicate link_id '" + meta.link_id + "'");

            std::string model_name(to_string(meta.scenario));
            if (!models.contains(model_name)) model_name = std::string(to_string(fit_pool(meta.scenario)));
            if (!models.contains(model_name)) throw DataError("spec: no path-loss model for " + model_name);
            const auto& [model, sigma] = models.at(model_name);

            ScenarioSpec sc;
            sc.distance = meta.distance;
            sc.scenario = meta.scenario;
            sc.n_mpcs = l.value("n_mpcs", 1);
            sc.pl_model = model;
            sc.shadow_sigma_db = sigma;
            sc.delay_spread_target = l.value("delay_spread_ns", 0.0);
            sc.power_decay = l.value("power_decay_db_per_ns", sc.power_decay);
            sc.seed = derive_seed(seed, 2 * i);

            Padp truth = gen_mpcs(sc, config, pattern, grid);
            truth.meta = meta;
            const SweepRecord rec = render_sweep(truth, config, pattern, grid, params, render, derive_seed(seed, 2 * i + 1));

            const std::string sweep_name = meta.link_id + ".sweep";
            write_file_atomic(fs::path(f.out) / sweep_name, write_sweep(rec));
            write_file_atomic(fs::path(f.out) / (meta.link_id + ".truth.csv"), write_mpcs(truth));
            index.push_back({sweep_name, meta});
            logger()->info("rendered {} ({} paths, {} beam pairs)", meta.link_id, truth.size(), rec.pdps.size());
        }
        write_file_atomic(fs::path(f.out) / "index.csv", write_index(index));
    } catch (const json::exception& e) {
        throw DataError(std::string("spec: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// extract

struct ExtractCmd {
    std::vector<std::string> inputs;
    std::string out;
    ExtractFlags flags;
};

fs::path mpc_path_for(const fs::path& sweep, const std::string& out_dir) {
    fs::path name = sweep.filename();
    if (name.extension() == ".sweep") name.replace_extension();
    name += ".mpc.csv";
    return (out_dir.empty() ? sweep.parent_path() : fs::path(out_dir)) / name;
}

void cmd_extract(const ExtractCmd& c) {
    if (!c.out.empty()) fs::create_directories(c.out);
    for (const auto& in : c.inputs) {
        const SweepRecord rec = parse_sweep(read_file(in));
        const Padp padp = extract_padp(rec, c.flags.options());
        const fs::path target = mpc_path_for(in, c.out);
        write_file_atomic(target, write_mpcs(padp));
        logger()->info("{}: {} paths -> {}", in, padp.size(), target.string());
    }
}

// ---------------------------------------------------------------------------
// fit

struct FitCmd {
    std::string table;
    std::string out = "fit_report.csv";
    std::string residuals;
    FitFlags flags;
};

void cmd_fit(const FitCmd& c) {
    const auto samples = parse_pathloss_table(read_file(c.table));
    const FitOutputs fits = run_fits(samples, c.flags);
    if (fits.rows.empty()) throw DataError("insufficient data: no scenario pool has two distinct distances");
    write_file_atomic(c.out, write_fit_report(fits.rows));
    if (!c.residuals.empty()) write_file_atomic(c.residuals, fits.residuals);
}

// ---------------------------------------------------------------------------
// stats

struct StatsCmd {
    std::vector<std::string> inputs;
    std::string out = "stats.csv";
    std::string cdf;
    std::string svg;
    bool split_glass = false;
};

void cmd_stats(const StatsCmd& c) {
    std::vector<StatsRow> rows;
    for (const auto& in : c.inputs) {
        const Padp padp = parse_mpcs(read_file(in));
        std::string id = padp.meta.link_id;
        if (id.empty()) {
            id = fs::path(in).filename().string();
            if (const auto dot = id.find('.'); dot != std::string::npos) id.resize(dot);
        }
        if (padp.empty()) {
            logger()->warn("{}: no paths, skipped", in);
            continue;
        }
        rows.push_back({id, padp.meta.scenario, delay_stats(padp)});
    }
    const StatsOutputs out = run_stats(rows, c.split_glass);
    write_file_atomic(c.out, out.stats_csv);
    if (!c.cdf.empty()) write_file_atomic(c.cdf, out.cdf_csv);
    if (!c.svg.empty()) write_file_atomic(c.svg, out.svg);
}

// ---------------------------------------------------------------------------
// report

struct ReportCmd {
    std::string campaign;
    std::string out;
    ExtractFlags extract;
    FitFlags fit;
    bool raw_sum = false;
};

void cmd_report(const ReportCmd& c) {
    const fs::path dir(c.campaign);
    if (!fs::is_directory(dir)) throw DataError("campaign directory '" + c.campaign + "' not found");
    std::vector<fs::path> files;
    if (fs::exists(dir / "index.csv")) {
        for (const auto& e : parse_index(read_file(dir / "index.csv"))) files.push_back(dir / e.file);
    } else {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".sweep") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) throw DataError("campaign '" + c.campaign + "' has no sweep files");

    const fs::path out = c.out.empty() ? dir / "report" : fs::path(c.out);
    fs::create_directories(out / "mpcs");

    std::vector<PathLossSample> samples;
    std::vector<StatsRow> stats;
    std::size_t failures = 0;
    for (const auto& file : files) {
        try {
            const SweepRecord rec = parse_sweep(read_file(file));
            const ExtractOptions opts = c.extract.options();
            const auto per_beam = extract_beam_peaks(rec, opts);
            Padp padp = padp_from_beam_peaks(rec, per_beam, opts);
            write_file_atomic(out / "mpcs" / (rec.meta.link_id + ".mpc.csv"), write_mpcs(padp));
            if (padp.empty()) {
                logger()->warn("{}: no paths detected, skipped", file.string());
                continue;
            }
            double p_rx;
            if (c.raw_sum) {
                std::vector<double> all;
                for (const auto& bp : per_beam)
                    for (const auto& p : bp.peaks) all.push_back(p.power);
                p_rx = omni_rx_power(all);
            } else {
                p_rx = omni_rx_power(padp);
            }
            const auto pl = path_loss(rec.config.tx_power, p_rx, rec.pattern.peak_gain, rec.pattern.peak_gain,
                                      rec.config.max_measurable_pl);
            if (pl.suspicious) logger()->warn("{}: suspicious path loss {:.2f} dB", rec.meta.link_id, pl.db);
            PathLossSample s{rec.meta.link_id, rec.meta.distance, rec.meta.scenario, pl.db};
            try {
                s.validate();
                samples.push_back(s);
            } catch (const ValidationError& e) {
                logger()->warn("{}: {}", rec.meta.link_id, e.what());
            }
            stats.push_back({rec.meta.link_id, rec.meta.scenario, delay_stats(padp)});
        } catch (const std::exception& e) {
            ++failures;
            logger()->error("{}: {}", file.string(), e.what());
        }
    }
    if (failures == files.size()) throw DataError("every sweep in the campaign failed to process");

    std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.link_id < b.link_id; });
    std::sort(stats.begin(), stats.end(), [](const auto& a, const auto& b) { return a.link_id < b.link_id; });
    write_file_atomic(out / "pathloss.csv", write_pathloss_table(samples));

    const FitOutputs fits = run_fits(samples, c.fit);
    write_file_atomic(out / "fit_report.csv", write_fit_report(fits.rows));
    write_file_atomic(out / "fit_lines.csv", fits.lines);
    write_file_atomic(out / "residuals.csv", fits.residuals);
    write_file_atomic(out / "pathloss.svg", svg::render(fits.panels));

    const StatsOutputs st = run_stats(stats, c.fit.split_glass);
    write_file_atomic(out / "stats.csv", st.stats_csv);
    write_file_atomic(out / "cdf.csv", st.cdf_csv);
    write_file_atomic(out / "cdf.svg", st.svg);
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Channel-sounding post-processing and path-loss modelling toolkit"};
    app.name(args.empty() ? "chankit" : fs::path(args[0]).filename().string());
    app.require_subcommand(1);

    std::function<void()> action;

    SynthFlags synth;
    auto* s = app.add_subcommand("synth", "Render a synthetic campaign from a JSON spec");
    s->add_option("--spec", synth.spec, "Campaign spec (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--out", synth.out, "Output directory")->capture_default_str();
    s->add_option("--seed", synth.seed, "Override the spec's seed");
    s->add_option("--threads", synth.threads, "Worker threads (0: all cores)");
    s->callback([&] { action = [&] { cmd_synth(synth); }; });

    ExtractCmd extract;
    auto* e = app.add_subcommand("extract", "Extract MPCs from sweep files");
    e->add_option("sweeps", extract.inputs, "Sweep files")->required();
    e->add_option("--out", extract.out, "Output directory (default: next to each sweep)");
    add_extract_flags(*e, extract.flags);
    e->callback([&] { action = [&] { cmd_extract(extract); }; });

    FitCmd fit;
    auto* f = app.add_subcommand("fit", "Fit CIM/FIM path-loss models to a path-loss table");
    f->add_option("table", fit.table, "Path-loss table CSV")->required();
    f->add_option("--out", fit.out, "Fit report CSV")->capture_default_str();
    f->add_option("--residuals", fit.residuals, "Residuals CSV");
    add_fit_flags(*f, fit.flags, true);
    f->callback([&] { action = [&] { cmd_fit(fit); }; });

    StatsCmd stats;
    auto* st = app.add_subcommand("stats", "Delay statistics and RMS delay spread CDFs from MPC files");
    st->add_option("mpcs", stats.inputs, "MPC files")->required();
    st->add_option("--out", stats.out, "Stats CSV")->capture_default_str();
    st->add_option("--cdf", stats.cdf, "CDF CSV");
    st->add_option("--svg", stats.svg, "CDF plot (SVG)");
    st->add_flag("--split-glass", stats.split_glass, "Keep NLOS_GLASS links as their own curve");
    st->callback([&] { action = [&] { cmd_stats(stats); }; });

    ReportCmd report;
    auto* r = app.add_subcommand("report", "Extract, compute path loss and statistics, and fit a whole campaign");
    r->add_option("campaign", report.campaign, "Campaign directory")->required();
    r->add_option("--out", report.out, "Report directory (default: <campaign>/report)");
    r->add_flag("--raw-sum", report.raw_sum, "Sum power over every beam-pair detection instead of merged paths");
    add_extract_flags(*r, report.extract);
    add_fit_flags(*r, report.fit, true);
    r->callback([&] { action = [&] { cmd_report(report); }; });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("chankit");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return kExitUsage;
    }

    auto log = logger();
    try {
        action();
        return kExitOk;
    } catch (const std::exception& ex) {
        log->error("{}", ex.what());
        return kExitData;
    }
}

} // namespace chankit::cli
