#include "netspect/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "netspect/errors.hpp"
#include "netspect/svgplot.hpp"
#include "netspect/synth.hpp"

namespace netspect {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

std::string fmtcoef(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

json result_to_json(const RegressionResult& r) {
    json coeffs = json::array();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        const Eigen::Index e = static_cast<Eigen::Index>(i);
        coeffs.push_back({{"name", r.names[i]},
                          {"coef", r.coef(e)},
                          {"se", r.se(e)},
                          {"t", r.tstat(e)},
                          {"p", r.pvalue(e)},
                          {"signif_5pct", r.pvalue(e) < 0.05}});
    }
    return json{{"coefficients", coeffs},
                {"f_stat", r.f_stat},
                {"f_pvalue", r.f_pvalue},
                {"df1", r.df1},
                {"df2", r.df2},
                {"r2", r.r2},
                {"adj_r2", r.adj_r2},
                {"aic", r.aic},
                {"bic", r.bic},
                {"n", static_cast<long>(r.n)},
                {"inference", r.inference == Inference::classical ? "classical" : "hc1"}};
}

std::string result_to_csv(const RegressionResult& r, const std::string& hash) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "name,coef,se,t,p,signif_5pct\n";
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        const Eigen::Index e = static_cast<Eigen::Index>(i);
        out += r.names[i] + "," + fmt(r.coef(e)) + "," + fmt(r.se(e)) + "," + fmt(r.tstat(e)) +
               "," + fmt(r.pvalue(e)) + "," + (r.pvalue(e) < 0.05 ? "1" : "0") + "\n";
    }
    out += "stat,value\n";
    out += "f_stat," + fmt(r.f_stat) + "\n";
    out += "f_pvalue," + fmt(r.f_pvalue) + "\n";
    out += "r2," + fmt(r.r2) + "\n";
    out += "adj_r2," + fmt(r.adj_r2) + "\n";
    out += "aic," + fmt(r.aic) + "\n";
    out += "bic," + fmt(r.bic) + "\n";
    out += "n," + std::to_string(static_cast<long>(r.n)) + "\n";
    return out;
}

std::string mode_name(DesignMode m) { return m == DesignMode::baseline ? "baseline" : "tone"; }

json window_to_json(const WindowOutcome& w) {
    return json{{"valid", w.valid},
                {"stocks", w.n_stocks},
                {"edges", w.n_edges},
                {"cliques", w.n_cliques},
                {"covered", w.n_covered},
                {"fallback_used", w.fallback_used},
                {"truncated", w.truncated},
                {"degenerate", w.degenerate},
                {"lambda2_hyper", w.lambda2_hyper},
                {"lambda2_graph", w.lambda2_graph}};
}

void write_run_outputs(const RunConfig& cfg, const std::string& hash, DesignMode mode,
                       const DeltaSeries& series, const DesignMatrix& design,
                       const RegressionResult& fit, const MappedEvents& events,
                       const ExclusionResult& excl) {
    const fs::path dir(cfg.output_dir);
    const std::string kstr = std::to_string(series.k);

    json j;
    j["config_hash"] = hash;
    {
        json cfg_echo;
        std::istringstream is(serialize_config(cfg, /*include_execution=*/false));
        std::string line;
        while (std::getline(is, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) cfg_echo[line.substr(0, eq)] = line.substr(eq + 3);
        }
        j["config"] = cfg_echo;
    }
    j["mode"] = mode_name(mode);
    j["measure"] = cfg.measure;
    j["k"] = series.k;
    j["result"] = result_to_json(fit);
    j["event_columns"] = design.event_columns;
    j["n_events_in_sample"] = events.events.size();
    j["n_events_excluded"] = excl.excluded.size();
    j["n_rows_dropped"] = design.dropped_log.size();
    j["n_reference_days"] = series.rows.size();
    j["n_valid_days"] = series.n_valid();

    const std::string base = "results_" + mode_name(mode) + "_k" + kstr;
    write_file(dir / (base + ".json"), j.dump(2) + "\n");
    write_file(dir / (base + ".csv"), result_to_csv(fit, hash));
}

void write_exclusion_log(const RunConfig& cfg, const std::string& hash,
                         const std::vector<std::string>& calendar,
                         const std::vector<std::pair<int, std::vector<std::pair<int, int>>>>& by_k) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "event_date,conflicting_event_date,k\n";
    for (const auto& [k, conflicts] : by_k) {
        for (const auto& [a, b] : conflicts) {
            out += calendar[static_cast<std::size_t>(a)] + "," +
                   calendar[static_cast<std::size_t>(b)] + "," + std::to_string(k) + "\n";
            out += calendar[static_cast<std::size_t>(b)] + "," +
                   calendar[static_cast<std::size_t>(a)] + "," + std::to_string(k) + "\n";
        }
    }
    write_file(fs::path(cfg.output_dir) / "exclusion_log.csv", out);
}

void write_delta_csv(const RunConfig& cfg, const std::string& hash, const DeltaSeries& series) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "date,valid,delta_hyper,delta_graph,pre_lambda2_hyper,post_lambda2_hyper,pre_stocks,"
           "post_stocks\n";
    for (const auto& r : series.rows) {
        out += r.date + "," + (r.valid ? "1" : "0") + "," +
               (r.valid ? fmt(r.delta_hyper) : "") + "," + (r.valid ? fmt(r.delta_graph) : "") +
               "," + fmt(r.pre.lambda2_hyper) + "," + fmt(r.post.lambda2_hyper) + "," +
               std::to_string(r.pre.n_stocks) + "," + std::to_string(r.post.n_stocks) + "\n";
    }
    write_file(fs::path(cfg.output_dir) / ("deltas_k" + std::to_string(series.k) + ".csv"), out);
}

void write_spectra_csv(const RunConfig& cfg, const std::string& hash, const DeltaSeries& series) {
    std::string out = "# config_hash=" + hash + "\n";
    out += "date,side,eigenvalues...\n";
    for (const auto& r : series.rows) {
        for (int side = 0; side < 2; ++side) {
            const WindowOutcome& w = side == 0 ? r.pre : r.post;
            if (w.spectrum.empty()) continue;
            out += r.date;
            out += side == 0 ? ",pre" : ",post";
            for (double v : w.spectrum) out += "," + fmt(v);
            out += "\n";
        }
    }
    write_file(fs::path(cfg.output_dir) / ("spectra_k" + std::to_string(series.k) + ".csv"), out);
}

void write_window_dump(const RunConfig& cfg, const std::string& hash, const DeltaSeries& series) {
    json rows = json::array();
    for (const auto& r : series.rows) {
        rows.push_back({{"date", r.date},
                        {"valid", r.valid},
                        {"delta_hyper", r.delta_hyper},
                        {"delta_graph", r.delta_graph},
                        {"pre", window_to_json(r.pre)},
                        {"post", window_to_json(r.post)}});
    }
    const json j{{"config_hash", hash}, {"k", series.k}, {"windows", rows}};
    write_file(fs::path(cfg.output_dir) / ("windows_k" + std::to_string(series.k) + ".json"),
               j.dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// input loading
// ---------------------------------------------------------------------------

LoadedInputs load_inputs(const RunConfig& cfg) {
    cfg.validate();
    LoadedInputs in;

    PricePanel prices = load_price_panel(cfg.prices_path);
    if (!cfg.start_date.empty() || !cfg.end_date.empty())
        prices = subset_dates(prices, cfg.start_date, cfg.end_date);
    if (prices.n_dates() < 2)
        throw DegeneratePanel("fewer than 2 price dates in the analysis span");
    in.n_price_dates = static_cast<int>(prices.n_dates());
    in.first_date = prices.dates.front();
    in.last_date = prices.dates.back();

    const ReturnPanel all_returns =
        clean_returns(compute_returns(prices), cfg.clean_policy_enum(), cfg.clean_bound);

    // factors are columns of the same price file, pulled out of the universe
    const auto factor_names = cfg.factor_ticker_list();
    if (factor_names.empty()) throw Error("config: factor_tickers is empty");
    ReturnPanel factors, stocks;
    factors.dates = stocks.dates = all_returns.dates;
    std::vector<Eigen::Index> factor_cols, stock_cols;
    for (Eigen::Index j = 0; j < all_returns.n_tickers(); ++j) {
        const std::string& name = all_returns.tickers[static_cast<std::size_t>(j)];
        if (std::find(factor_names.begin(), factor_names.end(), name) != factor_names.end())
            factor_cols.push_back(j);
        else
            stock_cols.push_back(j);
    }
    if (factor_cols.size() != factor_names.size())
        throw Error("factor tickers (" + cfg.factor_tickers + ") not all present in " +
                    cfg.prices_path);
    factors.values.resize(all_returns.n_dates(), static_cast<Eigen::Index>(factor_cols.size()));
    for (std::size_t j = 0; j < factor_cols.size(); ++j) {
        factors.tickers.push_back(all_returns.tickers[static_cast<std::size_t>(factor_cols[j])]);
        factors.values.col(static_cast<Eigen::Index>(j)) = all_returns.values.col(factor_cols[j]);
    }
    stocks.values.resize(all_returns.n_dates(), static_cast<Eigen::Index>(stock_cols.size()));
    for (std::size_t j = 0; j < stock_cols.size(); ++j) {
        stocks.tickers.push_back(all_returns.tickers[static_cast<std::size_t>(stock_cols[j])]);
        stocks.values.col(static_cast<Eigen::Index>(j)) = all_returns.values.col(stock_cols[j]);
    }
    if (stocks.n_tickers() < 2) throw Error("fewer than 2 stock columns after factor removal");

    in.returns = stocks;
    in.residuals = residualize(stocks, factors, cfg.residualize_options());
    for (const auto& s : in.residuals.skipped)
        in.warnings.push_back("stock skipped by residualizer (too few observations): " + s);

    in.sectors = load_sector_map(cfg.sectors_path);
    for (const auto& t : in.sectors.unassigned(stocks.tickers))
        in.warnings.push_back("ticker without sector, treated as UNKNOWN/cross-sector: " + t);

    const EventCalendar raw_events = load_event_calendar(cfg.events_path);
    in.events = map_events_to_calendar(raw_events, in.residuals.residuals.dates);
    for (const auto& n : in.events.shifted_notes)
        in.warnings.push_back("event date off the trading calendar, mapped forward: " + n);
    for (const auto& d : in.events.dropped)
        in.warnings.push_back("event outside the analysis calendar, dropped: " + d);
    if (!raw_events.entries.empty() && in.events.events.empty())
        throw AlignmentError("no event dates fall inside the analysis calendar");

    const ControlRows raw_controls = load_controls(cfg.controls_path);
    in.controls = align_controls(raw_controls, in.residuals.residuals.dates);
    const std::size_t covered =
        in.controls.dates.size() - in.controls.report.uncovered_dates.size();
    if (covered == 0)
        throw AlignmentError("control series cover none of the analysis dates");
    if (!in.controls.report.uncovered_dates.empty())
        in.warnings.push_back(
            std::to_string(in.controls.report.uncovered_dates.size()) +
            " trading days lack control values (rows will be dropped from designs)");
    return in;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const LoadedInputs in = load_inputs(cfg);
    out << "prices:   " << in.n_price_dates << " dates x "
        << in.returns.n_tickers() + static_cast<Eigen::Index>(cfg.factor_ticker_list().size())
        << " tickers (" << in.first_date << " .. " << in.last_date << ")\n";
    out << "stocks:   " << in.returns.n_tickers() << " after factor removal\n";
    out << "events:   " << in.events.events.size() << " on-calendar";
    std::size_t h = 0, d = 0, n = 0;
    for (const auto& e : in.events.events) {
        if (e.tone == Tone::hawkish) ++h;
        else if (e.tone == Tone::dovish) ++d;
        else ++n;
    }
    out << " (hawkish " << h << ", dovish " << d << ", neutral " << n << ")\n";
    out << "controls: " << in.controls.dates.size() - in.controls.report.uncovered_dates.size()
        << "/" << in.controls.dates.size() << " trading days covered, "
        << in.controls.report.forward_filled << " forward-filled\n";
    for (const auto& w : in.warnings) out << "warning: " << w << "\n";
    out << "OK\n";
    return kExitOk;
}

int cmd_run(const RunConfig& cfg, DesignMode mode, std::ostream& out) {
    const LoadedInputs in = load_inputs(cfg);
    const std::string hash = config_hash(cfg);

    const PipelineConfig pipe = cfg.pipeline(cfg.k);
    const DeltaSeries series = delta_fiedler_series(in.residuals, in.sectors, pipe);
    const ExclusionResult excl = apply_overlap_exclusion(in.events, cfg.k);
    const DesignMatrix design = build_design(series, in.events, in.controls, mode, excl,
                                             cfg.measure_enum(), cfg.design_options());
    const RegressionResult fit = ols_fit(design, cfg.inference_enum());

    write_run_outputs(cfg, hash, mode, series, design, fit, in.events, excl);
    write_exclusion_log(cfg, hash, in.residuals.residuals.dates, {{cfg.k, excl.conflicts}});
    write_delta_csv(cfg, hash, series);
    if (cfg.dump_windows) write_window_dump(cfg, hash, series);
    if (cfg.dump_spectra) write_spectra_csv(cfg, hash, series);

    out << "k=" << cfg.k << " mode=" << mode_name(mode) << " n=" << fit.n << " r2=" << fmt(fit.r2)
        << "\n";
    for (const auto& name : design.event_columns) {
        const auto idx = fit.index_of(name);
        if (idx)
            out << "  " << name << ": coef=" << fmt(fit.coef(static_cast<Eigen::Index>(*idx)))
                << " p=" << fmt(fit.pvalue(static_cast<Eigen::Index>(*idx))) << "\n";
    }
    out << "results written to " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const LoadedInputs in = load_inputs(cfg);
    const std::string hash = config_hash(cfg);

    std::map<int, DeltaSeries> series_by_k;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k)
        series_by_k.emplace(k, delta_fiedler_series(in.residuals, in.sectors, cfg.pipeline(k)));

    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> excl_by_k;
    SweepTable tables[2];
    const DesignMode modes[2] = {DesignMode::baseline, DesignMode::tone};
    for (int m = 0; m < 2; ++m)
        tables[m] = k_sweep(in.residuals, in.sectors, in.events, in.controls, cfg.k_min, cfg.k_max,
                            modes[m], cfg.pipeline(cfg.k), cfg.design_options(),
                            cfg.inference_enum(), &series_by_k);
    for (int k = cfg.k_min; k <= cfg.k_max; ++k)
        excl_by_k.emplace_back(k, apply_overlap_exclusion(in.events, k).conflicts);

    // per-k result files for both modes
    for (int m = 0; m < 2; ++m) {
        for (const auto& entry : tables[m].entries) {
            if (!entry.error.empty()) continue;
            const ExclusionResult excl = apply_overlap_exclusion(in.events, entry.k);
            const DesignMatrix design =
                build_design(series_by_k.at(entry.k), in.events, in.controls, modes[m], excl,
                             cfg.measure_enum(), cfg.design_options());
            write_run_outputs(cfg, hash, modes[m], series_by_k.at(entry.k), design, entry.fit,
                              in.events, excl);
        }
    }
    write_exclusion_log(cfg, hash, in.residuals.residuals.dates, excl_by_k);

    // machine-readable sweep table
    std::string csv = "# config_hash=" + hash + "\n";
    csv += "k,mode,variable,coef,p,signif_5pct,r2,adj_r2,n,error\n";
    json jsweep;
    jsweep["config_hash"] = hash;
    jsweep["measure"] = cfg.measure;
    json jmodes;
    for (int m = 0; m < 2; ++m) {
        json jentries = json::array();
        for (const auto& entry : tables[m].entries) {
            json je{{"k", entry.k},       {"r2", entry.r2}, {"adj_r2", entry.adj_r2},
                    {"n", static_cast<long>(entry.n)}, {"error", entry.error}};
            json jcells = json::object();
            for (const auto& [name, cell] : entry.event_cells) {
                jcells[name] = {{"coef", cell.coef},
                                {"p", cell.pvalue},
                                {"signif_5pct", cell.significant_5pct}};
                csv += std::to_string(entry.k) + "," + mode_name(modes[m]) + "," + name + "," +
                       fmt(cell.coef) + "," + fmt(cell.pvalue) + "," +
                       (cell.significant_5pct ? "1" : "0") + "," + fmt(entry.r2) + "," +
                       fmt(entry.adj_r2) + "," + std::to_string(static_cast<long>(entry.n)) +
                       ",\n";
            }
            if (entry.event_cells.empty())
                csv += std::to_string(entry.k) + "," + mode_name(modes[m]) + ",,,,," +
                       fmt(entry.r2) + "," + fmt(entry.adj_r2) + "," +
                       std::to_string(static_cast<long>(entry.n)) + "," + entry.error + "\n";
            je["cells"] = jcells;
            jentries.push_back(je);
        }
        jmodes[mode_name(modes[m])] = jentries;
    }
    jsweep["modes"] = jmodes;
    write_file(fs::path(cfg.output_dir) / "sweep_table.csv", csv);
    write_file(fs::path(cfg.output_dir) / "sweep.json", jsweep.dump(2) + "\n");

    // pretty per-k table: coefficient with stars, p-value in parentheses
    std::string txt = "config_hash: " + hash + "\n";
    for (int m = 0; m < 2; ++m) {
        txt += "\n" + mode_name(modes[m]) + " model (dependent variable: delta Fiedler, measure=" +
               cfg.measure + ")\n";
        std::vector<std::string> vars;
        for (const auto& entry : tables[m].entries)
            for (const auto& [name, cell] : entry.event_cells)
                if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
        char buf[64];
        txt += "variable";
        for (const auto& entry : tables[m].entries) {
            std::snprintf(buf, sizeof(buf), "%12s", ("k=" + std::to_string(entry.k)).c_str());
            txt += buf;
        }
        txt += "\n";
        for (const auto& var : vars) {
            txt += var + std::string(var.size() < 8 ? 8 - var.size() : 1, ' ');
            std::string pline(8, ' ');
            for (const auto& entry : tables[m].entries) {
                const auto it = entry.event_cells.find(var);
                if (it == entry.event_cells.end()) {
                    std::snprintf(buf, sizeof(buf), "%12s", "-");
                    txt += buf;
                    std::snprintf(buf, sizeof(buf), "%12s", "");
                    pline += buf;
                } else {
                    std::snprintf(buf, sizeof(buf), "%12s",
                                  (fmtcoef(it->second.coef) + stars(it->second.pvalue)).c_str());
                    txt += buf;
                    std::snprintf(buf, sizeof(buf), "%12s",
                                  ("(" + fmtcoef(it->second.pvalue) + ")").c_str());
                    pline += buf;
                }
            }
            txt += "\n" + pline + "\n";
        }
        txt += "r2      ";
        for (const auto& entry : tables[m].entries) {
            std::snprintf(buf, sizeof(buf), "%12s", fmtcoef(entry.r2).c_str());
            txt += buf;
        }
        txt += "\nn       ";
        for (const auto& entry : tables[m].entries) {
            std::snprintf(buf, sizeof(buf), "%12ld", static_cast<long>(entry.n));
            txt += buf;
        }
        txt += "\n";
    }
    write_file(fs::path(cfg.output_dir) / "sweep_table.txt", txt);

    out << "sweep complete for k in [" << cfg.k_min << ", " << cfg.k_max << "], outputs in "
        << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
    const fs::path sweep_path = fs::path(cfg.output_dir) / "sweep.json";
    std::ifstream in(sweep_path);
    if (!in) throw MissingResults("no sweep results at " + sweep_path.string() +
                                  " (run `sweep` first)");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw MissingResults("unreadable sweep results: " + std::string(e.what()));
    }
    const std::string hash = j.value("config_hash", "");

    for (const std::string mode : {"baseline", "tone"}) {
        if (!j["modes"].contains(mode)) continue;
        std::map<std::string, PlotSeries> by_var;
        PlotSeries r2_series{mode, {}};
        for (const auto& entry : j["modes"][mode]) {
            if (!entry.value("error", std::string()).empty()) continue;
            const double k = entry["k"].get<double>();
            r2_series.points.push_back({k, entry["r2"].get<double>(), false});
            for (const auto& [name, cell] : entry["cells"].items()) {
                auto& series = by_var[name];
                series.name = name;
                series.points.push_back(
                    {k, cell["coef"].get<double>(), cell["signif_5pct"].get<bool>()});
            }
        }
        if (!by_var.empty()) {
            std::vector<PlotSeries> series;
            for (auto& [name, s] : by_var) series.push_back(std::move(s));
            write_file(fs::path(cfg.output_dir) / ("fig_coeff_" + mode + ".svg"),
                       svg_marker_chart("Event coefficients across horizons (" + mode + ")",
                                        "window length k (trading days)", "coefficient", series,
                                        hash));
            out << "wrote fig_coeff_" << mode << ".svg\n";
        }
    }

    // R-squared comparison across both models
    std::vector<PlotSeries> r2s;
    for (const std::string mode : {"baseline", "tone"}) {
        if (!j["modes"].contains(mode)) continue;
        PlotSeries s{mode, {}};
        for (const auto& entry : j["modes"][mode])
            if (entry.value("error", std::string()).empty())
                s.points.push_back({entry["k"].get<double>(), entry["r2"].get<double>(), false});
        if (!s.points.empty()) r2s.push_back(std::move(s));
    }
    write_file(fs::path(cfg.output_dir) / "fig_r2.svg",
               svg_line_chart("Model fit across horizons", "window length k (trading days)",
                              "R-squared", r2s, hash));
    out << "wrote fig_r2.svg\n";
    return kExitOk;
}

int cmd_synth_demo(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    synth::SynthConfig sc;
    sc.n_stocks = cfg.synth_stocks;
    sc.n_sectors = cfg.synth_sectors;
    sc.n_days = cfg.synth_days;
    sc.rho_in = cfg.synth_rho_in;
    sc.rho_out = cfg.synth_rho_out;
    sc.break_delta = cfg.synth_delta;
    sc.break_horizon = cfg.synth_break_horizon;
    sc.seed = cfg.seed;
    // tones cycle hawkish/dovish/neutral; hawkish fragments, dovish
    // consolidates, neutral leaves the structure alone
    sc.events = synth::evenly_spaced_events(
        sc, cfg.synth_events, cfg.synth_event_spacing, 2 * cfg.k_max + 1,
        {{synth::BreakType::fragment, Tone::hawkish},
         {synth::BreakType::consolidate, Tone::dovish},
         {synth::BreakType::none, Tone::neutral}});
    const synth::SynthBundle bundle = synth::gen_bundle(sc);
    const std::string hash_line = "# config_hash=" + config_hash(cfg) + "\n";

    const fs::path dir(cfg.output_dir);
    {
        std::string csv = hash_line + "date";
        for (const auto& t : bundle.prices.tickers) csv += "," + t;
        csv += "\n";
        for (Eigen::Index r = 0; r < bundle.prices.n_dates(); ++r) {
            csv += bundle.prices.dates[static_cast<std::size_t>(r)];
            for (Eigen::Index c = 0; c < bundle.prices.n_tickers(); ++c)
                csv += "," + fmt(bundle.prices.values(r, c));
            csv += "\n";
        }
        write_file(dir / "prices.csv", csv);
    }
    {
        std::string csv = hash_line + "ticker,sector\n";
        for (const auto& [t, s] : bundle.sectors.sector_of) csv += t + "," + s + "\n";
        write_file(dir / "sectors.csv", csv);
    }
    {
        std::string csv = hash_line + "date,tone\n";
        for (const auto& e : bundle.events.entries)
            csv += e.date + "," + tone_name(e.tone) + "\n";
        write_file(dir / "events.csv", csv);
    }
    {
        std::string csv = hash_line + "date,vix,spx_ret,y2,y10,twi\n";
        for (std::size_t r = 0; r < bundle.controls.dates.size(); ++r) {
            csv += bundle.controls.dates[r];
            for (int c = 0; c < 5; ++c)
                csv += "," + fmt(bundle.controls.values(static_cast<Eigen::Index>(r), c));
            csv += "\n";
        }
        write_file(dir / "controls.csv", csv);
    }
    out << "demo bundle written to " << cfg.output_dir
        << " (prices.csv, sectors.csv, events.csv, controls.csv)\n";
    out << "events: " << bundle.events.entries.size() << ", stocks: " << cfg.synth_stocks
        << ", days: " << cfg.synth_days << "\n";
    return kExitOk;
}

int exit_code_for(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const AlignmentError*>(&e)) return kExitAlignment;
    if (dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const InvalidCovariance*>(&e) ||
        dynamic_cast<const CollinearDesign*>(&e) || dynamic_cast<const DegenerateSample*>(&e) ||
        dynamic_cast<const Singular*>(&e) || dynamic_cast<const RankDeficientFactors*>(&e) ||
        dynamic_cast<const EmptyWindow*>(&e) || dynamic_cast<const EmptyHypergraph*>(&e) ||
        dynamic_cast<const EmptyGraph*>(&e) || dynamic_cast<const TooLarge*>(&e))
        return kExitNumerical;
    if (dynamic_cast<const Error*>(&e)) return kExitInput;
    return 1;
}

}  // namespace netspect
