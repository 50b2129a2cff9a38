// Run configuration: a flat TOML-style key = value file plus command-line
// overrides (overrides win). Serialization is canonical so configs round-trip
// losslessly and hash stably.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netspect/eventstudy.hpp"
#include "netspect/marketdata.hpp"

namespace netspect {

struct RunConfig {
    // inputs / outputs
    std::string prices_path = "prices.csv";
    std::string sectors_path = "sectors.csv";
    std::string events_path = "events.csv";
    std::string controls_path = "controls.csv";
    std::string output_dir = "out";

    // analysis span (inclusive; empty = full price calendar)
    std::string start_date;
    std::string end_date;

    // horizons
    int k = 7;
    int k_min = 5;
    int k_max = 20;

    // returns hygiene
    std::string clean_policy = "winsorize";  // winsorize | drop
    double clean_bound = 0.50;

    // residualization
    std::string factor_tickers = "SPY,QQQ";
    int min_beta_obs = 60;
    bool rolling_betas = false;
    int rolling_window = 250;

    // network construction
    double theta_intra = 0.30;
    double theta_inter = 0.50;
    bool absolute_threshold = false;
    int min_stock_obs = 0;  // 0 = ceil(0.8k)
    int min_pair_obs = 0;   // 0 = max(4, ceil(0.8k))
    int min_window_stocks = 30;
    int clique_min = 3;
    int clique_max = 12;
    int clique_cap = 400;  // 0 = uncapped
    std::uint64_t clique_budget = 5'000'000;
    bool wall_clock_budget = false;
    double wall_clock_seconds = 0.75;
    bool split_oversize = false;

    // measurement and inference
    std::string measure = "hypergraph";   // hypergraph | graph
    bool emit_graph_lambda2 = true;
    std::string inference = "classical";  // classical | robust
    bool strict_exclusion = false;
    bool include_controls = true;

    // execution
    int threads = 0;
    bool dump_windows = false;
    bool dump_spectra = false;

    // synth-demo
    std::uint64_t seed = 12345;
    int synth_stocks = 60;
    int synth_sectors = 6;
    int synth_days = 600;
    int synth_events = 24;
    int synth_event_spacing = 22;
    double synth_rho_in = 0.50;
    double synth_rho_out = 0.05;
    double synth_delta = 0.40;
    int synth_break_horizon = 7;

    void validate() const;  // range checks; throws Error

    PipelineConfig pipeline(int horizon) const;
    ResidualizeOptions residualize_options() const;
    std::vector<std::string> factor_ticker_list() const;
    CleanPolicy clean_policy_enum() const;
    Measure measure_enum() const;
    Inference inference_enum() const;
    DesignOptions design_options() const;
};

/// Parse `key = value` lines ('#' comments, blank lines ignored). Unknown
/// keys are rejected.
RunConfig parse_config_file(const std::string& path);

/// Apply `key=value` override strings on top of a config.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

/// Set one key. Throws Error on unknown key or unparseable value.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Canonical serialization: sorted keys, round-trip-exact numeric formatting.
/// With include_execution = false, fields that cannot change results
/// (output_dir, threads, dump_windows) are left out; that form feeds the
/// config echo and hash so reruns with different worker counts or output
/// locations stay byte-identical.
std::string serialize_config(const RunConfig& cfg, bool include_execution = true);

/// FNV-1a 64-bit hash of the canonical analysis serialization, 16 hex chars.
std::string config_hash(const RunConfig& cfg);

}  // namespace netspect
