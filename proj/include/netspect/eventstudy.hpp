// Event-study layer: per-date connectivity deltas over symmetric k-windows,
// overlap exclusion, regression design construction, OLS with classical or
// HC1 inference, and the horizon sweep.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netspect/marketdata.hpp"
#include "netspect/netbuild.hpp"
#include "netspect/residualize.hpp"

namespace netspect {

enum class Measure { hypergraph, graph };

// Everything the per-window network pipeline needs. min_stock_obs and
// min_pair_obs of 0 mean "derive from k" (ceil(0.8k) and max(4, ceil(0.8k))).
struct PipelineConfig {
    int k = 7;
    double theta_intra = 0.30;
    double theta_inter = 0.50;
    bool absolute_threshold = false;
    int min_stock_obs = 0;
    int min_pair_obs = 0;
    int min_window_stocks = 30;  // windows with fewer survivors are invalid
    CliqueOptions cliques;
    Measure measure = Measure::hypergraph;
    bool emit_graph_lambda2 = true;  // robustness column alongside the primary
    bool dump_spectra = false;       // keep each window's sorted eigenvalues
    int threads = 0;                 // 0 = hardware concurrency

    int effective_min_stock_obs() const;
    int effective_min_pair_obs() const;
};

// Outcome of one window's network build.
struct WindowOutcome {
    bool valid = false;          // enough surviving stocks
    int n_stocks = 0;            // correlation-stage survivors
    int n_edges = 0;
    int n_cliques = 0;
    int n_covered = 0;
    bool fallback_used = false;
    bool truncated = false;
    bool degenerate = false;     // empty hypergraph (lambda2 = 0)
    double lambda2_hyper = 0.0;
    double lambda2_graph = 0.0;
    bool graph_degenerate = false;
    std::vector<double> spectrum;  // sorted eigenvalues, only with dump_spectra
};

WindowOutcome compute_window(const Eigen::MatrixXd& values,
                             const std::vector<std::string>& tickers, const SectorMap& sectors,
                             const WindowSpec& window, const PipelineConfig& cfg);

struct DeltaRow {
    int date_index = 0;
    std::string date;
    bool valid = false;
    double delta_hyper = 0.0;
    double delta_graph = 0.0;
    WindowOutcome pre, post;

    double delta(Measure m) const { return m == Measure::hypergraph ? delta_hyper : delta_graph; }
};

struct DeltaSeries {
    int k = 0;
    std::vector<DeltaRow> rows;  // one per reference date, calendar order
    int n_valid() const;
};

/// Full netbuild -> spectral pipeline on every reference date with complete
/// k-windows; parallel across dates, output independent of worker count.
DeltaSeries delta_fiedler_series(const ResidualPanel& panel, const SectorMap& sectors,
                                 const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// events on the trading calendar
// ---------------------------------------------------------------------------

struct MappedEvent {
    int date_index;     // trading-calendar index
    std::string date;   // trading date actually used
    Tone tone;
    bool shifted;       // original date was off-calendar, mapped forward
};

struct MappedEvents {
    std::vector<MappedEvent> events;          // sorted by date_index, unique
    std::vector<std::string> dropped;         // events outside the calendar span
    std::vector<std::string> shifted_notes;
};

/// Map event dates onto the trading calendar; off-calendar dates move to the
/// next trading day (with a note), dates beyond the calendar are dropped.
MappedEvents map_events_to_calendar(const EventCalendar& events,
                                    const std::vector<std::string>& calendar);

struct ExclusionResult {
    std::set<int> excluded;                        // event date indices
    std::vector<std::pair<int, int>> conflicts;    // overlapping event pairs
};

/// Strict overlap exclusion: whenever the full windows [e-k, e+k] of two
/// events intersect (trading-day arithmetic), both event dates are excluded.
ExclusionResult apply_overlap_exclusion(const MappedEvents& events, int k);

// ---------------------------------------------------------------------------
// regression design
// ---------------------------------------------------------------------------

enum class DesignMode { baseline, tone };
enum class Inference { classical, hc1 };

struct DesignOptions {
    bool include_controls = true;
    bool strict_exclusion = false;  // also drop non-event rows inside any event window
};

struct DesignMatrix {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;                       // first column = intercept
    std::vector<std::string> colnames;
    std::vector<std::string> row_dates;
    std::vector<std::string> event_columns;  // subset of colnames
    std::vector<std::string> dropped_log;    // "date: reason"

    Eigen::Index n() const { return y.size(); }
};

/// Assemble y = delta and X = [1, event dummies, controls] over valid delta
/// rows; excluded event dates and rows with missing cells are dropped and
/// logged. With no mapped events the event columns are omitted.
DesignMatrix build_design(const DeltaSeries& series, const MappedEvents& events,
                          const ControlPanel& controls, DesignMode mode,
                          const ExclusionResult& exclusion, Measure measure,
                          const DesignOptions& opts = {});

struct RegressionResult {
    std::vector<std::string> names;
    Eigen::VectorXd coef, se, tstat, pvalue;
    double f_stat = 0.0;
    double f_pvalue = 0.0;
    double df1 = 0.0, df2 = 0.0;
    double r2 = 0.0, adj_r2 = 0.0;
    double aic = 0.0, bic = 0.0;
    Eigen::Index n = 0;
    int n_params = 0;
    Inference inference = Inference::classical;

    std::optional<std::size_t> index_of(const std::string& name) const;
};

/// OLS via Householder QR. Classical standard errors by default, HC1 on
/// request; F tests all non-intercept regressors jointly; AIC/BIC use the
/// Gaussian concentrated log-likelihood n*ln(RSS/n) + penalty.
RegressionResult ols_fit(const DesignMatrix& design, Inference inference = Inference::classical);

// ---------------------------------------------------------------------------
// k sweep
// ---------------------------------------------------------------------------

struct SweepCell {
    double coef = 0.0;
    double pvalue = 1.0;
    bool significant_5pct = false;
};

struct SweepEntry {
    int k = 0;
    std::map<std::string, SweepCell> event_cells;  // by event column name
    double r2 = 0.0;
    double adj_r2 = 0.0;
    Eigen::Index n = 0;
    std::string error;  // non-empty when this k failed
    RegressionResult fit;
};

struct SweepTable {
    DesignMode mode = DesignMode::baseline;
    Measure measure = Measure::hypergraph;
    std::vector<SweepEntry> entries;  // ascending k
};

/// One regression per horizon k in [k_min, k_max]; per-k failures are
/// recorded and the sweep continues. `precomputed` supplies already-built
/// DeltaSeries by k so callers can share them across modes.
SweepTable k_sweep(const ResidualPanel& panel, const SectorMap& sectors,
                   const MappedEvents& events, const ControlPanel& controls, int k_min, int k_max,
                   DesignMode mode, const PipelineConfig& base_cfg,
                   const DesignOptions& design_opts = {}, Inference inference = Inference::classical,
                   const std::map<int, DeltaSeries>* precomputed = nullptr);

}  // namespace netspect
