#include "netspect/eventstudy.hpp"

#include <algorithm>
#include <cmath>

#include "netspect/eig.hpp"
#include "netspect/errors.hpp"
#include "netspect/parallel.hpp"
#include "netspect/spectral.hpp"
#include "netspect/stats.hpp"

namespace netspect {

int PipelineConfig::effective_min_stock_obs() const {
    if (min_stock_obs > 0) return min_stock_obs;
    return (4 * k + 4) / 5;  // ceil(0.8 k)
}

int PipelineConfig::effective_min_pair_obs() const {
    if (min_pair_obs > 0) return min_pair_obs;
    return std::max(4, (4 * k + 4) / 5);
}

// ---------------------------------------------------------------------------
// per-window pipeline
// ---------------------------------------------------------------------------

WindowOutcome compute_window(const Eigen::MatrixXd& values,
                             const std::vector<std::string>& tickers, const SectorMap& sectors,
                             const WindowSpec& window, const PipelineConfig& cfg) {
    WindowOutcome out;
    CorrMatrix corr;
    try {
        corr = correlation_matrix(values, tickers, window, cfg.effective_min_pair_obs(),
                                  cfg.effective_min_stock_obs());
    } catch (const EmptyWindow&) {
        return out;
    }
    out.n_stocks = static_cast<int>(corr.tickers.size());
    if (out.n_stocks < cfg.min_window_stocks) return out;
    out.valid = true;

    const Adjacency adj = threshold_adjacency(corr, sectors, cfg.theta_intra, cfg.theta_inter,
                                              cfg.absolute_threshold);
    out.n_edges = adj.n_edges;

    const CliqueSet cliques = enumerate_cliques(adj, cfg.cliques);
    out.n_cliques = static_cast<int>(cliques.members.size());
    out.fallback_used = cliques.fallback_used;
    out.truncated = cliques.truncated;

    const Hypergraph hg = build_hypergraph(cliques, adj.tickers);
    out.n_covered = static_cast<int>(hg.covered.size());
    if (hg.degenerate || hg.n_covered() < 2) {
        out.degenerate = true;
        out.lambda2_hyper = 0.0;
    } else {
        const SymMatrix laplacian = zhou_laplacian(hg);
        out.lambda2_hyper = fiedler(laplacian).lambda2;
        if (cfg.dump_spectra) {
            const EigResult eig = eig_symmetric(laplacian.m);
            out.spectrum.assign(eig.values.data(), eig.values.data() + eig.values.size());
        }
    }

    if (cfg.emit_graph_lambda2 || cfg.measure == Measure::graph) {
        try {
            out.lambda2_graph = fiedler(graph_laplacian(adj)).lambda2;
        } catch (const EmptyGraph&) {
            out.graph_degenerate = true;
            out.lambda2_graph = 0.0;
        }
    }
    return out;
}

int DeltaSeries::n_valid() const {
    int n = 0;
    for (const auto& r : rows)
        if (r.valid) ++n;
    return n;
}

DeltaSeries delta_fiedler_series(const ResidualPanel& panel, const SectorMap& sectors,
                                 const PipelineConfig& cfg) {
    const auto windows = make_windows(static_cast<int>(panel.residuals.n_dates()), cfg.k);
    DeltaSeries series;
    series.k = cfg.k;
    series.rows.resize(windows.size());

    const Eigen::MatrixXd& values = panel.residuals.values;
    const std::vector<std::string>& tickers = panel.residuals.tickers;

    parallel_for(windows.size(), cfg.threads, [&](std::size_t i) {
        const auto& [pre, post] = windows[i];
        DeltaRow row;
        row.date_index = pre.reference;
        row.date = panel.residuals.dates[static_cast<std::size_t>(pre.reference)];
        row.pre = compute_window(values, tickers, sectors, pre, cfg);
        row.post = compute_window(values, tickers, sectors, post, cfg);
        row.valid = row.pre.valid && row.post.valid;
        if (row.valid) {
            row.delta_hyper = row.post.lambda2_hyper - row.pre.lambda2_hyper;
            row.delta_graph = row.post.lambda2_graph - row.pre.lambda2_graph;
        }
        series.rows[i] = std::move(row);
    });
    return series;
}

// ---------------------------------------------------------------------------
// events and exclusion
// ---------------------------------------------------------------------------

MappedEvents map_events_to_calendar(const EventCalendar& events,
                                    const std::vector<std::string>& calendar) {
    MappedEvents out;
    std::set<int> used;
    for (const auto& e : events.entries) {
        const auto it = std::lower_bound(calendar.begin(), calendar.end(), e.date);
        if (it == calendar.end()) {
            out.dropped.push_back(e.date);
            continue;
        }
        const int idx = static_cast<int>(it - calendar.begin());
        if (!used.insert(idx).second) {
            out.dropped.push_back(e.date + " (collides with another event after mapping)");
            continue;
        }
        const bool shifted = *it != e.date;
        if (shifted)
            out.shifted_notes.push_back(e.date + " -> " + *it);
        out.events.push_back({idx, *it, e.tone, shifted});
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const MappedEvent& a, const MappedEvent& b) { return a.date_index < b.date_index; });
    return out;
}

ExclusionResult apply_overlap_exclusion(const MappedEvents& events, int k) {
    ExclusionResult out;
    const auto& ev = events.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            // full windows [e-k, e+k] intersect iff the gap is <= 2k trading days
            if (ev[j].date_index - ev[i].date_index <= 2 * k) {
                out.excluded.insert(ev[i].date_index);
                out.excluded.insert(ev[j].date_index);
                out.conflicts.emplace_back(ev[i].date_index, ev[j].date_index);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// design
// ---------------------------------------------------------------------------

DesignMatrix build_design(const DeltaSeries& series, const MappedEvents& events,
                          const ControlPanel& controls, DesignMode mode,
                          const ExclusionResult& exclusion, Measure measure,
                          const DesignOptions& opts) {
    std::map<int, Tone> tone_at;
    for (const auto& e : events.events) tone_at[e.date_index] = e.tone;

    std::map<std::string, Eigen::Index> control_row;
    for (std::size_t i = 0; i < controls.dates.size(); ++i)
        control_row[controls.dates[i]] = static_cast<Eigen::Index>(i);

    const bool have_events = !events.events.empty();
    const int k = series.k;

    struct Raw {
        std::string date;
        double y;
        int dummy;  // -1 none, else Tone index
        std::vector<double> ctrl;
    };
    std::vector<Raw> raws;
    DesignMatrix design;

    const auto& ctrl_names = ControlPanel::column_names();
    for (const auto& row : series.rows) {
        if (!row.valid) continue;
        const auto tone_it = tone_at.find(row.date_index);
        const bool is_event = tone_it != tone_at.end();
        if (is_event && exclusion.excluded.count(row.date_index)) {
            design.dropped_log.push_back(row.date + ": excluded_overlap");
            continue;
        }
        if (opts.strict_exclusion && !is_event) {
            bool inside = false;
            for (const auto& e : events.events) {
                if (std::abs(e.date_index - row.date_index) <= k) {
                    inside = true;
                    break;
                }
            }
            if (inside) {
                design.dropped_log.push_back(row.date + ": strict_window");
                continue;
            }
        }
        const double y = row.delta(measure);
        if (is_missing(y)) {
            design.dropped_log.push_back(row.date + ": missing_delta");
            continue;
        }
        Raw raw;
        raw.date = row.date;
        raw.y = y;
        raw.dummy = is_event ? static_cast<int>(tone_it->second) : -1;
        if (opts.include_controls) {
            const auto crow = control_row.find(row.date);
            bool ok = crow != control_row.end();
            if (ok) {
                for (const auto& name : ctrl_names) {
                    const double v = controls.column(name)(crow->second);
                    raw.ctrl.push_back(v);
                    if (is_missing(v)) ok = false;
                }
            }
            if (!ok) {
                design.dropped_log.push_back(row.date + ": missing_control");
                continue;
            }
        }
        raws.push_back(std::move(raw));
    }

    // event columns appear only when some retained row activates them
    std::vector<std::pair<std::string, int>> dummy_cols;  // name, tone index (-1 = any event)
    if (have_events) {
        if (mode == DesignMode::baseline) {
            bool any = std::any_of(raws.begin(), raws.end(),
                                   [](const Raw& r) { return r.dummy >= 0; });
            if (any) dummy_cols.emplace_back("event", -1);
        } else {
            for (Tone t : {Tone::hawkish, Tone::dovish, Tone::neutral}) {
                bool any = std::any_of(raws.begin(), raws.end(), [&](const Raw& r) {
                    return r.dummy == static_cast<int>(t);
                });
                if (any) dummy_cols.emplace_back(tone_name(t), static_cast<int>(t));
            }
        }
    }

    design.colnames.push_back("intercept");
    for (const auto& [name, tone] : dummy_cols) {
        design.colnames.push_back(name);
        design.event_columns.push_back(name);
    }
    if (opts.include_controls)
        design.colnames.insert(design.colnames.end(), ctrl_names.begin(), ctrl_names.end());

    const Eigen::Index n = static_cast<Eigen::Index>(raws.size());
    const Eigen::Index p = static_cast<Eigen::Index>(design.colnames.size());
    design.y.resize(n);
    design.x.resize(n, p);
    design.row_dates.reserve(raws.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Raw& raw = raws[static_cast<std::size_t>(i)];
        design.row_dates.push_back(raw.date);
        design.y(i) = raw.y;
        Eigen::Index c = 0;
        design.x(i, c++) = 1.0;
        for (const auto& [name, tone] : dummy_cols)
            design.x(i, c++) =
                (raw.dummy >= 0 && (tone < 0 || raw.dummy == tone)) ? 1.0 : 0.0;
        if (opts.include_controls)
            for (double v : raw.ctrl) design.x(i, c++) = v;
    }
    return design;
}

// ---------------------------------------------------------------------------
// OLS
// ---------------------------------------------------------------------------

std::optional<std::size_t> RegressionResult::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

RegressionResult ols_fit(const DesignMatrix& design, Inference inference) {
    const Eigen::Index n = design.n();
    const Eigen::Index p = design.x.cols();
    if (n <= p + 2) throw DegenerateSample("need n > p + 2 observations (n=" +
                                           std::to_string(n) + ", p=" + std::to_string(p) + ")");

    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivqr(design.x);
        pivqr.setThreshold(1e-10);
        if (pivqr.rank() < p) {
            std::string cols;
            const auto& perm = pivqr.colsPermutation().indices();
            for (Eigen::Index i = pivqr.rank(); i < p; ++i) {
                if (!cols.empty()) cols += ", ";
                cols += design.colnames[static_cast<std::size_t>(perm(i))];
            }
            throw CollinearDesign("design matrix is rank deficient; offending columns: " + cols);
        }
    }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(design.x);
    RegressionResult res;
    res.names = design.colnames;
    res.coef = qr.solve(design.y);

    const Eigen::VectorXd resid = design.y - design.x * res.coef;
    const double rss = resid.squaredNorm();
    const double ybar = design.y.mean();
    const double tss = (design.y.array() - ybar).square().sum();
    const double dof = static_cast<double>(n - p);

    // (X'X)^{-1} = R^{-1} R^{-T} from the QR factor
    const Eigen::MatrixXd r_factor =
        qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r_factor.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();

    Eigen::MatrixXd cov;
    if (inference == Inference::classical) {
        cov = (rss / dof) * xtx_inv;
    } else {
        // HC1: sandwich with squared residual weights and small-sample scale
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
        for (Eigen::Index i = 0; i < n; ++i)
            meat.noalias() += resid(i) * resid(i) * design.x.row(i).transpose() * design.x.row(i);
        cov = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / dof);
    }

    res.se = cov.diagonal().array().max(0.0).sqrt();
    res.tstat.resize(p);
    res.pvalue.resize(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        res.tstat(i) = res.se(i) > 0 ? res.coef(i) / res.se(i)
                                     : std::numeric_limits<double>::infinity();
        res.pvalue(i) = t_pvalue_two_sided(res.tstat(i), dof);
    }

    res.r2 = tss > 0 ? 1.0 - rss / tss : 0.0;
    res.adj_r2 = 1.0 - (1.0 - res.r2) * static_cast<double>(n - 1) / dof;
    res.df1 = static_cast<double>(p - 1);
    res.df2 = dof;
    if (p > 1 && res.r2 < 1.0) {
        res.f_stat = (res.r2 / res.df1) / ((1.0 - res.r2) / res.df2);
        res.f_pvalue = f_pvalue(res.f_stat, res.df1, res.df2);
    } else if (p > 1) {
        res.f_stat = std::numeric_limits<double>::infinity();
        res.f_pvalue = 0.0;
    } else {
        res.f_stat = std::numeric_limits<double>::quiet_NaN();
        res.f_pvalue = std::numeric_limits<double>::quiet_NaN();
    }

    const double np = static_cast<double>(n);
    res.aic = np * std::log(rss / np) + 2.0 * static_cast<double>(p);
    res.bic = np * std::log(rss / np) + static_cast<double>(p) * std::log(np);
    res.n = n;
    res.n_params = static_cast<int>(p);
    res.inference = inference;
    return res;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

SweepTable k_sweep(const ResidualPanel& panel, const SectorMap& sectors,
                   const MappedEvents& events, const ControlPanel& controls, int k_min, int k_max,
                   DesignMode mode, const PipelineConfig& base_cfg,
                   const DesignOptions& design_opts, Inference inference,
                   const std::map<int, DeltaSeries>* precomputed) {
    if (k_min > k_max) throw std::invalid_argument("k_sweep: k_min > k_max");
    SweepTable table;
    table.mode = mode;
    table.measure = base_cfg.measure;
    for (int k = k_min; k <= k_max; ++k) {
        SweepEntry entry;
        entry.k = k;
        try {
            PipelineConfig cfg = base_cfg;
            cfg.k = k;
            const DeltaSeries* series = nullptr;
            DeltaSeries local;
            if (precomputed && precomputed->count(k)) {
                series = &precomputed->at(k);
            } else {
                local = delta_fiedler_series(panel, sectors, cfg);
                series = &local;
            }
            const ExclusionResult excl = apply_overlap_exclusion(events, k);
            const DesignMatrix design =
                build_design(*series, events, controls, mode, excl, cfg.measure, design_opts);
            entry.fit = ols_fit(design, inference);
            entry.r2 = entry.fit.r2;
            entry.adj_r2 = entry.fit.adj_r2;
            entry.n = entry.fit.n;
            for (const auto& name : design.event_columns) {
                const auto idx = entry.fit.index_of(name);
                if (!idx) continue;
                SweepCell cell;
                cell.coef = entry.fit.coef(static_cast<Eigen::Index>(*idx));
                cell.pvalue = entry.fit.pvalue(static_cast<Eigen::Index>(*idx));
                cell.significant_5pct = cell.pvalue < 0.05;
                entry.event_cells[name] = cell;
            }
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        table.entries.push_back(std::move(entry));
    }
    return table;
}

}  // namespace netspect
