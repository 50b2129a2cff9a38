// Per-window network construction: pairwise-complete correlations,
// sector-aware dual-threshold adjacency, bounded maximal-clique enumeration,
// and clique-to-hyperedge lifting.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netspect/marketdata.hpp"

namespace netspect {

// ---------------------------------------------------------------------------
// windows
// ---------------------------------------------------------------------------

enum class WindowSide { pre, post };

// Inclusive index range into the trading calendar. Pre = [t-k, t-1],
// post = [t+1, t+k]; the reference day itself belongs to neither side.
struct WindowSpec {
    int reference = 0;
    int k = 0;
    WindowSide side = WindowSide::pre;
    int begin = 0;
    int end = 0;

    int length() const { return end - begin + 1; }
};

/// One (pre, post) pair per reference day with k full trading days on both
/// sides; truncated endpoints are skipped. Requires 5 <= k <= 20.
std::vector<std::pair<WindowSpec, WindowSpec>> make_windows(int n_dates, int k);

// ---------------------------------------------------------------------------
// correlation
// ---------------------------------------------------------------------------

struct CorrMatrix {
    std::vector<std::string> tickers;   // survivors, in panel order
    std::vector<Eigen::Index> panel_col;  // survivor -> source panel column
    Eigen::MatrixXd rho;                // NaN where a pair lacks observations
    Eigen::MatrixXi nobs;               // joint valid observations per pair
};

/// Pairwise-complete Pearson correlations over a window slice. Stocks with
/// fewer than min_stock_obs valid in-window days are dropped; pairs with
/// fewer than min_pair_obs joint observations get a missing entry.
/// Throws EmptyWindow when fewer than 2 stocks survive.
CorrMatrix correlation_matrix(const Eigen::MatrixXd& values,
                              const std::vector<std::string>& tickers, const WindowSpec& window,
                              int min_pair_obs, int min_stock_obs);

// ---------------------------------------------------------------------------
// adjacency
// ---------------------------------------------------------------------------

// Dense bitset rows keep the clique search branch-free on neighbor tests.
struct BitMatrix {
    int n = 0;
    int words_per_row = 0;
    std::vector<std::uint64_t> bits;

    void resize(int n_) {
        n = n_;
        words_per_row = (n + 63) / 64;
        bits.assign(static_cast<std::size_t>(n) * words_per_row, 0);
    }
    void set(int i, int j) {
        bits[static_cast<std::size_t>(i) * words_per_row + j / 64] |= 1ULL << (j % 64);
    }
    bool test(int i, int j) const {
        return bits[static_cast<std::size_t>(i) * words_per_row + j / 64] >> (j % 64) & 1ULL;
    }
    const std::uint64_t* row(int i) const {
        return bits.data() + static_cast<std::size_t>(i) * words_per_row;
    }
};

struct Adjacency {
    std::vector<std::string> tickers;
    BitMatrix adj;            // symmetric, no self loops
    Eigen::MatrixXd weight;   // retained-edge correlation, NaN elsewhere
    int n_edges = 0;

    int n_vertices() const { return adj.n; }
};

/// Edge (i,j) retained iff rho >= theta_intra for same-sector pairs and
/// rho >= theta_inter otherwise (>= inclusive, signed; absolute-value mode
/// compares |rho|). Tickers mapped to sector "UNKNOWN" are treated as
/// cross-sector. Requires 0 < theta_intra <= theta_inter < 1.
Adjacency threshold_adjacency(const CorrMatrix& corr, const SectorMap& sectors,
                              double theta_intra, double theta_inter, bool absolute = false);

// ---------------------------------------------------------------------------
// cliques
// ---------------------------------------------------------------------------

struct CliqueOptions {
    int min_size = 3;
    int max_size = 12;
    std::size_t max_cliques = 400;     // 0 = uncapped
    std::uint64_t step_budget = 5'000'000;  // deterministic expansion budget
    bool wall_clock = false;           // replicate the literal per-window time limit
    double wall_clock_seconds = 0.75;
    bool split_oversize = false;       // emit all max_size-subsets of oversize cliques
};

struct CliqueSet {
    std::vector<std::vector<int>> members;  // vertex indices, each sorted ascending
    bool truncated = false;                 // retention cap applied
    bool fallback_used = false;             // budget exhausted, triangles only
    std::uint64_t steps_used = 0;
};

/// Maximal cliques of size [min_size, max_size] via pivoting Bron-Kerbosch.
/// Oversize maximal cliques are truncated to their lexicographically smallest
/// max_size-subset, or split into all max_size-subsets when split_oversize is
/// set. When the step (or wall-clock) budget is exhausted the result falls
/// back to the full triangle listing. Output is sorted by retention order:
/// size desc, in-clique weight sum desc, lexicographic vertex tuple.
CliqueSet enumerate_cliques(const Adjacency& adj, const CliqueOptions& opts = {});

// ---------------------------------------------------------------------------
// hypergraph
// ---------------------------------------------------------------------------

struct Hypergraph {
    std::vector<std::string> universe;          // all candidate tickers
    std::vector<std::string> covered;           // tickers in >= 1 hyperedge
    std::vector<std::vector<int>> edges;        // indices into covered, sorted
    std::vector<int> vertex_degree;             // D_v over covered
    std::vector<int> edge_cardinality;          // D_e
    bool degenerate = false;                    // no hyperedges

    Eigen::Index n_covered() const { return static_cast<Eigen::Index>(covered.size()); }
    Eigen::Index n_edges() const { return static_cast<Eigen::Index>(edges.size()); }

    /// Dense 0/1 incidence matrix H (|covered| x |edges|).
    Eigen::MatrixXd incidence() const;
};

/// Assemble H, D_v, D_e from a clique set. Vertices appearing in no clique
/// are recorded as uncovered and excluded from H's rows.
Hypergraph build_hypergraph(const CliqueSet& cliques, const std::vector<std::string>& universe);

}  // namespace netspect
