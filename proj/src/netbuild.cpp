#include "netspect/netbuild.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "netspect/errors.hpp"

namespace netspect {

// ---------------------------------------------------------------------------
// windows
// ---------------------------------------------------------------------------

std::vector<std::pair<WindowSpec, WindowSpec>> make_windows(int n_dates, int k) {
    if (k < 5 || k > 20)
        throw std::invalid_argument("make_windows: horizon k must be in [5, 20]");
    std::vector<std::pair<WindowSpec, WindowSpec>> out;
    for (int t = k; t + k < n_dates; ++t) {
        WindowSpec pre{t, k, WindowSide::pre, t - k, t - 1};
        WindowSpec post{t, k, WindowSide::post, t + 1, t + k};
        out.emplace_back(pre, post);
    }
    return out;
}

// ---------------------------------------------------------------------------
// correlation
// ---------------------------------------------------------------------------

CorrMatrix correlation_matrix(const Eigen::MatrixXd& values,
                              const std::vector<std::string>& tickers, const WindowSpec& window,
                              int min_pair_obs, int min_stock_obs) {
    const Eigen::Index n_rows = values.rows();
    const Eigen::Index n_cols = values.cols();
    if (window.begin < 0 || window.end >= n_rows || window.begin > window.end)
        throw std::invalid_argument("correlation_matrix: window outside panel");
    if (static_cast<Eigen::Index>(tickers.size()) != n_cols)
        throw std::invalid_argument("correlation_matrix: ticker/value shape mismatch");

    const int k = window.length();
    // validity masks per stock; k <= 20 so a 32-bit mask suffices
    std::vector<std::uint32_t> mask(static_cast<std::size_t>(n_cols), 0);
    std::vector<int> valid(static_cast<std::size_t>(n_cols), 0);
    for (Eigen::Index j = 0; j < n_cols; ++j) {
        for (int r = 0; r < k; ++r) {
            if (!is_missing(values(window.begin + r, j))) {
                mask[static_cast<std::size_t>(j)] |= 1u << r;
                ++valid[static_cast<std::size_t>(j)];
            }
        }
    }

    CorrMatrix out;
    for (Eigen::Index j = 0; j < n_cols; ++j) {
        if (valid[static_cast<std::size_t>(j)] >= min_stock_obs) {
            out.tickers.push_back(tickers[static_cast<std::size_t>(j)]);
            out.panel_col.push_back(j);
        }
    }
    const Eigen::Index s = static_cast<Eigen::Index>(out.tickers.size());
    if (s < 2) throw EmptyWindow("fewer than 2 stocks survive the window observation floor");

    out.rho = Eigen::MatrixXd::Constant(s, s, missing_value());
    out.nobs = Eigen::MatrixXi::Zero(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
        out.rho(a, a) = 1.0;
        out.nobs(a, a) = valid[static_cast<std::size_t>(out.panel_col[static_cast<std::size_t>(a)])];
    }

    for (Eigen::Index a = 0; a < s; ++a) {
        const Eigen::Index ca = out.panel_col[static_cast<std::size_t>(a)];
        for (Eigen::Index b = a + 1; b < s; ++b) {
            const Eigen::Index cb = out.panel_col[static_cast<std::size_t>(b)];
            const std::uint32_t joint =
                mask[static_cast<std::size_t>(ca)] & mask[static_cast<std::size_t>(cb)];
            const int m = std::popcount(joint);
            out.nobs(a, b) = out.nobs(b, a) = m;
            if (m < min_pair_obs || m < 2) continue;

            // two-pass: joint means first, then centered products
            double mx = 0, my = 0;
            for (int r = 0; r < k; ++r) {
                if (joint >> r & 1u) {
                    mx += values(window.begin + r, ca);
                    my += values(window.begin + r, cb);
                }
            }
            mx /= m;
            my /= m;
            double sxy = 0, sxx = 0, syy = 0;
            for (int r = 0; r < k; ++r) {
                if (joint >> r & 1u) {
                    const double dx = values(window.begin + r, ca) - mx;
                    const double dy = values(window.begin + r, cb) - my;
                    sxy += dx * dy;
                    sxx += dx * dx;
                    syy += dy * dy;
                }
            }
            if (sxx <= 0.0 || syy <= 0.0) continue;  // constant series: undefined
            double r = sxy / std::sqrt(sxx * syy);
            r = std::clamp(r, -1.0, 1.0);
            out.rho(a, b) = out.rho(b, a) = r;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// adjacency
// ---------------------------------------------------------------------------

Adjacency threshold_adjacency(const CorrMatrix& corr, const SectorMap& sectors,
                              double theta_intra, double theta_inter, bool absolute) {
    if (!(theta_intra > 0.0 && theta_inter < 1.0 && theta_intra <= theta_inter))
        throw std::invalid_argument(
            "threshold_adjacency: need 0 < theta_intra <= theta_inter < 1");

    const int n = static_cast<int>(corr.tickers.size());
    Adjacency out;
    out.tickers = corr.tickers;
    out.adj.resize(n);
    out.weight = Eigen::MatrixXd::Constant(n, n, missing_value());

    std::vector<std::string> sector(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sector[static_cast<std::size_t>(i)] =
            sectors.sector_or_unknown(corr.tickers[static_cast<std::size_t>(i)]);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double rho = corr.rho(i, j);
            if (is_missing(rho)) continue;
            const bool same_sector = sector[static_cast<std::size_t>(i)] ==
                                         sector[static_cast<std::size_t>(j)] &&
                                     sector[static_cast<std::size_t>(i)] != SectorMap::kUnknown;
            const double theta = same_sector ? theta_intra : theta_inter;
            const double value = absolute ? std::abs(rho) : rho;
            if (value >= theta) {
                out.adj.set(i, j);
                out.adj.set(j, i);
                out.weight(i, j) = out.weight(j, i) = rho;
                ++out.n_edges;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// cliques
// ---------------------------------------------------------------------------

namespace {

struct BudgetExhausted {};

using Clock = std::chrono::steady_clock;

struct CliqueSearch {
    const BitMatrix& adj;
    const CliqueOptions& opts;
    int n;
    int words;
    std::uint64_t steps = 0;
    Clock::time_point deadline;
    std::vector<std::vector<int>>& out;

    void charge(std::uint64_t cost = 1) {
        steps += cost;
        if (opts.wall_clock) {
            if ((steps & 0xFF) == 0 && Clock::now() > deadline) throw BudgetExhausted{};
        } else if (steps > opts.step_budget) {
            throw BudgetExhausted{};
        }
    }

    static int count_and(const std::uint64_t* a, const std::uint64_t* b, int words) {
        int c = 0;
        for (int w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
        return c;
    }

    void emit(const std::vector<int>& r) {
        const int size = static_cast<int>(r.size());
        if (size < opts.min_size) return;
        if (size <= opts.max_size) {
            out.push_back(r);
            return;
        }
        std::vector<int> sorted = r;
        std::sort(sorted.begin(), sorted.end());
        if (!opts.split_oversize) {
            sorted.resize(static_cast<std::size_t>(opts.max_size));
            out.push_back(std::move(sorted));
            return;
        }
        // all max_size-subsets in lexicographic order; each emission is
        // charged so a combinatorial blowup trips the fallback
        const int m = opts.max_size;
        std::vector<int> idx(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            charge();
            std::vector<int> subset(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                subset[static_cast<std::size_t>(i)] = sorted[static_cast<std::size_t>(
                    idx[static_cast<std::size_t>(i)])];
            out.push_back(std::move(subset));
            int i = m - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == size - m + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < m; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

    // Bron-Kerbosch with Tomita pivoting on bitset candidate/excluded sets.
    void expand(std::vector<int>& r, std::vector<std::uint64_t>& p, std::vector<std::uint64_t>& x) {
        charge();
        bool p_empty = true, x_empty = true;
        for (int w = 0; w < words; ++w) {
            if (p[static_cast<std::size_t>(w)]) p_empty = false;
            if (x[static_cast<std::size_t>(w)]) x_empty = false;
        }
        if (p_empty && x_empty) {
            emit(r);
            return;
        }
        if (p_empty) return;

        // pivot u maximizing |P & N(u)| over P union X
        int pivot = -1, best = -1;
        for (int w = 0; w < words; ++w) {
            std::uint64_t cand = p[static_cast<std::size_t>(w)] | x[static_cast<std::size_t>(w)];
            while (cand) {
                const int u = w * 64 + std::countr_zero(cand);
                cand &= cand - 1;
                const int c = count_and(p.data(), adj.row(u), words);
                if (c > best) {
                    best = c;
                    pivot = u;
                }
            }
        }

        std::vector<std::uint64_t> ext(static_cast<std::size_t>(words));
        for (int w = 0; w < words; ++w)
            ext[static_cast<std::size_t>(w)] =
                p[static_cast<std::size_t>(w)] & ~adj.row(pivot)[w];

        for (int w = 0; w < words; ++w) {
            std::uint64_t vs = ext[static_cast<std::size_t>(w)];
            while (vs) {
                const int v = w * 64 + std::countr_zero(vs);
                vs &= vs - 1;
                std::vector<std::uint64_t> np(static_cast<std::size_t>(words)),
                    nx(static_cast<std::size_t>(words));
                for (int ww = 0; ww < words; ++ww) {
                    np[static_cast<std::size_t>(ww)] =
                        p[static_cast<std::size_t>(ww)] & adj.row(v)[ww];
                    nx[static_cast<std::size_t>(ww)] =
                        x[static_cast<std::size_t>(ww)] & adj.row(v)[ww];
                }
                r.push_back(v);
                expand(r, np, nx);
                r.pop_back();
                p[static_cast<std::size_t>(w)] &= ~(1ULL << (v % 64));
                x[static_cast<std::size_t>(w)] |= 1ULL << (v % 64);
            }
        }
    }
};

std::vector<std::vector<int>> list_triangles(const BitMatrix& adj) {
    std::vector<std::vector<int>> tris;
    const int n = adj.n;
    const int words = adj.words_per_row;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!adj.test(i, j)) continue;
            for (int w = j / 64; w < words; ++w) {
                std::uint64_t common = adj.row(i)[w] & adj.row(j)[w];
                if (w == j / 64) {
                    const int b = j % 64;  // keep only bits strictly above j
                    common = (b == 63) ? 0 : common & ~((2ULL << b) - 1);
                }
                while (common) {
                    const int l = w * 64 + std::countr_zero(common);
                    common &= common - 1;
                    tris.push_back({i, j, l});
                }
            }
        }
    }
    return tris;
}

double clique_weight(const std::vector<int>& members, const Eigen::MatrixXd& weight) {
    double s = 0;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const double w = weight(members[a], members[b]);
            if (!is_missing(w)) s += w;
        }
    return s;
}

}  // namespace

CliqueSet enumerate_cliques(const Adjacency& adj, const CliqueOptions& opts) {
    if (opts.min_size < 2 || opts.max_size < opts.min_size)
        throw std::invalid_argument("enumerate_cliques: bad size window");

    CliqueSet result;
    const int n = adj.n_vertices();
    const int words = adj.adj.words_per_row;

    if (n > 0 && adj.n_edges > 0) {
        CliqueSearch search{adj.adj, opts, n, words, 0,
                            Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                               std::chrono::duration<double>(
                                                   opts.wall_clock ? opts.wall_clock_seconds
                                                                   : 3600.0)),
                            result.members};
        std::vector<std::uint64_t> p(static_cast<std::size_t>(words), 0),
            x(static_cast<std::size_t>(words), 0);
        for (int v = 0; v < n; ++v)
            p[static_cast<std::size_t>(v / 64)] |= 1ULL << (v % 64);
        std::vector<int> r;
        try {
            search.expand(r, p, x);
            result.steps_used = search.steps;
        } catch (const BudgetExhausted&) {
            result.members = list_triangles(adj.adj);
            result.fallback_used = true;
            result.steps_used = search.steps;
        }
    }

    for (auto& c : result.members) std::sort(c.begin(), c.end());
    std::sort(result.members.begin(), result.members.end());
    result.members.erase(std::unique(result.members.begin(), result.members.end()),
                         result.members.end());

    // retention order: size desc, weight sum desc, lexicographic members
    std::vector<double> wsum(result.members.size());
    for (std::size_t i = 0; i < result.members.size(); ++i)
        wsum[i] = clique_weight(result.members[i], adj.weight);
    std::vector<std::size_t> order(result.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (result.members[a].size() != result.members[b].size())
            return result.members[a].size() > result.members[b].size();
        if (wsum[a] != wsum[b]) return wsum[a] > wsum[b];
        return result.members[a] < result.members[b];
    });

    std::vector<std::vector<int>> kept;
    kept.reserve(order.size());
    for (std::size_t i : order) kept.push_back(std::move(result.members[i]));
    if (opts.max_cliques > 0 && kept.size() > opts.max_cliques) {
        kept.resize(opts.max_cliques);
        result.truncated = true;
    }
    result.members = std::move(kept);
    return result;
}

// ---------------------------------------------------------------------------
// hypergraph
// ---------------------------------------------------------------------------

Eigen::MatrixXd Hypergraph::incidence() const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_covered(), n_edges());
    for (Eigen::Index e = 0; e < n_edges(); ++e)
        for (int v : edges[static_cast<std::size_t>(e)]) h(v, e) = 1.0;
    return h;
}

Hypergraph build_hypergraph(const CliqueSet& cliques, const std::vector<std::string>& universe) {
    Hypergraph hg;
    hg.universe = universe;

    const int n = static_cast<int>(universe.size());
    std::vector<int> covered_pos(static_cast<std::size_t>(n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const auto& c : cliques.members)
        for (int v : c) seen[static_cast<std::size_t>(v)] = true;
    for (int v = 0; v < n; ++v) {
        if (seen[static_cast<std::size_t>(v)]) {
            covered_pos[static_cast<std::size_t>(v)] = static_cast<int>(hg.covered.size());
            hg.covered.push_back(universe[static_cast<std::size_t>(v)]);
        }
    }

    hg.vertex_degree.assign(hg.covered.size(), 0);
    for (const auto& c : cliques.members) {
        std::vector<int> edge;
        edge.reserve(c.size());
        for (int v : c) {
            const int pos = covered_pos[static_cast<std::size_t>(v)];
            edge.push_back(pos);
            ++hg.vertex_degree[static_cast<std::size_t>(pos)];
        }
        hg.edge_cardinality.push_back(static_cast<int>(edge.size()));
        hg.edges.push_back(std::move(edge));
    }
    hg.degenerate = hg.edges.empty();
    return hg;
}

}  // namespace netspect
