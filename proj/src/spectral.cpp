#include "netspect/spectral.hpp"

#include <cmath>

#include "netspect/eig.hpp"
#include "netspect/errors.hpp"

namespace netspect {

SymMatrix zhou_laplacian(const Hypergraph& hg) {
    if (hg.degenerate || hg.n_edges() == 0)
        throw EmptyHypergraph("hypergraph has no hyperedges");

    const Eigen::Index n = hg.n_covered();
    SymMatrix out;
    out.labels = hg.covered;
    out.m = Eigen::MatrixXd::Identity(n, n);

    // (H D_e^{-1} H^T)_{ij} = sum over shared edges of 1/|e|; scale by
    // D_v^{-1/2} on both sides. Accumulating per edge keeps it O(sum |e|^2).
    std::vector<double> inv_sqrt_deg(static_cast<std::size_t>(n));
    for (Eigen::Index v = 0; v < n; ++v)
        inv_sqrt_deg[static_cast<std::size_t>(v)] =
            1.0 / std::sqrt(static_cast<double>(hg.vertex_degree[static_cast<std::size_t>(v)]));

    for (std::size_t e = 0; e < hg.edges.size(); ++e) {
        const auto& edge = hg.edges[e];
        const double inv_card = 1.0 / static_cast<double>(hg.edge_cardinality[e]);
        for (std::size_t a = 0; a < edge.size(); ++a) {
            const int i = edge[a];
            out.m(i, i) -= inv_card * inv_sqrt_deg[static_cast<std::size_t>(i)] *
                           inv_sqrt_deg[static_cast<std::size_t>(i)];
            for (std::size_t b = a + 1; b < edge.size(); ++b) {
                const int j = edge[b];
                const double w = inv_card * inv_sqrt_deg[static_cast<std::size_t>(i)] *
                                 inv_sqrt_deg[static_cast<std::size_t>(j)];
                out.m(i, j) -= w;
                out.m(j, i) -= w;
            }
        }
    }
    return out;
}

SymMatrix graph_laplacian(const Adjacency& adj) {
    const int n = adj.n_vertices();
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && adj.adj.test(i, j)) ++degree[static_cast<std::size_t>(i)];

    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (degree[static_cast<std::size_t>(i)] > 0) keep.push_back(i);
    if (keep.size() < 2) throw EmptyGraph("graph has fewer than 2 non-isolated vertices");

    const Eigen::Index m = static_cast<Eigen::Index>(keep.size());
    SymMatrix out;
    out.m = Eigen::MatrixXd::Identity(m, m);
    out.labels.reserve(keep.size());
    for (int i : keep) out.labels.push_back(adj.tickers[static_cast<std::size_t>(i)]);

    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const int i = keep[static_cast<std::size_t>(a)];
            const int j = keep[static_cast<std::size_t>(b)];
            if (!adj.adj.test(i, j)) continue;
            const double w = -1.0 / std::sqrt(static_cast<double>(
                                        degree[static_cast<std::size_t>(i)]) *
                                    static_cast<double>(degree[static_cast<std::size_t>(j)]));
            out.m(a, b) = out.m(b, a) = w;
        }
    }
    return out;
}

SpectralResult degenerate_spectral_result() {
    SpectralResult r;
    r.degenerate = true;
    return r;
}

SpectralResult fiedler(const SymMatrix& laplacian) {
    SpectralResult r;
    r.covered_vertices = laplacian.labels;
    const Eigen::Index n = laplacian.dim();
    if (n < 2) {
        r.degenerate = true;
        return r;
    }

    const EigResult eig = eig_symmetric(laplacian.m);
    r.iterations = eig.sweeps;
    r.lambda2 = eig.values(1);
    // normalized Laplacians are PSD; clip eigensolver noise at zero
    if (r.lambda2 < 0.0 && r.lambda2 > -1e-10) r.lambda2 = 0.0;

    Eigen::VectorXd v = eig.vectors.col(1);
    v.normalize();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0) v = -v;
            break;
        }
    }
    r.fiedler_vector = v;
    r.residual = (laplacian.m * v - eig.values(1) * v).norm();
    return r;
}

}  // namespace netspect
