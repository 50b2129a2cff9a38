#include <doctest.h>

#include <functional>
#include <random>

#include "netspect/eig.hpp"
#include "netspect/errors.hpp"
#include "netspect/netbuild.hpp"
#include "netspect/spectral.hpp"
#include "netspect/synth.hpp"

using namespace netspect;

namespace {

CliqueSet cliques_of(std::vector<std::vector<int>> members) {
    CliqueSet cs;
    cs.members = std::move(members);
    return cs;
}

std::vector<std::string> names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
    return out;
}

// independent route: explicit H, D_v, D_e matrix products
Eigen::MatrixXd zhou_by_products(const Hypergraph& hg) {
    const Eigen::MatrixXd h = hg.incidence();
    Eigen::VectorXd dv(hg.n_covered()), de(hg.n_edges());
    for (Eigen::Index v = 0; v < hg.n_covered(); ++v)
        dv(v) = hg.vertex_degree[static_cast<std::size_t>(v)];
    for (Eigen::Index e = 0; e < hg.n_edges(); ++e)
        de(e) = hg.edge_cardinality[static_cast<std::size_t>(e)];
    const Eigen::MatrixXd dvs = dv.array().rsqrt().matrix().asDiagonal();
    const Eigen::MatrixXd dei = de.array().inverse().matrix().asDiagonal();
    return Eigen::MatrixXd::Identity(hg.n_covered(), hg.n_covered()) -
           dvs * h * dei * h.transpose() * dvs;
}

// random hypergraph over n vertices; some vertices may stay uncovered
Hypergraph random_hypergraph(std::mt19937& rng, int n_vertices, int n_edges, int max_size = 12) {
    std::uniform_int_distribution<int> size_dist(3, std::min(max_size, n_vertices));
    std::vector<std::vector<int>> members;
    for (int e = 0; e < n_edges; ++e) {
        const int sz = size_dist(rng);
        std::vector<int> all(static_cast<std::size_t>(n_vertices));
        for (int i = 0; i < n_vertices; ++i) all[static_cast<std::size_t>(i)] = i;
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> edge(all.begin(), all.begin() + sz);
        std::sort(edge.begin(), edge.end());
        members.push_back(std::move(edge));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return build_hypergraph(cliques_of(members), names(n_vertices));
}

// connectivity of the clique-expansion graph over covered vertices
bool expansion_connected(const Hypergraph& hg) {
    const int n = static_cast<int>(hg.n_covered());
    if (n == 0) return true;
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& e : hg.edges)
        for (std::size_t i = 1; i < e.size(); ++i)
            parent[static_cast<std::size_t>(find(e[i]))] = find(e[0]);
    for (int v = 1; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("zhou_laplacian: single hyperedge is I - J/3") {
    const Hypergraph hg = build_hypergraph(cliques_of({{0, 1, 2}}), names(3));
    CHECK(hg.n_covered() == 3);
    CHECK(hg.vertex_degree == std::vector<int>{1, 1, 1});
    CHECK(hg.edge_cardinality == std::vector<int>{3});
    const SymMatrix L = zhou_laplacian(hg);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            CHECK(L.m(i, j) == doctest::Approx(i == j ? 2.0 / 3.0 : -1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zhou_laplacian: disjoint hyperedges give a block-diagonal matrix") {
    const Hypergraph hg = build_hypergraph(cliques_of({{0, 1, 2}, {3, 4, 5}}), names(6));
    const SymMatrix L = zhou_laplacian(hg);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 3; j < 6; ++j) {
            CHECK(L.m(i, j) == 0.0);
            CHECK(L.m(j, i) == 0.0);
        }
    CHECK(L.m(0, 1) == doctest::Approx(-1.0 / 3.0));
    CHECK(L.m(3, 4) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("zhou_laplacian: overlapping cliques match the matrix-product route") {
    const Hypergraph hg = build_hypergraph(cliques_of({{0, 1, 2}, {2, 3, 4}}), names(5));
    const SymMatrix L = zhou_laplacian(hg);
    const Eigen::MatrixXd oracle = zhou_by_products(hg);
    CHECK((L.m - oracle).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zhou_laplacian: empty hypergraph is an error") {
    const Hypergraph hg = build_hypergraph(cliques_of({}), names(4));
    CHECK(hg.degenerate);
    CHECK_THROWS_AS(zhou_laplacian(hg), EmptyHypergraph);
}

TEST_CASE("fiedler: single hyperedge spectrum is {0, 1, 1}") {
    const Hypergraph hg = build_hypergraph(cliques_of({{0, 1, 2}}), names(3));
    const SymMatrix L = zhou_laplacian(hg);
    const auto values = synth::dense_eig_oracle(L.m);
    CHECK(std::abs(values[0]) <= 1e-10);
    CHECK(values[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(values[2] == doctest::Approx(1.0).epsilon(1e-10));
    const SpectralResult r = fiedler(L);
    CHECK(r.lambda2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("fiedler: disconnected hypergraph has lambda2 = 0") {
    const Hypergraph hg = build_hypergraph(cliques_of({{0, 1, 2}, {3, 4, 5}}), names(6));
    const SpectralResult r = fiedler(zhou_laplacian(hg));
    CHECK(std::abs(r.lambda2) <= 1e-10);
}

TEST_CASE("fiedler: residual, orthogonality, sign convention, diagnostics") {
    std::mt19937 rng(11);
    const Hypergraph hg = random_hypergraph(rng, 12, 6);
    const SymMatrix L = zhou_laplacian(hg);
    const SpectralResult r = fiedler(L);
    CHECK(r.residual <= 1e-8);
    CHECK(r.iterations > 0);
    CHECK(r.fiedler_vector.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // orthogonal to the lambda1 eigenvector
    const EigResult full = eig_symmetric(L.m);
    CHECK(std::abs(r.fiedler_vector.dot(full.vectors.col(0))) <= 1e-8);

    // first nonzero component positive
    for (Eigen::Index i = 0; i < r.fiedler_vector.size(); ++i) {
        if (std::abs(r.fiedler_vector(i)) > 1e-12) {
            CHECK(r.fiedler_vector(i) > 0);
            break;
        }
    }
}

TEST_CASE("graph_laplacian: K3 spectrum {0, 1.5, 1.5}") {
    CorrMatrix corr;
    corr.tickers = names(3);
    corr.rho = Eigen::MatrixXd::Constant(3, 3, 0.9);
    corr.rho.diagonal().setOnes();
    corr.nobs = Eigen::MatrixXi::Constant(3, 3, 10);
    const Adjacency adj = threshold_adjacency(corr, SectorMap{}, 0.3, 0.5, false);
    const SymMatrix L = graph_laplacian(adj);
    const auto values = synth::dense_eig_oracle(L.m);
    CHECK(std::abs(values[0]) <= 1e-12);
    CHECK(values[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(values[2] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("graph_laplacian: single edge spectrum {0, 2}; empty graph throws") {
    CorrMatrix corr;
    corr.tickers = names(3);
    corr.rho = Eigen::MatrixXd::Constant(3, 3, 0.0);
    corr.rho.diagonal().setOnes();
    corr.rho(0, 1) = corr.rho(1, 0) = 0.9;  // one edge, vertex 2 isolated
    corr.nobs = Eigen::MatrixXi::Constant(3, 3, 10);
    const Adjacency adj = threshold_adjacency(corr, SectorMap{}, 0.3, 0.5, false);
    const SymMatrix L = graph_laplacian(adj);
    CHECK(L.dim() == 2);  // isolated vertex excluded
    const auto values = synth::dense_eig_oracle(L.m);
    CHECK(std::abs(values[0]) <= 1e-12);
    CHECK(values[1] == doctest::Approx(2.0).epsilon(1e-12));

    CorrMatrix none;
    none.tickers = names(2);
    none.rho = Eigen::MatrixXd::Identity(2, 2);
    none.nobs = Eigen::MatrixXi::Constant(2, 2, 10);
    const Adjacency empty = threshold_adjacency(none, SectorMap{}, 0.3, 0.5, false);
    CHECK_THROWS_AS(graph_laplacian(empty), EmptyGraph);
}

TEST_CASE("eig_symmetric matches the oracle on seeded random Laplacians") {
    std::mt19937 rng(101);
    for (int rep = 0; rep < 25; ++rep) {
        const Hypergraph hg = random_hypergraph(rng, 20, 8);
        if (hg.degenerate || hg.n_covered() < 2) continue;
        const SymMatrix L = zhou_laplacian(hg);
        const EigResult mine = eig_symmetric(L.m);
        const auto oracle = synth::dense_eig_oracle(L.m);
        REQUIRE(static_cast<std::size_t>(mine.values.size()) == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(mine.values(static_cast<Eigen::Index>(i)) - oracle[i]) <= 1e-9);
    }
}

TEST_CASE("spectrum of L_H stays in [0, 2]; lambda2 zero iff expansion disconnected") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> nv(8, 24), ne(1, 4);
    int disconnected_seen = 0, connected_seen = 0;
    for (int rep = 0; rep < 100; ++rep) {
        // small edges over many vertices so disjoint unions actually occur
        const Hypergraph hg = random_hypergraph(rng, nv(rng), ne(rng), 4);
        if (hg.degenerate || hg.n_covered() < 2) continue;
        const SymMatrix L = zhou_laplacian(hg);
        const EigResult eig = eig_symmetric(L.m);
        CHECK(eig.values.minCoeff() >= -1e-10);
        CHECK(eig.values.maxCoeff() <= 2.0 + 1e-10);
        const SpectralResult r = fiedler(L);
        if (expansion_connected(hg)) {
            CHECK(r.lambda2 > 1e-8);
            ++connected_seen;
        } else {
            CHECK(std::abs(r.lambda2) <= 1e-10);
            ++disconnected_seen;
        }
    }
    CHECK(connected_seen > 0);
    CHECK(disconnected_seen > 0);
}

TEST_CASE("vertex relabeling leaves lambda2 unchanged and permutes the vector") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const Hypergraph hg = random_hypergraph(rng, 10, 5);
        if (hg.degenerate || hg.n_covered() < 3) continue;
        const SymMatrix L = zhou_laplacian(hg);
        const EigResult base = eig_symmetric(L.m);
        const Eigen::Index n = L.dim();
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) pm(perm[static_cast<std::size_t>(i)], i) = 1.0;
        SymMatrix Lp;
        Lp.labels = L.labels;
        Lp.m = pm * L.m * pm.transpose();
        const SpectralResult a = fiedler(L);
        const SpectralResult b = fiedler(Lp);
        CHECK(std::abs(a.lambda2 - b.lambda2) <= 1e-10);
        // compare vectors only when lambda2 is simple
        if (base.values(2) - base.values(1) > 1e-6) {
            const Eigen::VectorXd expected = pm * a.fiedler_vector;
            const double diff = std::min((expected - b.fiedler_vector).norm(),
                                         (expected + b.fiedler_vector).norm());
            CHECK(diff <= 1e-8);
        }
    }
}

TEST_CASE("adding an edge never decreases lambda2 of the unnormalized graph Laplacian") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 8;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (u(rng) < 0.35) a(i, j) = a(j, i) = 1.0;
        const auto lap = [&](const Eigen::MatrixXd& adj) {
            Eigen::MatrixXd l = -adj;
            for (int i = 0; i < n; ++i) l(i, i) = adj.row(i).sum();
            return l;
        };
        int ei = -1, ej = -1;
        for (int i = 0; i < n && ei < 0; ++i)
            for (int j = i + 1; j < n; ++j)
                if (a(i, j) == 0.0) {
                    ei = i;
                    ej = j;
                    break;
                }
        if (ei < 0) continue;
        const auto before = synth::dense_eig_oracle(lap(a));
        a(ei, ej) = a(ej, ei) = 1.0;
        const auto after = synth::dense_eig_oracle(lap(a));
        CHECK(after[1] >= before[1] - 1e-10);
    }
}

TEST_CASE("degenerate inputs: dimension < 2 and sweep cap") {
    SymMatrix one;
    one.labels = {"a"};
    one.m = Eigen::MatrixXd::Zero(1, 1);
    const SpectralResult r = fiedler(one);
    CHECK(r.degenerate);
    CHECK(r.lambda2 == 0.0);

    Eigen::MatrixXd m(2, 2);
    m << 1, 0.5, 0.5, 1;
    CHECK_THROWS_AS(eig_symmetric(m, 1e-10, 0), NonConvergence);
}

}  // TEST_SUITE
