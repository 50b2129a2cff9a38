// Normalized hypergraph and graph Laplacians and their algebraic
// connectivity: the second-smallest eigenvalue (Fiedler value) and the
// paired Fiedler vector.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netspect/netbuild.hpp"

namespace netspect {

// Labelled dense symmetric matrix (mirrored on construction).
struct SymMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd m;

    Eigen::Index dim() const { return m.rows(); }
};

/// Normalized hypergraph Laplacian over covered vertices:
///   L = I - D_v^{-1/2} H D_e^{-1} H^T D_v^{-1/2}.
/// Throws EmptyHypergraph when the hypergraph has no hyperedges.
SymMatrix zhou_laplacian(const Hypergraph& hg);

/// Symmetric normalized graph Laplacian I - D^{-1/2} A D^{-1/2} over the
/// non-isolated vertices of an adjacency. Throws EmptyGraph when fewer than
/// two vertices carry an edge.
SymMatrix graph_laplacian(const Adjacency& adj);

struct SpectralResult {
    double lambda2 = 0.0;
    Eigen::VectorXd fiedler_vector;       // unit norm, first nonzero entry positive
    std::vector<std::string> covered_vertices;
    int iterations = 0;                   // eigensolver sweeps
    double residual = 0.0;                // ||L v - lambda2 v||
    bool degenerate = false;              // dimension < 2 (or empty hypergraph)
};

/// Dense symmetric eigensolve; eigenvalues sorted ascending, lambda2 is the
/// second entry. Dimension < 2 yields a degenerate result with lambda2 = 0
/// rather than an error, keeping per-window series aligned.
SpectralResult fiedler(const SymMatrix& laplacian);

/// Degenerate stand-in for windows whose hypergraph is empty.
SpectralResult degenerate_spectral_result();

}  // namespace netspect
