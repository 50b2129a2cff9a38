// Dense symmetric eigensolver: cyclic Jacobi with rotation thresholding.
// Primary solver for the spectral module; the test oracle in synth has its
// own independent implementation.
#pragma once

#include <Eigen/Dense>

namespace netspect {

struct EigResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column i pairs with values(i), orthonormal
    int sweeps = 0;
    double offdiag_norm = 0.0;  // Frobenius norm of off-diagonal part at exit
};

/// Full eigendecomposition of a symmetric matrix. Convergence when the
/// off-diagonal Frobenius norm falls below tol * max(1, ||A||_F).
/// Throws NonConvergence after max_sweeps sweeps.
EigResult eig_symmetric(Eigen::MatrixXd a, double tol = 1e-10, int max_sweeps = 100);

}  // namespace netspect
