#include "netspect/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netspect/errors.hpp"

namespace netspect {

namespace {

double offdiag_frobenius(const Eigen::MatrixXd& a) {
    double s = 0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index p = 0; p < n - 1; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

}  // namespace

EigResult eig_symmetric(Eigen::MatrixXd a, double tol, int max_sweeps) {
    const Eigen::Index n = a.rows();
    if (n == 0 || a.cols() != n)
        throw std::invalid_argument("eig_symmetric: matrix must be square and non-empty");

    EigResult res;
    res.vectors = Eigen::MatrixXd::Identity(n, n);
    if (n == 1) {
        res.values = a.diagonal();
        return res;
    }

    const double fro0 = std::max(1.0, a.norm());
    const double stop = tol * fro0;

    int sweep = 0;
    double off = offdiag_frobenius(a);
    while (off > stop) {
        if (sweep >= max_sweeps)
            throw NonConvergence("jacobi eigensolver did not converge", sweep, off);
        // Rutishauser threshold schedule: early sweeps only rotate the
        // larger elements, later sweeps rotate everything non-negligible.
        const double tresh = (sweep < 3) ? 0.2 * off * off / static_cast<double>(n * n) : 0.0;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double g = 100.0 * std::abs(apq);
                // past the early sweeps, elements that no longer affect the
                // diagonal at working precision are set to zero outright
                if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                if (std::abs(apq) <= tresh || apq == 0.0) continue;

                const double h = a(q, q) - a(p, p);
                double t;
                if (std::abs(h) + g == std::abs(h)) {
                    t = apq / h;
                } else {
                    const double theta = 0.5 * h / apq;
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double delta = t * apq;

                a(p, p) -= delta;
                a(q, q) += delta;
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        const double aip = a(i, p), aiq = a(i, q);
                        a(i, p) = aip - s * (aiq + tau * aip);
                        a(i, q) = aiq + s * (aip - tau * aiq);
                        a(p, i) = a(i, p);
                        a(q, i) = a(i, q);
                    }
                    const double vip = res.vectors(i, p), viq = res.vectors(i, q);
                    res.vectors(i, p) = vip - s * (viq + tau * vip);
                    res.vectors(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
        ++sweep;
        off = offdiag_frobenius(a);
    }

    res.sweeps = sweep;
    res.offdiag_norm = off;

    // sort ascending; ties keep original column order for determinism
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    res.values.resize(n);
    Eigen::MatrixXd sorted(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        res.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        sorted.col(i) = res.vectors.col(order[static_cast<std::size_t>(i)]);
    }
    res.vectors = std::move(sorted);
    return res;
}

}  // namespace netspect
