#pragma once

// Unrestarted GMRES (Arnoldi with modified Gram-Schmidt, Givens rotations)
// in a diagonally weighted inner product.

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace mscat {

struct IterationReport {
    std::vector<double> residuals;  // relative residual, entry 0 is the initial guess
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
};

struct GmresResult {
    Eigen::VectorXcd x;
    IterationReport report;
};

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Solves A x = b to relative residual tol in the norm sqrt(sum w |v|^2).
/// Empty weights mean the Euclidean norm; empty x0 means zero. On reaching
/// max_iter the current (residual-minimizing) iterate is returned with
/// converged = false.
GmresResult gmres(const LinearMap& A, const Eigen::VectorXcd& b, const Eigen::VectorXd& weights,
                  double tol, int max_iter, const Eigen::VectorXcd& x0 = {});

}  // namespace mscat
