#pragma once

// Semi-analytic Dirichlet-to-Neumann coupling on the artificial circle.

#include <Eigen/Core>
#include <complex>

#include "mscat/geometry.hpp"
#include "mscat/lgl.hpp"

namespace mscat {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// I_nm = int_{-1}^{1} P_m(xi) exp(-i n theta(xi)) theta'(xi) dxi on an arc
/// with theta(xi) = theta_hat xi + beta.
cplx dtn_integral(const ArcEdge& edge, int n, int m);

/// z_n = kappa H_n'(kappa R) / H_n(kappa R).
cplx dtn_symbol(int n, double kappa, double R);

/// Fourier extraction and DtN coupling for the Gamma nodes of a mesh.
/// Gamma nodes are numbered counter-clockwise from angle 0, E_theta * p of
/// them, shared sector endpoints stored once.
class DtnBlock {
public:
    DtnBlock(const AnnularMesh& mesh, const LagrangeBasis& basis, double kappa, int N);

    int cutoff() const { return N_; }
    double kappa() const { return kappa_; }
    double radius() const { return R_; }
    int nodes() const { return static_cast<int>(angles_.size()); }

    /// Polar angles of the Gamma nodes about the disk center.
    const Eigen::VectorXd& angles() const { return angles_; }
    /// z_n stored at index n + N.
    const VectorXcd& symbols() const { return z_; }
    /// Row n + N extracts the coefficient v_n = (1/2pi) int v e^{-in theta}.
    const MatrixXcd& extraction() const { return C_; }
    /// Galerkin matrix of <T v, w>_Gamma over nodal basis functions.
    const MatrixXcd& matrix() const { return D_; }

    VectorXcd fourier(const VectorXcd& values) const { return C_ * values; }
    /// sum_n c_n e^{in theta} at the Gamma nodes.
    VectorXcd synthesize(const VectorXcd& coeffs) const;

private:
    int N_;
    double kappa_;
    double R_;
    Eigen::VectorXd angles_;
    VectorXcd z_;
    MatrixXcd C_;
    MatrixXcd D_;
};

}  // namespace mscat
