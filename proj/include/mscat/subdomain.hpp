#pragma once

// Spectral element space on an annular mesh and the factorized subdomain
// Helmholtz operator with DtN closure on the artificial circle.

#include <Eigen/Core>
#include <Eigen/LU>
#include <functional>
#include <memory>
#include <vector>

#include "mscat/dtn.hpp"
#include "mscat/geometry.hpp"
#include "mscat/lgl.hpp"

namespace mscat {

using Vec2c = Eigen::Vector2cd;

/// Nodes, normals and arc-length quadrature weights of a closed boundary grid.
struct BoundaryGrid {
    std::vector<int> ids;       // global node ids
    std::vector<Vec2> points;
    std::vector<Vec2> normals;  // outward from the enclosed region
    Eigen::VectorXd weights;    // arc-length LGL weights, shared endpoints summed
    Eigen::VectorXd angles;     // polar angle about the disk center

    int size() const { return static_cast<int>(ids.size()); }
};

/// Continuous nodal space of degree p on an annular mesh. Global nodes form a
/// polar grid: radial index a in [0, E_r p] (a = 0 on the scatterer,
/// a = E_r p on Gamma) and periodic angular index t in [0, E_theta p).
class SemSpace {
public:
    SemSpace(AnnularMesh mesh, int p);

    const AnnularMesh& mesh() const { return mesh_; }
    const LagrangeBasis& basis() const { return basis_; }
    int degree() const { return basis_.degree(); }

    int angular_nodes() const { return n_ang_; }
    int radial_nodes() const { return n_rad_; }
    int size() const { return n_ang_ * n_rad_; }

    int node(int a, int t) const { return a * n_ang_ + ((t % n_ang_) + n_ang_) % n_ang_; }
    /// Global id of local node (k along xi, l along eta) of element e.
    int element_node(int e, int k, int l) const;
    /// Mapped coordinates of every global node.
    const std::vector<Vec2>& node_points() const { return points_; }

    const BoundaryGrid& gamma() const { return gamma_; }
    const BoundaryGrid& scatterer() const { return scatterer_; }

private:
    AnnularMesh mesh_;
    LagrangeBasis basis_;
    int n_ang_;
    int n_rad_;
    std::vector<Vec2> points_;
    BoundaryGrid gamma_;
    BoundaryGrid scatterer_;
};

/// Nodal solution on a SemSpace.
class InteriorSolution {
public:
    InteriorSolution() = default;
    InteriorSolution(std::shared_ptr<const SemSpace> space, Eigen::VectorXcd values);

    const SemSpace& space() const { return *space_; }
    const std::shared_ptr<const SemSpace>& space_ptr() const { return space_; }
    const Eigen::VectorXcd& values() const { return values_; }

    /// Value at x (and gradient when requested). Throws NotInDomainError.
    cplx eval(const Vec2& x, Vec2c* grad = nullptr) const;
    cplx eval_in(int element, double xi, double eta, Vec2c* grad = nullptr) const;

    Eigen::VectorXcd gamma_trace() const;
    Eigen::VectorXcd scatterer_trace() const;

private:
    std::shared_ptr<const SemSpace> space_;
    Eigen::VectorXcd values_;
};

using IndexFn = std::function<double(const Vec2&)>;

/// Discrete form  -(grad v, grad w) + kappa^2 (n v, w) + <T_N v, w>_Gamma
/// with the scatterer condition imposed (Dirichlet rows, or natural
/// Neumann / Robin terms), statically condensed onto element boundaries and
/// factorized once.
///
/// Right-hand sides are given as scatterer data g (Dirichlet value, or the
/// datum of dn v + h v = g) and an integrated Gamma load vector.
class SubdomainOperator {
public:
    SubdomainOperator(std::shared_ptr<const SemSpace> space, double kappa, int N,
                      BoundaryCondition bc, const IndexFn& index);

    const SemSpace& space() const { return *space_; }
    const std::shared_ptr<const SemSpace>& space_ptr() const { return space_; }
    double kappa() const { return kappa_; }
    int cutoff() const { return dtn_.cutoff(); }
    const BoundaryCondition& bc() const { return bc_; }
    const DtnBlock& dtn() const { return dtn_; }
    /// Refraction index at every global node.
    const Eigen::VectorXd& index_samples() const { return index_; }
    int skeleton_size() const { return static_cast<int>(skeleton_nodes_.size()); }

    /// Empty vectors stand for zero data.
    InteriorSolution solve(const Eigen::VectorXcd& scatterer_data,
                           const Eigen::VectorXcd& gamma_load) const;

    /// Full (uncondensed) system action; Dirichlet rows act as identity.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    /// Full right-hand side for the given data, matching apply().
    Eigen::VectorXcd load(const Eigen::VectorXcd& scatterer_data,
                          const Eigen::VectorXcd& gamma_load) const;

    /// Gamma load for the condition dn v - T v = psi (psi nodal on Gamma).
    Eigen::VectorXcd gamma_load_flux(const Eigen::VectorXcd& psi) const;
    /// Gamma load for psi = T'f, given nodal values and normal derivatives of f.
    Eigen::VectorXcd gamma_load_tprime(const Eigen::VectorXcd& values,
                                       const Eigen::VectorXcd& normal_derivs) const;

    /// Discrete normal derivative (out of the scatterer) at scatterer nodes,
    /// recovered from the weak residual of the volume form.
    Eigen::VectorXcd scatterer_flux(const InteriorSolution& sol) const;
    /// Boundary operator of this scatterer applied to sol at scatterer nodes.
    Eigen::VectorXcd boundary_operator(const InteriorSolution& sol) const;

    /// Real element matrix -K_e + kappa^2 M_e(n), local node l * (p + 1) + k.
    Eigen::MatrixXd element_matrix(int e) const;

private:
    std::shared_ptr<const SemSpace> space_;
    double kappa_;
    BoundaryCondition bc_;
    Eigen::VectorXd index_;
    DtnBlock dtn_;

    std::vector<int> skeleton_nodes_;   // skeleton index -> global id
    std::vector<int> skeleton_of_;      // global id -> skeleton index or -1
    std::vector<int> local_boundary_;   // local indices on the element boundary
    std::vector<int> local_interior_;
    std::vector<Eigen::MatrixXd> condense_;  // X_e = A_II^{-1} A_IB
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

}  // namespace mscat
