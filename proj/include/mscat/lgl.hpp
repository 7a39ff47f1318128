#pragma once

// Legendre-Gauss-Lobatto rule and the nodal Lagrange basis built on it.

#include <Eigen/Core>
#include <vector>

namespace mscat {

struct LglRule {
    int p = 1;
    Eigen::VectorXd nodes;    // ascending, nodes[0] = -1, nodes[p] = 1
    Eigen::VectorXd weights;
};

/// Nodes are the roots of (1 - x^2) P_p'(x); w_k = 2 / (p (p + 1) P_p(x_k)^2).
LglRule lgl_rule(int p);

/// P_0(x) .. P_m(x).
Eigen::VectorXd legendre_values(int m, double x);

/// P_0'(x) .. P_m'(x).
Eigen::VectorXd legendre_derivs(int m, double x);

/// Nodal basis on an LGL rule.
class LagrangeBasis {
public:
    explicit LagrangeBasis(int p);

    int degree() const { return rule_.p; }
    int size() const { return rule_.p + 1; }
    const LglRule& rule() const { return rule_; }
    const Eigen::VectorXd& nodes() const { return rule_.nodes; }
    const Eigen::VectorXd& weights() const { return rule_.weights; }

    /// D(i, j) = l_j'(x_i).
    const Eigen::MatrixXd& diff() const { return diff_; }

    /// Coefficients of l_k in the Legendre basis: l_k = sum_m inv_vandermonde(m, k) P_m.
    const Eigen::MatrixXd& inv_vandermonde() const { return inv_vdm_; }

    /// l_0(x) .. l_p(x), exact at the nodes.
    Eigen::VectorXd values(double x) const;

    /// l_0'(x) .. l_p'(x).
    Eigen::VectorXd derivs(double x) const;

private:
    int node_index(double x) const;

    LglRule rule_;
    Eigen::VectorXd bary_;
    Eigen::MatrixXd diff_;
    Eigen::MatrixXd inv_vdm_;
};

}  // namespace mscat
