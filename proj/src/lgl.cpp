#include "mscat/lgl.hpp"

#include <cmath>
#include <numbers>

#include "mscat/error.hpp"

namespace mscat {

Eigen::VectorXd legendre_values(int m, double x) {
    Eigen::VectorXd P(m + 1);
    P(0) = 1.0;
    if (m >= 1) P(1) = x;
    for (int k = 1; k < m; ++k) P(k + 1) = ((2.0 * k + 1.0) * x * P(k) - k * P(k - 1)) / (k + 1.0);
    return P;
}

Eigen::VectorXd legendre_derivs(int m, double x) {
    const Eigen::VectorXd P = legendre_values(m, x);
    Eigen::VectorXd dP = Eigen::VectorXd::Zero(m + 1);
    // P_{k+1}' = P_{k-1}' + (2k + 1) P_k
    if (m >= 1) dP(1) = 1.0;
    for (int k = 1; k < m; ++k) dP(k + 1) = dP(k - 1) + (2.0 * k + 1.0) * P(k);
    return dP;
}

LglRule lgl_rule(int p) {
    if (p < 1) throw DomainError("LGL degree must be >= 1");
    LglRule r;
    r.p = p;
    r.nodes.resize(p + 1);
    r.weights.resize(p + 1);
    // Newton iteration on x P_p - P_{p-1} = 0 from Chebyshev-Gauss-Lobatto points.
    for (int i = 0; i <= p; ++i) {
        double x = -std::cos(std::numbers::pi * i / p);
        for (int it = 0; it < 100; ++it) {
            const Eigen::VectorXd P = legendre_values(p, x);
            const double dx = (x * P(p) - P(p - 1)) / ((p + 1) * P(p));
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes(i) = x;
    }
    r.nodes(0) = -1.0;
    r.nodes(p) = 1.0;
    for (int i = 0; i <= p / 2; ++i) {
        const double s = 0.5 * (r.nodes(p - i) - r.nodes(i));
        r.nodes(i) = -s;
        r.nodes(p - i) = s;
    }
    if (p % 2 == 0) r.nodes(p / 2) = 0.0;
    for (int i = 0; i <= p; ++i) {
        const double Pp = legendre_values(p, r.nodes(i))(p);
        r.weights(i) = 2.0 / (p * (p + 1.0) * Pp * Pp);
    }
    return r;
}

LagrangeBasis::LagrangeBasis(int p) : rule_(lgl_rule(p)) {
    const int n = p + 1;
    const Eigen::VectorXd& x = rule_.nodes;

    bary_.resize(n);
    for (int j = 0; j < n; ++j) {
        double prod = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != j) prod *= (x(j) - x(k));
        bary_(j) = 1.0 / prod;
    }
    bary_ /= bary_.cwiseAbs().maxCoeff();

    Eigen::VectorXd Pp(n);
    for (int i = 0; i < n; ++i) Pp(i) = legendre_values(p, x(i))(p);
    diff_ = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) diff_(i, j) = Pp(i) / (Pp(j) * (x(i) - x(j)));
    diff_(0, 0) = -0.25 * p * (p + 1.0);
    diff_(p, p) = 0.25 * p * (p + 1.0);

    // Discrete orthogonality of P_m under the LGL rule; the top mode has norm 2/p.
    inv_vdm_.resize(n, n);
    for (int k = 0; k < n; ++k) {
        const Eigen::VectorXd P = legendre_values(p, x(k));
        for (int m = 0; m < n; ++m) {
            const double gamma = (m < p) ? 2.0 / (2.0 * m + 1.0) : 2.0 / p;
            inv_vdm_(m, k) = rule_.weights(k) * P(m) / gamma;
        }
    }
}

int LagrangeBasis::node_index(double x) const {
    for (int j = 0; j <= rule_.p; ++j)
        if (std::abs(x - rule_.nodes(j)) < 1e-13) return j;
    return -1;
}

Eigen::VectorXd LagrangeBasis::values(double x) const {
    const int n = size();
    Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
    const int j0 = node_index(x);
    if (j0 >= 0 && x == rule_.nodes(j0)) {
        l(j0) = 1.0;
        return l;
    }
    if (j0 >= 0) {
        // Within 1e-13 of a node: first-order correction through D.
        const double h = x - rule_.nodes(j0);
        for (int k = 0; k < n; ++k) l(k) = (k == j0 ? 1.0 : 0.0) + h * diff_(j0, k);
        return l;
    }
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        l(k) = bary_(k) / (x - rule_.nodes(k));
        s += l(k);
    }
    return l / s;
}

Eigen::VectorXd LagrangeBasis::derivs(double x) const {
    const int n = size();
    const int j0 = node_index(x);
    if (j0 >= 0) return diff_.row(j0).transpose();
    Eigen::VectorXd a(n);
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double d = x - rule_.nodes(k);
        a(k) = bary_(k) / d;
        s1 += a(k);
        s2 += a(k) / d;
    }
    Eigen::VectorXd dl(n);
    for (int k = 0; k < n; ++k) dl(k) = (a(k) / s1) * (s2 / s1 - 1.0 / (x - rule_.nodes(k)));
    return dl;
}

}  // namespace mscat
