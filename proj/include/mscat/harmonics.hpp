#pragma once

// Circular harmonics on artificial circles: trace transforms, DtN and T'
// application, outgoing Hankel expansions and the incident plane wave.

#include <Eigen/Core>

#include "mscat/dtn.hpp"
#include "mscat/geometry.hpp"

namespace mscat {

using Vec2c = Eigen::Vector2cd;

/// Coefficients v_n, |n| <= N, of a nodal Gamma trace (index n + N).
VectorXcd fourier_coeffs(const DtnBlock& dtn, const VectorXcd& trace);

/// Nodal values of sum_n c_n e^{in theta} on the Gamma grid.
VectorXcd inverse_fourier(const DtnBlock& dtn, const VectorXcd& coeffs);

/// Coefficients of T v: multiplies c_n by z_n.
VectorXcd dtn_apply(const VectorXcd& coeffs, double kappa, double R);

/// Nodal T'f = dn f - T f from nodal values and normal derivatives of f.
VectorXcd tprime_apply(const DtnBlock& dtn, const VectorXcd& values,
                       const VectorXcd& normal_derivs);

/// w(r, theta) = sum_n a_n H_n(kappa r) / H_n(kappa R) e^{in theta} about a center.
class OutgoingExpansion {
public:
    OutgoingExpansion() = default;
    OutgoingExpansion(Vec2 center, double R, double kappa, VectorXcd coeffs);

    const Vec2& center() const { return center_; }
    double radius() const { return R_; }
    double kappa() const { return kappa_; }
    int cutoff() const { return static_cast<int>(coeffs_.size() - 1) / 2; }
    const VectorXcd& coeffs() const { return coeffs_; }

    /// Requires |x - c| >= R (1e-12 relative slack); NotInDomainError otherwise.
    cplx eval(const Vec2& x, Vec2c* grad = nullptr) const;

private:
    Vec2 center_ = Vec2::Zero();
    double R_ = 1.0;
    double kappa_ = 1.0;
    VectorXcd coeffs_;
    VectorXcd inv_hR_;  // 1 / H_|n|(kappa R), n = 0..N
};

/// Outgoing expansion whose trace on the circle is the given nodal trace.
OutgoingExpansion outgoing_from_trace(const DtnBlock& dtn, const Vec2& center,
                                      const VectorXcd& trace);

/// amplitude * exp(i kappa y).
struct IncidentWave {
    double kappa = 1.0;
    cplx amplitude{1.0, 0.0};

    cplx value(const Vec2& x) const;
    Vec2c gradient(const Vec2& x) const;
};

struct TraceData {
    VectorXcd values;
    VectorXcd normal_derivs;
};

/// Values and normal derivatives of the incident wave at sample points.
TraceData incident_data(const IncidentWave& w, const std::vector<Vec2>& points,
                        const std::vector<Vec2>& normals);

/// g . n for a complex gradient and a real direction (no conjugation).
inline cplx directional(const Vec2c& g, const Vec2& n) { return g(0) * n(0) + g(1) * n(1); }

}  // namespace mscat
