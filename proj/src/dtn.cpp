#include "mscat/dtn.hpp"

#include <cmath>
#include <numbers>

#include "mscat/error.hpp"
#include "mscat/specfun.hpp"

namespace mscat {

namespace {
constexpr cplx kI{0.0, 1.0};
}

cplx dtn_integral(const ArcEdge& edge, int n, int m) {
    if (m < 0) throw DomainError("Legendre degree must be >= 0");
    const double th = edge.half_aperture;
    const cplx phase = std::exp(-kI * double(n) * edge.mid_angle);
    if (n == 0) return m == 0 ? cplx(2.0 * th) : cplx(0.0);
    const double z = n * th;
    const double az = std::abs(z);
    // int_{-1}^{1} P_m(x) e^{-izx} dx = 2 (-i)^m sqrt(pi / (2z)) J_{m+1/2}(z), odd in z for odd m.
    const double jh = specfun::sph_bessel_halfint(m, az);
    cplx im_pow = std::pow(-kI, m);
    if (z < 0.0 && (m % 2)) im_pow = -im_pow;
    return th * phase * 2.0 * im_pow * std::sqrt(std::numbers::pi / (2.0 * az)) * jh;
}

cplx dtn_symbol(int n, double kappa, double R) {
    const int an = std::abs(n);
    const double x = kappa * R;
    const specfun::BesselTable t = specfun::cyl_bessel_table(an + 1, x, true);
    const cplx h = t.h1(an);
    const cplx dh = an == 0 ? -t.h1(1) : t.h1(an - 1) - (double(an) / x) * h;
    return kappa * dh / h;
}

DtnBlock::DtnBlock(const AnnularMesh& mesh, const LagrangeBasis& basis, double kappa, int N)
    : N_(N), kappa_(kappa), R_(mesh.disk().radius) {
    if (N < 0) throw DomainError("DtN cutoff must be >= 0");
    const int p = basis.degree();
    const int S = mesh.sectors();
    const int nn = S * p;
    const int modes = 2 * N + 1;

    angles_.resize(nn);
    for (int s = 0; s < S; ++s) {
        const ArcEdge arc = mesh.gamma_arc(s);
        for (int k = 0; k < p; ++k) angles_(s * p + k) = arc.angle(basis.nodes()(k));
    }

    z_.resize(modes);
    {
        const double x = kappa * R_;
        const specfun::BesselTable t = specfun::cyl_bessel_table(N + 1, x, true);
        for (int n = 0; n <= N; ++n) {
            const cplx h = t.h1(n);
            const cplx dh = n == 0 ? -t.h1(1) : t.h1(n - 1) - (double(n) / x) * h;
            z_(N + n) = z_(N - n) = kappa * dh / h;
        }
    }

    // C(n, node) = (1/2pi) sum_m Vinv(m, k) I_nm over the arc owning the node.
    const Eigen::MatrixXd& Vinv = basis.inv_vandermonde();
    C_ = MatrixXcd::Zero(modes, nn);
    for (int s = 0; s < S; ++s) {
        const ArcEdge arc = mesh.gamma_arc(s);
        for (int n = -N; n <= N; ++n) {
            VectorXcd I(p + 1);
            for (int m = 0; m <= p; ++m) I(m) = dtn_integral(arc, n, m);
            for (int k = 0; k <= p; ++k) {
                cplx acc = 0.0;
                for (int m = 0; m <= p; ++m) acc += Vinv(m, k) * I(m);
                const int node = (s * p + k) % nn;
                C_(n + N, node) += acc / (2.0 * std::numbers::pi);
            }
        }
    }

    const VectorXcd scale = (2.0 * std::numbers::pi * R_) * z_;
    D_ = C_.adjoint() * scale.asDiagonal() * C_;
}

VectorXcd DtnBlock::synthesize(const VectorXcd& coeffs) const {
    if (coeffs.size() != 2 * N_ + 1) throw DimensionError("coefficient vector has wrong length");
    VectorXcd out = VectorXcd::Zero(angles_.size());
    for (int t = 0; t < angles_.size(); ++t) {
        cplx acc = 0.0;
        for (int n = -N_; n <= N_; ++n) acc += coeffs(n + N_) * std::exp(kI * double(n) * angles_(t));
        out(t) = acc;
    }
    return out;
}

}  // namespace mscat
