#include "mscat/harmonics.hpp"

#include <cmath>

#include "mscat/error.hpp"
#include "mscat/specfun.hpp"

namespace mscat {

namespace {
constexpr cplx kI{0.0, 1.0};
}

VectorXcd fourier_coeffs(const DtnBlock& dtn, const VectorXcd& trace) {
    if (trace.size() != dtn.nodes()) throw DimensionError("trace does not match the Gamma grid");
    return dtn.fourier(trace);
}

VectorXcd inverse_fourier(const DtnBlock& dtn, const VectorXcd& coeffs) {
    return dtn.synthesize(coeffs);
}

VectorXcd dtn_apply(const VectorXcd& coeffs, double kappa, double R) {
    const int N = static_cast<int>(coeffs.size() - 1) / 2;
    if (coeffs.size() != 2 * N + 1) throw DimensionError("coefficient vector must have odd length");
    VectorXcd out(coeffs.size());
    for (int n = 0; n <= N; ++n) {
        const cplx z = dtn_symbol(n, kappa, R);
        out(N + n) = z * coeffs(N + n);
        out(N - n) = z * coeffs(N - n);
    }
    return out;
}

VectorXcd tprime_apply(const DtnBlock& dtn, const VectorXcd& values,
                       const VectorXcd& normal_derivs) {
    if (values.size() != dtn.nodes() || normal_derivs.size() != dtn.nodes())
        throw DimensionError("traces do not match the Gamma grid");
    const VectorXcd c = dtn.fourier(values);
    const VectorXcd tc = (c.array() * dtn.symbols().array()).matrix();
    return normal_derivs - dtn.synthesize(tc);
}

OutgoingExpansion::OutgoingExpansion(Vec2 center, double R, double kappa, VectorXcd coeffs)
    : center_(std::move(center)), R_(R), kappa_(kappa), coeffs_(std::move(coeffs)) {
    const int N = cutoff();
    if (coeffs_.size() != 2 * N + 1) throw DimensionError("coefficient vector must have odd length");
    const specfun::BesselTable t = specfun::cyl_bessel_table(N, kappa * R, true);
    inv_hR_.resize(N + 1);
    for (int n = 0; n <= N; ++n) inv_hR_(n) = 1.0 / t.h1(n);
}

cplx OutgoingExpansion::eval(const Vec2& x, Vec2c* grad) const {
    const Vec2 d = x - center_;
    const double r = d.norm();
    if (r < R_ * (1.0 - 1e-12))
        throw NotInDomainError("outgoing expansion evaluated inside its source disk");
    const int N = cutoff();
    const double kr = kappa_ * r;
    const specfun::BesselTable t = specfun::cyl_bessel_table(N + 1, kr, true);
    const double th = std::atan2(d.y(), d.x());
    const cplx e1 = std::exp(kI * th);

    cplx u = 0.0, ur = 0.0, ut = 0.0;
    // e^{in theta} for n >= 0 and its conjugate for -n.
    cplx ep = 1.0;
    for (int n = 0; n <= N; ++n) {
        const cplx h = t.h1(n) * inv_hR_(n);
        const cplx dh = (n == 0 ? -t.h1(1) : t.h1(n - 1) - (double(n) / kr) * t.h1(n)) * inv_hR_(n);
        const cplx em = std::conj(ep);
        // H_{-n} / H_{-n}(kR) equals H_n / H_n(kR).
        const cplx sp = coeffs_(N + n) * ep;
        const cplx sm = n == 0 ? cplx(0.0) : coeffs_(N - n) * em;
        u += h * (sp + sm);
        if (grad) {
            ur += kappa_ * dh * (sp + sm);
            ut += kI * double(n) * h * (sp - sm);
        }
        ep *= e1;
    }
    if (grad) {
        const Vec2 er = d / r;
        const Vec2 et(-er.y(), er.x());
        *grad = ur * er.cast<cplx>() + (ut / r) * et.cast<cplx>();
    }
    return u;
}

OutgoingExpansion outgoing_from_trace(const DtnBlock& dtn, const Vec2& center,
                                      const VectorXcd& trace) {
    return OutgoingExpansion(center, dtn.radius(), dtn.kappa(), fourier_coeffs(dtn, trace));
}

cplx IncidentWave::value(const Vec2& x) const { return amplitude * std::exp(kI * kappa * x.y()); }

Vec2c IncidentWave::gradient(const Vec2& x) const {
    return Vec2c(0.0, kI * kappa * value(x));
}

TraceData incident_data(const IncidentWave& w, const std::vector<Vec2>& points,
                        const std::vector<Vec2>& normals) {
    if (points.size() != normals.size()) throw DimensionError("points and normals differ in length");
    TraceData d;
    d.values.resize(points.size());
    d.normal_derivs.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        d.values(i) = w.value(points[i]);
        d.normal_derivs(i) = kI * w.kappa * normals[i].y() * d.values(i);
    }
    return d;
}

}  // namespace mscat
