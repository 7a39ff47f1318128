#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "mscat/error.hpp"
#include "mscat/harmonics.hpp"
#include "mscat/specfun.hpp"

using namespace mscat;
using specfun::CylKind;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

namespace {

struct Ring {
    AnnularMesh mesh;
    LagrangeBasis basis;
    DtnBlock dtn;
    std::vector<Vec2> points, normals;

    Ring(double kappa, double R, int sectors, int p, int N, Vec2 center = Vec2::Zero())
        : mesh(scatterer(R, center), ArtificialDisk{center, R}, 1, sectors),
          basis(p),
          dtn(mesh, basis, kappa, N) {
        for (int t = 0; t < dtn.nodes(); ++t) {
            const Vec2 n(std::cos(dtn.angles()(t)), std::sin(dtn.angles()(t)));
            normals.push_back(n);
            points.push_back(center + R * n);
        }
    }

    static ScattererSpec scatterer(double R, const Vec2& c) {
        ScattererSpec s;
        s.center = c;
        s.shape = {0.0, 0.5 * R, 0, 0.0};
        return s;
    }

    VectorXcd sample(int n) const {
        VectorXcd v(dtn.nodes());
        for (int t = 0; t < v.size(); ++t) v(t) = std::exp(kI * double(n) * dtn.angles()(t));
        return v;
    }
};

VectorXcd delta(int N, int n) {
    VectorXcd c = VectorXcd::Zero(2 * N + 1);
    c(N + n) = 1.0;
    return c;
}

}  // namespace

TEST_CASE("constant trace has a single zeroth coefficient") {
    const Ring ring(10.0, 1.25, 12, 12, 33);
    VectorXcd c = fourier_coeffs(ring.dtn, VectorXcd::Ones(ring.dtn.nodes()));
    CHECK(std::abs(c(33) - 1.0) < 1e-14);
    c(33) = 0.0;
    CHECK(c.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sampled harmonic has a single coefficient") {
    const Ring ring(10.0, 1.0, 8, 10, 20);
    VectorXcd c = fourier_coeffs(ring.dtn, ring.sample(3));
    CHECK(std::abs(c(23) - 1.0) < 1e-10);
    c(23) = 0.0;
    CHECK(c.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Fourier coefficients of a piecewise polynomial match element-wise quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    const int p = 6, sectors = 8, N = 12;
    const Ring ring(4.0, 1.0, sectors, p, N);
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    VectorXcd v(ring.dtn.nodes());
    for (int t = 0; t < v.size(); ++t) v(t) = cplx(nd(gen), nd(gen));
    const VectorXcd c = fourier_coeffs(ring.dtn, v);

    double err = 0.0;
    for (int n = -N; n <= N; ++n) {
        cplx ref = 0.0;
        for (int s = 0; s < sectors; ++s) {
            const ArcEdge a = ring.mesh.gamma_arc(s);
            auto f = [&](double xi) {
                const Eigen::VectorXd l = ring.basis.values(xi);
                cplx u = 0.0;
                for (int k = 0; k <= p; ++k) u += l(k) * v((s * p + k) % v.size());
                return u * std::exp(-kI * double(n) * a.angle(xi)) * a.half_aperture / (2 * kPi);
            };
            const double re = gauss_kronrod<double, 31>::integrate([&](double x) { return f(x).real(); }, -1, 1, 8, 1e-15);
            const double im = gauss_kronrod<double, 31>::integrate([&](double x) { return f(x).imag(); }, -1, 1, 8, 1e-15);
            ref += cplx(re, im);
        }
        err = std::max(err, std::abs(c(n + N) - ref));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("band-limited traces survive the transform round trip") {
    const Ring ring(6.0, 1.0, 12, 20, 20);
    VectorXcd v = VectorXcd::Zero(ring.dtn.nodes());
    for (int n = -8; n <= 8; ++n) v += cplx(1.0 / (1 + n * n), n) * ring.sample(n);
    const VectorXcd back = inverse_fourier(ring.dtn, fourier_coeffs(ring.dtn, v));
    CHECK((back - v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dtn_apply multiplies by the symbol and is linear") {
    const double kappa = 8.0, R = 1.3;
    const VectorXcd out = dtn_apply(delta(10, 2), kappa, R);
    const cplx z2 = kappa * specfun::cyl_bessel_deriv(CylKind::H1, 2, kappa * R) /
                    specfun::cyl_bessel(CylKind::H1, 2, kappa * R);
    CHECK(std::abs(out(12) - z2) < 1e-13 * std::abs(z2));
    const VectorXcd a = VectorXcd::Random(21), b = VectorXcd::Random(21);
    const cplx al(0.3, -2.0), be(1.5, 0.2);
    CHECK((dtn_apply(al * a + be * b, kappa, R) - al * dtn_apply(a, kappa, R) - be * dtn_apply(b, kappa, R))
              .norm() < 1e-13 * dtn_apply(a, kappa, R).norm());
}

TEST_CASE("outgoing mode: radial derivative at R equals the DtN symbol") {
    const double kappa = 10.0, R = 1.25;
    const int N = 30;
    for (int n : {-7, 0, 4, 15}) {
        const OutgoingExpansion w(Vec2::Zero(), R, kappa, delta(N, n));
        for (double th : {0.2, 2.5}) {
            const Vec2 er(std::cos(th), std::sin(th));
            Vec2c g;
            const cplx u = w.eval(R * er, &g);
            const cplx dr = directional(g, er);
            CHECK(std::abs(dr - dtn_symbol(n, kappa, R) * u) < 1e-11 * std::abs(dr));
        }
    }
}

TEST_CASE("outgoing expansion of a trace") {
    const double kappa = 10.0, R = 1.25;
    const Ring ring(kappa, R, 12, 16, 33);
    const OutgoingExpansion w0 = outgoing_from_trace(ring.dtn, Vec2::Zero(), ring.sample(0));
    CHECK(std::abs(w0.eval(Vec2(R, 0.0)) - 1.0) < 1e-12);
    const OutgoingExpansion z = outgoing_from_trace(ring.dtn, Vec2::Zero(), VectorXcd::Zero(ring.dtn.nodes()));
    CHECK(z.eval(Vec2(3.0, 1.0)) == 0.0);

    VectorXcd v = VectorXcd::Zero(ring.dtn.nodes());
    for (int n = -6; n <= 6; ++n) v += cplx(std::cos(n), 0.3 * n) * ring.sample(n);
    const OutgoingExpansion w = outgoing_from_trace(ring.dtn, Vec2::Zero(), v);
    double err = 0.0;
    for (int t = 0; t < v.size(); ++t) err = std::max(err, std::abs(w.eval(ring.points[t]) - v(t)));
    CHECK(err < 1e-11);
}

TEST_CASE("outgoing waves decay like r^{-1/2}") {
    const double R = 1.0, kappa = 20.0;
    const OutgoingExpansion w(Vec2::Zero(), R, kappa, delta(25, 0));
    const double ratio = std::abs(w.eval(Vec2(2 * R, 0))) / std::abs(w.eval(Vec2(4 * R, 0)));
    CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("outgoing gradient agrees with finite differences") {
    VectorXcd c(2 * 12 + 1);
    std::mt19937 gen(9);
    std::normal_distribution<double> nd;
    for (int i = 0; i < c.size(); ++i) c(i) = cplx(nd(gen), nd(gen));
    const OutgoingExpansion w(Vec2(0.5, -1.0), 1.0, 6.0, c);
    std::uniform_real_distribution<double> rad(1.05, 4.0), ang(0, 2 * kPi);
    const double h = 1e-6;
    for (int i = 0; i < 20; ++i) {
        const double r = rad(gen), th = ang(gen);
        const Vec2 x = w.center() + r * Vec2(std::cos(th), std::sin(th));
        Vec2c g;
        w.eval(x, &g);
        const cplx dx = (w.eval(x + Vec2(h, 0)) - w.eval(x - Vec2(h, 0))) / (2 * h);
        const cplx dy = (w.eval(x + Vec2(0, h)) - w.eval(x - Vec2(0, h))) / (2 * h);
        const double scale = std::max(1.0, g.norm());
        CHECK(std::abs(g(0) - dx) < 1e-7 * scale);
        CHECK(std::abs(g(1) - dy) < 1e-7 * scale);
    }
}

TEST_CASE("zeroth outgoing mode has a radial gradient") {
    const OutgoingExpansion w(Vec2::Zero(), 1.0, 5.0, delta(10, 0));
    for (double th : {0.3, 1.9, 4.0}) {
        const Vec2 er(std::cos(th), std::sin(th)), et(-er.y(), er.x());
        Vec2c g;
        w.eval(2.2 * er, &g);
        CHECK(std::abs(directional(g, et)) < 1e-12);
    }
}

TEST_CASE("evaluation inside the source disk is rejected") {
    const OutgoingExpansion w(Vec2(1.0, 1.0), 1.0, 5.0, delta(10, 0));
    CHECK_THROWS_AS(w.eval(Vec2(1.5, 1.0)), NotInDomainError);
}

TEST_CASE("outgoing expansion satisfies the Helmholtz equation") {
    VectorXcd c = VectorXcd::Zero(2 * 15 + 1);
    for (int n = -15; n <= 15; ++n) c(n + 15) = 1.0 / (1.0 + std::abs(n));
    const double kappa = 7.0;
    const OutgoingExpansion w(Vec2::Zero(), 1.0, kappa, c);
    const double h = 1e-4;
    for (const Vec2& x : {Vec2(1.5, 0.2), Vec2(-2.0, 2.5), Vec2(0.3, -3.1)}) {
        const cplx u = w.eval(x);
        const cplx lap = (w.eval(x + Vec2(h, 0)) + w.eval(x - Vec2(h, 0)) + w.eval(x + Vec2(0, h)) +
                          w.eval(x - Vec2(0, h)) - 4.0 * u) / (h * h);
        CHECK(std::abs(lap + kappa * kappa * u) < 1e-3 * kappa * kappa * std::abs(u));
    }
}

TEST_CASE("zeroth-mode transfer is reciprocal") {
    const Vec2 a(0.0, 0.0), b(2.6, 1.1);
    const OutgoingExpansion wa(a, 1.25, 10.0, delta(20, 0)), wb(b, 1.25, 10.0, delta(20, 0));
    CHECK(std::abs(wa.eval(b) - wb.eval(a)) < 1e-11);
}

TEST_CASE("T' annihilates outgoing modes of its own circle") {
    const double kappa = 10.0, R = 1.25;
    const Ring ring(kappa, R, 12, 20, 33);
    for (int n : {-20, -3, 0, 1, 12, 25}) {
        const OutgoingExpansion w(Vec2::Zero(), R, kappa, delta(33, n));
        VectorXcd v(ring.dtn.nodes()), dn(ring.dtn.nodes());
        for (int t = 0; t < v.size(); ++t) {
            Vec2c g;
            v(t) = w.eval(ring.points[t], &g);
            dn(t) = directional(g, ring.normals[t]);
        }
        CHECK(tprime_apply(ring.dtn, v, dn).cwiseAbs().maxCoeff() < 1e-9 * dn.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("T' of the incident wave matches the Jacobi-Anger formula") {
    const double kappa = 10.0, R = 1.0;
    const int N = 30;
    const Ring ring(kappa, R, 12, 20, N);
    const TraceData d = incident_data(IncidentWave{kappa, 1.0}, ring.points, ring.normals);
    const VectorXcd tp = tprime_apply(ring.dtn, d.values, d.normal_derivs);
    CHECK(tp.cwiseAbs().maxCoeff() > 1.0);
    const VectorXcd c = fourier_coeffs(ring.dtn, tp);
    double err = 0.0;
    for (int n = -20; n <= 20; ++n) {
        const double J = specfun::cyl_bessel(CylKind::J, n, kappa * R).real();
        const double dJ = specfun::cyl_bessel_deriv(CylKind::J, n, kappa * R).real();
        const cplx want = kappa * dJ - dtn_symbol(n, kappa, R) * J;
        err = std::max(err, std::abs(c(n + N) - want));
    }
    CHECK(err < 1e-9);
}

TEST_CASE("T' is linear in both inputs") {
    const Ring ring(5.0, 1.0, 8, 10, 25);
    const int n = ring.dtn.nodes();
    const VectorXcd a = VectorXcd::Random(n), b = VectorXcd::Random(n), c = VectorXcd::Random(n),
                    d = VectorXcd::Random(n);
    const cplx s(2.0, -1.0);
    const VectorXcd lhs = tprime_apply(ring.dtn, a + s * b, c + s * d);
    const VectorXcd rhs = tprime_apply(ring.dtn, a, c) + s * tprime_apply(ring.dtn, b, d);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("incident data values and normal derivatives") {
    const double kappa = 4.0;
    const IncidentWave w{kappa, 1.0};
    TraceData d = incident_data(w, {Vec2::Zero()}, {Vec2(0, 1)});
    CHECK(std::abs(d.values(0) - 1.0) < 1e-15);
    CHECK(std::abs(d.normal_derivs(0) - kI * kappa) < 1e-15);
    const Vec2 n = Vec2(0.6, 0.8);
    d = incident_data(w, {Vec2(0, kPi / kappa)}, {n});
    CHECK(std::abs(d.values(0) + 1.0) < 1e-15);
    CHECK(std::abs(d.normal_derivs(0) + kI * kappa * 0.8) < 1e-14);
}

TEST_CASE("incident Fourier coefficients follow Jacobi-Anger") {
    const double kappa = 10.0, R = 1.25;
    const Vec2 c(2.6, 0.7);
    const Ring ring(kappa, R, 12, 20, 33, c);
    const TraceData d = incident_data(IncidentWave{kappa, 1.0}, ring.points, ring.normals);
    const VectorXcd f = fourier_coeffs(ring.dtn, d.values);
    const cplx phase = std::exp(kI * kappa * c.y());
    for (int n = -25; n <= 25; ++n) {
        const double J = specfun::cyl_bessel(CylKind::J, n, kappa * R).real();
        CHECK(std::abs(f(n + 33) - phase * J) < 1e-10);
    }
}
