#include "mscat/studies.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <numbers>

#include "mscat/dtn.hpp"
#include "mscat/error.hpp"
#include "mscat/lgl.hpp"
#include "mscat/specfun.hpp"

namespace mscat {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
}  // namespace

cplx mie_scattered(double kappa, double a, const Vec2& x) {
    const double r = x.norm();
    const double th = std::atan2(x.y(), x.x());
    const int nmax = static_cast<int>(kappa * std::max(r, a)) + 40;
    const specfun::BesselTable ta = specfun::cyl_bessel_table(nmax, kappa * a, true);
    const specfun::BesselTable tr = specfun::cyl_bessel_table(nmax, kappa * r, true);
    cplx u = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
        const int an = std::abs(n);
        // J_{-n}/H_{-n} = J_n/H_n, so only the Hankel factor carries the reflection sign.
        const double sign = (n < 0 && (an % 2)) ? -1.0 : 1.0;
        u -= ta.j[an] / ta.h1(an) * sign * tr.h1(an) * std::exp(kI * double(n) * th);
    }
    return u;
}

MieCheck mie_check(double kappa, int p, int rings, int sectors, double R, int N) {
    SceneConfig s;
    s.kappa = kappa;
    s.ids = {"circle"};
    ScattererSpec sc;
    sc.shape = {0.0, 1.0, 0, 0.0};
    s.scatterers = {sc};
    s.disks = {ArtificialDisk{Vec2::Zero(), R}};
    s.solver.p = p;
    s.solver.rings = rings;
    s.solver.sectors = sectors;
    s.solver.N = N > 0 ? N : static_cast<int>(std::ceil(kappa)) + 20;
    s.solver.tol = 1e-13;

    const SceneSolver solver(s, 1);
    const SceneSolution sol = solver.solve();
    const FieldEvaluator field(solver, sol);
    std::vector<cplx> got, want;
    for (int t = 0; t < 200; ++t) {
        const double th = kTwoPi * t / 200;
        const Vec2 x = 2.0 * Vec2(std::cos(th), std::sin(th));
        got.push_back(field.eval(x).scattered);
        want.push_back(mie_scattered(kappa, 1.0, x));
    }
    return {relative_l2(got, want), sol.report.iterations, s.solver.N};
}

namespace {

/// DtN block on a bare ring mesh of outer radius R about the origin.
DtnBlock ring_block(double kappa, int p, int sectors, double R, int N) {
    ScattererSpec sc;
    sc.shape = {0.0, 0.5 * R, 0, 0.0};
    const AnnularMesh mesh(sc, ArtificialDisk{Vec2::Zero(), R}, 1, sectors);
    return DtnBlock(mesh, LagrangeBasis(p), kappa, N);
}

}  // namespace

double dtn_eigen_check(double kappa, int p, int sectors, double R, int N, int nmax) {
    const DtnBlock dtn = ring_block(kappa, p, sectors, R, N);
    double worst = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
        VectorXcd v(dtn.nodes());
        for (int t = 0; t < v.size(); ++t) v(t) = std::exp(kI * double(n) * dtn.angles()(t));
        const VectorXcd c = dtn.fourier(v);
        const VectorXcd out = dtn.synthesize((c.array() * dtn.symbols().array()).matrix());
        const cplx z = dtn.symbols()(n + N);
        worst = std::max(worst, (out - z * v).cwiseAbs().maxCoeff() / std::abs(z));
    }
    return worst;
}

double tprime_annihilation_check(double kappa, int p, int sectors, double R, int N, int nmax) {
    const DtnBlock dtn = ring_block(kappa, p, sectors, R, N);
    double worst = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
        VectorXcd coeffs = VectorXcd::Zero(2 * N + 1);
        coeffs(n + N) = 1.0;
        const OutgoingExpansion w(Vec2::Zero(), R, kappa, coeffs);
        VectorXcd v(dtn.nodes()), dn(dtn.nodes());
        for (int t = 0; t < v.size(); ++t) {
            const Vec2 e(std::cos(dtn.angles()(t)), std::sin(dtn.angles()(t)));
            Vec2c g;
            v(t) = w.eval(R * e, &g);
            dn(t) = directional(g, e);
        }
        const double scale = dn.cwiseAbs().maxCoeff();
        worst = std::max(worst, tprime_apply(dtn, v, dn).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

double integral_check(int nmax, int mmax, double half_aperture, double mid_angle) {
    using boost::math::quadrature::gauss_kronrod;
    const ArcEdge arc{Vec2::Zero(), 1.0, half_aperture, mid_angle};
    double worst = 0.0;
    for (int n = -nmax; n <= nmax; ++n)
        for (int m = 0; m <= mmax; ++m) {
            auto f = [&](double xi, bool imag) {
                const double P = legendre_values(m, xi)(m);
                const cplx e = std::exp(-kI * double(n) * arc.angle(xi)) * half_aperture;
                return P * (imag ? e.imag() : e.real());
            };
            const double re = gauss_kronrod<double, 61>::integrate(
                [&](double x) { return f(x, false); }, -1.0, 1.0, 8, 1e-13);
            const double im = gauss_kronrod<double, 61>::integrate(
                [&](double x) { return f(x, true); }, -1.0, 1.0, 8, 1e-13);
            worst = std::max(worst, std::abs(dtn_integral(arc, n, m) - cplx(re, im)));
        }
    return worst;
}

std::vector<Vec2> exterior_probes(const SceneConfig& scene, int n) {
    Vec2 c = Vec2::Zero();
    for (const auto& d : scene.disks) c += d.center;
    c /= std::max<std::size_t>(1, scene.disks.size());
    double rad = 0.0;
    for (const auto& d : scene.disks) rad = std::max(rad, (d.center - c).norm() + d.radius);
    rad += 0.5;
    std::vector<Vec2> pts;
    for (int t = 0; t < n; ++t) {
        const double th = kTwoPi * (t + 0.25) / n;
        pts.push_back(c + rad * Vec2(std::cos(th), std::sin(th)));
    }
    return pts;
}

double relative_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw DimensionError("sample sets differ in length");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SceneRun run_at(SceneConfig scene, int p, const std::vector<Vec2>& probes, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    scene.solver.p = p;
    const SceneSolver solver(scene, threads);
    const SceneSolution sol = solver.solve();
    const FieldEvaluator field(solver, sol);
    SceneRun r;
    r.p = p;
    r.iterations = sol.report.iterations;
    r.converged = sol.report.converged;
    r.residuals = sol.report.residuals;
    for (const Vec2& x : probes) r.probe_total.push_back(field.eval(x).total);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SweepResult sweep(const SceneConfig& scene, const std::vector<int>& ps, int reference_p,
                  int threads) {
    if (ps.empty()) throw DomainError("sweep needs at least one degree");
    int pmax = 0;
    for (int p : ps) pmax = std::max(pmax, p);
    const int pref = reference_p > 0 ? reference_p : pmax + 5;
    const std::vector<Vec2> probes = exterior_probes(scene);
    SweepResult out;
    out.reference = run_at(scene, pref, probes, threads);
    for (int p : ps) {
        SweepRow row;
        row.run = run_at(scene, p, probes, threads);
        row.error = relative_l2(row.run.probe_total, out.reference.probe_total);
        out.rows.push_back(std::move(row));
    }
    return out;
}

CompareResult compare_algorithms(const SceneConfig& scene, int threads) {
    SceneConfig s = scene;
    s.index = IndexProfile{};
    const std::vector<Vec2> probes = exterior_probes(s);
    CompareResult r;
    s.mode = SceneMode::Homogeneous;
    r.homogeneous = run_at(s, s.solver.p, probes, threads);
    s.mode = SceneMode::Inhomogeneous;
    r.inhomogeneous = run_at(s, s.solver.p, probes, threads);
    r.difference = relative_l2(r.inhomogeneous.probe_total, r.homogeneous.probe_total);
    return r;
}

}  // namespace mscat
