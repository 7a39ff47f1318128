#pragma once

// Reusable numerical studies: analytic oracles for single-scatterer solves,
// operator identities, p-sweeps and the cross-algorithm comparison.

#include <vector>

#include "mscat/multiscatter.hpp"
#include "mscat/scene.hpp"

namespace mscat {

/// Scattered field of a sound-soft circle of radius a at the origin under
/// exp(i kappa y): -sum_n J_n(kappa a) / H_n(kappa a) H_n(kappa r) e^{in theta}.
cplx mie_scattered(double kappa, double a, const Vec2& x);

struct MieCheck {
    double rel_error = 0.0;  // discrete L2 on the probe circle
    int iterations = 0;
    int N = 0;
};

/// Unit sound-soft circle, disk radius R, probe circle of radius 2.
/// N <= 0 selects ceil(kappa) + 20.
MieCheck mie_check(double kappa, int p, int rings = 2, int sectors = 12, double R = 1.25,
                   int N = 0);

/// Largest relative deviation of the assembled extraction/symbol/synthesis
/// chain from z_n e^{in theta} on the Gamma nodes, over |n| <= nmax.
double dtn_eigen_check(double kappa, int p, int sectors, double R, int N, int nmax);

/// Largest |T'(w_n)| relative to |dw_n/dr| over the outgoing modes
/// w_n = H_n(kappa r) / H_n(kappa R) e^{in theta}, |n| <= nmax.
double tprime_annihilation_check(double kappa, int p, int sectors, double R, int N, int nmax);

/// Largest |I_nm(analytic) - I_nm(adaptive quadrature)| over |n| <= nmax, m <= mmax.
double integral_check(int nmax, int mmax, double half_aperture, double mid_angle);

/// n points on a circle enclosing every disk of the scene (margin 0.5).
std::vector<Vec2> exterior_probes(const SceneConfig& scene, int n = 200);

/// Relative discrete L2 difference sqrt(sum |a - b|^2 / sum |b|^2).
double relative_l2(const std::vector<cplx>& a, const std::vector<cplx>& b);

struct SceneRun {
    int p = 0;
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
    std::vector<cplx> probe_total;
    std::vector<double> residuals;
};

/// Solve the scene (with p overridden) and sample the total field at probes.
SceneRun run_at(SceneConfig scene, int p, const std::vector<Vec2>& probes, int threads = 0);

struct SweepRow {
    SceneRun run;
    double error = 0.0;  // against the reference run
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SceneRun reference;
};

/// Runs every p plus a reference at reference_p (<= 0 selects max(p) + 5).
SweepResult sweep(const SceneConfig& scene, const std::vector<int>& ps, int reference_p = 0,
                  int threads = 0);

struct CompareResult {
    SceneRun homogeneous;
    SceneRun inhomogeneous;
    double difference = 0.0;
};

/// Solves an n = 1 scene with both the scatterer-boundary and the
/// artificial-circle formulations and compares total fields at exterior probes.
CompareResult compare_algorithms(const SceneConfig& scene, int threads = 0);

}  // namespace mscat
