#pragma once

// Outer coupled system for multiple scattering: the homogeneous operator on
// scatterer-boundary traces, the inhomogeneous operator on artificial-circle
// traces, their GMRES solution and the final field evaluation.

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "mscat/gmres.hpp"
#include "mscat/harmonics.hpp"
#include "mscat/scene.hpp"
#include "mscat/subdomain.hpp"

namespace mscat {

enum class Execution { Serial, Parallel };

/// One scatterer: its factorized operator (built in coordinates relative to
/// the center) and the center offset.
struct Subdomain {
    std::shared_ptr<const SubdomainOperator> op;
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
};

/// Per-scatterer state after the final step.
struct SubdomainState {
    InteriorSolution solution;  // local coordinates
    OutgoingExpansion outgoing;
};

class FieldEvaluator;

struct SceneSolution {
    Eigen::VectorXcd W;
    IterationReport report;
    std::vector<SubdomainState> states;
    double setup_seconds = 0.0;
};

class SceneSolver {
public:
    /// Builds and factorizes every subdomain operator. Operators are shared
    /// between scatterers whose relative geometry, condition and index agree.
    /// threads <= 0 uses the OpenMP default.
    explicit SceneSolver(SceneConfig scene, int threads = 0);

    const SceneConfig& scene() const { return scene_; }
    int size() const { return static_cast<int>(subs_.size()); }
    const Subdomain& subdomain(int i) const { return subs_[i]; }
    int distinct_operators() const { return distinct_; }
    double setup_seconds() const { return setup_seconds_; }
    IncidentWave incident() const { return {scene_.kappa, scene_.amplitude}; }
    void set_threads(int threads) { threads_ = threads; }

    /// Block offsets of the trace vector (size() + 1 entries).
    const std::vector<int>& offsets() const { return offsets_; }
    /// Arc-length quadrature weights matching the trace layout.
    const Eigen::VectorXd& weights() const { return weights_; }
    /// Scatterer-boundary (homogeneous) or Gamma (inhomogeneous) grid of block i, global coordinates.
    std::vector<Vec2> block_points(int i) const;
    std::vector<Vec2> block_normals(int i) const;

    /// W -> (I + K) W on scatterer boundaries.
    Eigen::VectorXcd apply_hom(const Eigen::VectorXcd& W, Execution ex = Execution::Parallel) const;
    /// W -> (I + K' - S'K') W on artificial circles.
    Eigen::VectorXcd apply_inhom(const Eigen::VectorXcd& W, Execution ex = Execution::Parallel) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& W, Execution ex = Execution::Parallel) const;

    Eigen::VectorXcd build_rhs() const;

    /// Final step: per-scatterer interior solutions and outgoing expansions for W.
    std::vector<SubdomainState> finalize(const Eigen::VectorXcd& W,
                                         Execution ex = Execution::Parallel) const;

    SceneSolution solve(Execution ex = Execution::Parallel) const;

    /// Boundary operator of scatterer i applied to the total field at its
    /// boundary nodes, and the same for the incident wave alone.
    struct BcResidual {
        double residual = 0.0;  // weighted L2 norm of B[u_total]
        double incident = 0.0;  // weighted L2 norm of B[u_in]
    };
    std::vector<BcResidual> bc_residuals(const SceneSolution& sol) const;

private:
    cplx boundary_value(int i, int t, cplx u, const Vec2c& grad) const;
    bool needs_gradient(int i) const;
    /// Value (and gradient) at x of scatterer j's contribution for state s.
    cplx contribution(int j, const SubdomainState& s, const Vec2& x, Vec2c* grad) const;

    SceneConfig scene_;
    int threads_;
    std::vector<Subdomain> subs_;
    std::vector<int> offsets_;
    Eigen::VectorXd weights_;
    int distinct_ = 0;
    double setup_seconds_ = 0.0;

    friend class FieldEvaluator;
};

/// Scattered and total field anywhere in the plane. Points inside a
/// scatterer are masked.
class FieldEvaluator {
public:
    FieldEvaluator(const SceneSolver& solver, const SceneSolution& solution);

    struct Sample {
        cplx scattered{0.0, 0.0};
        cplx total{0.0, 0.0};
        bool masked = false;
    };
    Sample eval(const Vec2& x) const;

    /// Row-major over y then x; parallel over rows.
    std::vector<Sample> grid(const GridSpec& g, Execution ex = Execution::Parallel) const;

private:
    const SceneSolver& solver_;
    const SceneSolution& solution_;
};

/// True when x lies strictly inside scatterer spec (beyond tol).
bool inside_scatterer(const ScattererSpec& spec, const Vec2& x, double tol = 0.0);

}  // namespace mscat
