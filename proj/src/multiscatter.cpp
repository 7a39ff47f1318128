#include "mscat/multiscatter.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>

#include "mscat/error.hpp"

namespace mscat {

using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

template <class F>
void for_each_index(int n, Execution ex, int threads, F&& f) {
    if (ex == Execution::Serial || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string operator_key(const SceneConfig& s, int i) {
    if (!s.index.translation_invariant()) return "unique:" + std::to_string(i);
    const ScattererSpec& sc = s.scatterers[i];
    std::ostringstream os;
    os.precision(17);
    os << sc.shape.a << ' ' << sc.shape.b << ' ' << sc.shape.k << ' ' << sc.shape.theta0 << ' '
       << int(sc.bc.kind) << ' ' << sc.bc.h.real() << ' ' << sc.bc.h.imag() << ' '
       << s.disks[i].radius << ' ' << s.sectors_for(i) << ' ' << s.cutoff_for(i);
    return os.str();
}

double weighted_norm(const VectorXcd& v, const VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += w(i) * std::norm(v(i));
    return std::sqrt(s);
}

}  // namespace

bool inside_scatterer(const ScattererSpec& spec, const Vec2& x, double tol) {
    const Vec2 d = x - spec.center;
    const double rho = d.norm();
    if (rho >= spec.shape.max_radius()) return false;
    return rho < spec.shape.radius(std::atan2(d.y(), d.x())) - tol;
}

SceneSolver::SceneSolver(SceneConfig scene, int threads)
    : scene_(std::move(scene)), threads_(threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> problems = validate_scene(scene_);
    if (!problems.empty()) throw ValidationError(problems);

    const int M = scene_.size();
    std::map<std::string, int> key_index;
    std::vector<int> owner(M);
    std::vector<int> representative;
    for (int i = 0; i < M; ++i) {
        const auto [it, fresh] =
            key_index.emplace(operator_key(scene_, i), static_cast<int>(representative.size()));
        if (fresh) representative.push_back(i);
        owner[i] = it->second;
    }
    distinct_ = static_cast<int>(representative.size());

    std::vector<std::shared_ptr<const SubdomainOperator>> ops(distinct_);
    const SceneConfig& sc = scene_;
    const std::vector<Vec2> centers = sc.centers();
    for_each_index(distinct_, Execution::Parallel, threads_, [&](int u) {
        const int i = representative[u];
        ScattererSpec local = sc.scatterers[i];
        local.center = Vec2::Zero();
        const ArtificialDisk disk{Vec2::Zero(), sc.disks[i].radius};
        auto space = std::make_shared<const SemSpace>(
            AnnularMesh(local, disk, sc.solver.rings, sc.sectors_for(i)), sc.solver.p);
        const Vec2 c = sc.scatterers[i].center;
        const IndexProfile profile = sc.index;
        IndexFn n = nullptr;
        if (profile.kind != IndexKind::ConstantOne)
            n = [profile, centers, c](const Vec2& xl) {
                return refraction_eval(profile, centers, c + xl);
            };
        ops[u] = std::make_shared<const SubdomainOperator>(space, sc.kappa, sc.cutoff_for(i),
                                                           local.bc, n);
    });

    subs_.resize(M);
    offsets_.assign(M + 1, 0);
    for (int i = 0; i < M; ++i) {
        subs_[i] = {ops[owner[i]], scene_.scatterers[i].center, scene_.disks[i].radius};
        offsets_[i + 1] = offsets_[i] + subs_[i].op->space().angular_nodes();
    }
    weights_.resize(offsets_[M]);
    for (int i = 0; i < M; ++i) {
        const SemSpace& V = subs_[i].op->space();
        const VectorXd& w = scene_.mode == SceneMode::Homogeneous ? V.scatterer().weights
                                                                  : V.gamma().weights;
        weights_.segment(offsets_[i], w.size()) = w;
    }
    setup_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Vec2> SceneSolver::block_points(int i) const {
    const SemSpace& V = subs_[i].op->space();
    const BoundaryGrid& g =
        scene_.mode == SceneMode::Homogeneous ? V.scatterer() : V.gamma();
    std::vector<Vec2> pts(g.points);
    for (Vec2& x : pts) x += subs_[i].center;
    return pts;
}

std::vector<Vec2> SceneSolver::block_normals(int i) const {
    const SemSpace& V = subs_[i].op->space();
    return scene_.mode == SceneMode::Homogeneous ? V.scatterer().normals : V.gamma().normals;
}

bool SceneSolver::needs_gradient(int i) const {
    return scene_.scatterers[i].bc.kind != BcKind::Dirichlet;
}

cplx SceneSolver::boundary_value(int i, int t, cplx u, const Vec2c& grad) const {
    const BoundaryCondition& bc = scene_.scatterers[i].bc;
    if (bc.kind == BcKind::Dirichlet) return u;
    const Vec2& n = subs_[i].op->space().scatterer().normals[t];
    const cplx dn = directional(grad, n);
    return bc.kind == BcKind::Neumann ? dn : dn + bc.h * u;
}

cplx SceneSolver::contribution(int j, const SubdomainState& s, const Vec2& x, Vec2c* grad) const {
    const Subdomain& sd = subs_[j];
    const Vec2 d = x - sd.center;
    if (d.norm() >= sd.radius * (1.0 - 1e-12)) return s.outgoing.eval(x, grad);
    if (inside_scatterer(scene_.scatterers[j], x, 1e-10))
        throw GeometryError("evaluation point lies inside scatterer " + scene_.ids[j]);
    return s.solution.eval(d, grad);
}

VectorXcd SceneSolver::apply(const VectorXcd& W, Execution ex) const {
    return scene_.mode == SceneMode::Homogeneous ? apply_hom(W, ex) : apply_inhom(W, ex);
}

std::vector<SubdomainState> SceneSolver::finalize(const VectorXcd& W, Execution ex) const {
    const int M = size();
    if (W.size() != offsets_[M]) throw DimensionError("trace vector has wrong length");
    std::vector<SubdomainState> st(M);
    if (scene_.mode == SceneMode::Homogeneous) {
        for_each_index(M, ex, threads_, [&](int j) {
            const SubdomainOperator& op = *subs_[j].op;
            st[j].solution = op.solve(W.segment(offsets_[j], offsets_[j + 1] - offsets_[j]), {});
            st[j].outgoing =
                outgoing_from_trace(op.dtn(), subs_[j].center, st[j].solution.gamma_trace());
        });
        return st;
    }

    for (int j = 0; j < M; ++j) {
        const SubdomainOperator& op = *subs_[j].op;
        st[j].outgoing = outgoing_from_trace(op.dtn(), subs_[j].center,
                                             W.segment(offsets_[j], offsets_[j + 1] - offsets_[j]));
    }
    const IncidentWave inc = incident();
    for_each_index(M, ex, threads_, [&](int i) {
        const SubdomainOperator& op = *subs_[i].op;
        const BoundaryGrid& G = op.space().gamma();
        TraceData f = incident_data(inc, block_points(i), G.normals);
        for (int t = 0; t < G.size(); ++t) {
            const Vec2 x = subs_[i].center + G.points[t];
            for (int j = 0; j < M; ++j) {
                if (j == i) continue;
                Vec2c g;
                f.values(t) += st[j].outgoing.eval(x, &g);
                f.normal_derivs(t) += directional(g, G.normals[t]);
            }
        }
        st[i].solution = op.solve({}, op.gamma_load_tprime(f.values, f.normal_derivs));
    });
    return st;
}

VectorXcd SceneSolver::apply_hom(const VectorXcd& W, Execution ex) const {
    if (scene_.mode != SceneMode::Homogeneous)
        throw DomainError("homogeneous operator requires a homogeneous scene");
    const int M = size();
    const std::vector<SubdomainState> st = finalize(W, ex);
    VectorXcd out = W;
    for_each_index(M, ex, threads_, [&](int i) {
        const BoundaryGrid& S = subs_[i].op->space().scatterer();
        const bool need_grad = needs_gradient(i);
        for (int t = 0; t < S.size(); ++t) {
            const Vec2 x = subs_[i].center + S.points[t];
            cplx u = 0.0;
            Vec2c g = Vec2c::Zero();
            for (int j = 0; j < M; ++j) {
                if (j == i) continue;
                Vec2c gj;
                u += contribution(j, st[j], x, need_grad ? &gj : nullptr);
                if (need_grad) g += gj;
            }
            out(offsets_[i] + t) += boundary_value(i, t, u, g);
        }
    });
    return out;
}

VectorXcd SceneSolver::apply_inhom(const VectorXcd& W, Execution ex) const {
    if (scene_.mode != SceneMode::Inhomogeneous)
        throw DomainError("inhomogeneous operator requires an inhomogeneous scene");
    const int M = size();
    if (W.size() != offsets_[M]) throw DimensionError("trace vector has wrong length");
    std::vector<OutgoingExpansion> exps(M);
    for (int j = 0; j < M; ++j)
        exps[j] = outgoing_from_trace(subs_[j].op->dtn(), subs_[j].center,
                                      W.segment(offsets_[j], offsets_[j + 1] - offsets_[j]));
    VectorXcd out = W;
    for_each_index(M, ex, threads_, [&](int i) {
        const SubdomainOperator& op = *subs_[i].op;
        const BoundaryGrid& G = op.space().gamma();
        VectorXcd f = VectorXcd::Zero(G.size()), dnf = VectorXcd::Zero(G.size());
        for (int t = 0; t < G.size(); ++t) {
            const Vec2 x = subs_[i].center + G.points[t];
            for (int j = 0; j < M; ++j) {
                if (j == i) continue;
                Vec2c g;
                f(t) += exps[j].eval(x, &g);
                dnf(t) += directional(g, G.normals[t]);
            }
        }
        const InteriorSolution u = op.solve({}, op.gamma_load_tprime(f, dnf));
        out.segment(offsets_[i], G.size()) += f - u.gamma_trace();
    });
    return out;
}

VectorXcd SceneSolver::build_rhs() const {
    const int M = size();
    VectorXcd b(offsets_[M]);
    const IncidentWave inc = incident();
    for_each_index(M, Execution::Parallel, threads_, [&](int i) {
        const SubdomainOperator& op = *subs_[i].op;
        if (scene_.mode == SceneMode::Homogeneous) {
            const BoundaryGrid& S = op.space().scatterer();
            for (int t = 0; t < S.size(); ++t) {
                const Vec2 x = subs_[i].center + S.points[t];
                b(offsets_[i] + t) = -boundary_value(i, t, inc.value(x), inc.gradient(x));
            }
        } else {
            const BoundaryGrid& G = op.space().gamma();
            const TraceData d = incident_data(inc, block_points(i), G.normals);
            const InteriorSolution u = op.solve({}, op.gamma_load_tprime(d.values, d.normal_derivs));
            b.segment(offsets_[i], G.size()) = -d.values + u.gamma_trace();
        }
    });
    return b;
}

SceneSolution SceneSolver::solve(Execution ex) const {
    SceneSolution sol;
    const VectorXcd b = build_rhs();
    GmresResult r = gmres([&](const VectorXcd& w) { return apply(w, ex); }, b, weights_,
                          scene_.solver.tol, scene_.solver.max_iter);
    sol.W = std::move(r.x);
    sol.report = std::move(r.report);
    sol.states = finalize(sol.W, ex);
    sol.setup_seconds = setup_seconds_;
    return sol;
}

std::vector<SceneSolver::BcResidual> SceneSolver::bc_residuals(const SceneSolution& sol) const {
    const int M = size();
    std::vector<BcResidual> out(M);
    const IncidentWave inc = incident();
    for (int i = 0; i < M; ++i) {
        const SubdomainOperator& op = *subs_[i].op;
        const BoundaryGrid& S = op.space().scatterer();
        VectorXcd total = op.boundary_operator(sol.states[i].solution);
        VectorXcd incb(S.size());
        for (int t = 0; t < S.size(); ++t) {
            const Vec2 x = subs_[i].center + S.points[t];
            incb(t) = boundary_value(i, t, inc.value(x), inc.gradient(x));
        }
        if (scene_.mode == SceneMode::Homogeneous) {
            total += incb;
            for (int t = 0; t < S.size(); ++t) {
                const Vec2 x = subs_[i].center + S.points[t];
                cplx u = 0.0;
                Vec2c g = Vec2c::Zero();
                for (int j = 0; j < M; ++j) {
                    if (j == i) continue;
                    Vec2c gj;
                    u += contribution(j, sol.states[j], x, &gj);
                    g += gj;
                }
                total(t) += boundary_value(i, t, u, g);
            }
        }
        out[i] = {weighted_norm(total, S.weights), weighted_norm(incb, S.weights)};
    }
    return out;
}

FieldEvaluator::FieldEvaluator(const SceneSolver& solver, const SceneSolution& solution)
    : solver_(solver), solution_(solution) {
    if (static_cast<int>(solution.states.size()) != solver.size())
        throw DimensionError("solution does not match the scene");
}

FieldEvaluator::Sample FieldEvaluator::eval(const Vec2& x) const {
    const SceneConfig& sc = solver_.scene();
    Sample s;
    for (const ScattererSpec& spec : sc.scatterers)
        if (inside_scatterer(spec, x)) {
            s.masked = true;
            return s;
        }
    const cplx uin = solver_.incident().value(x);
    const int M = solver_.size();
    if (sc.mode == SceneMode::Inhomogeneous) {
        for (int i = 0; i < M; ++i) {
            const Subdomain& sd = solver_.subdomain(i);
            const Vec2 d = x - sd.center;
            if (d.norm() < sd.radius * (1.0 - 1e-12)) {
                s.total = solution_.states[i].solution.eval(d);
                s.scattered = s.total - uin;
                return s;
            }
        }
        for (int j = 0; j < M; ++j) s.scattered += solution_.states[j].outgoing.eval(x);
    } else {
        for (int j = 0; j < M; ++j)
            s.scattered += solver_.contribution(j, solution_.states[j], x, nullptr);
    }
    s.total = s.scattered + uin;
    return s;
}

std::vector<FieldEvaluator::Sample> FieldEvaluator::grid(const GridSpec& g, Execution ex) const {
    if (g.nx < 1 || g.ny < 1) throw DomainError("grid needs nx, ny >= 1");
    std::vector<Sample> out(static_cast<std::size_t>(g.nx) * g.ny);
    const double dx = g.nx > 1 ? (g.x1 - g.x0) / (g.nx - 1) : 0.0;
    const double dy = g.ny > 1 ? (g.y1 - g.y0) / (g.ny - 1) : 0.0;
    for_each_index(g.ny, ex, solver_.threads_, [&](int r) {
        const double y = g.y0 + r * dy;
        for (int c = 0; c < g.nx; ++c)
            out[static_cast<std::size_t>(r) * g.nx + c] = eval(Vec2(g.x0 + c * dx, y));
    });
    return out;
}

}  // namespace mscat
