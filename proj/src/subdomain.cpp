#include "mscat/subdomain.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "mscat/error.hpp"

namespace mscat {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

VectorXcd real_times(const MatrixXd& A, const VectorXcd& x) {
    VectorXcd y(A.rows());
    y.real() = A * x.real();
    y.imag() = A * x.imag();
    return y;
}

}  // namespace

SemSpace::SemSpace(AnnularMesh mesh, int p)
    : mesh_(std::move(mesh)),
      basis_(p),
      n_ang_(mesh_.sectors() * p),
      n_rad_(mesh_.rings() * p + 1) {
    points_.assign(size(), Vec2::Zero());
    for (int e = 0; e < mesh_.size(); ++e) {
        const Element& el = mesh_.element(e);
        for (int l = 0; l <= p; ++l)
            for (int k = 0; k <= p; ++k)
                points_[element_node(e, k, l)] =
                    map_eval(el, basis_.nodes()(k), basis_.nodes()(l)).x;
    }

    const Vec2 c = mesh_.disk().center;
    const double R = mesh_.disk().radius;
    const int S = mesh_.sectors();
    auto init = [&](BoundaryGrid& g, int a) {
        g.ids.resize(n_ang_);
        g.points.resize(n_ang_);
        g.normals.resize(n_ang_);
        g.angles.resize(n_ang_);
        g.weights = VectorXd::Zero(n_ang_);
        for (int t = 0; t < n_ang_; ++t) g.ids[t] = node(a, t);
    };
    init(gamma_, n_rad_ - 1);
    init(scatterer_, 0);
    for (int s = 0; s < S; ++s) {
        const ArcEdge arc = mesh_.gamma_arc(s);
        const Edge& inner = mesh_.element(mesh_.index(0, s)).edges[2];
        for (int k = 0; k <= p; ++k) {
            const double xi = basis_.nodes()(k);
            const double w = basis_.weights()(k);
            const int t = (s * p + k) % n_ang_;
            const double th = arc.angle(xi);
            gamma_.weights(t) += w * R * arc.half_aperture;
            scatterer_.weights(t) += w * edge_eval(inner, xi).dx.norm();
            if (k == p) continue;
            gamma_.angles(t) = th;
            gamma_.points[t] = c + R * Vec2(std::cos(th), std::sin(th));
            gamma_.normals[t] = Vec2(std::cos(th), std::sin(th));
            scatterer_.angles(t) = th;
            const BoundarySample b = shape_eval(mesh_.scatterer(), th);
            scatterer_.points[t] = b.point;
            scatterer_.normals[t] = b.normal;
        }
    }
}

int SemSpace::element_node(int e, int k, int l) const {
    const Element& el = mesh_.element(e);
    const int p = degree();
    return node(el.ring * p + l, el.sector * p + k);
}

InteriorSolution::InteriorSolution(std::shared_ptr<const SemSpace> space, VectorXcd values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_->size())
        throw DimensionError("solution vector does not match the space");
}

cplx InteriorSolution::eval(const Vec2& x, Vec2c* grad) const {
    const AnnularMesh::Location loc = space_->mesh().locate_point(x);
    return eval_in(loc.element, loc.xi, loc.eta, grad);
}

cplx InteriorSolution::eval_in(int e, double xi, double eta, Vec2c* grad) const {
    const LagrangeBasis& B = space_->basis();
    const int p = B.degree();
    const VectorXd lx = B.values(xi), ly = B.values(eta);
    VectorXd dlx, dly;
    if (grad) {
        dlx = B.derivs(xi);
        dly = B.derivs(eta);
    }
    cplx u = 0.0, ux = 0.0, uy = 0.0;
    for (int l = 0; l <= p; ++l) {
        cplx row = 0.0, drow = 0.0;
        for (int k = 0; k <= p; ++k) {
            const cplx v = values_(space_->element_node(e, k, l));
            row += lx(k) * v;
            if (grad) drow += dlx(k) * v;
        }
        u += ly(l) * row;
        if (grad) {
            ux += ly(l) * drow;
            uy += dly(l) * row;
        }
    }
    if (grad) {
        const Mat2 J = map_eval(space_->mesh().element(e), xi, eta).jac;
        const Mat2 JinvT = J.inverse().transpose();
        *grad = JinvT.cast<cplx>() * Vec2c(ux, uy);
    }
    return u;
}

VectorXcd InteriorSolution::gamma_trace() const {
    const BoundaryGrid& g = space_->gamma();
    VectorXcd out(g.size());
    for (int t = 0; t < g.size(); ++t) out(t) = values_(g.ids[t]);
    return out;
}

VectorXcd InteriorSolution::scatterer_trace() const {
    const BoundaryGrid& g = space_->scatterer();
    VectorXcd out(g.size());
    for (int t = 0; t < g.size(); ++t) out(t) = values_(g.ids[t]);
    return out;
}

SubdomainOperator::SubdomainOperator(std::shared_ptr<const SemSpace> space, double kappa, int N,
                                     BoundaryCondition bc, const IndexFn& index)
    : space_(std::move(space)),
      kappa_(kappa),
      bc_(bc),
      dtn_(space_->mesh(), space_->basis(), kappa, N) {
    const SemSpace& V = *space_;
    const int p = V.degree();
    const int n1 = p + 1;

    index_.resize(V.size());
    for (int i = 0; i < V.size(); ++i) {
        index_(i) = index ? index(V.node_points()[i]) : 1.0;
        if (!std::isfinite(index_(i))) throw DomainError("refraction index is not finite");
    }

    for (int l = 0; l <= p; ++l)
        for (int k = 0; k <= p; ++k) {
            const bool edge = k == 0 || k == p || l == 0 || l == p;
            (edge ? local_boundary_ : local_interior_).push_back(l * n1 + k);
        }

    skeleton_of_.assign(V.size(), -1);
    for (int a = 0; a < V.radial_nodes(); ++a)
        for (int t = 0; t < V.angular_nodes(); ++t)
            if (a % p == 0 || t % p == 0) {
                skeleton_of_[V.node(a, t)] = static_cast<int>(skeleton_nodes_.size());
                skeleton_nodes_.push_back(V.node(a, t));
            }
    const int ns = skeleton_size();
    const int nb = static_cast<int>(local_boundary_.size());
    const int ni = static_cast<int>(local_interior_.size());

    MatrixXcd S = MatrixXcd::Zero(ns, ns);
    condense_.resize(V.mesh().size());
    for (int e = 0; e < V.mesh().size(); ++e) {
        const MatrixXd A = element_matrix(e);
        MatrixXd Aii(ni, ni), Aib(ni, nb), Abi(nb, ni), Abb(nb, nb);
        for (int i = 0; i < ni; ++i) {
            for (int j = 0; j < ni; ++j) Aii(i, j) = A(local_interior_[i], local_interior_[j]);
            for (int j = 0; j < nb; ++j) Aib(i, j) = A(local_interior_[i], local_boundary_[j]);
        }
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < ni; ++j) Abi(i, j) = A(local_boundary_[i], local_interior_[j]);
            for (int j = 0; j < nb; ++j) Abb(i, j) = A(local_boundary_[i], local_boundary_[j]);
        }
        MatrixXd X = ni > 0 ? MatrixXd(Aii.partialPivLu().solve(Aib)) : MatrixXd(0, nb);
        if (!X.allFinite()) {
            std::ostringstream os;
            os << "element interior block is singular (kappa=" << kappa << ", p=" << p << ")";
            throw SingularError(os.str());
        }
        const MatrixXd Se = Abb - Abi * X;
        std::vector<int> gl(nb);
        for (int i = 0; i < nb; ++i) {
            const int loc = local_boundary_[i];
            gl[i] = skeleton_of_[V.element_node(e, loc % n1, loc / n1)];
        }
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) S(gl[i], gl[j]) += Se(i, j);
        condense_[e] = std::move(X);
    }

    const BoundaryGrid& G = V.gamma();
    const MatrixXcd& D = dtn_.matrix();
    for (int i = 0; i < G.size(); ++i)
        for (int j = 0; j < G.size(); ++j) S(skeleton_of_[G.ids[i]], skeleton_of_[G.ids[j]]) += D(i, j);

    const BoundaryGrid& Sc = V.scatterer();
    for (int t = 0; t < Sc.size(); ++t) {
        const int r = skeleton_of_[Sc.ids[t]];
        if (bc_.kind == BcKind::Dirichlet) {
            S.row(r).setZero();
            S(r, r) = 1.0;
        } else if (bc_.kind == BcKind::Robin) {
            S(r, r) += bc_.h * Sc.weights(t);
        }
    }

    lu_.compute(S);
    const double rc = lu_.rcond();
    if (!(rc > 1e-14)) {
        std::ostringstream os;
        os << "subdomain system is singular to working precision (rcond=" << rc
           << ", kappa=" << kappa << ", p=" << p << ", N=" << N
           << "); check for an interior resonance or under-resolution";
        throw SingularError(os.str());
    }
}

MatrixXd SubdomainOperator::element_matrix(int e) const {
    const SemSpace& V = *space_;
    const LagrangeBasis& B = V.basis();
    const int p = B.degree(), n1 = p + 1;
    const Element& el = V.mesh().element(e);
    const MatrixXd& Dm = B.diff();
    const VectorXd& w = B.weights();

    MatrixXd G11(n1, n1), G22(n1, n1), G12(n1, n1), Mw(n1, n1);
    for (int l = 0; l <= p; ++l)
        for (int k = 0; k <= p; ++k) {
            const Mat2 J = map_eval(el, B.nodes()(k), B.nodes()(l)).jac;
            const double det = J.determinant();
            const Mat2 Ji = J.inverse();
            const Mat2 G = std::abs(det) * w(k) * w(l) * (Ji * Ji.transpose());
            G11(k, l) = G(0, 0);
            G22(k, l) = G(1, 1);
            G12(k, l) = G(0, 1);
            Mw(k, l) = std::abs(det) * w(k) * w(l) * index_(V.element_node(e, k, l));
        }

    const int nl = n1 * n1;
    MatrixXd K = MatrixXd::Zero(nl, nl);
    auto id = [n1](int k, int l) { return l * n1 + k; };
    for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
            for (int a = 0; a <= p; ++a) {
                double s = 0.0;
                for (int k = 0; k <= p; ++k) s += G11(k, j) * Dm(k, i) * Dm(k, a);
                K(id(i, j), id(a, j)) += s;
            }
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j)
            for (int b = 0; b <= p; ++b) {
                double s = 0.0;
                for (int l = 0; l <= p; ++l) s += G22(i, l) * Dm(l, j) * Dm(l, b);
                K(id(i, j), id(i, b)) += s;
            }
    for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i)
            for (int b = 0; b <= p; ++b)
                for (int a = 0; a <= p; ++a)
                    K(id(i, j), id(a, b)) +=
                        G12(a, j) * Dm(a, i) * Dm(j, b) + G12(i, b) * Dm(b, j) * Dm(i, a);

    MatrixXd A = -K;
    const double k2 = kappa_ * kappa_;
    for (int l = 0; l <= p; ++l)
        for (int k = 0; k <= p; ++k) A(id(k, l), id(k, l)) += k2 * Mw(k, l);
    return A;
}

InteriorSolution SubdomainOperator::solve(const VectorXcd& scatterer_data,
                                          const VectorXcd& gamma_load) const {
    const SemSpace& V = *space_;
    const int n_ang = V.angular_nodes();
    if (scatterer_data.size() != 0 && scatterer_data.size() != n_ang)
        throw DimensionError("scatterer data has wrong length");
    if (gamma_load.size() != 0 && gamma_load.size() != n_ang)
        throw DimensionError("Gamma load has wrong length");

    const BoundaryGrid& Sc = V.scatterer();
    const BoundaryGrid& G = V.gamma();
    VectorXcd b = VectorXcd::Zero(skeleton_size());
    if (scatterer_data.size()) {
        for (int t = 0; t < n_ang; ++t) {
            const int r = skeleton_of_[Sc.ids[t]];
            b(r) = bc_.kind == BcKind::Dirichlet ? scatterer_data(t)
                                                 : Sc.weights(t) * scatterer_data(t);
        }
    }
    if (gamma_load.size())
        for (int t = 0; t < n_ang; ++t) b(skeleton_of_[G.ids[t]]) += gamma_load(t);

    const VectorXcd vb = lu_.solve(b);
    VectorXcd v(V.size());
    for (int i = 0; i < skeleton_size(); ++i) v(skeleton_nodes_[i]) = vb(i);

    const int n1 = V.degree() + 1;
    const int nb = static_cast<int>(local_boundary_.size());
    for (int e = 0; e < V.mesh().size(); ++e) {
        if (local_interior_.empty()) break;
        VectorXcd ve(nb);
        for (int i = 0; i < nb; ++i) {
            const int loc = local_boundary_[i];
            ve(i) = v(V.element_node(e, loc % n1, loc / n1));
        }
        const VectorXcd vi = -real_times(condense_[e], ve);
        for (std::size_t i = 0; i < local_interior_.size(); ++i) {
            const int loc = local_interior_[i];
            v(V.element_node(e, loc % n1, loc / n1)) = vi(i);
        }
    }
    return InteriorSolution(space_, std::move(v));
}

VectorXcd SubdomainOperator::apply(const VectorXcd& v) const {
    const SemSpace& V = *space_;
    if (v.size() != V.size()) throw DimensionError("vector does not match the space");
    const int n1 = V.degree() + 1;
    VectorXcd y = VectorXcd::Zero(V.size());
    std::vector<int> ids(n1 * n1);
    for (int e = 0; e < V.mesh().size(); ++e) {
        for (int l = 0; l < n1; ++l)
            for (int k = 0; k < n1; ++k) ids[l * n1 + k] = V.element_node(e, k, l);
        VectorXcd ve(n1 * n1);
        for (int i = 0; i < n1 * n1; ++i) ve(i) = v(ids[i]);
        const VectorXcd ye = real_times(element_matrix(e), ve);
        for (int i = 0; i < n1 * n1; ++i) y(ids[i]) += ye(i);
    }
    const BoundaryGrid& G = V.gamma();
    VectorXcd vg(G.size());
    for (int t = 0; t < G.size(); ++t) vg(t) = v(G.ids[t]);
    const VectorXcd dv = dtn_.matrix() * vg;
    for (int t = 0; t < G.size(); ++t) y(G.ids[t]) += dv(t);

    const BoundaryGrid& Sc = V.scatterer();
    for (int t = 0; t < Sc.size(); ++t) {
        const int id = Sc.ids[t];
        if (bc_.kind == BcKind::Dirichlet) y(id) = v(id);
        else if (bc_.kind == BcKind::Robin) y(id) += bc_.h * Sc.weights(t) * v(id);
    }
    return y;
}

VectorXcd SubdomainOperator::load(const VectorXcd& scatterer_data,
                                  const VectorXcd& gamma_load) const {
    const SemSpace& V = *space_;
    VectorXcd f = VectorXcd::Zero(V.size());
    const BoundaryGrid& Sc = V.scatterer();
    if (scatterer_data.size())
        for (int t = 0; t < Sc.size(); ++t)
            f(Sc.ids[t]) = bc_.kind == BcKind::Dirichlet ? scatterer_data(t)
                                                         : Sc.weights(t) * scatterer_data(t);
    if (gamma_load.size())
        for (int t = 0; t < V.gamma().size(); ++t) f(V.gamma().ids[t]) += gamma_load(t);
    return f;
}

VectorXcd SubdomainOperator::gamma_load_flux(const VectorXcd& psi) const {
    const VectorXd& w = space_->gamma().weights;
    if (psi.size() != w.size()) throw DimensionError("Gamma datum has wrong length");
    return -(w.cast<cplx>().array() * psi.array()).matrix();
}

VectorXcd SubdomainOperator::gamma_load_tprime(const VectorXcd& values,
                                               const VectorXcd& normal_derivs) const {
    const VectorXd& w = space_->gamma().weights;
    if (values.size() != w.size() || normal_derivs.size() != w.size())
        throw DimensionError("Gamma traces have wrong length");
    return dtn_.matrix() * values - (w.cast<cplx>().array() * normal_derivs.array()).matrix();
}

VectorXcd SubdomainOperator::scatterer_flux(const InteriorSolution& sol) const {
    const SemSpace& V = *space_;
    const int p = V.degree(), n1 = p + 1;
    const BoundaryGrid& Sc = V.scatterer();
    VectorXcd r = VectorXcd::Zero(Sc.size());
    for (int s = 0; s < V.mesh().sectors(); ++s) {
        const int e = V.mesh().index(0, s);
        VectorXcd ve(n1 * n1);
        for (int l = 0; l < n1; ++l)
            for (int k = 0; k < n1; ++k) ve(l * n1 + k) = sol.values()(V.element_node(e, k, l));
        const VectorXcd ye = real_times(element_matrix(e), ve);
        for (int k = 0; k <= p; ++k) r((s * p + k) % Sc.size()) += ye(k);
    }
    return (r.array() / Sc.weights.cast<cplx>().array()).matrix();
}

VectorXcd SubdomainOperator::boundary_operator(const InteriorSolution& sol) const {
    switch (bc_.kind) {
        case BcKind::Dirichlet:
            return sol.scatterer_trace();
        case BcKind::Neumann:
            return scatterer_flux(sol);
        case BcKind::Robin:
            return scatterer_flux(sol) + bc_.h * sol.scatterer_trace();
    }
    return {};
}

}  // namespace mscat
