#include "mscat/gmres.hpp"

#include <chrono>
#include <cmath>

#include "mscat/error.hpp"

namespace mscat {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

GmresResult gmres(const LinearMap& A, const VectorXcd& b, const Eigen::VectorXd& weights,
                  double tol, int max_iter, const VectorXcd& x0) {
    if (!(tol > 0.0)) throw DomainError("GMRES tolerance must be positive");
    if (max_iter < 1) throw DomainError("GMRES needs max_iter >= 1");
    const Eigen::Index n = b.size();
    if (weights.size() != 0 && weights.size() != n) throw DimensionError("weights length mismatch");
    if (x0.size() != 0 && x0.size() != n) throw DimensionError("initial guess length mismatch");

    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXd w = weights.size() ? weights : Eigen::VectorXd::Ones(n);
    auto dot = [&](const VectorXcd& u, const VectorXcd& v) {
        cplx s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += w(i) * std::conj(u(i)) * v(i);
        return s;
    };
    auto norm = [&](const VectorXcd& u) { return std::sqrt(std::abs(dot(u, u))); };

    GmresResult out;
    out.x = x0.size() ? x0 : VectorXcd::Zero(n);
    const double bnorm = norm(b);
    auto finish = [&] {
        out.report.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };
    if (bnorm == 0.0) {
        out.x.setZero();
        out.report.residuals = {0.0};
        out.report.converged = true;
        return finish();
    }

    VectorXcd r = x0.size() ? VectorXcd(b - A(out.x)) : b;
    const double beta = norm(r);
    out.report.residuals.push_back(beta / bnorm);
    if (beta / bnorm <= tol) {
        out.report.converged = true;
        return finish();
    }

    std::vector<VectorXcd> V;
    V.push_back(r / beta);
    MatrixXcd H = MatrixXcd::Zero(max_iter + 1, max_iter);
    std::vector<double> cs(max_iter);
    std::vector<cplx> sn(max_iter);
    VectorXcd g = VectorXcd::Zero(max_iter + 1);
    g(0) = beta;

    int k = 0;
    bool done = false;
    for (; k < max_iter && !done; ++k) {
        VectorXcd v = A(V[k]);
        for (int j = 0; j <= k; ++j) {
            H(j, k) = dot(V[j], v);
            v -= H(j, k) * V[j];
        }
        const double hn = norm(v);
        H(k + 1, k) = hn;

        for (int j = 0; j < k; ++j) {
            const cplx a = H(j, k), c = H(j + 1, k);
            H(j, k) = cs[j] * a + sn[j] * c;
            H(j + 1, k) = -std::conj(sn[j]) * a + cs[j] * c;
        }
        const cplx a = H(k, k);
        const double bb = std::abs(H(k + 1, k));
        const double rr = std::hypot(std::abs(a), bb);
        if (rr == 0.0) {
            cs[k] = 1.0;
            sn[k] = 0.0;
        } else if (std::abs(a) == 0.0) {
            cs[k] = 0.0;
            sn[k] = 1.0;
        } else {
            cs[k] = std::abs(a) / rr;
            sn[k] = (a / std::abs(a)) * std::conj(H(k + 1, k)) / rr;
        }
        H(k, k) = cs[k] * a + sn[k] * H(k + 1, k);
        H(k + 1, k) = 0.0;
        g(k + 1) = -std::conj(sn[k]) * g(k);
        g(k) = cs[k] * g(k);

        const double res = std::abs(g(k + 1)) / bnorm;
        out.report.residuals.push_back(res);
        if (res <= tol || hn <= 1e-14 * beta) done = true;
        if (!done) V.push_back(v / hn);
    }

    const int m = k;
    VectorXcd y = H.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(g.head(m));
    for (int j = 0; j < m; ++j) out.x += y(j) * V[j];
    out.report.iterations = m;
    out.report.converged = out.report.residuals.back() <= tol;
    return finish();
}

}  // namespace mscat
