#include "mscat/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "mscat/error.hpp"

namespace mscat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDomainTol = 1e-10;

Vec2 polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

}  // namespace

double StarShape::radius(double theta) const {
    return a * std::sin(k * (theta - theta0)) + b;
}

double StarShape::dradius(double theta) const {
    return a * k * std::cos(k * (theta - theta0));
}

BoundarySample shape_eval(const ScattererSpec& spec, double theta) {
    const double r = spec.shape.radius(theta);
    const double dr = spec.shape.dradius(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    const Vec2 tangent(dr * c - r * s, dr * s + r * c);
    return {spec.center + Vec2(r * c, r * s), Vec2(tangent.y(), -tangent.x()).normalized()};
}

EdgePoint ArcEdge::eval(double xi) const {
    const double th = angle(xi);
    return {center + polar(radius, th), half_aperture * polar(radius, th + 0.5 * std::numbers::pi)};
}

EdgePoint RingEdge::eval(double xi) const {
    const double th = angle(xi);
    const double rho = (1.0 - fraction) * shape.radius(th) + fraction * outer_radius;
    const double drho = (1.0 - fraction) * shape.dradius(th);
    const Vec2 er = polar(1.0, th);
    const Vec2 et(-er.y(), er.x());
    return {center + rho * er, half_aperture * (drho * er + rho * et)};
}

EdgePoint SegmentEdge::eval(double t) const {
    return {0.5 * (1.0 - t) * from + 0.5 * (1.0 + t) * to, 0.5 * (to - from)};
}

EdgePoint edge_eval(const Edge& e, double t) {
    return std::visit([t](const auto& edge) { return edge.eval(t); }, e);
}

MappedPoint map_eval(const Element& el, double xi, double eta) {
    const EdgePoint p1 = edge_eval(el.edges[0], xi);
    const EdgePoint p2 = edge_eval(el.edges[1], eta);
    const EdgePoint p3 = edge_eval(el.edges[2], xi);
    const EdgePoint p4 = edge_eval(el.edges[3], eta);
    const Vec2 a = edge_eval(el.edges[0], -1.0).x;
    const Vec2 b = edge_eval(el.edges[0], 1.0).x;
    const Vec2 c = edge_eval(el.edges[2], -1.0).x;
    const Vec2 d = edge_eval(el.edges[2], 1.0).x;

    const double ep = 0.5 * (1.0 + eta), em = 0.5 * (1.0 - eta);
    const double xp = 0.5 * (1.0 + xi), xm = 0.5 * (1.0 - xi);

    MappedPoint m;
    m.x = p1.x * ep + p3.x * em + xp * p2.x + xm * p4.x - (a * xm + b * xp) * ep -
          (c * xm + d * xp) * em;
    const Vec2 dxi = p1.dx * ep + p3.dx * em + 0.5 * (p2.x - p4.x) - 0.5 * (b - a) * ep -
                     0.5 * (d - c) * em;
    const Vec2 deta = 0.5 * (p1.x - p3.x) + xp * p2.dx + xm * p4.dx - 0.5 * (a * xm + b * xp) +
                      0.5 * (c * xm + d * xp);
    m.jac.col(0) = dxi;
    m.jac.col(1) = deta;
    return m;
}

AnnularMesh::AnnularMesh(const ScattererSpec& scatterer, const ArtificialDisk& disk, int rings,
                         int sectors)
    : scatterer_(scatterer), disk_(disk), rings_(rings), sectors_(sectors) {
    if (rings < 1) throw GeometryError("mesh needs at least one ring");
    if (sectors < 4) throw GeometryError("mesh needs at least four sectors");
    const StarShape& sh = scatterer.shape;
    if (!(sh.b > sh.a && sh.a >= 0.0))
        throw GeometryError("shape requires b > a >= 0");
    if ((scatterer.center - disk.center).norm() > 1e-12)
        throw GeometryError("artificial disk must be centered on its scatterer");
    if (!(disk.radius > sh.max_radius()))
        throw GeometryError("artificial disk radius " + std::to_string(disk.radius) +
                            " does not contain the scatterer (max radius " +
                            std::to_string(sh.max_radius()) + ")");

    const Vec2 c = disk.center;
    const double R = disk.radius;
    auto ring_point = [&](double s, double th) -> Vec2 {
        return c + polar((1.0 - s) * sh.radius(th) + s * R, th);
    };

    elements_.reserve(static_cast<std::size_t>(rings) * sectors);
    for (int j = 0; j < rings; ++j) {
        const double s_in = double(j) / rings;
        const double s_out = double(j + 1) / rings;
        for (int t = 0; t < sectors; ++t) {
            const double th0 = sector_angle(t), th1 = sector_angle(t + 1);
            const double half = 0.5 * (th1 - th0), mid = 0.5 * (th0 + th1);
            Element el;
            el.ring = j;
            el.sector = t;
            if (j == rings - 1) {
                el.edges[0] = ArcEdge{c, R, half, mid};
                el.tags[0] = EdgeTag::Gamma;
            } else {
                el.edges[0] = RingEdge{c, sh, R, s_out, half, mid};
            }
            el.edges[2] = RingEdge{c, sh, R, s_in, half, mid};
            if (j == 0) el.tags[2] = EdgeTag::Scatterer;
            el.edges[1] = SegmentEdge{ring_point(s_in, th1), ring_point(s_out, th1)};
            el.edges[3] = SegmentEdge{ring_point(s_in, th0), ring_point(s_out, th0)};

            const auto corner = [&](int k, double tt) { return edge_eval(el.edges[k], tt).x; };
            const double err = std::max(
                {(corner(0, -1) - corner(3, 1)).norm(), (corner(0, 1) - corner(1, 1)).norm(),
                 (corner(1, -1) - corner(2, 1)).norm(), (corner(2, -1) - corner(3, -1)).norm()});
            if (err > 1e-12 * (1.0 + R))
                throw GeometryError("corner mismatch in element (" + std::to_string(j) + ", " +
                                    std::to_string(t) + ")");
            elements_.push_back(std::move(el));
        }
    }
}

double AnnularMesh::sector_angle(int s) const { return kTwoPi * s / sectors_; }

ArcEdge AnnularMesh::gamma_arc(int sector) const {
    return std::get<ArcEdge>(elements_[index(rings_ - 1, sector)].edges[0]);
}

bool AnnularMesh::newton_invert(int e, const Vec2& x, double& xi, double& eta) const {
    const Element& el = elements_[e];
    const double scale = 1.0 + disk_.radius;
    for (int it = 0; it < 30; ++it) {
        const MappedPoint m = map_eval(el, xi, eta);
        const Vec2 r = m.x - x;
        if (r.norm() < 1e-13 * scale) break;
        Vec2 step = m.jac.partialPivLu().solve(r);
        if (!step.allFinite()) return false;
        // Damp steps that would leave a generous neighborhood of the square.
        double lambda = 1.0;
        while (lambda > 1e-3 && (std::abs(xi - lambda * step.x()) > 1.5 ||
                                 std::abs(eta - lambda * step.y()) > 1.5))
            lambda *= 0.5;
        xi -= lambda * step.x();
        eta -= lambda * step.y();
    }
    const double tol = 1e-9;
    if (std::abs(xi) > 1.0 + tol || std::abs(eta) > 1.0 + tol) return false;
    xi = std::clamp(xi, -1.0, 1.0);
    eta = std::clamp(eta, -1.0, 1.0);
    return (map_eval(el, xi, eta).x - x).norm() <= kDomainTol * scale;
}

AnnularMesh::Location AnnularMesh::locate_point(const Vec2& x) const {
    const Vec2 d = x - disk_.center;
    const double rho = d.norm();
    const double R = disk_.radius;
    if (rho > R + kDomainTol) throw NotInDomainError("point lies outside the artificial disk");
    const double th = wrap_angle(std::atan2(d.y(), d.x()));
    const double r_in = scatterer_.shape.radius(th);
    if (rho < r_in - kDomainTol) throw NotInDomainError("point lies inside the scatterer");

    // Polar bucketing gives the element and an accurate seed.
    const double width = kTwoPi / sectors_;
    const int t = std::clamp(static_cast<int>(th / width), 0, sectors_ - 1);
    const double s = std::clamp((rho - r_in) / (R - r_in), 0.0, 1.0) * rings_;
    const int j = std::clamp(static_cast<int>(s), 0, rings_ - 1);

    const double half = 0.5 * width, mid = sector_angle(t) + half;
    const double xi0 = std::clamp((th - mid) / half, -1.0, 1.0);
    const double eta0 = std::clamp(2.0 * (s - j) - 1.0, -1.0, 1.0);

    double xi = xi0, eta = eta0;
    if (newton_invert(index(j, t), x, xi, eta)) return {index(j, t), xi, eta};

    for (int dj = -1; dj <= 1; ++dj) {
        for (int dt = -1; dt <= 1; ++dt) {
            const int jj = j + dj;
            if ((dj == 0 && dt == 0) || jj < 0 || jj >= rings_) continue;
            const int tt = (t + dt + sectors_) % sectors_;
            xi = 0.0;
            eta = 0.0;
            if (newton_invert(index(jj, tt), x, xi, eta)) return {index(jj, tt), xi, eta};
        }
    }
    throw NotInDomainError("no element contains the point");
}

}  // namespace mscat
