#pragma once

// Scatterer parametrization, annular quadrilateral meshes with
// Gordon-Hall element maps, and inverse point location.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <complex>
#include <utility>
#include <variant>
#include <vector>

namespace mscat {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using cplx = std::complex<double>;

enum class BcKind { Dirichlet, Neumann, Robin };

struct BoundaryCondition {
    BcKind kind = BcKind::Dirichlet;
    cplx h{0.0, 0.0};  // Robin coefficient in dn u + h u = 0
    bool operator==(const BoundaryCondition&) const = default;
};

/// r(theta) = a sin(k (theta - theta0)) + b, polar about the scatterer center.
struct StarShape {
    double a = 0.0;
    double b = 1.0;
    int k = 0;
    double theta0 = 0.0;

    double radius(double theta) const;
    double dradius(double theta) const;
    double max_radius() const { return k == 0 ? radius(0.0) : a + b; }
    double min_radius() const { return k == 0 ? radius(0.0) : b - a; }
    bool operator==(const StarShape&) const = default;
};

struct ScattererSpec {
    Vec2 center = Vec2::Zero();
    StarShape shape;
    BoundaryCondition bc;
    bool operator==(const ScattererSpec& o) const {
        return center == o.center && shape == o.shape && bc == o.bc;
    }
};

struct ArtificialDisk {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    bool operator==(const ArtificialDisk& o) const {
        return center == o.center && radius == o.radius;
    }
};

struct BoundarySample {
    Vec2 point;
    Vec2 normal;  // unit, pointing out of the scatterer
};

/// Point and outward unit normal of the scatterer boundary at polar angle theta.
BoundarySample shape_eval(const ScattererSpec& spec, double theta);

/// Point on an edge and its derivative with respect to the edge parameter.
struct EdgePoint {
    Vec2 x;
    Vec2 dx;
};

/// Circular arc with theta(xi) = half_aperture * xi + mid_angle.
struct ArcEdge {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    double half_aperture = 0.0;
    double mid_angle = 0.0;

    double angle(double xi) const { return half_aperture * xi + mid_angle; }
    EdgePoint eval(double xi) const;
};

/// Curve at fixed blending fraction s between the scatterer boundary (s = 0)
/// and the artificial circle (s = 1): rho = (1 - s) r(theta) + s R.
struct RingEdge {
    Vec2 center = Vec2::Zero();
    StarShape shape;
    double outer_radius = 1.0;
    double fraction = 0.0;
    double half_aperture = 0.0;
    double mid_angle = 0.0;

    double angle(double xi) const { return half_aperture * xi + mid_angle; }
    EdgePoint eval(double xi) const;
};

struct SegmentEdge {
    Vec2 from = Vec2::Zero();  // image of t = -1
    Vec2 to = Vec2::Zero();    // image of t = +1
    EdgePoint eval(double t) const;
};

using Edge = std::variant<ArcEdge, RingEdge, SegmentEdge>;

EdgePoint edge_eval(const Edge& e, double t);

enum class EdgeTag { Interior, Scatterer, Gamma };

/// Curvilinear quadrilateral. Edge order follows the Gordon-Hall convention:
/// edges[0] is eta = +1 (parametrized by xi), edges[1] is xi = +1, edges[2]
/// is eta = -1, edges[3] is xi = -1 (the latter three parametrized by their
/// own coordinate), with corners pi1(-1)=pi4(1), pi1(1)=pi2(1),
/// pi2(-1)=pi3(1), pi3(-1)=pi4(-1).
struct Element {
    std::array<Edge, 4> edges;
    std::array<EdgeTag, 4> tags{EdgeTag::Interior, EdgeTag::Interior, EdgeTag::Interior,
                                EdgeTag::Interior};
    int ring = 0;
    int sector = 0;
};

struct MappedPoint {
    Vec2 x;
    Mat2 jac;  // columns: dx/dxi, dx/deta
};

/// Transfinite (Gordon-Hall) map of the reference square onto the element.
MappedPoint map_eval(const Element& el, double xi, double eta);

/// Structured E_r x E_theta mesh of the annulus between a star-shaped
/// scatterer and its enclosing artificial circle. Ring 0 touches the
/// scatterer on eta = -1; ring E_r - 1 carries the Gamma arcs on eta = +1.
/// Within each element xi runs counter-clockwise and eta runs outward, so
/// every element map has a negative Jacobian determinant.
class AnnularMesh {
public:
    AnnularMesh(const ScattererSpec& scatterer, const ArtificialDisk& disk, int rings,
                int sectors);

    const ScattererSpec& scatterer() const { return scatterer_; }
    const ArtificialDisk& disk() const { return disk_; }
    int rings() const { return rings_; }
    int sectors() const { return sectors_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const Element& element(int e) const { return elements_[e]; }
    const std::vector<Element>& elements() const { return elements_; }
    int index(int ring, int sector) const { return ring * sectors_ + sector; }

    /// Gamma arc of sector s (the eta = +1 edge of the outermost ring).
    ArcEdge gamma_arc(int sector) const;
    /// Angular partition: sector s spans [sector_angle(s), sector_angle(s+1)].
    double sector_angle(int s) const;

    struct Location {
        int element;
        double xi;
        double eta;
    };

    /// Element and reference coordinates of x. Throws NotInDomainError when
    /// x lies inside the scatterer or outside the disk (beyond 1e-10).
    Location locate_point(const Vec2& x) const;

private:
    bool newton_invert(int e, const Vec2& x, double& xi, double& eta) const;

    ScattererSpec scatterer_;
    ArtificialDisk disk_;
    int rings_;
    int sectors_;
    std::vector<Element> elements_;
};

/// Default angular element count for a petal count k.
inline int default_sectors(int k) { return std::max(8, 4 * k); }

}  // namespace mscat
