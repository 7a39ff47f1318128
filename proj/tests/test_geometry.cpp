#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>

#include "mscat/error.hpp"
#include "mscat/geometry.hpp"
#include "mscat/lgl.hpp"

using namespace mscat;
constexpr double kPi = std::numbers::pi;

namespace {

ScattererSpec example1() {
    ScattererSpec s;
    s.shape = {0.3, 0.7, 2, kPi / 4};
    return s;
}

ScattererSpec circle(double r) {
    ScattererSpec s;
    s.shape = {0.0, r, 0, 0.0};
    return s;
}

}  // namespace

TEST_CASE("star shape radius at sample angles") {
    const ScattererSpec s = example1();
    CHECK(shape_eval(s, kPi / 4).point.norm() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(shape_eval(s, kPi / 4 + kPi / 4).point.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.shape.max_radius() == doctest::Approx(1.0));
    CHECK(s.shape.min_radius() == doctest::Approx(0.4));
}

TEST_CASE("circle boundary has radial normals") {
    ScattererSpec s = circle(0.8);
    s.center = Vec2(1.0, -2.0);
    for (double th : {0.0, 0.4, 2.0, 5.5}) {
        const BoundarySample b = shape_eval(s, th);
        CHECK((b.point - s.center).norm() == doctest::Approx(0.8));
        CHECK((b.normal - Vec2(std::cos(th), std::sin(th))).norm() < 1e-15);
    }
}

TEST_CASE("star shape normals are unit, outward and orthogonal to the tangent") {
    const ScattererSpec s = example1();
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const double th = 2 * kPi * i / 50;
        const BoundarySample b = shape_eval(s, th);
        const Vec2 tangent = (shape_eval(s, th + h).point - shape_eval(s, th - h).point) / (2 * h);
        CHECK(std::abs(b.normal.norm() - 1.0) < 1e-14);
        CHECK(std::abs(b.normal.dot(tangent)) < 1e-8);
        CHECK(b.normal.dot(b.point) > 0.0);
    }
}

TEST_CASE("uniform circle mesh has four quarter arcs") {
    const AnnularMesh mesh(circle(0.5), ArtificialDisk{Vec2::Zero(), 1.0}, 1, 4);
    CHECK(mesh.size() == 4);
    for (int s = 0; s < 4; ++s) CHECK(mesh.gamma_arc(s).half_aperture == doctest::Approx(kPi / 4));
}

TEST_CASE("Gamma arcs partition the full circle") {
    const AnnularMesh mesh(circle(0.5), ArtificialDisk{Vec2::Zero(), 1.0}, 2, 8);
    double total = 0.0;
    for (int s = 0; s < 8; ++s) total += 2 * mesh.gamma_arc(s).half_aperture;
    CHECK(std::abs(total - 2 * kPi) < 1e-14);
    for (int s = 0; s < 8; ++s) {
        const ArcEdge a = mesh.gamma_arc(s), b = mesh.gamma_arc((s + 1) % 8);
        CHECK((a.eval(1.0).x - b.eval(-1.0).x).norm() < 1e-14);
    }
}

TEST_CASE("straight-edged reference element maps to itself") {
    Element el;
    el.edges[0] = SegmentEdge{Vec2(-1, 1), Vec2(1, 1)};
    el.edges[1] = SegmentEdge{Vec2(1, -1), Vec2(1, 1)};
    el.edges[2] = SegmentEdge{Vec2(-1, -1), Vec2(1, -1)};
    el.edges[3] = SegmentEdge{Vec2(-1, -1), Vec2(-1, 1)};
    for (double xi : {-1.0, -0.3, 0.5, 1.0})
        for (double eta : {-1.0, 0.2, 1.0}) {
            const MappedPoint m = map_eval(el, xi, eta);
            CHECK((m.x - Vec2(xi, eta)).norm() < 1e-15);
            CHECK((m.jac - Mat2::Identity()).norm() < 1e-15);
        }
}

TEST_CASE("element corners follow the edge convention") {
    const AnnularMesh mesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 2, 8);
    for (int e = 0; e < mesh.size(); ++e) {
        const Element& el = mesh.element(e);
        const auto corner = [&](int edge, double t) { return edge_eval(el.edges[edge], t).x; };
        CHECK((map_eval(el, -1, 1).x - corner(0, -1)).norm() < 1e-15);
        CHECK((corner(0, -1) - corner(3, 1)).norm() < 1e-12);
        CHECK((corner(0, 1) - corner(1, 1)).norm() < 1e-12);
        CHECK((corner(2, -1) - corner(3, -1)).norm() < 1e-12);
        CHECK((corner(2, 1) - corner(1, -1)).norm() < 1e-12);
    }
}

TEST_CASE("outer edges lie on Gamma with the prescribed angle") {
    ScattererSpec sc = example1();
    sc.center = Vec2(0.4, -1.0);
    const AnnularMesh mesh(sc, ArtificialDisk{sc.center, 1.25}, 3, 8);
    for (int s = 0; s < 8; ++s) {
        const int e = mesh.index(2, s);
        const ArcEdge arc = mesh.gamma_arc(s);
        CHECK(mesh.element(e).tags[0] == EdgeTag::Gamma);
        for (double xi = -1.0; xi <= 1.0; xi += 0.125) {
            const Vec2 d = map_eval(mesh.element(e), xi, 1.0).x - mesh.disk().center;
            CHECK(std::abs(d.norm() - 1.25) < 1e-13);
            const double ang = std::remainder(std::atan2(d.y(), d.x()) - arc.angle(xi), 2 * kPi);
            CHECK(std::abs(ang) < 1e-14);
        }
    }
}

TEST_CASE("inner edges lie on the scatterer curve") {
    const ScattererSpec s = example1();
    const AnnularMesh mesh(s, ArtificialDisk{Vec2::Zero(), 1.25}, 2, 8);
    for (int sec = 0; sec < 8; ++sec) {
        const Element& el = mesh.element(mesh.index(0, sec));
        CHECK(el.tags[2] == EdgeTag::Scatterer);
        for (double xi : {-1.0, -0.2, 0.7}) {
            const Vec2 x = map_eval(el, xi, -1.0).x;
            const double th = std::atan2(x.y(), x.x());
            CHECK(std::abs(x.norm() - s.shape.radius(th)) < 1e-13);
        }
    }
}

TEST_CASE("Jacobian never degenerates at quadrature points") {
    const ScattererSpec s = example1();
    const AnnularMesh mesh(s, ArtificialDisk{Vec2::Zero(), 1.05 * 1.0}, 2, 8);
    const LglRule rule = lgl_rule(20);
    double smallest = 1e300;
    int sign = 0;
    for (int e = 0; e < mesh.size(); ++e)
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j) {
                const double d = map_eval(mesh.element(e), rule.nodes(i), rule.nodes(j)).jac.determinant();
                smallest = std::min(smallest, std::abs(d));
                const int sg = d > 0 ? 1 : -1;
                if (sign == 0) sign = sg;
                CHECK(sg == sign);
            }
    CHECK(smallest > 1e-6);
}

TEST_CASE("analytic Jacobian matches finite differences") {
    const AnnularMesh mesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 2, 8);
    const double h = 1e-6;
    for (int e : {0, 5, 11}) {
        const Element& el = mesh.element(e);
        const MappedPoint m = map_eval(el, 0.3, -0.4);
        const Vec2 dxi = (map_eval(el, 0.3 + h, -0.4).x - map_eval(el, 0.3 - h, -0.4).x) / (2 * h);
        const Vec2 deta = (map_eval(el, 0.3, -0.4 + h).x - map_eval(el, 0.3, -0.4 - h).x) / (2 * h);
        CHECK((m.jac.col(0) - dxi).norm() < 1e-8);
        CHECK((m.jac.col(1) - deta).norm() < 1e-8);
    }
}

TEST_CASE("shared edges agree from both neighbors") {
    const AnnularMesh mesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 3, 8);
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 8; ++s) {
            const Element& a = mesh.element(mesh.index(r, s));
            const Element& b = mesh.element(mesh.index(r, (s + 1) % 8));
            for (double t = -1.0; t <= 1.0; t += 0.25)
                CHECK((map_eval(a, 1.0, t).x - map_eval(b, -1.0, t).x).norm() < 1e-13);
            if (r + 1 < 3) {
                const Element& c = mesh.element(mesh.index(r + 1, s));
                for (double t = -1.0; t <= 1.0; t += 0.25)
                    CHECK((map_eval(a, t, 1.0).x - map_eval(c, t, -1.0).x).norm() < 1e-13);
            }
        }
}

TEST_CASE("locate_point inverts map_eval") {
    ScattererSpec sc = example1();
    sc.center = Vec2(2.6, 0.0);
    const AnnularMesh mesh(sc, ArtificialDisk{sc.center, 1.25}, 2, 8);
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, mesh.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const int e = pick(gen);
        const double xi = u(gen), eta = u(gen);
        const Vec2 x = map_eval(mesh.element(e), xi, eta).x;
        const auto loc = mesh.locate_point(x);
        CHECK((map_eval(mesh.element(loc.element), loc.xi, loc.eta).x - x).norm() < 1e-10);
        if (std::abs(xi) < 0.99 && std::abs(eta) < 0.99) {
            CHECK(loc.element == e);
            CHECK(std::abs(loc.xi - xi) < 1e-10);
            CHECK(std::abs(loc.eta - eta) < 1e-10);
        }
    }
    const auto loc = mesh.locate_point(map_eval(mesh.element(3), 0.3, -0.2).x);
    CHECK(loc.element == 3);
    CHECK(loc.xi == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(loc.eta == doctest::Approx(-0.2).epsilon(1e-10));
}

TEST_CASE("locate_point on a shared edge") {
    const AnnularMesh mesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 2, 8);
    const Vec2 x = map_eval(mesh.element(1), 1.0, 0.1).x;
    const auto loc = mesh.locate_point(x);
    CHECK((loc.element == 1 || loc.element == 2));
    CHECK((map_eval(mesh.element(loc.element), loc.xi, loc.eta).x - x).norm() < 1e-10);
}

TEST_CASE("points outside the annulus are rejected") {
    const AnnularMesh mesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 2, 8);
    CHECK_THROWS_AS(mesh.locate_point(Vec2(1.3, 0.0)), NotInDomainError);
    CHECK_THROWS_AS(mesh.locate_point(Vec2(0.1, 0.1)), NotInDomainError);
}

TEST_CASE("mesh construction rejects invalid geometry") {
    CHECK_THROWS_AS(AnnularMesh(example1(), ArtificialDisk{Vec2::Zero(), 0.9}, 2, 8), GeometryError);
    CHECK_THROWS_AS(AnnularMesh(example1(), ArtificialDisk{Vec2(0.5, 0), 1.25}, 2, 8), GeometryError);
    CHECK_THROWS_AS(AnnularMesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 0, 8), GeometryError);
    CHECK_THROWS_AS(AnnularMesh(example1(), ArtificialDisk{Vec2::Zero(), 1.25}, 2, 3), GeometryError);
    ScattererSpec bad = example1();
    bad.shape.a = 0.8;
    CHECK_THROWS_AS(AnnularMesh(bad, ArtificialDisk{Vec2::Zero(), 2.0}, 2, 8), GeometryError);
}

TEST_CASE("default sector count scales with petals") {
    CHECK(default_sectors(0) == 8);
    CHECK(default_sectors(2) == 8);
    CHECK(default_sectors(5) == 20);
}
