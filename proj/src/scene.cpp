#include "mscat/scene.hpp"

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <json.hpp>
#include <sstream>

#include "mscat/error.hpp"

namespace mscat {

using json = nlohmann::json;

namespace {

double bump(double rho, const IndexProfile& p) {
    if (!(rho > p.r_in && rho < p.r_out)) return 0.0;
    const double d = rho - p.r_peak;
    const double s = 1.0 - p.q * d * d;
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / s);
}

double table_eval(const IndexProfile& p, double rho) {
    if (!(rho > p.r_in && rho < p.r_out)) return 1.0;
    std::vector<double> r = p.table_r, n = p.table_n;
    boost::math::interpolators::pchip<std::vector<double>> f(std::move(r), std::move(n));
    return f(std::clamp(rho, p.table_r.front(), p.table_r.back()));
}

// Typed accessors that report the JSON pointer of a bad value.
struct Reader {
    const json& j;
    std::string path;

    bool has(const char* key) const { return j.is_object() && j.contains(key); }
    Reader at(const char* key) const {
        if (!has(key)) throw ParseError("missing key '" + std::string(key) + "'", path + "/" + key);
        return {j.at(key), path + "/" + key};
    }
    Reader at(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }
    std::size_t size() const { return j.size(); }

    double number() const {
        if (!j.is_number()) throw ParseError("expected a number", path);
        return j.get<double>();
    }
    int integer() const {
        if (!j.is_number_integer()) throw ParseError("expected an integer", path);
        return j.get<int>();
    }
    std::string string() const {
        if (!j.is_string()) throw ParseError("expected a string", path);
        return j.get<std::string>();
    }
    void require_object() const {
        if (!j.is_object()) throw ParseError("expected an object", path);
    }
    void require_array() const {
        if (!j.is_array()) throw ParseError("expected an array", path);
    }
    Vec2 point() const {
        if (!j.is_array() || j.size() != 2) throw ParseError("expected [x, y]", path);
        return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
    }
    cplx complex() const {
        if (j.is_number()) return {j.get<double>(), 0.0};
        if (!j.is_array() || j.size() != 2) throw ParseError("expected a number or [re, im]", path);
        return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
    }
    std::vector<double> numbers() const {
        require_array();
        std::vector<double> v;
        for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).number());
        return v;
    }

    double number_or(const char* key, double fallback) const {
        return has(key) ? at(key).number() : fallback;
    }
    int integer_or(const char* key, int fallback) const {
        return has(key) ? at(key).integer() : fallback;
    }
};

SceneMode parse_mode(const Reader& r) {
    const std::string s = r.string();
    if (s == "homogeneous") return SceneMode::Homogeneous;
    if (s == "inhomogeneous") return SceneMode::Inhomogeneous;
    throw ParseError("unknown mode '" + s + "'", r.path);
}

BcKind parse_bc(const Reader& r) {
    const std::string s = r.string();
    if (s == "dirichlet") return BcKind::Dirichlet;
    if (s == "neumann") return BcKind::Neumann;
    if (s == "robin") return BcKind::Robin;
    throw ParseError("unknown boundary condition '" + s + "'", r.path);
}

IndexKind parse_index_kind(const Reader& r) {
    const std::string s = r.string();
    if (s == "constant-one") return IndexKind::ConstantOne;
    if (s == "bump-annulus") return IndexKind::BumpAnnulus;
    if (s == "x-weighted-bump") return IndexKind::XWeightedBump;
    if (s == "custom-table") return IndexKind::CustomTable;
    throw ParseError("unknown index profile '" + s + "'", r.path);
}

std::string fmt_point(const Vec2& x) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << x.x() << ", " << x.y() << ")";
    return os.str();
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string to_string(SceneMode m) {
    return m == SceneMode::Homogeneous ? "homogeneous" : "inhomogeneous";
}

std::string to_string(IndexKind k) {
    switch (k) {
        case IndexKind::ConstantOne: return "constant-one";
        case IndexKind::BumpAnnulus: return "bump-annulus";
        case IndexKind::XWeightedBump: return "x-weighted-bump";
        case IndexKind::CustomTable: return "custom-table";
    }
    return "";
}

std::string to_string(BcKind k) {
    switch (k) {
        case BcKind::Dirichlet: return "dirichlet";
        case BcKind::Neumann: return "neumann";
        case BcKind::Robin: return "robin";
    }
    return "";
}

double refraction_local(const IndexProfile& p, const Vec2& center, const Vec2& x) {
    const double rho = (x - center).norm();
    switch (p.kind) {
        case IndexKind::ConstantOne: return 1.0;
        case IndexKind::BumpAnnulus: return bump(rho, p) + 1.0;
        case IndexKind::XWeightedBump: return x.x() * bump(rho, p) + 1.0;
        case IndexKind::CustomTable: return table_eval(p, rho);
    }
    return 1.0;
}

double refraction_eval(const IndexProfile& p, const std::vector<Vec2>& centers, const Vec2& x) {
    if (p.kind == IndexKind::ConstantOne) return 1.0;
    double n = 1.0;
    for (const Vec2& c : centers) n += refraction_local(p, c, x) - 1.0;
    return n;
}

std::vector<Vec2> SceneConfig::centers() const {
    std::vector<Vec2> c;
    for (const auto& s : scatterers) c.push_back(s.center);
    return c;
}

int SceneConfig::sectors_for(int i) const {
    return solver.sectors > 0 ? solver.sectors : default_sectors(scatterers[i].shape.k);
}

int SceneConfig::cutoff_for(int i) const {
    return solver.N > 0 ? solver.N : static_cast<int>(std::ceil(kappa * disks[i].radius)) + 20;
}

SceneConfig parse_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(),
                         "byte " + std::to_string(e.byte));
    }
    const Reader root{doc, ""};
    root.require_object();
    SceneConfig s;

    const Reader sc = root.at("scene");
    sc.require_object();
    s.kappa = sc.at("kappa").number();
    s.mode = sc.has("mode") ? parse_mode(sc.at("mode")) : SceneMode::Homogeneous;
    if (sc.has("incident")) {
        const Reader inc = sc.at("incident");
        inc.require_object();
        if (inc.has("amplitude")) s.amplitude = inc.at("amplitude").complex();
    }

    const Reader scs = root.at("scatterers");
    scs.require_array();
    for (std::size_t i = 0; i < scs.size(); ++i) {
        const Reader r = scs.at(i);
        r.require_object();
        ScattererSpec spec;
        s.ids.push_back(r.has("id") ? r.at("id").string() : "s" + std::to_string(i));
        spec.center = r.at("center").point();
        const Reader sh = r.at("shape");
        sh.require_object();
        spec.shape.a = sh.number_or("a", 0.0);
        spec.shape.b = sh.at("b").number();
        spec.shape.k = sh.integer_or("k", 0);
        spec.shape.theta0 = sh.number_or("theta0", 0.0);
        if (r.has("bc")) {
            const Reader bc = r.at("bc");
            bc.require_object();
            spec.bc.kind = parse_bc(bc.at("type"));
            if (bc.has("h")) spec.bc.h = bc.at("h").complex();
            else if (spec.bc.kind == BcKind::Robin)
                throw ParseError("Robin condition needs 'h'", bc.path + "/h");
        }
        s.scatterers.push_back(spec);
    }

    const Reader ds = root.at("disks");
    ds.require_array();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Reader r = ds.at(i);
        r.require_object();
        ArtificialDisk d;
        d.radius = r.at("radius").number();
        if (r.has("center")) d.center = r.at("center").point();
        else if (i < s.scatterers.size()) d.center = s.scatterers[i].center;
        else throw ParseError("disk without a center or matching scatterer", r.path);
        s.disks.push_back(d);
    }

    if (root.has("index")) {
        const Reader ix = root.at("index");
        ix.require_object();
        IndexProfile& p = s.index;
        p.kind = parse_index_kind(ix.at("profile"));
        if (p.kind == IndexKind::CustomTable) {
            p.table_r = ix.at("r").numbers();
            p.table_n = ix.at("n").numbers();
            p.r_in = ix.number_or("r_in", p.table_r.empty() ? 0.0 : p.table_r.front());
            p.r_out = ix.number_or("r_out", p.table_r.empty() ? 0.0 : p.table_r.back());
        } else if (p.kind != IndexKind::ConstantOne) {
            p.r_in = ix.at("r_in").number();
            p.r_out = ix.at("r_out").number();
            p.r_peak = ix.number_or("r_peak", 0.5 * (p.r_in + p.r_out));
            p.q = ix.number_or("q", 16.0);
        }
    }

    if (root.has("solver")) {
        const Reader so = root.at("solver");
        so.require_object();
        s.solver.p = so.integer_or("p", s.solver.p);
        s.solver.rings = so.integer_or("E_r", s.solver.rings);
        s.solver.sectors = so.integer_or("E_theta", s.solver.sectors);
        s.solver.N = so.integer_or("N", s.solver.N);
        s.solver.tol = so.number_or("tol", s.solver.tol);
        s.solver.max_iter = so.integer_or("max_iter", s.solver.max_iter);
    }

    if (root.has("outputs")) {
        const Reader out = root.at("outputs");
        out.require_object();
        if (out.has("grid")) {
            const Reader g = out.at("grid");
            g.require_object();
            GridSpec gs;
            gs.nx = g.at("nx").integer();
            gs.ny = g.at("ny").integer();
            const std::vector<double> w = g.at("window").numbers();
            if (w.size() != 4) throw ParseError("window must be [x0, x1, y0, y1]", g.path + "/window");
            gs.x0 = w[0];
            gs.x1 = w[1];
            gs.y0 = w[2];
            gs.y1 = w[3];
            s.outputs.grid = gs;
        }
        if (out.has("probes")) {
            const Reader pr = out.at("probes");
            pr.require_array();
            for (std::size_t i = 0; i < pr.size(); ++i) s.outputs.probes.push_back(pr.at(i).point());
        }
    }

    const std::vector<std::string> problems = validate_scene(s);
    if (!problems.empty()) throw ValidationError(problems);
    return s;
}

SceneConfig load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

std::vector<std::string> validate_scene(const SceneConfig& s) {
    std::vector<std::string> bad;
    auto add = [&](std::string m) { bad.push_back(std::move(m)); };
    const int M = s.size();

    if (!(s.kappa > 0.0) || !std::isfinite(s.kappa)) add("kappa must be positive and finite");
    if (M == 0) add("scene has no scatterers");
    if (static_cast<int>(s.disks.size()) != M)
        add("expected one disk per scatterer (" + std::to_string(M) + " scatterers, " +
            std::to_string(s.disks.size()) + " disks)");
    if (static_cast<int>(s.ids.size()) != M) add("expected one id per scatterer");
    for (int i = 0; i < static_cast<int>(s.ids.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(s.ids.size()); ++j)
            if (s.ids[i] == s.ids[j]) add("duplicate scatterer id '" + s.ids[i] + "'");

    const SolverOptions& so = s.solver;
    if (so.p < 1 || so.p > 64) add("solver.p must lie in [1, 64]");
    if (so.rings < 1) add("solver.E_r must be >= 1");
    if (so.sectors != 0 && so.sectors < 4) add("solver.E_theta must be 0 (default) or >= 4");
    if (so.N < 0) add("solver.N must be >= 0");
    if (!(so.tol > 0.0)) add("solver.tol must be positive");
    if (so.max_iter < 1) add("solver.max_iter must be >= 1");

    const bool geometry_ok = static_cast<int>(s.disks.size()) == M &&
                             static_cast<int>(s.ids.size()) == M;
    auto id = [&](int i) { return geometry_ok ? "'" + s.ids[i] + "'" : std::to_string(i); };
    for (int i = 0; i < M; ++i) {
        const StarShape& sh = s.scatterers[i].shape;
        if (!(sh.b > sh.a && sh.a >= 0.0))
            add("scatterer " + id(i) + ": shape requires b > a >= 0");
        if (sh.k < 0) add("scatterer " + id(i) + ": petal count k must be >= 0");
    }
    if (!geometry_ok) return bad;

    for (int i = 0; i < M; ++i) {
        const ArtificialDisk& d = s.disks[i];
        const ScattererSpec& sc = s.scatterers[i];
        if (!(d.radius > 0.0)) add("disk " + id(i) + ": radius must be positive");
        if ((d.center - sc.center).norm() > 1e-12)
            add("disk " + id(i) + ": center must coincide with its scatterer center");
        if (!(d.radius > sc.shape.max_radius()))
            add("disk " + id(i) + ": radius " + std::to_string(d.radius) +
                " does not strictly contain the scatterer (max radius " +
                std::to_string(sc.shape.max_radius()) + ")");
    }

    if (s.mode == SceneMode::Inhomogeneous) {
        for (int i = 0; i < M; ++i)
            for (int j = i + 1; j < M; ++j) {
                const double gap = (s.disks[i].center - s.disks[j].center).norm() -
                                   s.disks[i].radius - s.disks[j].radius;
                if (!(gap > 0.0))
                    add("disks " + id(i) + " and " + id(j) + " overlap or touch (gap " +
                        std::to_string(gap) + ")");
            }
    } else if (s.index.kind != IndexKind::ConstantOne) {
        add("homogeneous mode requires the constant-one index profile");
    }

    // Scatterers must not intersect: sample each boundary against the other scatterer.
    auto boundary_hit = [&](int i, int j) -> std::optional<Vec2> {
        for (int t = 0; t < 720; ++t) {
            const double th = 2.0 * std::numbers::pi * t / 720;
            const double r = s.scatterers[i].shape.radius(th);
            const Vec2 x = s.scatterers[i].center + r * Vec2(std::cos(th), std::sin(th));
            const Vec2 d = x - s.scatterers[j].center;
            if (d.norm() <= s.scatterers[j].shape.radius(std::atan2(d.y(), d.x()))) return x;
        }
        return std::nullopt;
    };
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            const double reach =
                s.scatterers[i].shape.max_radius() + s.scatterers[j].shape.max_radius();
            if ((s.scatterers[i].center - s.scatterers[j].center).norm() > reach) continue;
            std::optional<Vec2> hit = boundary_hit(i, j);
            if (!hit) hit = boundary_hit(j, i);
            if (hit)
                add("scatterers " + id(i) + " and " + id(j) + " intersect near " + fmt_point(*hit));
        }

    const IndexProfile& ip = s.index;
    if (ip.kind == IndexKind::BumpAnnulus || ip.kind == IndexKind::XWeightedBump) {
        if (!(ip.r_out > ip.r_in && ip.r_in >= 0.0)) add("index: requires 0 <= r_in < r_out");
        if (!(ip.q > 0.0)) add("index: q must be positive");
    }
    if (ip.kind == IndexKind::CustomTable) {
        const auto& r = ip.table_r;
        const std::size_t before = bad.size();
        if (r.size() != ip.table_n.size()) add("index: table r and n differ in length");
        if (r.size() < 4) add("index: custom table needs at least four samples");
        for (std::size_t k = 1; k < r.size(); ++k)
            if (!(r[k] > r[k - 1])) {
                add("index: table radii must increase strictly");
                break;
            }
        for (double v : ip.table_n)
            if (!std::isfinite(v)) {
                add("index: table values must be finite");
                break;
            }
        const bool ok = bad.size() == before;
        if (ok && !(ip.r_in >= r.front() && ip.r_out <= r.back() && ip.r_in < ip.r_out))
            add("index: [r_in, r_out] must lie inside the tabulated radii");
        if (!ok) return bad;
    }

    if (ip.kind != IndexKind::ConstantOne) {
        // n must equal 1 outside the union of disks: about 1000 deterministic samples.
        const std::vector<Vec2> centers = s.centers();
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, rmax = 0.0;
        for (int i = 0; i < M; ++i) {
            const Vec2& c = s.disks[i].center;
            const double R = std::max(s.disks[i].radius, ip.r_out);
            xmin = std::min(xmin, c.x() - R);
            xmax = std::max(xmax, c.x() + R);
            ymin = std::min(ymin, c.y() - R);
            ymax = std::max(ymax, c.y() + R);
            rmax = std::max(rmax, R);
        }
        std::vector<Vec2> samples;
        const int per_disk = std::max(8, 600 / M);
        for (int i = 0; i < M; ++i)
            for (int t = 0; t < per_disk; ++t) {
                const double th = 2.0 * std::numbers::pi * (t + 0.5) / per_disk;
                const double rr = s.disks[i].radius * (1.0 + 1e-9 + 0.5 * (t % 5) / 5.0);
                samples.push_back(s.disks[i].center + rr * Vec2(std::cos(th), std::sin(th)));
            }
        for (int a = 0; a < 20; ++a)
            for (int b = 0; b < 20; ++b)
                samples.push_back({xmin + (xmax - xmin) * (a + 0.5) / 20,
                                   ymin + (ymax - ymin) * (b + 0.5) / 20});
        for (const Vec2& x : samples) {
            bool covered = false;
            for (int i = 0; i < M && !covered; ++i)
                covered = (x - s.disks[i].center).norm() < s.disks[i].radius;
            if (covered) continue;
            const double n = refraction_eval(ip, centers, x);
            if (!(std::abs(n - 1.0) < 1e-12)) {
                add("index: n = " + std::to_string(n) + " != 1 at " + fmt_point(x) +
                    " outside every disk");
                break;
            }
        }
    }

    if (s.outputs.grid) {
        const GridSpec& g = *s.outputs.grid;
        if (g.nx < 1 || g.ny < 1) add("outputs.grid: nx and ny must be >= 1");
        if (!(g.x1 >= g.x0 && g.y1 >= g.y0)) add("outputs.grid: window must be [x0, x1, y0, y1] with x0 <= x1, y0 <= y1");
    }
    return bad;
}

std::vector<std::string> scene_warnings(const SceneConfig& s) {
    std::vector<std::string> w;
    if (s.disks.size() != s.scatterers.size()) return w;
    for (int i = 0; i < s.size(); ++i) {
        const int need = static_cast<int>(std::ceil(s.kappa * s.disks[i].radius));
        if (s.cutoff_for(i) < need)
            w.push_back("disk '" + s.ids[i] + "': DtN cutoff N=" + std::to_string(s.cutoff_for(i)) +
                        " is below ceil(kappa R)=" + std::to_string(need));
        const BoundaryCondition& bc = s.scatterers[i].bc;
        if (bc.kind == BcKind::Robin && (std::conj(cplx(s.kappa)) * bc.h).imag() < 0.0)
            w.push_back("scatterer '" + s.ids[i] + "': Robin coefficient has Im(conj(kappa) h) < 0");
    }
    if (s.index.kind != IndexKind::ConstantOne) {
        const std::vector<Vec2> centers = s.centers();
        double nmin = 1e300;
        for (int i = 0; i < s.size(); ++i)
            for (int a = 0; a < 64; ++a)
                for (int t = 0; t < 128; ++t) {
                    const double rho = s.index.r_in + (s.index.r_out - s.index.r_in) * (a + 0.5) / 64;
                    const double th = 2.0 * std::numbers::pi * t / 128;
                    nmin = std::min(nmin, refraction_eval(s.index, centers,
                                                          s.disks[i].center + rho * Vec2(std::cos(th), std::sin(th))));
                }
        if (nmin <= 0.0)
            w.push_back("index: refraction index reaches " + std::to_string(nmin) + " <= 0");
    }
    return w;
}

std::string scene_to_json(const SceneConfig& s, int indent) {
    json doc;
    doc["scene"] = {{"kappa", s.kappa},
                    {"mode", to_string(s.mode)},
                    {"incident", {{"amplitude", complex_json(s.amplitude)}}}};
    json scs = json::array();
    for (int i = 0; i < s.size(); ++i) {
        const ScattererSpec& sc = s.scatterers[i];
        json bc = {{"type", to_string(sc.bc.kind)}};
        if (sc.bc.kind == BcKind::Robin) bc["h"] = complex_json(sc.bc.h);
        scs.push_back({{"id", s.ids[i]},
                       {"center", {sc.center.x(), sc.center.y()}},
                       {"shape", {{"a", sc.shape.a}, {"b", sc.shape.b}, {"k", sc.shape.k},
                                  {"theta0", sc.shape.theta0}}},
                       {"bc", bc}});
    }
    doc["scatterers"] = scs;
    json ds = json::array();
    for (const ArtificialDisk& d : s.disks)
        ds.push_back({{"center", {d.center.x(), d.center.y()}}, {"radius", d.radius}});
    doc["disks"] = ds;

    json ix = {{"profile", to_string(s.index.kind)}};
    if (s.index.kind == IndexKind::CustomTable) {
        ix["r"] = s.index.table_r;
        ix["n"] = s.index.table_n;
        ix["r_in"] = s.index.r_in;
        ix["r_out"] = s.index.r_out;
    } else if (s.index.kind != IndexKind::ConstantOne) {
        ix["r_in"] = s.index.r_in;
        ix["r_out"] = s.index.r_out;
        ix["r_peak"] = s.index.r_peak;
        ix["q"] = s.index.q;
    }
    doc["index"] = ix;
    doc["solver"] = {{"p", s.solver.p},         {"E_r", s.solver.rings},
                     {"E_theta", s.solver.sectors}, {"N", s.solver.N},
                     {"tol", s.solver.tol},     {"max_iter", s.solver.max_iter}};
    json out = json::object();
    if (s.outputs.grid) {
        const GridSpec& g = *s.outputs.grid;
        out["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"window", {g.x0, g.x1, g.y0, g.y1}}};
    }
    json pr = json::array();
    for (const Vec2& p : s.outputs.probes) pr.push_back({p.x(), p.y()});
    out["probes"] = pr;
    doc["outputs"] = out;
    return doc.dump(indent);
}

}  // namespace mscat
