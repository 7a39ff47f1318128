#include "mscat/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mscat/error.hpp"

namespace mscat {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_file(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);
    return out;
}

void close_file(std::ofstream& out, const std::string& path) {
    out.close();
    if (!out) throw IoError("failed while writing " + path);
}

}  // namespace

void write_grid_file(const std::string& path, const GridSpec& g,
                     const std::vector<FieldEvaluator::Sample>& samples, bool total) {
    if (samples.size() != static_cast<std::size_t>(g.nx) * g.ny)
        throw DimensionError("grid samples do not match the grid size");
    std::ofstream out = open_file(path);
    out << "# x y re im abs masked\n";
    const double dx = g.nx > 1 ? (g.x1 - g.x0) / (g.nx - 1) : 0.0;
    const double dy = g.ny > 1 ? (g.y1 - g.y0) / (g.ny - 1) : 0.0;
    char buf[160];
    for (int r = 0; r < g.ny; ++r)
        for (int c = 0; c < g.nx; ++c) {
            const auto& s = samples[static_cast<std::size_t>(r) * g.nx + c];
            const cplx u = total ? s.total : s.scattered;
            std::snprintf(buf, sizeof buf, "%.10g %.10g %.17g %.17g %.17g %d\n",
                          g.x0 + c * dx, g.y0 + r * dy, u.real(), u.imag(), std::abs(u),
                          s.masked ? 1 : 0);
            out << buf;
        }
    close_file(out, path);
}

void write_residual_file(const std::string& path, const IterationReport& report) {
    std::ofstream out = open_file(path);
    out << "# iter residual\n";
    char buf[64];
    for (std::size_t k = 0; k < report.residuals.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu %.17g\n", k, report.residuals[k]);
        out << buf;
    }
    close_file(out, path);
}

std::string run_metadata(const SceneConfig& scene, const SceneSolution& sol, const RunInfo& info) {
    json rep = {{"iterations", sol.report.iterations},
                {"converged", sol.report.converged},
                {"final_residual", sol.report.residuals.empty() ? 0.0 : sol.report.residuals.back()},
                {"residuals", sol.report.residuals},
                {"gmres_seconds", sol.report.seconds},
                {"setup_seconds", sol.setup_seconds},
                {"solve_seconds", info.solve_seconds},
                {"threads", info.threads},
                {"warnings", info.warnings}};
    json doc = {{"config", json::parse(scene_to_json(scene))}, {"report", rep}};
    return doc.dump(2);
}

std::vector<std::string> write_outputs(const std::string& dir, const SceneSolver& solver,
                                       const SceneSolution& sol, const RunInfo& info) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    std::vector<std::string> written;
    const SceneConfig& scene = solver.scene();

    const std::string res = (fs::path(dir) / "residuals.dat").string();
    write_residual_file(res, sol.report);
    written.push_back(res);

    const FieldEvaluator field(solver, sol);
    if (scene.outputs.grid) {
        const GridSpec& g = *scene.outputs.grid;
        const auto samples = field.grid(g);
        for (const bool total : {true, false}) {
            const std::string p =
                (fs::path(dir) / (total ? "field_total.dat" : "field_scattered.dat")).string();
            write_grid_file(p, g, samples, total);
            written.push_back(p);
        }
    }
    if (!scene.outputs.probes.empty()) {
        const std::string p = (fs::path(dir) / "probes.dat").string();
        std::ofstream out = open_file(p);
        out << "# x y re_total im_total re_scattered im_scattered masked\n";
        char buf[200];
        for (const Vec2& x : scene.outputs.probes) {
            const auto s = field.eval(x);
            std::snprintf(buf, sizeof buf, "%.10g %.10g %.17g %.17g %.17g %.17g %d\n", x.x(), x.y(),
                          s.total.real(), s.total.imag(), s.scattered.real(), s.scattered.imag(),
                          s.masked ? 1 : 0);
            out << buf;
        }
        close_file(out, p);
        written.push_back(p);
    }

    const std::string meta = (fs::path(dir) / "run.json").string();
    std::ofstream out = open_file(meta);
    out << run_metadata(scene, sol, info) << "\n";
    close_file(out, meta);
    written.push_back(meta);
    return written;
}

}  // namespace mscat
