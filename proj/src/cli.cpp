#include "mscat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <omp.h>
#include <sstream>

#include "mscat/error.hpp"
#include "mscat/output.hpp"
#include "mscat/scene.hpp"
#include "mscat/studies.hpp"

namespace mscat::cli {

namespace {

struct Overrides {
    double tol = 0.0;
    int max_iter = 0;
    int p = 0;
    int N = 0;
    std::string grid;
    std::string window;
};

std::vector<double> split_numbers(const std::string& s, char sep) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw CLI::ValidationError("'" + s + "' is not a list of numbers");
        v.push_back(x);
    }
    return v;
}

void apply_overrides(SceneConfig& scene, const Overrides& o) {
    if (o.tol > 0.0) scene.solver.tol = o.tol;
    if (o.max_iter > 0) scene.solver.max_iter = o.max_iter;
    if (o.p > 0) scene.solver.p = o.p;
    if (o.N > 0) scene.solver.N = o.N;
    if (!o.grid.empty() || !o.window.empty()) {
        GridSpec g = scene.outputs.grid.value_or(GridSpec{});
        if (!o.grid.empty()) {
            const auto pos = o.grid.find('x');
            if (pos == std::string::npos) throw CLI::ValidationError("--grid expects WxH");
            const auto w = split_numbers(o.grid.substr(0, pos), ',');
            const auto h = split_numbers(o.grid.substr(pos + 1), ',');
            if (w.size() != 1 || h.size() != 1 || w[0] < 1 || h[0] < 1)
                throw CLI::ValidationError("--grid expects WxH with positive integers");
            g.nx = static_cast<int>(w[0]);
            g.ny = static_cast<int>(h[0]);
        }
        if (!o.window.empty()) {
            const auto w = split_numbers(o.window, ',');
            if (w.size() != 4) throw CLI::ValidationError("--window expects x0,x1,y0,y1");
            g.x0 = w[0];
            g.x1 = w[1];
            g.y0 = w[2];
            g.y1 = w[3];
        } else if (!scene.outputs.grid) {
            double ext = 0.0;
            for (const auto& d : scene.disks)
                ext = std::max({ext, std::abs(d.center.x()) + d.radius,
                                std::abs(d.center.y()) + d.radius});
            ext += 1.0;
            g.x0 = g.y0 = -ext;
            g.x1 = g.y1 = ext;
        }
        if (g.nx < 1 || g.ny < 1) g.nx = g.ny = 200;
        scene.outputs.grid = g;
    }
}

void add_solver_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--tol", o.tol, "GMRES relative tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "GMRES iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--N", o.N, "DtN truncation order")->check(CLI::PositiveNumber);
}

void add_grid_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--grid", o.grid, "field grid resolution WxH");
    cmd->add_option("--window", o.window, "field grid window x0,x1,y0,y1");
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << v;
    return s.str();
}

int cmd_run(const std::string& path, std::string outdir, const Overrides& o, int threads,
            std::ostream& out, std::ostream& err) {
    SceneConfig scene = load_scene(path);
    apply_overrides(scene, o);
    if (outdir.empty()) {
        const char* env = std::getenv("MSCAT_OUTPUT_DIR");
        outdir = env && *env ? env : "out";
    }
    RunInfo info;
    info.threads = threads;
    info.warnings = scene_warnings(scene);
    for (const auto& w : info.warnings) err << "warning: " << w << "\n";

    const SceneSolver solver(scene, threads);
    const auto t0 = std::chrono::steady_clock::now();
    const SceneSolution sol = solver.solve();
    info.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto files = write_outputs(outdir, solver, sol, info);

    out << "mode " << to_string(scene.mode) << ", " << scene.size() << " scatterer(s), kappa "
        << scene.kappa << ", p " << scene.solver.p << "\n";
    out << "iterations " << sol.report.iterations << ", final residual "
        << sci(sol.report.residuals.back()) << ", "
        << (sol.report.converged ? "converged" : "NOT converged") << "\n";
    out << "setup " << std::fixed << std::setprecision(2) << sol.setup_seconds << " s, solve "
        << info.solve_seconds << " s\n";
    out.unsetf(std::ios::floatfield);
    for (const auto& f : files) out << "wrote " << f << "\n";
    if (!sol.report.converged) {
        err << "GMRES did not reach tol " << scene.solver.tol << " in "
            << scene.solver.max_iter << " iterations\n";
        return kNonConvergence;
    }
    return kOk;
}

int cmd_validate(const std::string& which, double kappa, int p, std::ostream& out) {
    bool ok = true;
    if (which == "mie") {
        const MieCheck m = mie_check(kappa, p);
        ok = m.rel_error < 1e-7;
        out << "mie kappa " << kappa << " p " << p << " N " << m.N << ": relative L2 error "
            << sci(m.rel_error) << " (" << m.iterations << " iteration(s))\n";
    } else if (which == "dtn") {
        const int N = static_cast<int>(std::ceil(kappa * 1.25)) + 20;
        const double e = dtn_eigen_check(kappa, p, 12, 1.25, N, std::min(N, 20));
        ok = e < 1e-9;
        out << "dtn eigenrelation kappa " << kappa << " p " << p << ": max relative deviation "
            << sci(e) << "\n";
    } else {
        const double e = integral_check(40, 20, std::numbers::pi / 12, 0.3);
        ok = e < 1e-12;
        out << "arc integrals |n| <= 40, m <= 20: max abs deviation " << sci(e) << "\n";
    }
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kValidation;
}

int cmd_sweep(const std::string& path, const std::string& plist, const Overrides& o,
              int threads, std::ostream& out) {
    SceneConfig scene = load_scene(path);
    apply_overrides(scene, o);
    std::vector<int> ps;
    for (double v : split_numbers(plist, ',')) {
        if (v < 1 || v != std::floor(v)) throw CLI::ValidationError("--p entries must be positive integers");
        ps.push_back(static_cast<int>(v));
    }
    const SweepResult r = sweep(scene, ps, 0, threads);
    out << "reference p " << r.reference.p << " (" << r.reference.iterations << " iterations)\n";
    out << std::setw(4) << "p" << std::setw(12) << "iterations" << std::setw(14) << "error"
        << std::setw(10) << "seconds" << "\n";
    bool converged = r.reference.converged;
    for (const auto& row : r.rows) {
        out << std::setw(4) << row.run.p << std::setw(12) << row.run.iterations << std::setw(14)
            << sci(row.error) << std::setw(10) << std::fixed << std::setprecision(2)
            << row.run.seconds << "\n";
        out.unsetf(std::ios::floatfield);
        converged = converged && row.run.converged;
    }
    return converged ? kOk : kNonConvergence;
}

int cmd_compare(const std::string& path, const Overrides& o, int threads, std::ostream& out) {
    SceneConfig scene = load_scene(path);
    apply_overrides(scene, o);
    const CompareResult r = compare_algorithms(scene, threads);
    out << "homogeneous iterations " << r.homogeneous.iterations << "\n";
    out << "inhomogeneous iterations " << r.inhomogeneous.iterations << "\n";
    out << "relative L2 difference at 200 exterior probes " << sci(r.difference) << "\n";
    if (!r.homogeneous.converged || !r.inhomogeneous.converged) return kNonConvergence;
    const bool ok = r.difference < 1e-6;
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kValidation;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiple scattering by star-shaped obstacles in locally inhomogeneous media"};
    app.name("mscat");
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)")
        ->check(CLI::NonNegativeNumber);

    Overrides o;
    std::string scene_path, outdir, plist = "5,10,15,20", which = "mie";
    double kappa = 10.0;
    int vp = 20;

    auto* run = app.add_subcommand("run", "solve a scene and write result files");
    run->add_option("scene", scene_path, "scene JSON")->required();
    run->add_option("outdir", outdir, "output directory (default $MSCAT_OUTPUT_DIR or ./out)");
    run->add_option("--p", o.p, "polynomial degree")->check(CLI::PositiveNumber);
    add_solver_flags(run, o);
    add_grid_flags(run, o);

    auto* val = app.add_subcommand("validate", "run an analytic check");
    val->add_option("--which", which, "mie, dtn or integrals")
        ->check(CLI::IsMember({"mie", "dtn", "integrals"}));
    val->add_option("--kappa", kappa, "wavenumber")->check(CLI::PositiveNumber);
    val->add_option("--p", vp, "polynomial degree")->check(CLI::PositiveNumber);

    auto* sw = app.add_subcommand("sweep", "self-convergence in p against a p_max + 5 run");
    sw->add_option("scene", scene_path, "scene JSON")->required();
    sw->add_option("--p", plist, "comma-separated degrees");
    add_solver_flags(sw, o);

    auto* cmp = app.add_subcommand("compare", "homogeneous vs inhomogeneous formulation");
    cmp->add_option("scene", scene_path, "scene JSON")->required();
    cmp->add_option("--p", o.p, "polynomial degree")->check(CLI::PositiveNumber);
    add_solver_flags(cmp, o);

    for (auto* sub : {run, val, sw, cmp})
        sub->add_option("--threads", threads, "worker threads (default: all cores)")
            ->check(CLI::NonNegativeNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run 'mscat --help' for usage\n";
        return kUsage;
    }
    if (threads <= 0) threads = omp_get_max_threads();

    try {
        if (*run) return cmd_run(scene_path, outdir, o, threads, out, err);
        if (*val) return cmd_validate(which, kappa, vp, out);
        if (*sw) return cmd_sweep(scene_path, plist, o, threads, out);
        return cmd_compare(scene_path, o, threads, out);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        err << "parse error at " << e.location() << ": " << e.what() << "\n";
        return kValidation;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return kValidation;
    } catch (const SingularError& e) {
        err << "solve failed: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace mscat::cli
