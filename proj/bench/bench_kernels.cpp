#include <benchmark/benchmark.h>
#include <omp.h>

#include <Eigen/Core>
#include <algorithm>
#include <map>
#include <memory>
#include <string>

#include "mscat/multiscatter.hpp"
#include "mscat/scene.hpp"

using namespace mscat;

namespace {

struct Fixture {
    std::unique_ptr<SceneSolver> solver;
    SceneSolution solution;
    Eigen::VectorXcd trace;
};

Fixture& fixture(const std::string& name, SceneMode mode) {
    static std::map<std::pair<std::string, SceneMode>, Fixture> cache;
    auto [it, fresh] = cache.try_emplace({name, mode});
    Fixture& f = it->second;
    if (fresh) {
        SceneConfig s = load_scene(std::string(MSCAT_SCENE_DIR) + "/" + name);
        if (mode == SceneMode::Inhomogeneous && s.mode == SceneMode::Homogeneous) {
            s.mode = mode;
            for (auto& d : s.disks) d.radius = std::min(d.radius, 1.05);
        }
        f.solver = std::make_unique<SceneSolver>(s, omp_get_max_threads());
        f.solution = f.solver->solve();
        f.trace = f.solver->build_rhs();
    }
    return f;
}

void apply_operator(benchmark::State& state, const char* scene, SceneMode mode, Execution ex) {
    Fixture& f = fixture(scene, mode);
    for (auto _ : state) benchmark::DoNotOptimize(f.solver->apply(f.trace, ex));
    state.counters["unknowns"] = static_cast<double>(f.trace.size());
}

void field_grid(benchmark::State& state, Execution ex) {
    Fixture& f = fixture("example1.json", SceneMode::Homogeneous);
    const FieldEvaluator field(*f.solver, f.solution);
    const GridSpec g{100, 60, -2.0, 4.6, -2.0, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(field.grid(g, ex));
    state.counters["points"] = g.nx * g.ny;
}

}  // namespace

BENCHMARK_CAPTURE(apply_operator, example1_serial, "example1.json", SceneMode::Homogeneous, Execution::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_operator, example1_parallel, "example1.json", SceneMode::Homogeneous, Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_operator, example5_serial, "example5.json", SceneMode::Inhomogeneous, Execution::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_operator, example5_parallel, "example5.json", SceneMode::Inhomogeneous, Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_operator, grid3x3_serial, "grid3x3.json", SceneMode::Homogeneous, Execution::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_operator, grid3x3_parallel, "grid3x3.json", SceneMode::Homogeneous, Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(field_grid, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(field_grid, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
