#pragma once

// Result files: field grids, residual history and run metadata.

#include <string>
#include <vector>

#include "mscat/multiscatter.hpp"

namespace mscat {

struct RunInfo {
    double solve_seconds = 0.0;
    int threads = 1;
    std::vector<std::string> warnings;
};

/// Writes "# x y re im abs masked" rows (y outer, x inner).
void write_grid_file(const std::string& path, const GridSpec& g,
                     const std::vector<FieldEvaluator::Sample>& samples, bool total);

/// Writes "# iter residual" rows.
void write_residual_file(const std::string& path, const IterationReport& report);

/// JSON document {"config": <scene>, "report": {...}}.
std::string run_metadata(const SceneConfig& scene, const SceneSolution& sol, const RunInfo& info);

/// Writes every output requested by the scene into dir (created if needed).
/// Returns the written paths. Throws IoError naming the failing path.
std::vector<std::string> write_outputs(const std::string& dir, const SceneSolver& solver,
                                       const SceneSolution& sol, const RunInfo& info);

}  // namespace mscat
