#pragma once

// Scene configuration, refraction-index profiles, JSON parsing and validation.

#include <optional>
#include <string>
#include <vector>

#include "mscat/geometry.hpp"

namespace mscat {

enum class SceneMode { Homogeneous, Inhomogeneous };

enum class IndexKind { ConstantOne, BumpAnnulus, XWeightedBump, CustomTable };

/// Radial refraction-index profile repeated about every scatterer center c_i.
/// Bump kinds: n = w(x) exp(-1 / (1 - q (rho - r_peak)^2)) + 1 on r_in < rho < r_out,
/// rho = |x - c_i|, with w = 1 or w = x (global abscissa). Custom tables are
/// interpolated monotonically in rho on [r_in, r_out]. Outside every annulus n = 1.
struct IndexProfile {
    IndexKind kind = IndexKind::ConstantOne;
    double r_in = 0.0;
    double r_out = 0.0;
    double r_peak = 0.0;
    double q = 16.0;
    std::vector<double> table_r;
    std::vector<double> table_n;

    /// True when the profile about c_i depends only on x - c_i.
    bool translation_invariant() const { return kind != IndexKind::XWeightedBump; }
    bool operator==(const IndexProfile&) const = default;
};

/// n(x) for the profile repeated about the given centers.
double refraction_eval(const IndexProfile& profile, const std::vector<Vec2>& centers,
                       const Vec2& x);

/// Profile contribution about a single center (n - 1 for that annulus, plus 1).
double refraction_local(const IndexProfile& profile, const Vec2& center, const Vec2& x);

struct SolverOptions {
    int p = 20;
    int rings = 2;
    int sectors = 0;  // 0: max(8, 4k) per scatterer
    int N = 0;        // 0: ceil(kappa R) + 20 per disk
    double tol = 1e-11;
    int max_iter = 200;
    bool operator==(const SolverOptions&) const = default;
};

struct GridSpec {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    bool operator==(const GridSpec&) const = default;
};

struct OutputSpec {
    std::optional<GridSpec> grid;
    std::vector<Vec2> probes;
    bool operator==(const OutputSpec&) const = default;
};

struct SceneConfig {
    double kappa = 1.0;
    SceneMode mode = SceneMode::Homogeneous;
    cplx amplitude{1.0, 0.0};
    std::vector<std::string> ids;
    std::vector<ScattererSpec> scatterers;
    std::vector<ArtificialDisk> disks;
    IndexProfile index;
    SolverOptions solver;
    OutputSpec outputs;

    int size() const { return static_cast<int>(scatterers.size()); }
    std::vector<Vec2> centers() const;
    int sectors_for(int i) const;
    int cutoff_for(int i) const;
    bool operator==(const SceneConfig&) const = default;
};

/// Parse a scene document. Throws ParseError (malformed JSON or wrong types,
/// with a JSON pointer location) or ValidationError (all violated invariants).
SceneConfig parse_scene(const std::string& text);
SceneConfig load_scene(const std::string& path);

/// Invariant violations of a scene; empty when valid.
std::vector<std::string> validate_scene(const SceneConfig& scene);
/// Non-fatal findings (DtN cutoff below kappa R, lossy Robin sign, n <= 0).
std::vector<std::string> scene_warnings(const SceneConfig& scene);

/// Serialized scene document (round-trips through parse_scene).
std::string scene_to_json(const SceneConfig& scene, int indent = 2);

std::string to_string(SceneMode mode);
std::string to_string(IndexKind kind);
std::string to_string(BcKind kind);

}  // namespace mscat
