#pragma once

#include "vortexdom/tracer.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vortexdom {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "vortexdom 1.0.0";

/// Parsed run configuration; see README for the JSON schema.
struct RunConfig {
  nlohmann::json vortex;  // VorticitySpec document
  std::optional<double> speed;  // empty means "calibrate"
  ToleranceSet tolerances;

  struct Sweep {
    std::string parameter;
    double lo = 0.0, hi = 0.0;
    int steps = 0;
  };
  std::optional<Sweep> sweep;

  std::string output_dir = ".";
  std::vector<Vec2> seeds;
  int n_boundary = 64;

  struct Invariance {
    int particles = 100;
    double horizon = 50.0;
    unsigned rng_seed = 0;
  };
  std::optional<Invariance> invariance;

  std::string base_dir;  // directory of the config file, for relative paths

  /// Reads and validates a config file. Tolerances may be overridden by the
  /// environment variables VORTEXDOM_TOL_QUADRATURE / _ROOT / _ODE.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j,
                             const std::string& base_dir = "");

  VorticitySpec make_spec() const;
  nlohmann::ordered_json echo() const;
};

/// Full pipeline: Steiner check, speed calibration or steadiness residual,
/// classification, domain extraction, measures and optional trace/invariance
/// blocks. Writes report.json, boundary.csv and field.csv to output_dir and
/// returns the report document. Stage errors are embedded in the report
/// before being rethrown.
nlohmann::ordered_json run_analyze(const RunConfig& cfg);

/// Parameter sweep: per value, calibrated (or configured) speed, center
/// speed and classification; a single class flip is refined by bisection of
/// center_speed - W to a bracket of width <= 1e-3. Writes regime.csv and
/// sweep.json.
nlohmann::ordered_json run_sweep(const RunConfig& cfg);

/// Traces the configured seeds on a cached field and writes one CSV per
/// trace plus traces.json.
nlohmann::ordered_json run_trace(const RunConfig& cfg);

/// Property suite against the configured vortex: Steiner symmetry, strict
/// stream monotonicity, far-field decay, steadiness and conservation.
/// Writes validate.json; the "all_pass" field gates the CLI exit code.
nlohmann::ordered_json run_validate(const RunConfig& cfg);

/// Loads trace seeds from a CSV with one "axial,transverse" pair per line
/// (optional header).
std::vector<Vec2> load_seed_csv(const std::string& path);

}  // namespace vortexdom
