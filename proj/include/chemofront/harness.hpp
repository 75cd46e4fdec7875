#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "chemofront/classify.hpp"
#include "chemofront/doublefront.hpp"
#include "chemofront/fixeddomain.hpp"
#include "chemofront/frontsolver.hpp"
#include "chemofront/spectrum.hpp"

namespace chemofront {

using Json = nlohmann::json;

// ----------------------------------------------------------------- config

/// Fully defaulted configuration for a geometry kind
/// ("single", "double", "halfline", "fixed").
Json default_config(const std::string& kind = "single");

/// Rebuilds `raw` into canonical form: every field typed and defaulted,
/// unknown keys rejected, referenced table files inlined. `base_dir`
/// resolves relative file paths. Throws ConfigError.
Json normalize_config(const Json& raw, const std::string& base_dir = ".");

/// Reads and normalizes a JSON config file.
Json load_config(const std::string& path);

/// Sets a dotted path ("geometry.h0") that must already exist in the
/// normalized document, then re-normalizes. Values parse as JSON, falling
/// back to a plain string.
void apply_override(Json& config, const std::string& assignment);
void set_path(Json& config, const std::string& path, const Json& value);
bool has_path(const Json& config, const std::string& path);

/// SHA-256 (hex) of the canonical dump, excluding the "output" section.
std::string config_digest(const Json& config);

ModelParams model_from(const Json& config);
CoefficientField coefficients_from(const Json& config);
InitialProfile initial_from(const Json& config);
ClassifyThresholds thresholds_from(const Json& config);
SpectrumOptions spectrum_options_from(const Json& config);
Sampler sampler_from(const Json& spec);

// ------------------------------------------------------------------- runs

/// Profile on the reference grid; physical x = left + y * length.
struct SnapshotTable {
  double t = 0.0;
  double left = 0.0;
  double length = 1.0;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> v1;
  std::vector<double> v2;
};

struct RunReport {
  std::string kind;
  std::string digest;
  std::string verdict;  // Outcome verdict, or Persists/Decays for fixed-domain runs
  Outcome outcome;
  RunSeries series;
  std::vector<SnapshotTable> snapshots;
  SnapshotTable final_profile;
  Json manifest;
};

/// Runs a normalized config to completion (or to a verdict).
RunReport execute(const Json& config);

/// series.csv, manifest.json and snapshot_<k>.csv under `dir`.
void write_run_outputs(const RunReport& report, const std::string& dir);

/// lambda_min/lambda_max at the configured geometry plus l*, l**.
Json spectrum_report(const Json& config);

// ------------------------------------------------------------------ sweep

struct SweepAxis {
  std::string path;
  std::vector<Json> values;
};

struct SweepSpec {
  Json base;
  std::vector<SweepAxis> axes;
  int jobs = 1;
};

/// Reads base config and config["sweep"]; every axis path must exist.
SweepSpec sweep_from(const Json& config);

struct SweepCell {
  std::size_t index = 0;
  std::vector<Json> values;
  std::string digest;
  std::string status;  // "ok" or the error class
  std::string verdict;
  double h_infinity = 0.0;
  double final_h = 0.0;
  double final_sup_u = 0.0;
  double final_t = 0.0;
  std::string message;
  RunSeries series;
};

struct SweepSummary {
  std::vector<std::string> axis_paths;
  std::vector<SweepCell> cells;
  std::string digest;

  /// Phase table, one row per cell in cartesian order.
  std::string csv() const;
  Json json() const;
};

/// Cartesian product of the axes, run on up to spec.jobs threads. Failures
/// are recorded per cell. Output order is independent of scheduling.
SweepSummary run_sweep(const SweepSpec& spec);

/// Writes phase_table.csv, summary.json and cells/<digest>.csv.
void write_sweep_outputs(const SweepSummary& summary, const std::string& dir);

// ------------------------------------------------------------ experiments

const std::vector<std::string>& experiment_presets();

struct ExperimentOptions {
  std::vector<std::string> overrides;
  std::string out_dir;  // empty: nothing written
  int jobs = 1;
  bool allow_h1_violation = false;
};

/// Runs a named preset and returns {"preset", "passed", "assertions": [...], ...}.
/// Writes per-run CSVs and summary.json when out_dir is set.
Json run_experiment(const std::string& preset, const ExperimentOptions& options = {});

/// Base config of a preset (what overrides apply to).
Json experiment_base_config(const std::string& preset);

}  // namespace chemofront
