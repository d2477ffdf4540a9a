#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rso/bounds.hpp"
#include "rso/optimizers.hpp"
#include "rso/testfns.hpp"

namespace rso {

// Schema violation in a run/sweep config; `field` is the JSON path of the
// offending entry. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message),
        field(std::move(field_path)) {}
  std::string field;
};

// Tagged objective description, kept alongside the built Objective so runs
// can be re-serialized and hashed.
struct ObjectiveSpec {
  std::string kind;  // quadratic | cosh | exp1d | quartic | hard_instance
  // quadratic
  double L = 1.0;
  std::size_t dim = 1;
  // cosh
  double a = 1.0;
  // hard instance
  double eps = 0.1, eta = 1.0, L0 = 8.0, L1 = 1.0, delta1 = 1.0;
  PlateauHeight variant = PlateauHeight::construction;

  Objective build() const;
};

struct ParsedRunConfig {
  RunConfig run;
  ObjectiveSpec objective_spec;
  std::string canonical_json;  // normalized dump used for hashing
};

// Parses and validates a run config JSON document (see README for the
// schema). Throws ConfigError with a field-level message.
ParsedRunConfig parse_run_config(const std::string& json_text);

struct SweepSpec {
  double base_eta = 1.0;
  std::vector<double> multipliers;  // default 10^{k/5}, k = -5..8
  std::vector<OptimizerSpec> optimizers;
  std::vector<std::string> optimizer_labels;
  ObjectiveSpec objective_spec;
  Objective objective;
  std::vector<std::uint64_t> seeds;
  int horizon = 100;
  double sigma = 0.0;
  NoiseKind noise_kind = NoiseKind::gaussian_isotropic;
  std::optional<double> target_eps;
  std::string canonical_json;
};

SweepSpec parse_sweep_spec(const std::string& json_text);

// Grid spec for the lemma verification batch; empty lists fall back to the
// defaults from bounds.hpp.
struct LemmaGridSpec {
  std::vector<GeneralGridPoint> general;
  std::vector<ExplicitGridPoint> explicit_grid;
};

LemmaGridSpec parse_lemma_grid(const std::string& json_text);
LemmaGridSpec default_lemma_grid();

// Smoothness certification request.
struct SmoothnessSpec {
  ObjectiveSpec objective_spec;
  Objective objective;
  int pairs = 10000;
  double box_lo = -3.0, box_hi = 3.0;
  std::uint64_t seed = 7;
  int grid_points = 100000;
  std::string canonical_json;
};

SmoothnessSpec parse_smoothness_spec(const std::string& json_text);

// FNV-1a over the canonical JSON; names per-invocation output directories.
std::string config_hash(const std::string& canonical_json);

}  // namespace rso
