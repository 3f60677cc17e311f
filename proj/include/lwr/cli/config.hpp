#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lwr/model.hpp"
#include "lwr/solver.hpp"
#include "lwr/threshold.hpp"

namespace lwr::cli {

/// Malformed or inconsistent experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstantPreset {
  double value = 0.0;
};

struct GaussianPreset {
  double base = 0.0;
  double height = 0.5;
  double center = 0.0;
  double width = 0.5;
};

/// Steep rise of the given steepness at `center`, a short plateau, then a
/// gentle fall. An optional shoulder of density sits in the upstream window.
struct TanhFrontPreset {
  double base = 0.0;
  double height = 0.3;
  double center = 2.0;
  double steepness = 50.0;
  double plateau_width = 0.15;
  double fall_steepness = 8.0;
  double shoulder_height = 0.0;
  double shoulder_length = 0.85;
  double shoulder_gap = 0.35;
};

struct SinePreset {
  double mean = 0.5;
  double amplitude = 0.25;
  double phase = 0.0;
  int wavenumber = 1;
};

using InitialCondition = std::variant<ConstantPreset, GaussianPreset, TanhFrontPreset, SinePreset>;

struct AnalysisOptions {
  std::size_t mu_grid = 1000;
  LVariant l_variant = LVariant::proof;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  std::size_t random_samples = 10000;
};

/// Lists left empty take the single value from the model / preset.
struct SweepSpec {
  std::vector<double> k_ahead;
  std::vector<double> k_behind;
  std::vector<double> look_ahead;
  std::vector<double> look_behind;
  std::vector<double> steepness;
  bool simulate = true;
};

struct ExperimentConfig {
  ModelParams model;
  SolverConfig solver;
  InitialCondition initial = ConstantPreset{};
  AnalysisOptions analysis;
  VerifyOptions verify;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir;
  SweepSpec sweep;
};

/// Strict: unknown keys anywhere are rejected with their JSON path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Samples the preset at cell centers. Throws ConfigError when the profile
/// leaves [0,1].
GridState build_initial(const InitialCondition& ic, const ModelParams& p);

std::string preset_name(const InitialCondition& ic);

}  // namespace lwr::cli
