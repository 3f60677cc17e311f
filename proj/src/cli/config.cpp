#include <fstream>
#include <set>
#include <sstream>

#include "lwr/cli/config.hpp"

namespace lwr::cli {

namespace {

using nlohmann::json;

// Reads typed members of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& target) {
    allowed_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      target = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    allowed_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> allowed_;
};

ModelParams parse_model(const json& j) {
  ModelParams m;
  ObjectReader r(j, "model");
  r.read("gamma", m.gamma);
  r.read("K_a", m.k_ahead);
  r.read("K_b", m.k_behind);
  r.read("gamma_a", m.look_ahead);
  r.read("gamma_b", m.look_behind);
  r.read("domain_length", m.domain_length);
  r.read("n_cells", m.n_cells);
  r.finish();
  return m;
}

SolverConfig parse_solver(const json& j) {
  SolverConfig s;
  ObjectReader r(j, "solver");
  r.read("cfl", s.cfl);
  r.read("t_end", s.t_end);
  r.read("blowup_slope_factor", s.blowup_slope_factor);
  r.read("record_every", s.record_every);
  r.read("growth_window", s.growth_window);
  std::string recon = s.reconstruction == Reconstruction::muscl ? "muscl" : "first_order";
  r.read("reconstruction", recon);
  if (recon == "muscl")
    s.reconstruction = Reconstruction::muscl;
  else if (recon == "first_order")
    s.reconstruction = Reconstruction::first_order;
  else
    throw ConfigError("solver.reconstruction: expected muscl or first_order");
  r.finish();
  return s;
}

InitialCondition parse_initial(const json& j) {
  ObjectReader r(j, "initial");
  std::string preset;
  r.read("preset", preset);
  if (preset == "constant") {
    ConstantPreset p;
    r.read("value", p.value);
    r.finish();
    return p;
  }
  if (preset == "gaussian") {
    GaussianPreset p;
    r.read("base", p.base);
    r.read("height", p.height);
    r.read("center", p.center);
    r.read("width", p.width);
    r.finish();
    return p;
  }
  if (preset == "tanh_front") {
    TanhFrontPreset p;
    r.read("base", p.base);
    r.read("height", p.height);
    r.read("center", p.center);
    r.read("steepness", p.steepness);
    r.read("plateau_width", p.plateau_width);
    r.read("fall_steepness", p.fall_steepness);
    r.read("shoulder_height", p.shoulder_height);
    r.read("shoulder_length", p.shoulder_length);
    r.read("shoulder_gap", p.shoulder_gap);
    r.finish();
    return p;
  }
  if (preset == "sine") {
    SinePreset p;
    r.read("mean", p.mean);
    r.read("amplitude", p.amplitude);
    r.read("phase", p.phase);
    r.read("wavenumber", p.wavenumber);
    r.finish();
    return p;
  }
  throw ConfigError("initial.preset: expected constant, gaussian, tanh_front or sine, got '" +
                    preset + "'");
}

SweepSpec parse_sweep(const json& j) {
  SweepSpec s;
  ObjectReader r(j, "sweep");
  r.read("K_a", s.k_ahead);
  r.read("K_b", s.k_behind);
  r.read("gamma_a", s.look_ahead);
  r.read("gamma_b", s.look_behind);
  r.read("steepness", s.steepness);
  r.read("simulate", s.simulate);
  r.finish();
  return s;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  ObjectReader top(doc, "config");
  if (const auto* j = top.child("model")) cfg.model = parse_model(*j);
  if (const auto* j = top.child("solver")) cfg.solver = parse_solver(*j);
  if (const auto* j = top.child("initial"))
    cfg.initial = parse_initial(*j);
  else
    throw ConfigError("config: missing 'initial'");
  if (const auto* j = top.child("analysis")) {
    ObjectReader r(*j, "analysis");
    r.read("mu_grid", cfg.analysis.mu_grid);
    std::string variant = to_string(cfg.analysis.l_variant);
    r.read("l_variant", variant);
    r.finish();
    try {
      cfg.analysis.l_variant = parse_l_variant(variant);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("analysis.l_variant: ") + e.what());
    }
  }
  if (const auto* j = top.child("verify")) {
    ObjectReader r(*j, "verify");
    r.read("seed", cfg.verify.seed);
    r.read("random_samples", cfg.verify.random_samples);
    r.finish();
  }
  if (const auto* j = top.child("sweep")) cfg.sweep = parse_sweep(*j);
  top.read("snapshot_times", cfg.snapshot_times);
  std::string out;
  top.read("output_dir", out);
  cfg.output_dir = out;
  top.finish();

  try {
    cfg.model.validate();
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.analysis.mu_grid < 1) throw ConfigError("analysis.mu_grid must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["model"] = {{"gamma", cfg.model.gamma},          {"K_a", cfg.model.k_ahead},
                {"K_b", cfg.model.k_behind},         {"gamma_a", cfg.model.look_ahead},
                {"gamma_b", cfg.model.look_behind},  {"domain_length", cfg.model.domain_length},
                {"n_cells", cfg.model.n_cells}};
  j["solver"] = {{"cfl", cfg.solver.cfl},
                 {"t_end", cfg.solver.t_end},
                 {"blowup_slope_factor", cfg.solver.blowup_slope_factor},
                 {"record_every", cfg.solver.record_every},
                 {"growth_window", cfg.solver.growth_window},
                 {"reconstruction",
                  cfg.solver.reconstruction == Reconstruction::muscl ? "muscl" : "first_order"}};
  j["initial"] = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPreset>) {
          return {{"preset", "constant"}, {"value", p.value}};
        } else if constexpr (std::is_same_v<T, GaussianPreset>) {
          return {{"preset", "gaussian"}, {"base", p.base},     {"height", p.height},
                  {"center", p.center},   {"width", p.width}};
        } else if constexpr (std::is_same_v<T, TanhFrontPreset>) {
          return {{"preset", "tanh_front"},
                  {"base", p.base},
                  {"height", p.height},
                  {"center", p.center},
                  {"steepness", p.steepness},
                  {"plateau_width", p.plateau_width},
                  {"fall_steepness", p.fall_steepness},
                  {"shoulder_height", p.shoulder_height},
                  {"shoulder_length", p.shoulder_length},
                  {"shoulder_gap", p.shoulder_gap}};
        } else {
          return {{"preset", "sine"},
                  {"mean", p.mean},
                  {"amplitude", p.amplitude},
                  {"phase", p.phase},
                  {"wavenumber", p.wavenumber}};
        }
      },
      cfg.initial);
  j["analysis"] = {{"mu_grid", cfg.analysis.mu_grid},
                   {"l_variant", to_string(cfg.analysis.l_variant)}};
  j["verify"] = {{"seed", cfg.verify.seed}, {"random_samples", cfg.verify.random_samples}};
  j["snapshot_times"] = cfg.snapshot_times;
  j["output_dir"] = cfg.output_dir.string();
  j["sweep"] = {{"K_a", cfg.sweep.k_ahead},         {"K_b", cfg.sweep.k_behind},
                {"gamma_a", cfg.sweep.look_ahead},  {"gamma_b", cfg.sweep.look_behind},
                {"steepness", cfg.sweep.steepness}, {"simulate", cfg.sweep.simulate}};
  return j;
}

}  // namespace lwr::cli
