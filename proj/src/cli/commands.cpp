#include "lwr/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "lwr/csv.hpp"
#include "lwr/errors.hpp"
#include "lwr/riccati.hpp"
#include "lwr/solver.hpp"
#include "lwr/threshold.hpp"

namespace lwr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

fs::path resolve_out_dir(const ExperimentConfig& cfg, const CommandOptions& opts) {
  const fs::path dir = opts.out_dir.empty() ? cfg.output_dir : opts.out_dir;
  if (dir.empty()) throw ConfigError("no output directory given (--out or output_dir)");
  if (!fs::is_directory(dir)) throw ConfigError("output directory does not exist: " + dir.string());
  return dir;
}

// Single writer per output file.
void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
  if (!out) throw ConfigError("write failed for " + path.string());
}

void write_manifest(const fs::path& dir, const char* command, const ExperimentConfig& cfg,
                    const std::string& started, const std::vector<std::string>& outputs) {
  json m{{"command", command},
         {"version", kVersion},
         {"compiler", __VERSION__},
         {"config_hash", config_hash(cfg)},
         {"config", to_json(cfg)},
         {"started_at", started},
         {"finished_at", utc_now()},
         {"outputs", outputs}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Randomized evaluation of the F_11 transport expansion over the admissible
// ranges of its arguments for these parameters.
std::vector<BoundViolation> random_expansion_check(const ModelParams& p, const VerifyOptions& v) {
  std::vector<BoundViolation> out;
  if (!p.quadratic_diagram()) return out;
  const double alpha = alpha_bound(p);
  const double flux_max = 4.0 / 27.0 * std::exp(p.k_behind);
  const double sa = p.k_ahead / p.look_ahead;
  const double sb = p.k_behind / p.look_behind;
  std::mt19937_64 rng(v.seed);
  auto draw = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  for (std::size_t k = 0; k < v.random_samples; ++k) {
    const double u = draw(0.0, 1.0);
    const double ubar = draw(0.0, p.k_ahead);
    const double utilde = draw(0.0, p.k_behind);
    const double ubar_x = draw(-sa, sa);
    const double utilde_x = draw(-sb, sb);
    const double ubar_t = draw(-sa * flux_max, sa * flux_max);
    const double utilde_t = draw(-sb * flux_max, sb * flux_max);
    const double value = f11dot_expansion(u, ubar, utilde, ubar_x, utilde_x, ubar_t, utilde_t);
    if (std::abs(value) > alpha * (1.0 + 1e-12))
      out.push_back({"f11dot_expansion", k, std::abs(value), alpha, "random sample"});
  }
  return out;
}

std::vector<double> values_or(const std::vector<double>& list, double fallback) {
  return list.empty() ? std::vector<double>{fallback} : list;
}

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ThresholdReport analyze(const ExperimentConfig& cfg, const CommandOptions& opts) {
  const auto u0 = build_initial(cfg.initial, cfg.model);
  return certify(u0, cfg.model, opts.mu_grid.value_or(cfg.analysis.mu_grid),
                 opts.l_variant.value_or(cfg.analysis.l_variant));
}

int cmd_simulate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const auto started = utc_now();
  const auto dir = resolve_out_dir(cfg, opts);
  const auto u0 = build_initial(cfg.initial, cfg.model);

  auto times = cfg.snapshot_times;
  std::sort(times.begin(), times.end());
  std::size_t next = 0;
  json snapshots = json::array();
  std::vector<std::string> outputs{"trace.csv", "summary.json"};
  auto observer = [&](const GridState& s, std::size_t) {
    while (next < times.size() && s.time() >= times[next]) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(3) << std::setfill('0') << next << ".csv";
      std::ostringstream body;
      write_snapshot_csv(body, s);
      write_file(dir / name.str(), body.str());
      snapshots.push_back({{"requested", times[next]}, {"t", s.time()}, {"file", name.str()}});
      outputs.push_back(name.str());
      ++next;
    }
  };

  const auto res = simulate(u0, cfg.model, cfg.solver, observer);

  std::ostringstream trace;
  write_trace_csv(trace, res.trace);
  write_file(dir / "trace.csv", trace.str());

  const auto& last = res.trace.records.back();
  json summary{{"outcome", to_string(res.outcome)},
               {"t_detect", res.t_detect ? json(*res.t_detect) : json()},
               {"t_final", res.final_state.time()},
               {"final_M", last.max_slope},
               {"final_N", last.min_slope},
               {"max_M", std::max_element(res.trace.records.begin(), res.trace.records.end(),
                                          [](const auto& a, const auto& b) {
                                            return a.max_slope < b.max_slope;
                                          })->max_slope},
               {"steps", res.steps},
               {"clipped_values", res.clipped_values},
               {"diagnostic", res.diagnostic},
               {"snapshots", snapshots}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_manifest(dir, "simulate", cfg, started, outputs);

  log << "simulate: " << to_string(res.outcome);
  if (res.t_detect) log << " at t=" << *res.t_detect;
  log << " after " << res.steps << " steps";
  if (!res.diagnostic.empty()) log << " (" << res.diagnostic << ")";
  log << '\n';
  return res.outcome == Outcome::aborted ? kRuntimeAbort : kOk;
}

int cmd_analyze(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const auto started = utc_now();
  const auto dir = resolve_out_dir(cfg, opts);
  const auto report = analyze(cfg, opts);
  write_file(dir / "report.json", json(report).dump(2) + "\n");
  write_manifest(dir, "analyze", cfg, started, {"report.json"});
  log << "analyze: " << (report.certified() ? "certified" : "not-certified") << " ("
      << report.reason << "), M0=" << report.M0 << " G=" << report.G
      << " t*=" << report.t_star << '\n';
  return kOk;
}

VerificationRun run_verification(const ExperimentConfig& cfg, const CommandOptions& opts) {
  if (!opts.trace && !opts.run_inline)
    throw ConfigError("verify needs --trace PATH or --run-inline");

  VerificationRun out;
  const auto report = analyze(cfg, opts);
  auto add = [&](std::vector<BoundViolation> v) {
    out.violations.insert(out.violations.end(), std::make_move_iterator(v.begin()),
                          std::make_move_iterator(v.end()));
  };

  add(random_expansion_check(cfg.model, cfg.verify));
  out.notes.push_back("f11dot expansion: " + std::to_string(cfg.verify.random_samples) +
                      " random samples");

  SimulationTrace trace;
  std::optional<double> t_detect;
  if (opts.trace) {
    if (!fs::exists(*opts.trace)) throw ConfigError("trace file not found: " + opts.trace->string());
    std::ifstream in(*opts.trace);
    try {
      trace = read_trace_csv(in, cfg.model.dx());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad trace file: ") + e.what());
    }
    out.notes.push_back("trace read from " + opts.trace->string() +
                        "; field checks need --run-inline");
  } else {
    const auto u0 = build_initial(cfg.initial, cfg.model);
    std::optional<GridState> previous;
    const bool f11dot = cfg.model.quadratic_diagram();
    auto observer = [&](const GridState& s, std::size_t step) {
      add(check_static_bounds(s, cfg.model, step));
      if (f11dot && previous) add(check_f11dot(*previous, s, cfg.model, step));
      previous = s;
    };
    const auto res = simulate(u0, cfg.model, cfg.solver, observer);
    trace = res.trace;
    t_detect = res.t_detect;
    out.notes.push_back(std::string("inline run: ") + to_string(res.outcome) + " after " +
                        std::to_string(res.steps) + " steps");
    if (res.outcome == Outcome::aborted) out.notes.push_back("run aborted: " + res.diagnostic);
    if (!f11dot) out.notes.push_back("f11dot check skipped: gamma != 2");
  }
  out.records = trace.records.size();

  if (!report.certified()) {
    out.notes.push_back("trace checks skipped: report not certified (" + report.reason + ")");
    return out;
  }
  add(check_N_floor(trace, report));
  add(check_mu_floor(trace, report));
  const auto cmp = check_comparison(trace, report, t_detect);
  if (!cmp.passed) {
    out.violations.push_back({"comparison", *cmp.first_failure, cmp.beta_at_failure,
                              cmp.m_at_failure + comparison_tolerance(trace.dx, cmp.beta_at_failure),
                              "beta(t) < M(t)"});
  }
  out.notes.push_back("comparison: " + std::to_string(cmp.records_checked) + " records checked" +
                      (cmp.note.empty() ? "" : "; " + cmp.note));
  return out;
}

int cmd_verify(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const auto started = utc_now();
  const auto dir = resolve_out_dir(cfg, opts);
  const auto run = run_verification(cfg, opts);

  std::ostringstream body;
  write_violations_csv(body, run.violations);
  write_file(dir / "violations.csv", body.str());
  json summary{{"violations", run.violations.size()}, {"records", run.records}, {"notes", run.notes}};
  write_file(dir / "verify_summary.json", summary.dump(2) + "\n");
  write_manifest(dir, "verify", cfg, started, {"violations.csv", "verify_summary.json"});

  for (const auto& n : run.notes) log << "verify: " << n << '\n';
  log << "verify: " << run.violations.size() << " violation(s)\n";
  return run.violations.empty() ? kOk : kViolations;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const CommandOptions& opts) {
  const auto* front = std::get_if<TanhFrontPreset>(&cfg.initial);
  if (!cfg.sweep.steepness.empty() && !front)
    throw ConfigError("sweep.steepness requires the tanh_front preset");

  std::vector<SweepRow> rows;
  for (double ka : values_or(cfg.sweep.k_ahead, cfg.model.k_ahead))
    for (double kb : values_or(cfg.sweep.k_behind, cfg.model.k_behind))
      for (double ga : values_or(cfg.sweep.look_ahead, cfg.model.look_ahead))
        for (double gb : values_or(cfg.sweep.look_behind, cfg.model.look_behind))
          for (double s : values_or(cfg.sweep.steepness, front ? front->steepness : kNaN)) {
            SweepRow r;
            r.k_ahead = ka;
            r.k_behind = kb;
            r.look_ahead = ga;
            r.look_behind = gb;
            r.steepness = s;
            rows.push_back(r);
          }

  const std::size_t grid = opts.mu_grid.value_or(cfg.analysis.mu_grid);
  const LVariant variant = opts.l_variant.value_or(cfg.analysis.l_variant);

  auto evaluate = [&](SweepRow& r) {
    r.alpha = r.g_alpha = r.g = r.mu_star = r.t_star = r.m0 = r.t_detect = kNaN;
    try {
      ModelParams m = cfg.model;
      m.k_ahead = r.k_ahead;
      m.k_behind = r.k_behind;
      m.look_ahead = r.look_ahead;
      m.look_behind = r.look_behind;
      m.validate();
      InitialCondition ic = cfg.initial;
      if (auto* f = std::get_if<TanhFrontPreset>(&ic)) f->steepness = r.steepness;

      const auto u0 = build_initial(ic, m);
      const auto report = certify(u0, m, grid, variant);
      r.alpha = report.alpha;
      r.g = report.G;
      r.mu_star = report.mu_star;
      r.t_star = report.t_star;
      r.m0 = report.M0;
      r.verdict = report.certified() ? "certified" : "not-certified";

      ModelParams unit = m;
      unit.k_ahead = unit.k_behind = unit.look_ahead = unit.look_behind = 1.0;
      const auto ref = certify(build_initial(ic, unit), unit, grid, variant);
      if (std::min(ref.L_xi, ref.L_eta) > 0.0)
        r.g_alpha = minimize_G(ref.L_xi, ref.L_eta, ref.N0, r.alpha, grid).g;

      if (cfg.sweep.simulate) {
        const auto res = simulate(u0, m, cfg.solver);
        r.outcome = to_string(res.outcome);
        if (res.t_detect) r.t_detect = *res.t_detect;
        if (res.outcome == Outcome::aborted) r.error = res.diagnostic;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  const unsigned jobs = std::min<std::size_t>(resolve_jobs(opts.jobs), rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(rows[i]);
  };
  std::vector<std::jthread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  using csv::format_number;
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_number(r.k_ahead) << ',' << format_number(r.k_behind) << ','
       << format_number(r.look_ahead) << ',' << format_number(r.look_behind) << ','
       << format_number(r.steepness) << ',' << format_number(r.alpha) << ','
       << format_number(r.g_alpha) << ',' << format_number(r.g) << ','
       << format_number(r.mu_star) << ',' << format_number(r.t_star) << ','
       << format_number(r.m0) << ',' << r.verdict << ',' << r.outcome << ','
       << format_number(r.t_detect) << ',' << sanitize(r.error) << '\n';
  }
}

int cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const auto started = utc_now();
  const auto dir = resolve_out_dir(cfg, opts);
  const auto rows = run_sweep(cfg, opts);
  std::ostringstream body;
  write_sweep_csv(body, rows);
  write_file(dir / "sweep.csv", body.str());
  write_manifest(dir, "sweep", cfg, started, {"sweep.csv"});
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); });
  log << "sweep: " << rows.size() << " row(s), " << failed << " with errors\n";
  return kOk;
}

}  // namespace lwr::cli
