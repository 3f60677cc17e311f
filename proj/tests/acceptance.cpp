// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lwr/cli/commands.hpp"
#include "lwr/cli/config.hpp"
#include "lwr/csv.hpp"
#include "lwr/riccati.hpp"
#include "lwr/solver.hpp"
#include "lwr/threshold.hpp"
#include "lwr/verify.hpp"
#include "oracles.hpp"

using namespace lwr;
using oracle::e;

namespace {

const double kAlphaUnit = 248.0 * e * e / 27.0;

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check o = body();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < budget_s, "runtime " + fmt(secs) + " s over budget " + fmt(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s  %s [%.2f s / %.0f s]%s%s\n", id, o.pass ? "PASS" : "FAIL", title,
              secs, budget_s, o.detail.empty() ? "" : " :: ", o.detail.c_str());
  std::fflush(stdout);
}

// 1. flux range, derivative table vs finite differences, table identities
Check flux_table() {
  Check o;
  oracle::Rng rng(1);
  const double fmax = 4.0 * e / 27.0;
  double worst_fd = 0.0, worst_id = 0.0;
  bool in_range = true;
  for (int k = 0; k < 100000; ++k) {
    const double u = rng(0, 1), a = rng(0, 1), b = rng(0, 1);
    const double F = flux(u, a, b, 2.0);
    in_range = in_range && F >= 0.0 && F <= fmax;
    const auto d = flux_derivatives(u, a, b);
    const auto fd = oracle::finite_difference_partials(u, a, b);
    const double got[] = {d.f1, d.f2, d.f3, d.f11, d.f22, d.f33, d.f12, d.f13, d.f23};
    const double want[] = {fd.f1, fd.f2, fd.f3, fd.f11, fd.f22, fd.f33, fd.f12, fd.f13, fd.f23};
    for (int j = 0; j < 9; ++j)
      worst_fd = std::max(worst_fd, std::abs(got[j] - want[j]) / std::max(1.0, std::abs(want[j])));
    worst_id = std::max({worst_id, std::abs(d.f2 + d.f3), std::abs(d.f22 - d.f33), std::abs(d.f22 + d.f23)});
  }
  o.require(in_range, "flux left [0, 4e/27]");
  o.require(worst_fd <= 1e-6, "derivative mismatch " + fmt(worst_fd));
  o.require(worst_id <= 1e-12, "identity residual " + fmt(worst_id));
  o.note("max rel FD error " + fmt(worst_fd) + " (tol 1e-6), identity residual " + fmt(worst_id) +
         " (tol 1e-12)");
  return o;
}

// 2. F11 material derivative bound, analytic and along a bump run
Check f11dot_bound() {
  Check o;
  oracle::Rng rng(2);
  const double ft = 4.0 * e / 27.0;
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double v = f11dot_expansion(rng(0, 1), rng(0, 1), rng(0, 1), rng(-1, 1), rng(-1, 1),
                                      rng(-ft, ft), rng(-ft, ft));
    worst = std::max(worst, std::abs(v));
  }
  o.require(worst <= kAlphaUnit, "expansion reached " + fmt(worst));

  ModelParams p;
  p.n_cells = 512;
  const auto u0 = cli::build_initial(cli::GaussianPreset{0.2, 0.2, 4.0, 0.5}, p);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  std::optional<GridState> prev;
  std::size_t violations = 0, pairs = 0;
  double worst_run = 0.0;
  const auto res = simulate(u0, p, cfg, [&](const GridState& s, std::size_t step) {
    if (prev) {
      const auto v = check_f11dot(*prev, s, p, step);
      violations += v.size();
      for (const auto& b : v) worst_run = std::max(worst_run, b.measured);
      ++pairs;
    }
    prev = s;
  });
  o.require(violations == 0, std::to_string(violations) + " discrete violations, worst " + fmt(worst_run));
  o.note("max |expansion| " + fmt(worst) + " <= alpha " + fmt(kAlphaUnit) + "; bump run " +
         std::to_string(pairs) + " steps to t=" + fmt(res.final_state.time()) + ", C=" +
         fmt(kF11DotCalibration));
  return o;
}

// 3. root structure and the lattice maximum of P
Check root_structure() {
  Check o;
  oracle::Rng rng(3);
  std::size_t bad_sign = 0, bad_n = 0, bad_m = 0, tested = 0;
  while (tested < 100000) {
    const double u = rng(0, 1), a = rng(0, 1), b = rng(0, 1), v = rng(-1, 1), w = rng(-1, 1);
    const auto d = flux_derivatives(u, a, b);
    if (!(-d.f11 > 0.0)) continue;
    const double mu = rng(0, 1) * -d.f11;
    if (!(mu > 0.0)) continue;
    const double n0t = n0_tilde(mu, rng(-100.0, 0.0));
    const auto N = n_roots(d, v, w);
    const auto M = m_roots(d, v, w, n0t);
    bad_sign += !(N.lower <= 0.0 && N.upper >= 0.0 && M.lower <= 0.0 && M.upper >= 0.0);
    bad_n += !(N.lower >= -4.0 * e / mu * (1.0 + 1e-12));
    bad_m += !(M.upper <= r_m(mu, n0t) * (1.0 + 1e-12));
    ++tested;
  }
  o.require(bad_sign == 0, std::to_string(bad_sign) + " sign failures");
  o.require(bad_n == 0, std::to_string(bad_n) + " N1 floor failures");
  o.require(bad_m == 0, std::to_string(bad_m) + " M2 ceiling failures");

  double pmax = -INFINITY;
  const int n = 200;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        pmax = std::max(pmax, oracle::P(double(i) / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n));
  o.require(std::abs(pmax - 4.0) <= 1e-3, "lattice max P " + fmt(pmax));
  o.note("100000 inputs; lattice max P " + fmt(pmax) + " (tol 1e-3)");
  return o;
}

// 4. Riccati closed form vs adaptive integration; horizon identity
Check riccati_oracle() {
  Check o;
  double worst = 0.0, worst_id = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double mu = 0.2 + 0.5 * i;
    for (int j = 0; j < 10; ++j) {
      const double R = 0.5 + 5.5 * j;
      for (int k = 1; k <= 10; ++k) {
        const double q = 1.0 + 0.9 * k;
        const double tb = *blowup_time({mu, R, q * R});
        const double te = oracle::escape_time(mu, R, q * R, 1e6);
        worst = std::max(worst, std::abs(te - tb) / tb);
        const double kappa = 0.5 * k;  // up to 5; see the conditioning note in the unit tests
        const double ts = kappa / (mu * R);
        const double b0 = R * std::exp(kappa) / std::expm1(kappa);
        worst_id = std::max(worst_id, std::abs(*blowup_time({mu, R, b0}) - ts) / ts);
      }
    }
  }
  o.require(worst <= 0.01, "escape time mismatch " + fmt(worst));
  o.require(worst_id <= 1e-12, "horizon identity residual " + fmt(worst_id));
  o.note("max rel escape-time error " + fmt(worst) + " (tol 1e-2), identity " + fmt(worst_id) +
         " (tol 1e-12)");
  return o;
}

// 5. solver sanity
Check solver_sanity() {
  Check o;
  double drift = 0.0;
  for (double c : {0.0, 0.2, 0.5, 2.0 / 3.0, 1.0}) {
    ModelParams p;
    p.n_cells = 256;
    Stepper st(p, SolverConfig{});
    GridState s(std::vector<double>(p.n_cells, c), p.dx());
    for (int k = 0; k < 500; ++k) s = st.advance(s, 1.0);
    for (double v : s.values()) drift = std::max(drift, std::abs(v - c));
  }
  o.require(drift <= 1e-13, "constant drift " + fmt(drift));

  const std::vector<cli::InitialCondition> presets{
      cli::ConstantPreset{0.45}, cli::GaussianPreset{0.1, 0.8, 3.0, 0.3}, cli::TanhFrontPreset{},
      cli::SinePreset{0.5, 0.49, 0.3, 3}};
  double lo = 0.0, hi = 1.0, mass_err = 0.0;
  bool signs = true;
  for (std::size_t n : {256u, 512u}) {
    for (const auto& ic : presets) {
      ModelParams p;
      p.n_cells = n;
      Stepper st(p, SolverConfig{});
      GridState s = cli::build_initial(ic, p);
      const double m0 = s.mass();
      for (int k = 0; k < 1000; ++k) {
        s = st.advance(s, 1.0);
        const auto r = make_record(s, p, k);
        lo = std::min(lo, r.umin);
        hi = std::max(hi, r.umax);
        mass_err = std::max(mass_err, std::abs(r.mass - m0) / m0);
        signs = signs && r.max_slope >= 0.0 && r.min_slope <= 0.0;
      }
    }
  }
  o.require(lo >= -1e-12 && hi <= 1.0 + 1e-12, "range [" + fmt(lo) + ", " + fmt(hi) + "]");
  o.require(mass_err <= 1e-10, "mass drift " + fmt(mass_err));
  o.require(signs, "slope sign violated");

  std::vector<GridState> sol;
  for (std::size_t n : {128u, 256u, 512u, 1024u}) {
    ModelParams p;
    p.n_cells = n;
    SolverConfig cfg;
    cfg.t_end = 0.5;
    cfg.blowup_slope_factor = 1e9;
    sol.push_back(simulate(cli::build_initial(cli::GaussianPreset{0.2, 0.15, 4.0, 0.6}, p), p, cfg).final_state);
  }
  auto l1 = [](const GridState& c, const GridState& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += std::abs(c[i] - 0.5 * (f[2 * i] + f[2 * i + 1]));
    return s * c.dx();
  };
  const double r1 = std::log2(l1(sol[0], sol[1]) / l1(sol[1], sol[2]));
  const double r2 = std::log2(l1(sol[1], sol[2]) / l1(sol[2], sol[3]));
  o.require(std::min(r1, r2) >= 0.9, "self-convergence order " + fmt(std::min(r1, r2)));
  o.note("constant drift " + fmt(drift) + ", range [" + fmt(lo) + ", " + fmt(hi) + "], mass " +
         fmt(mass_err) + ", observed orders " + fmt(r1) + ", " + fmt(r2) + " (min 0.9)");
  return o;
}

// 6. certified datum, then detection at three resolutions
Check shock_formation() {
  Check o;
  ModelParams fine;
  fine.domain_length = 4.2;
  fine.n_cells = 2048;
  cli::TanhFrontPreset front;
  front.shoulder_height = 0.3;

  std::optional<ThresholdReport> report;
  for (double s = 50.0; s < 5000.0; s *= 1.05) {
    front.steepness = s;
    const auto r = certify(cli::build_initial(front, fine), fine);
    if (r.certified()) {
      report = r;
      break;
    }
  }
  if (!report) {
    o.require(false, "no certified steepness found");
    return o;
  }
  o.note("certified at steepness " + fmt(front.steepness) + " on n=2048: M0 " + fmt(report->M0) +
         " >= G " + fmt(report->G) + ", t* " + fmt(report->t_star));

  double prev_max = 0.0;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    ModelParams p = fine;
    p.n_cells = n;
    SolverConfig cfg;
    cfg.t_end = report->t_star;
    const auto res = simulate(cli::build_initial(front, p), p, cfg);
    double mmax = 0.0;
    for (const auto& r : res.trace.records) mmax = std::max(mmax, r.max_slope);
    const bool detected = res.outcome == Outcome::blowup_detected;
    const std::string tag = "n=" + std::to_string(n);
    o.require(detected, tag + " (a) no detection by t* (M0 " + fmt(res.trace.records.front().max_slope) +
                            ", max M " + fmt(mmax) + ")");
    o.require(detected && res.t_detect && *res.t_detect < report->t_star, tag + " (b) not before t*");
    if (detected) o.note(tag + " detected at t=" + fmt(*res.t_detect) + ", max M " + fmt(mmax));
    if (prev_max > 0.0) {
      o.require(mmax >= 1.5 * prev_max, tag + " (c) slope growth " + fmt(mmax / prev_max));
      o.note(tag + " slope growth x" + fmt(mmax / prev_max));
    }
    prev_max = mmax;
  }
  return o;
}

// 7. monotonicity of the threshold through alpha, from sweep.csv
Check sweep_monotonicity() {
  Check o;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "lwrlab_acceptance_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);

  ModelParams unit;
  o.require(std::abs(alpha_bound(unit) - kAlphaUnit) <= 1e-12 * kAlphaUnit, "unit alpha mismatch");

  struct Axis {
    const char* key;
    std::vector<double> values;
    bool increasing;
  };
  const std::vector<Axis> axes{{"K_a", {0.5, 1.0, 1.5, 2.0}, true},
                               {"K_b", {0.5, 1.0, 2.0}, true},
                               {"gamma_a", {0.5, 1.0, 1.5}, false},
                               {"gamma_b", {0.5, 1.0, 1.5}, false}};
  for (const auto& axis : axes) {
    nlohmann::json doc = {
        {"model", {{"domain_length", 8.0}, {"n_cells", 2048}}},
        {"initial", {{"preset", "tanh_front"}, {"steepness", 230}, {"shoulder_height", 0.3}}},
        {"sweep", {{axis.key, axis.values}, {"simulate", false}}}};
    cli::CommandOptions opts;
    opts.out_dir = dir;
    std::ostringstream log;
    cli::cmd_sweep(cli::parse_config(doc), opts, log);
    std::ifstream in(dir / "sweep.csv");
    std::string line;
    std::getline(in, line);
    std::vector<double> g_alpha, g_raw;
    while (std::getline(in, line)) {
      const auto f = csv::split_row(line);
      g_alpha.push_back(csv::parse_nullable(f[6]));
      g_raw.push_back(csv::parse_nullable(f[7]));
      if (!f[14].empty()) o.require(false, std::string(axis.key) + " row error: " + std::string(f[14]));
    }
    bool mono = g_alpha.size() == axis.values.size(), raw_mono = mono;
    for (std::size_t i = 1; i < g_alpha.size(); ++i) {
      mono = mono && (axis.increasing ? g_alpha[i] > g_alpha[i - 1] : g_alpha[i] < g_alpha[i - 1]);
      raw_mono = raw_mono && (axis.increasing ? g_raw[i] > g_raw[i - 1] : g_raw[i] < g_raw[i - 1]);
    }
    o.require(mono, std::string("G not monotone in ") + axis.key);
    o.note(std::string(axis.key) + (mono ? " ok" : " bad") + " (full-datum G column " +
           (raw_mono ? "also monotone" : "not monotone") + ")");
  }
  return o;
}

}  // namespace

int main() {
  run(1, "flux range and derivative table", 5, flux_table);
  run(2, "F11 material derivative bound", 30, f11dot_bound);
  run(3, "quadratic root structure", 60, root_structure);
  run(4, "comparison ODE blow-up time", 10, riccati_oracle);
  run(5, "solver sanity", 120, solver_sanity);
  run(6, "shock formation end to end", 600, shock_formation);
  run(7, "threshold monotonicity through alpha", 60, sweep_monotonicity);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
