#include "lwr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lwr/csv.hpp"
#include "lwr/errors.hpp"

namespace lwr {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return a > 0.0 ? std::min(a, b) : std::max(a, b);
}

// exp(-ubar + utilde) at every cell center, from one shared antiderivative.
std::vector<double> arrhenius_factor(std::span<const double> u, double dx, const ModelParams& p) {
  const PeriodicProfile profile(u, dx);
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    const double ubar = p.k_ahead * profile.average(x, p.look_ahead);
    const double utilde = p.k_behind * profile.average(x - p.look_behind, p.look_behind);
    v[i] = std::exp(-ubar + utilde);
  }
  return v;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (reconstruction == Reconstruction::muscl && cfl > 0.5)
    throw std::invalid_argument("muscl reconstruction requires cfl <= 0.5");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
  if (!(blowup_slope_factor > 1.0) || !std::isfinite(blowup_slope_factor))
    throw std::invalid_argument("blowup_slope_factor must be > 1");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (growth_window < 1) throw std::invalid_argument("growth_window must be >= 1");
}

std::vector<double> central_slopes(std::span<const double> u, double dx) {
  const std::size_t n = u.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = u[(i + 1) % n];
    const double left = u[(i + n - 1) % n];
    d[i] = (right - left) / (2.0 * dx);
  }
  return d;
}

SlopeExtrema slope_extrema(std::span<const double> slopes) {
  SlopeExtrema e;
  e.max_slope = slopes[0];
  e.min_slope = slopes[0];
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    if (slopes[i] > e.max_slope) {
      e.max_slope = slopes[i];
      e.argmax = i;
    }
    if (slopes[i] < e.min_slope) {
      e.min_slope = slopes[i];
      e.argmin = i;
    }
  }
  return e;
}

SlopeExtrema monitor_extrema(const GridState& state) {
  return slope_extrema(central_slopes(state.values(), state.dx()));
}

Stepper::Stepper(ModelParams params, SolverConfig config)
    : params_(std::move(params)), config_(std::move(config)) {
  params_.validate();
  config_.validate();
}

double Stepper::stable_dt(const GridState& state) const {
  const auto v = arrhenius_factor(state.values(), state.dx(), params_);
  const double vmax = *std::max_element(v.begin(), v.end());
  // sup over u in [0,1] of |g'(u)|, g(u)/u and g(u)/(1-u) is 1 for every gamma >= 1.
  return config_.cfl * state.dx() / (vmax * (1.0 + kWaveSpeedMargin));
}

std::vector<double> Stepper::rate(std::span<const double> u, double /*t*/) const {
  const std::size_t n = u.size();
  const double dx = params_.dx();
  const auto v = arrhenius_factor(u, dx, params_);

  std::vector<double> half_slope(n, 0.0);
  if (config_.reconstruction == Reconstruction::muscl) {
    for (std::size_t i = 0; i < n; ++i) {
      const double back = u[i] - u[(i + n - 1) % n];
      const double fwd = u[(i + 1) % n] - u[i];
      half_slope[i] = 0.5 * minmod(back, fwd);
    }
  }

  // Numerical flux through the right face of cell i.
  std::vector<double> face(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = (i + 1) % n;
    const double left = u[i] + half_slope[i];
    const double right = u[r] - half_slope[r];
    const double speed = std::max(v[i], v[r]);
    face[i] = 0.5 * (detail::diagram(left, params_.gamma) * v[i] +
                     detail::diagram(right, params_.gamma) * v[r]) -
              0.5 * speed * (right - left);
  }

  std::vector<double> du(n);
  for (std::size_t i = 0; i < n; ++i) du[i] = -(face[i] - face[(i + n - 1) % n]) / dx;
  return du;
}

void Stepper::enforce_bounds(std::vector<double>& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    double& x = u[i];
    if (!std::isfinite(x)) throw SolverAbort(steps_, "non-finite density at cell " + std::to_string(i));
    if (x < 0.0 || x > 1.0) {
      const double excess = x < 0.0 ? -x : x - 1.0;
      if (excess > kClipTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "maximum principle violated: u=" << x << " at cell " << i;
        throw SolverAbort(steps_, os.str());
      }
      x = std::clamp(x, 0.0, 1.0);
      ++clipped_;
    }
  }
}

GridState Stepper::advance(const GridState& state, double max_dt) {
  if (state.size() != params_.n_cells)
    throw std::invalid_argument("state size does not match ModelParams::n_cells");
  const double dt = std::min(stable_dt(state), max_dt);
  if (!(dt > 0.0)) throw SolverAbort(steps_, "non-positive time step");

  const auto u0 = state.values();
  const std::size_t n = u0.size();

  const auto k0 = rate(u0, state.time());
  std::vector<double> u1(n);
  for (std::size_t i = 0; i < n; ++i) u1[i] = u0[i] + dt * k0[i];
  enforce_bounds(u1);

  const auto k1 = rate(u1, state.time() + dt);
  std::vector<double> u2(n);
  for (std::size_t i = 0; i < n; ++i) u2[i] = 0.5 * (u0[i] + u1[i] + dt * k1[i]);
  enforce_bounds(u2);

  ++steps_;
  return GridState(std::move(u2), state.dx(), state.time() + dt);
}

GridState step(const GridState& state, const ModelParams& p, const SolverConfig& cfg) {
  Stepper stepper(p, cfg);
  return stepper.advance(state, std::numeric_limits<double>::infinity());
}

TraceRecord make_record(const GridState& state, const ModelParams& p, std::size_t step) {
  TraceRecord r;
  r.step = step;
  r.t = state.time();
  const auto ext = monitor_extrema(state);
  r.max_slope = ext.max_slope;
  r.min_slope = ext.min_slope;
  r.xi_idx = ext.argmax;
  r.eta_idx = ext.argmin;
  r.mass = state.mass();
  const auto [lo, hi] = std::minmax_element(state.values().begin(), state.values().end());
  r.umin = *lo;
  r.umax = *hi;
  if (p.quadratic_diagram()) {
    const PeriodicProfile profile(state.values(), state.dx());
    auto f11_at = [&](std::size_t i) {
      const double x = state.cell_center(i);
      const double ubar = p.k_ahead * profile.average(x, p.look_ahead);
      const double utilde = p.k_behind * profile.average(x - p.look_behind, p.look_behind);
      return flux_derivatives(state[i], ubar, utilde).f11;
    };
    r.f11_xi = f11_at(r.xi_idx);
    r.f11_eta = f11_at(r.eta_idx);
  } else {
    r.f11_xi = std::numeric_limits<double>::quiet_NaN();
    r.f11_eta = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::completed:
      return "completed";
    case Outcome::blowup_detected:
      return "blowup_detected";
    case Outcome::aborted:
      return "aborted";
  }
  return "unknown";
}

SimulationResult simulate(const GridState& u0, const ModelParams& p, const SolverConfig& cfg,
                          const StateObserver& observer) {
  Stepper stepper(p, cfg);
  if (u0.size() != p.n_cells)
    throw std::invalid_argument("initial state size does not match ModelParams::n_cells");

  SimulationTrace trace;
  trace.dx = u0.dx();
  trace.records.push_back(make_record(u0, p, 0));
  if (observer) observer(u0, 0);

  const double detect_level = cfg.blowup_slope_factor * std::max(trace.records[0].max_slope, 1.0);
  const double t_stop_slack = 1e-12 * std::max(1.0, cfg.t_end);

  GridState state = u0;
  Outcome outcome = Outcome::completed;
  std::optional<double> t_detect;
  std::string diagnostic;
  std::size_t step = 0;

  try {
    while (cfg.t_end - state.time() > t_stop_slack) {
      if (stepper.stable_dt(state) < kMinTimeStep) {
        outcome = Outcome::blowup_detected;
        t_detect = state.time();
        diagnostic = "time step underflow";
        break;
      }
      state = stepper.advance(state, cfg.t_end - state.time());
      ++step;
      if (observer) observer(state, step);

      const bool last = cfg.t_end - state.time() <= t_stop_slack;
      if (step % cfg.record_every != 0 && !last) continue;

      trace.records.push_back(make_record(state, p, step));
      const auto& recs = trace.records;
      const auto& now = recs.back();
      if (recs.size() > cfg.growth_window && now.max_slope >= detect_level &&
          now.max_slope > recs[recs.size() - 1 - cfg.growth_window].max_slope) {
        outcome = Outcome::blowup_detected;
        t_detect = now.t;
        std::ostringstream os;
        os << "M=" << now.max_slope << " reached " << cfg.blowup_slope_factor
           << " x max(M(0),1) and grew over the last " << cfg.growth_window << " records";
        diagnostic = os.str();
        break;
      }
    }
  } catch (const SolverAbort& e) {
    outcome = Outcome::aborted;
    diagnostic = e.what();
  }

  if (trace.records.back().step != step) trace.records.push_back(make_record(state, p, step));

  return SimulationResult{std::move(trace), outcome,  t_detect, std::move(diagnostic),
                          std::move(state), step,     stepper.clipped_values()};
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  using csv::format_number;
  os << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    os << format_number(r.t) << ',' << format_number(r.max_slope) << ','
       << format_number(r.min_slope) << ',' << r.xi_idx << ',' << r.eta_idx << ','
       << format_number(r.mass) << ',' << format_number(r.umin) << ',' << format_number(r.umax)
       << ',' << format_number(r.f11_xi) << ',' << format_number(r.f11_eta) << '\n';
  }
}

SimulationTrace read_trace_csv(std::istream& is, double dx) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw std::invalid_argument("unexpected trace header: " + line);

  SimulationTrace trace;
  trace.dx = dx;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split_row(line);
    if (f.size() != 10)
      throw std::invalid_argument("trace row " + std::to_string(row + 1) + " has " +
                                  std::to_string(f.size()) + " fields");
    TraceRecord r;
    r.step = row;
    r.t = csv::parse_number(f[0]);
    r.max_slope = csv::parse_number(f[1]);
    r.min_slope = csv::parse_number(f[2]);
    r.xi_idx = static_cast<std::size_t>(csv::parse_number(f[3]));
    r.eta_idx = static_cast<std::size_t>(csv::parse_number(f[4]));
    r.mass = csv::parse_number(f[5]);
    r.umin = csv::parse_number(f[6]);
    r.umax = csv::parse_number(f[7]);
    r.f11_xi = csv::parse_nullable(f[8]);
    r.f11_eta = csv::parse_nullable(f[9]);
    trace.records.push_back(r);
    ++row;
  }
  return trace;
}

void write_snapshot_csv(std::ostream& os, const GridState& state) {
  os << "x,u\n";
  for (std::size_t i = 0; i < state.size(); ++i)
    os << csv::format_number(state.cell_center(i)) << ',' << csv::format_number(state[i]) << '\n';
}

}  // namespace lwr
