#include "lwr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lwr/csv.hpp"
#include "lwr/errors.hpp"

namespace lwr {

namespace {

std::string cell(std::size_t i) { return "cell " + std::to_string(i); }

void expect_at_most(std::vector<BoundViolation>& out, const char* name, std::size_t step,
                    double measured, double permitted, double tol, const std::string& context) {
  if (measured > permitted + tol) out.push_back({name, step, measured, permitted, context});
}

void expect_at_least(std::vector<BoundViolation>& out, const char* name, std::size_t step,
                     double measured, double permitted, double tol, const std::string& context) {
  if (measured < permitted - tol) out.push_back({name, step, measured, permitted, context});
}

// max over [0,1] of u (1-u)^gamma, attained at u = 1/(1+gamma).
double diagram_peak(double gamma) {
  return std::pow(gamma, gamma) / std::pow(1.0 + gamma, 1.0 + gamma);
}

// Roots of a x^2 + b x + c, computing the larger-magnitude root first.
QuadraticRoots stable_roots(double a, double b, double c) {
  if (a == 0.0) throw DomainError("degenerate quadratic: F_11 = 0");
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc > -1e-12 * (b * b + std::abs(4.0 * a * c))) {
      disc = 0.0;
    } else {
      throw DomainError("negative discriminant");
    }
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, 0.0};
  const double r1 = q / a;
  const double r2 = c / q;
  return {std::min(r1, r2), std::max(r1, r2)};
}

}  // namespace

double static_tolerance(double dx) { return 10.0 * dx * dx; }

std::vector<BoundViolation> check_static_bounds(const GridState& state, const ModelParams& p,
                                                std::size_t step) {
  const auto fields = nonlocal_fields(state, p);
  const std::size_t n = state.size();
  const double tol = static_tolerance(state.dx());
  const double flux_max = diagram_peak(p.gamma) * std::exp(p.k_behind);
  const double sa = p.k_ahead / p.look_ahead;
  const double sb = p.k_behind / p.look_behind;

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = detail::diagram(state[i], p.gamma) * std::exp(-fields.ubar[i] + fields.utilde[i]);
  const PeriodicProfile flux_profile(f, state.dx());

  std::vector<BoundViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ctx = cell(i);
    expect_at_least(out, "ubar_range", step, fields.ubar[i], 0.0, tol, ctx);
    expect_at_most(out, "ubar_range", step, fields.ubar[i], p.k_ahead, tol, ctx);
    expect_at_least(out, "utilde_range", step, fields.utilde[i], 0.0, tol, ctx);
    expect_at_most(out, "utilde_range", step, fields.utilde[i], p.k_behind, tol, ctx);
    expect_at_most(out, "ubar_x_range", step, std::abs(fields.ubar_x[i]), sa, tol, ctx);
    expect_at_most(out, "utilde_x_range", step, std::abs(fields.utilde_x[i]), sb, tol, ctx);
    expect_at_least(out, "flux_range", step, f[i], 0.0, tol, ctx);
    expect_at_most(out, "flux_range", step, f[i], flux_max, tol, ctx);

    // Window averages move by the flux difference across the window.
    const double x = state.cell_center(i);
    const double ubar_t = -sa * (flux_profile.value_at(x + p.look_ahead) - f[i]);
    const double utilde_t = -sb * (f[i] - flux_profile.value_at(x - p.look_behind));
    expect_at_most(out, "ubar_t_range", step, std::abs(ubar_t), sa * flux_max, tol, ctx);
    expect_at_most(out, "utilde_t_range", step, std::abs(utilde_t), sb * flux_max, tol, ctx);
  }
  return out;
}

double f11dot_expansion(double u, double ubar, double utilde, double ubar_x, double utilde_x,
                        double ubar_t, double utilde_t) {
  const double e = std::exp(-ubar + utilde);
  // (4 - 6u) F_1 - 6 F_2 = e * (-4 (3u^3 - 6u^2 + 4u - 1))
  const double cubic = -4.0 * (((3.0 * u - 6.0) * u + 4.0) * u - 1.0);
  return e * ((ubar_x - utilde_x) * e * cubic + (ubar_t - utilde_t) * (4.0 - 6.0 * u));
}

std::vector<BoundViolation> check_f11dot(const GridState& before, const GridState& after,
                                         const ModelParams& p, std::size_t step,
                                         double calibration) {
  if (!p.quadratic_diagram()) throw UnsupportedConfiguration("check_f11dot requires gamma = 2");
  if (before.size() != after.size()) throw std::invalid_argument("state sizes differ");
  const double dt = after.time() - before.time();
  if (!(dt > 0.0)) throw std::invalid_argument("states must be strictly ordered in time");

  const std::size_t n = before.size();
  const double dx = before.dx();
  auto coefficients = [&](const GridState& s) {
    const auto fields = nonlocal_fields(s, p);
    std::vector<double> f1(n), f11(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = flux_derivatives(s[i], fields.ubar[i], fields.utilde[i]);
      f1[i] = d.f1;
      f11[i] = d.f11;
    }
    return std::pair{f1, f11};
  };
  const auto [f1_a, f11_a] = coefficients(before);
  const auto [f1_b, f11_b] = coefficients(after);
  const auto dx_a = central_slopes(f11_a, dx);
  const auto dx_b = central_slopes(f11_b, dx);

  const double permitted = alpha_bound(p);
  const double tol = calibration * (dt + dx * dx);
  std::vector<BoundViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double transport = 0.5 * (f1_a[i] * dx_a[i] + f1_b[i] * dx_b[i]);
    const double rate = (f11_b[i] - f11_a[i]) / dt + transport;
    expect_at_most(out, "f11dot_range", step, std::abs(rate), permitted, tol, cell(i));
  }
  return out;
}

std::vector<BoundViolation> check_N_floor(const SimulationTrace& trace,
                                          const ThresholdReport& report) {
  if (!report.certified()) throw InapplicableCheck("N floor check needs a certified report");
  const double tol = 10.0 * trace.dx * std::max(1.0, std::abs(report.N0_tilde));
  std::vector<BoundViolation> out;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (r.t > report.t_star) continue;
    expect_at_least(out, "N_floor", k, r.min_slope, report.N0_tilde, tol,
                    "eta " + std::to_string(r.eta_idx));
  }
  return out;
}

std::vector<BoundViolation> check_mu_floor(const SimulationTrace& trace,
                                           const ThresholdReport& report) {
  if (!report.certified()) throw InapplicableCheck("mu floor check needs a certified report");
  const double tol = 10.0 * trace.dx;
  std::vector<BoundViolation> out;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (r.t > report.t_star) continue;
    expect_at_least(out, "mu_floor", k, -r.f11_xi, report.mu_star, tol,
                    "xi " + std::to_string(r.xi_idx));
    expect_at_least(out, "mu_floor", k, -r.f11_eta, report.mu_star, tol,
                    "eta " + std::to_string(r.eta_idx));
  }
  return out;
}

QuadraticRoots n_roots(const FluxDerivatives& d, double v, double w) {
  const double b = 2.0 * (d.f12 * v + d.f13 * w);
  const double c = 2.0 * d.f23 * v * w + d.f22 * v * v + d.f33 * w * w;
  return stable_roots(d.f11, b, c);
}

QuadraticRoots m_roots(const FluxDerivatives& d, double v, double w, double n0_tilde) {
  const double linear = d.f2 - d.f3 - 2.0 * d.f12 * v - 2.0 * d.f13 * w;
  const double c = 2.0 * d.f23 * v * w + d.f22 * v * v + d.f33 * w * w + (d.f2 - d.f3) * n0_tilde;
  return stable_roots(d.f11, -linear, c);
}

void write_violations_csv(std::ostream& os, std::span<const BoundViolation> violations) {
  os << kViolationHeader << '\n';
  for (const auto& v : violations) {
    os << v.bound_name << ',' << v.step << ',' << csv::format_number(v.measured) << ','
       << csv::format_number(v.permitted) << ',' << v.context << '\n';
  }
}

}  // namespace lwr
