#include "lwr/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lwr/errors.hpp"
#include "lwr/solver.hpp"

namespace lwr {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_quadratic(const ModelParams& p, const char* what) {
  if (!p.quadratic_diagram())
    throw UnsupportedConfiguration(std::string(what) + " requires gamma = 2");
}

void require_feasible(double mu, double l_min) {
  if (!(mu > 0.0) || !(mu < l_min)) {
    std::ostringstream os;
    os << "mu=" << mu << " outside (0, min L = " << l_min << ")";
    throw InfeasibleCertificate(os.str());
  }
}

double root_bound(double mu, double n0t) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  return kE / mu * (2.0 + std::sqrt(4.0 + 16.0 / 27.0 * (4.0 - 2.0 * n0t)));
}

}  // namespace

const char* to_string(LVariant v) { return v == LVariant::proof ? "proof" : "intro"; }

LVariant parse_l_variant(const std::string& s) {
  if (s == "proof") return LVariant::proof;
  if (s == "intro") return LVariant::intro;
  throw std::invalid_argument("unknown L variant '" + s + "' (expected proof or intro)");
}

std::vector<double> initial_L(const GridState& u0, const ModelParams& p, LVariant variant) {
  require_quadratic(p, "initial_L");
  const auto ubar = nonlocal_ahead(u0, p);
  const auto utilde = variant == LVariant::proof ? nonlocal_behind(u0, p) : std::vector<double>();
  std::vector<double> out(u0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double exponent = variant == LVariant::proof ? -ubar[i] + utilde[i] : -ubar[i];
    out[i] = (4.0 - 6.0 * u0[i]) * std::exp(exponent);
  }
  return out;
}

double alpha_bound(const ModelParams& p) {
  require_quadratic(p, "alpha_bound");
  return std::exp(2.0 * p.k_behind) * (124.0 / 27.0) *
         (p.k_ahead / p.look_ahead + p.k_behind / p.look_behind);
}

double t_star(double l_xi, double l_eta, double mu, double alpha) {
  const double l_min = std::min(l_xi, l_eta);
  require_feasible(mu, l_min);
  if (!(alpha > 0.0)) throw InfeasibleCertificate("alpha must be positive");
  return (l_min - mu) / alpha;
}

double n0_tilde(double mu, double n0) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  return std::min(-4.0 * kE / mu, n0);
}

double lambda_fn(double mu, double m) { return root_bound(mu, n0_tilde(mu, m)); }

double r_m(double mu, double n0t) { return root_bound(mu, n0t); }

double threshold_G(double mu, double lambda, double l_xi, double l_eta, double alpha) {
  const double l_min = std::min(l_xi, l_eta);
  require_feasible(mu, l_min);
  if (!(lambda > 0.0)) throw InfeasibleCertificate("lambda must be positive");
  if (!(alpha > 0.0)) throw InfeasibleCertificate("alpha must be positive");
  return lambda / (1.0 - std::exp(-mu * lambda * (l_min - mu) / alpha));
}

MuSearch minimize_G(double l_xi, double l_eta, double n0, double alpha, std::size_t grid) {
  const double l_min = std::min(l_xi, l_eta);
  if (!(l_min > 0.0)) throw InfeasibleCertificate("min L must be positive for a mu search");
  if (grid < 1) throw std::invalid_argument("mu grid needs at least one point");
  MuSearch best{kNaN, std::numeric_limits<double>::infinity()};
  const double step = l_min / static_cast<double>(grid + 1);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double mu = step * static_cast<double>(k);
    if (!(mu < l_min)) break;
    const double g = threshold_G(mu, lambda_fn(mu, n0), l_xi, l_eta, alpha);
    if (g < best.g) best = {mu, g};
  }
  if (!std::isfinite(best.g)) throw InfeasibleCertificate("no feasible mu on the grid");
  return best;
}

ThresholdReport certify(const GridState& u0, const ModelParams& p, std::size_t mu_grid_size,
                        LVariant variant) {
  require_quadratic(p, "certify");
  if (mu_grid_size < 1) throw std::invalid_argument("mu grid needs at least one point");

  ThresholdReport r;
  r.variant = variant;
  r.mu_grid_size = mu_grid_size;
  r.experimental = !p.unit_interaction();
  r.alpha = alpha_bound(p);
  r.mu_star = r.t_star = r.N0_tilde = r.R_M = r.lambda = r.kappa = r.G = kNaN;

  const auto ext = monitor_extrema(u0);
  r.xi0_idx = ext.argmax;
  r.eta0_idx = ext.argmin;
  r.M0 = ext.max_slope;
  r.N0 = ext.min_slope;

  const auto L = initial_L(u0, p, variant);
  r.L_xi = L[r.xi0_idx];
  r.L_eta = L[r.eta0_idx];

  if (r.M0 == 0.0 && r.N0 == 0.0) {
    r.reason = "no slope";
    return r;
  }
  const double l_min = std::min(r.L_xi, r.L_eta);
  if (!(l_min > 0.0)) {
    r.reason = "hypothesis failure: L not positive at xi(0) or eta(0)";
    return r;
  }

  const auto best = minimize_G(r.L_xi, r.L_eta, r.N0, r.alpha, mu_grid_size);
  r.mu_star = best.mu;
  r.t_star = t_star(r.L_xi, r.L_eta, r.mu_star, r.alpha);
  r.N0_tilde = n0_tilde(r.mu_star, r.N0);
  r.R_M = r_m(r.mu_star, r.N0_tilde);
  r.lambda = lambda_fn(r.mu_star, r.N0);
  r.kappa = r.mu_star * r.R_M * r.t_star;
  r.G = r.R_M * std::exp(r.kappa) / std::expm1(r.kappa);

  if (r.M0 >= r.G) {
    r.verdict = Verdict::certified;
    r.reason = "M(0) >= G(mu*)";
  } else {
    r.reason = "below threshold: M(0) < G(mu*)";
  }
  return r;
}

void to_json(nlohmann::json& j, const ThresholdReport& r) {
  // NaN has no JSON representation; absent quantities serialize as null.
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
  j = nlohmann::json{
      {"xi0_idx", r.xi0_idx},
      {"eta0_idx", r.eta0_idx},
      {"M0", num(r.M0)},
      {"N0", num(r.N0)},
      {"L_xi", num(r.L_xi)},
      {"L_eta", num(r.L_eta)},
      {"mu_star", num(r.mu_star)},
      {"alpha", num(r.alpha)},
      {"t_star", num(r.t_star)},
      {"N0_tilde", num(r.N0_tilde)},
      {"R_M", num(r.R_M)},
      {"lambda", num(r.lambda)},
      {"kappa", num(r.kappa)},
      {"G", num(r.G)},
      {"mu_grid_size", r.mu_grid_size},
      {"verdict", r.certified() ? "certified" : "not-certified"},
      {"variant", to_string(r.variant)},
      {"experimental", r.experimental},
      {"reason", r.reason},
  };
}

void from_json(const nlohmann::json& j, ThresholdReport& r) {
  auto num = [&](const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? kNaN : v.get<double>();
  };
  r.xi0_idx = j.at("xi0_idx").get<std::size_t>();
  r.eta0_idx = j.at("eta0_idx").get<std::size_t>();
  r.M0 = num("M0");
  r.N0 = num("N0");
  r.L_xi = num("L_xi");
  r.L_eta = num("L_eta");
  r.mu_star = num("mu_star");
  r.alpha = num("alpha");
  r.t_star = num("t_star");
  r.N0_tilde = num("N0_tilde");
  r.R_M = num("R_M");
  r.lambda = num("lambda");
  r.kappa = num("kappa");
  r.G = num("G");
  r.mu_grid_size = j.at("mu_grid_size").get<std::size_t>();
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict == "certified")
    r.verdict = Verdict::certified;
  else if (verdict == "not-certified")
    r.verdict = Verdict::not_certified;
  else
    throw std::invalid_argument("unknown verdict '" + verdict + "'");
  r.variant = parse_l_variant(j.at("variant").get<std::string>());
  r.experimental = j.at("experimental").get<bool>();
  r.reason = j.at("reason").get<std::string>();
}

}  // namespace lwr
