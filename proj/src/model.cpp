#include "lwr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lwr/errors.hpp"

namespace lwr {

namespace {

// Roundoff slack admitted by the argument checks; matches the solver's
// clipping tolerance.
constexpr double kSlack = 1e-12;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

[[noreturn]] void reject(const char* what, double u, double ubar, double utilde, double gamma) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (u=" << u << ", ubar=" << ubar << ", utilde=" << utilde << ", gamma=" << gamma
     << ")";
  throw DomainError(os.str());
}

void check_flux_args(double u, double ubar, double utilde, double gamma) {
  if (!std::isfinite(u) || !std::isfinite(ubar) || !std::isfinite(utilde) || !std::isfinite(gamma))
    reject("non-finite flux argument", u, ubar, utilde, gamma);
  if (u < -kSlack || u > 1.0 + kSlack) reject("density outside [0,1]", u, ubar, utilde, gamma);
  if (ubar < -kSlack || utilde < -kSlack)
    reject("negative window average", u, ubar, utilde, gamma);
  if (gamma < 1.0) reject("diagram exponent below 1", u, ubar, utilde, gamma);
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(gamma) || gamma < 1.0) throw std::invalid_argument("gamma must be >= 1");
  if (!positive_finite(k_ahead) || !positive_finite(k_behind))
    throw std::invalid_argument("interaction strengths K_a, K_b must be > 0");
  if (!positive_finite(look_ahead) || !positive_finite(look_behind))
    throw std::invalid_argument("look-ahead/behind distances gamma_a, gamma_b must be > 0");
  if (!positive_finite(domain_length))
    throw std::invalid_argument("domain_length must be > 0");
  if (!(domain_length > 2.0 * (look_ahead + look_behind)))
    throw std::invalid_argument("domain_length must exceed 2 (gamma_a + gamma_b)");
  if (n_cells < 16) throw std::invalid_argument("n_cells must be >= 16");
}

bool ModelParams::unit_interaction() const {
  return k_ahead == 1.0 && k_behind == 1.0 && look_ahead == 1.0 && look_behind == 1.0;
}

GridState::GridState(std::vector<double> u, double dx, double t) : u_(std::move(u)), dx_(dx), t_(t) {
  if (!std::isfinite(dx_) || dx_ <= 0.0) throw DomainError("cell width must be positive");
  if (!std::isfinite(t_)) throw DomainError("time stamp must be finite");
  if (u_.empty()) throw DomainError("empty density field");
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (!std::isfinite(u_[i]) || u_[i] < 0.0 || u_[i] > 1.0) {
      std::ostringstream os;
      os.precision(17);
      os << "density " << u_[i] << " at cell " << i << " outside [0,1]";
      throw DomainError(os.str());
    }
  }
}

double GridState::mass() const {
  double s = 0.0;
  for (double v : u_) s += v;
  return s * dx_;
}

PeriodicProfile::PeriodicProfile(std::span<const double> values, double dx)
    : values_(values.begin(), values.end()),
      cumulative_(values.size() + 1, 0.0),
      reference_(values.empty() ? 0.0 : values.front()),
      dx_(dx),
      period_(dx * static_cast<double>(values.size())) {
  const std::size_t n = values_.size();
  for (double& v : values_) v -= reference_;
  for (std::size_t j = 0; j < n; ++j) {
    const double next = values_[(j + 1) % n];
    cumulative_[j + 1] = cumulative_[j] + 0.5 * (values_[j] + next) * dx_;
  }
}

double PeriodicProfile::antiderivative(double x) const {
  const std::size_t n = values_.size();
  // Measured from the first cell center.
  const double y = x - 0.5 * dx_;
  const double wraps = std::floor(y / period_);
  const double r = y - wraps * period_;
  const std::size_t j = std::min(static_cast<std::size_t>(r / dx_), n - 1);
  const double s = r - static_cast<double>(j) * dx_;
  const double uj = values_[j];
  const double uj1 = values_[(j + 1) % n];
  return wraps * cumulative_[n] + cumulative_[j] + s * uj + 0.5 * s * s * (uj1 - uj) / dx_;
}

double PeriodicProfile::value_at(double x) const {
  const std::size_t n = values_.size();
  const double y = x - 0.5 * dx_;
  const double r = y - std::floor(y / period_) * period_;
  const std::size_t j = std::min(static_cast<std::size_t>(r / dx_), n - 1);
  const double s = (r - static_cast<double>(j) * dx_) / dx_;
  return reference_ + (values_[j] + s * (values_[(j + 1) % n] - values_[j]));
}

std::vector<double> nonlocal_ahead(const GridState& state, const ModelParams& p) {
  const PeriodicProfile profile(state.values(), state.dx());
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = state.cell_center(i);
    out[i] = p.k_ahead * profile.average(x, p.look_ahead);
  }
  return out;
}

std::vector<double> nonlocal_behind(const GridState& state, const ModelParams& p) {
  const PeriodicProfile profile(state.values(), state.dx());
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = state.cell_center(i);
    out[i] = p.k_behind * profile.average(x - p.look_behind, p.look_behind);
  }
  return out;
}

NonlocalFields nonlocal_fields(const GridState& state, const ModelParams& p) {
  const PeriodicProfile profile(state.values(), state.dx());
  const double sa = p.k_ahead / p.look_ahead;
  const double sb = p.k_behind / p.look_behind;
  const std::size_t n = state.size();
  NonlocalFields f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = state.cell_center(i);
    f.ubar[i] = p.k_ahead * profile.average(x, p.look_ahead);
    f.utilde[i] = p.k_behind * profile.average(x - p.look_behind, p.look_behind);
    f.ubar_x[i] = sa * (profile.value_at(x + p.look_ahead) - state[i]);
    f.utilde_x[i] = sb * (state[i] - profile.value_at(x - p.look_behind));
  }
  return f;
}

double flux(double u, double ubar, double utilde, double gamma) {
  check_flux_args(u, ubar, utilde, gamma);
  return detail::diagram(u, gamma) * std::exp(-ubar + utilde);
}

FluxDerivatives flux_derivatives(double u, double ubar, double utilde, double gamma) {
  if (gamma != 2.0)
    throw UnsupportedConfiguration("flux derivative table is only available for gamma = 2");
  check_flux_args(u, ubar, utilde, gamma);
  const double e = std::exp(-ubar + utilde);
  const double w = 1.0 - u;
  const double g = u * w * w;                  // u (1-u)^2
  const double dg = 1.0 - 4.0 * u + 3.0 * u * u;  // d/du of g
  FluxDerivatives d{};
  d.f1 = dg * e;
  d.f2 = -g * e;
  d.f3 = g * e;
  d.f11 = (-4.0 + 6.0 * u) * e;
  d.f22 = g * e;
  d.f33 = g * e;
  d.f12 = -dg * e;
  d.f13 = dg * e;
  d.f23 = -g * e;
  return d;
}

}  // namespace lwr
