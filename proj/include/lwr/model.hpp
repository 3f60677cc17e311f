#pragma once

/// \file
/// Flux of the nonlocal LWR model with Arrhenius look-ahead/behind factors,
///
///   u_t + (u (1-u)^gamma exp(-ubar + utilde))_x = 0,
///   ubar(x)   = K_a/gamma_a * int_x^{x+gamma_a} u dy,
///   utilde(x) = K_b/gamma_b * int_{x-gamma_b}^x u dy,
///
/// on a periodic grid of cell averages.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lwr {

struct ModelParams {
  double gamma = 2.0;          ///< exponent of (1-u) in the fundamental diagram
  double k_ahead = 1.0;        ///< K_a
  double k_behind = 1.0;       ///< K_b
  double look_ahead = 1.0;     ///< gamma_a, length of the downstream window
  double look_behind = 1.0;    ///< gamma_b, length of the upstream window
  double domain_length = 8.0;  ///< period of the domain
  std::size_t n_cells = 512;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  double dx() const { return domain_length / static_cast<double>(n_cells); }

  /// K_a = K_b = gamma_a = gamma_b = 1; other values mark a certificate experimental.
  bool unit_interaction() const;

  bool quadratic_diagram() const { return gamma == 2.0; }
};

/// Periodic field of cell-average densities at time t.
class GridState {
 public:
  /// Throws DomainError if a value is non-finite or outside [0,1], or dx <= 0.
  GridState(std::vector<double> u, double dx, double t = 0.0);

  std::span<const double> values() const { return u_; }
  double operator[](std::size_t i) const { return u_[i]; }
  std::size_t size() const { return u_.size(); }
  double dx() const { return dx_; }
  double time() const { return t_; }
  double length() const { return dx_ * static_cast<double>(u_.size()); }
  double cell_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
  double mass() const;

 private:
  std::vector<double> u_;
  double dx_;
  double t_;
};

/// Continuous periodic profile built from cell-center values by linear
/// interpolation. Integrals over arbitrary windows are exact for the
/// interpolant, i.e. composite trapezoid with partial-cell weights at the ends.
class PeriodicProfile {
 public:
  PeriodicProfile(std::span<const double> values, double dx);

  double value_at(double x) const;
  double integral(double a, double b) const {
    return reference_ * (b - a) + (antiderivative(b) - antiderivative(a));
  }
  /// Mean over [a, a + width]; exactly the constant for constant profiles.
  double average(double a, double width) const {
    return reference_ + (antiderivative(a + width) - antiderivative(a)) / width;
  }
  double period() const { return period_; }

 private:
  /// Antiderivative of the deviation from reference_.
  double antiderivative(double x) const;

  std::vector<double> values_;      // deviations from reference_
  std::vector<double> cumulative_;  // antiderivative at cell centers, size n + 1
  double reference_;
  double dx_;
  double period_;
};

struct NonlocalFields {
  std::vector<double> ubar;
  std::vector<double> utilde;
  std::vector<double> ubar_x;    ///< K_a/gamma_a (u(x+gamma_a) - u(x))
  std::vector<double> utilde_x;  ///< K_b/gamma_b (u(x) - u(x-gamma_b))
};

std::vector<double> nonlocal_ahead(const GridState& state, const ModelParams& p);
std::vector<double> nonlocal_behind(const GridState& state, const ModelParams& p);
NonlocalFields nonlocal_fields(const GridState& state, const ModelParams& p);

/// u (1-u)^gamma exp(-ubar + utilde). Throws DomainError (echoing the
/// arguments) for u outside [0,1], negative window averages or gamma < 1.
double flux(double u, double ubar, double utilde, double gamma);

/// First and second partial derivatives of the flux with respect to
/// (u, ubar, utilde), labelled 1, 2, 3. Quadratic diagram only.
struct FluxDerivatives {
  double f1, f2, f3;
  double f11, f22, f33;
  double f12, f13, f23;
};

/// Throws UnsupportedConfiguration when gamma != 2, DomainError as flux().
FluxDerivatives flux_derivatives(double u, double ubar, double utilde, double gamma = 2.0);

namespace detail {
// Hot-loop variants without argument checks.
inline double diagram(double u, double gamma) {
  const double w = 1.0 - u;
  return gamma == 2.0 ? u * w * w : u * std::pow(w, gamma);
}
}  // namespace detail

}  // namespace lwr
