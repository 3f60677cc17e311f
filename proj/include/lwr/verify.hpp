#pragma once

/// \file
/// Numerical checks of the a-priori bounds behind the blow-up certificate,
/// evaluated on grid states and simulation traces.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lwr/model.hpp"
#include "lwr/solver.hpp"
#include "lwr/threshold.hpp"

namespace lwr {

struct BoundViolation {
  std::string bound_name;
  std::size_t step = 0;
  double measured = 0.0;
  double permitted = 0.0;
  std::string context;
};

/// Calibrated constant C in the C (dt + dx^2) slack of time-differenced checks.
inline constexpr double kF11DotCalibration = 5.0;

/// Quadrature slack 10 dx^2 for bounds evaluated on window averages.
double static_tolerance(double dx);

/// Bound names: ubar_range, utilde_range, ubar_x_range, utilde_x_range,
/// flux_range, ubar_t_range, utilde_t_range.
std::vector<BoundViolation> check_static_bounds(const GridState& state, const ModelParams& p,
                                                std::size_t step = 0);

/// (d_t + F_1 d_x) F_11 written through the window averages and their
/// space/time derivatives. The u_x terms cancel along characteristics.
double f11dot_expansion(double u, double ubar, double utilde, double ubar_x, double utilde_x,
                        double ubar_t, double utilde_t);

/// Discrete F_11 derivative along characteristics between two consecutive
/// states, compared with alpha(p) + C (dt + dx^2).
std::vector<BoundViolation> check_f11dot(const GridState& before, const GridState& after,
                                         const ModelParams& p, std::size_t step = 0,
                                         double calibration = kF11DotCalibration);

/// N(t_k) >= N0~ - 10 dx max(1, |N0~|) on records with t_k <= t*.
std::vector<BoundViolation> check_N_floor(const SimulationTrace& trace,
                                          const ThresholdReport& report);

/// -F_11 >= mu* - 10 dx at xi and eta on records with t_k <= t*.
std::vector<BoundViolation> check_mu_floor(const SimulationTrace& trace,
                                           const ThresholdReport& report);

struct QuadraticRoots {
  double lower = 0.0;
  double upper = 0.0;
};

/// Roots N_1 <= N_2 of F11 N^2 + 2 (F12 v + F13 w) N + (2 F23 v w + F22 v^2 + F33 w^2),
/// with v = ubar_x and w = utilde_x.
QuadraticRoots n_roots(const FluxDerivatives& d, double v, double w);

/// Roots M_1 <= M_2 of the M-inequality once N has been replaced by n0_tilde.
QuadraticRoots m_roots(const FluxDerivatives& d, double v, double w, double n0_tilde);

inline constexpr const char* kViolationHeader = "bound_name,step,measured,permitted,context";

void write_violations_csv(std::ostream& os, std::span<const BoundViolation> violations);

}  // namespace lwr
