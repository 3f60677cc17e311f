#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "lwr/solver.hpp"
#include "lwr/threshold.hpp"

namespace lwr {

/// Comparison equation beta' = mu beta (beta - r_m).
struct RiccatiParams {
  double mu = 1.0;
  double r_m = 1.0;
  double beta0 = 0.0;

  void validate() const;
};

/// (1/(mu r_m)) log(beta0 / (beta0 - r_m)) when beta0 > r_m; otherwise the
/// solution stays bounded and there is no blow-up time.
std::optional<double> blowup_time(const RiccatiParams& p);

/// Closed-form solution r_m beta0 / (r_m - (beta0 - r_m) expm1(mu r_m t)).
/// Throws PastSingularity for t at or beyond the blow-up time.
double solve_beta(const RiccatiParams& p, double t);

struct ComparisonCheck {
  bool passed = true;
  double beta0 = 0.0;
  double window_end = 0.0;
  std::size_t records_checked = 0;
  std::optional<std::size_t> first_failure;  ///< record index
  double beta_at_failure = 0.0;
  double m_at_failure = 0.0;
  std::string note;
};

/// Slack added to the discrete sup when comparing against beta.
double comparison_tolerance(double dx, double beta);

/// Checks beta(t_k) < M(t_k) + tolerance on every record with
/// t_k <= min(t*, t_detect), starting from beta0 = R_M e^kappa / (e^kappa - 1).
/// Throws InapplicableCheck when the report is not certified.
ComparisonCheck check_comparison(const SimulationTrace& trace, const ThresholdReport& report,
                                 std::optional<double> t_detect = std::nullopt);

}  // namespace lwr
