#include "lwr/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lwr/errors.hpp"

namespace lwr {

void RiccatiParams::validate() const {
  if (!std::isfinite(mu) || !(mu > 0.0)) throw std::invalid_argument("mu must be finite and > 0");
  if (!std::isfinite(r_m) || !(r_m > 0.0))
    throw std::invalid_argument("r_m must be finite and > 0");
  if (!std::isfinite(beta0)) throw std::invalid_argument("beta0 must be finite");
}

std::optional<double> blowup_time(const RiccatiParams& p) {
  p.validate();
  if (!(p.beta0 > p.r_m)) return std::nullopt;
  // log(beta0 / (beta0 - r_m)) = -log1p(-r_m / beta0)
  return -std::log1p(-p.r_m / p.beta0) / (p.mu * p.r_m);
}

double solve_beta(const RiccatiParams& p, double t) {
  p.validate();
  if (const auto tb = blowup_time(p); tb && t >= *tb) {
    std::ostringstream os;
    os << "t=" << t << " is at or past the blow-up time " << *tb;
    throw PastSingularity(os.str());
  }
  const double denom = p.r_m - (p.beta0 - p.r_m) * std::expm1(p.mu * p.r_m * t);
  return p.r_m * p.beta0 / denom;
}

double comparison_tolerance(double dx, double beta) {
  return 10.0 * dx * std::max(1.0, std::abs(beta));
}

ComparisonCheck check_comparison(const SimulationTrace& trace, const ThresholdReport& report,
                                 std::optional<double> t_detect) {
  if (!report.certified()) throw InapplicableCheck("comparison check needs a certified report");

  ComparisonCheck out;
  out.beta0 = report.R_M * std::exp(report.kappa) / std::expm1(report.kappa);
  out.window_end = t_detect ? std::min(report.t_star, *t_detect) : report.t_star;
  const RiccatiParams rp{report.mu_star, report.R_M, out.beta0};
  const auto tb = blowup_time(rp);

  std::size_t past_singularity = 0;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& rec = trace.records[k];
    if (rec.t > out.window_end) continue;
    if (tb && rec.t >= *tb) {
      ++past_singularity;
      continue;
    }
    const double beta = solve_beta(rp, rec.t);
    ++out.records_checked;
    if (!(beta < rec.max_slope + comparison_tolerance(trace.dx, beta))) {
      out.passed = false;
      out.first_failure = k;
      out.beta_at_failure = beta;
      out.m_at_failure = rec.max_slope;
      break;
    }
  }

  if (out.records_checked == 0) {
    out.note = "no records in window";
  } else if (past_singularity > 0) {
    out.note = std::to_string(past_singularity) + " record(s) at the comparison blow-up time skipped";
  }
  return out;
}

}  // namespace lwr
