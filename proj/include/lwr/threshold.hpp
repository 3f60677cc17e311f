#pragma once

/// \file
/// Explicit shock-formation certificate for the quadratic diagram.
///
/// For a datum u0 with extremal slopes M(0) = u0'(xi0), N(0) = u0'(eta0) and
/// L = -F_11 at t = 0, any mu in (0, min(L(xi0), L(eta0))) gives
///
///   t*     = (min L - mu) / alpha
///   N0~    = min(-4e/mu, N(0))
///   R_M    = (e/mu) (2 + sqrt(4 + 16/27 (4 - 2 N0~)))
///   kappa  = mu R_M t*
///   G      = R_M e^kappa / (e^kappa - 1)
///
/// and M(0) >= G forces u_x to blow up before t*.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "lwr/model.hpp"

namespace lwr {

enum class LVariant {
  proof,  ///< (4 - 6 u0) exp(-ubar0 + utilde0), i.e. -F_11 at t = 0
  intro,  ///< (4 - 6 u0) exp(-ubar0)
};

const char* to_string(LVariant v);
LVariant parse_l_variant(const std::string& s);

/// Throws UnsupportedConfiguration unless gamma = 2.
std::vector<double> initial_L(const GridState& u0, const ModelParams& p,
                              LVariant variant = LVariant::proof);

/// Bound on the derivative of F_11 along characteristics,
/// e^{2 K_b} (124/27) (K_a/gamma_a + K_b/gamma_b); 248 e^2 / 27 at unit parameters.
double alpha_bound(const ModelParams& p);

/// Throws InfeasibleCertificate unless 0 < mu < min(l_xi, l_eta) and alpha > 0.
double t_star(double l_xi, double l_eta, double mu, double alpha);

double n0_tilde(double mu, double n0);
/// lambda(mu, m) with m the infimum of u0'. Throws DomainError for mu <= 0.
double lambda_fn(double mu, double m);
/// Upper bound on the positive root M_2. Throws DomainError for mu <= 0.
double r_m(double mu, double n0_tilde);

/// Threshold in the form stated with lambda; throws InfeasibleCertificate as t_star.
double threshold_G(double mu, double lambda, double l_xi, double l_eta, double alpha);

struct MuSearch {
  double mu = 0.0;
  double g = 0.0;
};

/// Smallest G over mu_k = k min(L)/(grid+1), k = 1..grid; ties keep the
/// smaller mu. Throws InfeasibleCertificate when min L <= 0.
MuSearch minimize_G(double l_xi, double l_eta, double n0, double alpha, std::size_t grid);

enum class Verdict { certified, not_certified };

struct ThresholdReport {
  std::size_t xi0_idx = 0;
  std::size_t eta0_idx = 0;
  double M0 = 0.0;
  double N0 = 0.0;
  double L_xi = 0.0;
  double L_eta = 0.0;
  double mu_star = 0.0;
  double alpha = 0.0;
  double t_star = 0.0;
  double N0_tilde = 0.0;
  double R_M = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  double G = 0.0;
  std::size_t mu_grid_size = 0;
  Verdict verdict = Verdict::not_certified;
  LVariant variant = LVariant::proof;
  /// Set when K_a, K_b, gamma_a, gamma_b are not all 1: only alpha is generalized.
  bool experimental = false;
  std::string reason;

  bool certified() const { return verdict == Verdict::certified; }
};

/// Minimizes G over mu_grid_size uniformly spaced mu in (0, min L) and
/// certifies iff M(0) >= G(mu*). Quantities that do not exist for a rejected
/// datum are NaN.
ThresholdReport certify(const GridState& u0, const ModelParams& p, std::size_t mu_grid_size = 1000,
                        LVariant variant = LVariant::proof);

void to_json(nlohmann::json& j, const ThresholdReport& r);
void from_json(const nlohmann::json& j, ThresholdReport& r);

}  // namespace lwr
