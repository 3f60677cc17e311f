#include <cmath>
#include <numbers>
#include <sstream>

#include "lwr/cli/config.hpp"
#include "lwr/errors.hpp"

namespace lwr::cli {

namespace {

double sigmoid(double z) { return 0.5 * (1.0 + std::tanh(z)); }

// Signed distance x - c folded into [-L/2, L/2).
double periodic_offset(double x, double c, double period) {
  double d = std::fmod(x - c, period);
  if (d < -0.5 * period) d += period;
  if (d >= 0.5 * period) d -= period;
  return d;
}

double sample(const ConstantPreset& p, double, double) { return p.value; }

double sample(const GaussianPreset& p, double x, double period) {
  const double z = periodic_offset(x, p.center, period) / p.width;
  return p.base + p.height * std::exp(-0.5 * z * z);
}

double sample(const TanhFrontPreset& p, double x, double) {
  const double front = p.height * sigmoid(p.steepness * (x - p.center)) *
                       sigmoid(-p.fall_steepness * (x - p.center - p.plateau_width));
  const double shoulder_end = p.center - p.shoulder_gap;
  const double shoulder =
      p.shoulder_height * sigmoid(p.fall_steepness * (x - (shoulder_end - p.shoulder_length))) *
      sigmoid(-p.fall_steepness * (x - shoulder_end));
  return p.base + front + shoulder;
}

double sample(const SinePreset& p, double x, double period) {
  return p.mean + p.amplitude * std::sin(2.0 * std::numbers::pi * p.wavenumber * x / period + p.phase);
}

}  // namespace

GridState build_initial(const InitialCondition& ic, const ModelParams& p) {
  const double dx = p.dx();
  std::vector<double> u(p.n_cells);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    u[i] = std::visit([&](const auto& preset) { return sample(preset, x, p.domain_length); }, ic);
  }
  try {
    return GridState(std::move(u), dx);
  } catch (const DomainError& e) {
    throw ConfigError(preset_name(ic) + " preset leaves [0,1]: " + e.what());
  }
}

std::string preset_name(const InitialCondition& ic) {
  static constexpr const char* names[] = {"constant", "gaussian", "tanh_front", "sine"};
  return names[ic.index()];
}

}  // namespace lwr::cli
