#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lwr/model.hpp"

namespace lwr {

enum class Reconstruction {
  first_order,  ///< piecewise constant states at the faces
  muscl,        ///< minmod-limited piecewise linear states (requires cfl <= 1/2)
};

struct SolverConfig {
  double cfl = 0.4;
  double t_end = 0.05;
  /// Blow-up is flagged once M(t) >= factor * max(M(0), 1) while still growing.
  double blowup_slope_factor = 1.5;
  std::size_t record_every = 1;
  /// Number of records over which M must have grown for a detection.
  std::size_t growth_window = 10;
  Reconstruction reconstruction = Reconstruction::muscl;

  void validate() const;
};

/// Values below 0 or above 1 by at most this much are clipped; anything
/// further out aborts the run.
inline constexpr double kClipTolerance = 1e-12;

/// Fraction added to the wave-speed bound when choosing dt, covering the
/// drift of the nonlocal factor between the two Runge-Kutta stages.
inline constexpr double kWaveSpeedMargin = 0.05;

inline constexpr double kMinTimeStep = 1e-14;

/// Discrete u_x by central differences on cell averages (periodic).
std::vector<double> central_slopes(std::span<const double> u, double dx);

struct SlopeExtrema {
  double max_slope = 0.0;  ///< M
  double min_slope = 0.0;  ///< N
  std::size_t argmax = 0;  ///< xi
  std::size_t argmin = 0;  ///< eta
};

/// Ties resolve to the smallest index.
SlopeExtrema monitor_extrema(const GridState& state);
SlopeExtrema slope_extrema(std::span<const double> slopes);

/// One SSP-RK2 step of the local Lax-Friedrichs finite-volume scheme with the
/// nonlocal fields frozen within each stage.
class Stepper {
 public:
  Stepper(ModelParams params, SolverConfig config);

  /// CFL-limited step, shortened to at most max_dt.
  GridState advance(const GridState& state, double max_dt);
  /// Time step the CFL condition allows for this state.
  double stable_dt(const GridState& state) const;

  std::size_t steps_taken() const { return steps_; }
  std::size_t clipped_values() const { return clipped_; }

 private:
  std::vector<double> rate(std::span<const double> u, double t) const;
  void enforce_bounds(std::vector<double>& u);

  ModelParams params_;
  SolverConfig config_;
  std::size_t steps_ = 0;
  std::size_t clipped_ = 0;
};

GridState step(const GridState& state, const ModelParams& p, const SolverConfig& cfg);

struct TraceRecord {
  std::size_t step = 0;
  double t = 0.0;
  double max_slope = 0.0;  ///< M(t)
  double min_slope = 0.0;  ///< N(t)
  std::size_t xi_idx = 0;
  std::size_t eta_idx = 0;
  double mass = 0.0;
  double umin = 0.0;
  double umax = 0.0;
  double f11_xi = 0.0;   ///< F_11 at xi; NaN unless gamma = 2
  double f11_eta = 0.0;  ///< F_11 at eta; NaN unless gamma = 2
};

struct SimulationTrace {
  double dx = 0.0;
  std::vector<TraceRecord> records;
};

TraceRecord make_record(const GridState& state, const ModelParams& p, std::size_t step);

enum class Outcome { completed, blowup_detected, aborted };

const char* to_string(Outcome o);

struct SimulationResult {
  SimulationTrace trace;
  Outcome outcome = Outcome::completed;
  std::optional<double> t_detect;
  std::string diagnostic;
  GridState final_state;
  std::size_t steps = 0;
  std::size_t clipped_values = 0;
};

/// Called with every state the run produces, including the initial one.
using StateObserver = std::function<void(const GridState& state, std::size_t step)>;

SimulationResult simulate(const GridState& u0, const ModelParams& p, const SolverConfig& cfg,
                          const StateObserver& observer = {});

inline constexpr const char* kTraceHeader =
    "t,M,N,xi_idx,eta_idx,mass,umin,umax,F11_xi,F11_eta";

void write_trace_csv(std::ostream& os, const SimulationTrace& trace);
/// Parses a trace written by write_trace_csv. Step numbers are the row index.
SimulationTrace read_trace_csv(std::istream& is, double dx);
void write_snapshot_csv(std::ostream& os, const GridState& state);

}  // namespace lwr
