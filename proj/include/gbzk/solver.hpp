#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gbzk/error.hpp"
#include "gbzk/field.hpp"
#include "gbzk/propagator.hpp"

namespace gbzk {

enum class Integrator { etdrk4, strang };

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  DispersionParams params;
  bool dealias = true;
  bool nonlinear = true;
  Integrator integrator = Integrator::etdrk4;

  void validate() const;
  // Number of fixed steps; n dt lies within dt/2 of T.
  long steps() const;
};

/// Spectral form of -1/2 d_x(u^2); the xi = 0 column is exactly zero.
SpectralField2D nonlinear_term(const RealField2D& u, bool dealias = true);

/// Time stepper for u_t + D_x^{a+1} d_x u + u_xyy + u u_x = 0 in integrating-factor
/// form. The state is kept as the half spectrum (k = 0..nx/2) of a real field.
class Stepper {
 public:
  Stepper(const GridSpec& grid, const SolverConfig& cfg);
  ~Stepper();
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  void load(const SpectralField2D& full);
  SpectralField2D state() const;
  RealField2D physical();

  // Advances one step; throws BlowUpError on threshold breach or non-finite values.
  void step();
  double time() const noexcept { return time_; }
  long step_index() const noexcept { return index_; }
  void set_blowup_reference(double initial_max);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double time_ = 0.0;
  long index_ = 0;
};

/// One step of the configured integrator on a full spectrum.
SpectralField2D step(const SpectralField2D& state, const SolverConfig& cfg);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::pair<double, RealField2D>> snapshots;
  SpectralField2D final_state;
};

struct EvolveOptions {
  long stride = 1;           // observer cadence in steps; the final step is always observed
  long snapshot_stride = 0;  // 0 disables snapshots
  std::function<void(double t, const SpectralField2D& state)> observer;
};

/// Blow-up raised by evolve, carrying the last state that passed the checks.
class EvolveBlowUp : public BlowUpError {
 public:
  EvolveBlowUp(const BlowUpError& cause, RealField2D last_good, double last_good_time)
      : BlowUpError(cause), last_good_(std::move(last_good)), last_good_time_(last_good_time) {}
  const RealField2D& last_good() const noexcept { return last_good_; }
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  RealField2D last_good_;
  double last_good_time_;
};

Trajectory evolve(const RealField2D& initial, const SolverConfig& cfg, const EvolveOptions& opts = {});

}  // namespace gbzk
