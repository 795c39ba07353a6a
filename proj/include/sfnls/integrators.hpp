#pragma once

#include <memory>
#include <string_view>

#include "sfnls/physics.hpp"

namespace sfnls {

enum class IntegratorKind { ewi_fs, ewi_fp, strang_fp };

std::string_view to_string(IntegratorKind kind);
/// Parses "ewi-fs" | "ewi-fp" | "strang-fp".
IntegratorKind parse_integrator(std::string_view name);

struct SolverConfig {
  double alpha = 2.0;
  NonlinearityParams nonlinearity;
  std::shared_ptr<const Potential> potential;
  double tau = 1e-3;
  double t_final = 1.0;
  IntegratorKind integrator = IntegratorKind::ewi_fs;
  QuadratureConfig quad;

  void validate() const;
};

/// Thrown by `evolve` when a step produces a non-finite coefficient.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, double time, const std::string& detail);
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

/// One-step map for a fixed configuration and grid, with the per-mode
/// multipliers and potential samples precomputed. Immutable after
/// construction and safe to share between threads.
class Stepper {
 public:
  Stepper(const SolverConfig& config, const SpectralGrid& grid);

  /// Advances by config.tau with the configured integrator.
  WaveField step(const WaveField& state) const;
  /// Advances by an arbitrary step (used for a shortened final step).
  WaveField step(const WaveField& state, double tau) const;

  const SolverConfig& config() const noexcept { return config_; }
  const SpectralGrid& grid() const noexcept { return grid_; }

 private:
  struct Multipliers {
    ComplexVector propagator;  // e^{-i tau |mu|^alpha}
    ComplexVector duhamel;     // -i tau phi_1(-i tau |mu|^alpha)
  };
  Multipliers multipliers(double tau) const;

  WaveField ewi(const WaveField& state, double tau, const Multipliers& m) const;
  WaveField strang(const WaveField& state, double tau, const ComplexVector& propagator) const;
  ComplexVector rhs_fs(const WaveField& state) const;
  ComplexVector rhs_fp(const WaveField& state) const;

  SolverConfig config_;
  SpectralGrid grid_;
  Multipliers fixed_;
  ComplexVector potential_efp_;        // (P_{2N} V)(x_j^{3N})
  std::vector<double> potential_grid_;  // V(x_j), pseudospectral sampling
};

/// EWI-FS step in coefficient form.
WaveField ewi_fs_step(const WaveField& state, const SolverConfig& config);
/// The same step assembled from the operator form
///   psi^{n+1} = e^{i tau <grad>} psi^n - i tau phi_1(i tau <grad>) P_N(V psi^n + G(psi^n)),
/// through the WaveField operators and a fused sampling of the right-hand side.
WaveField ewi_fs_step_operator_form(const WaveField& state, const SolverConfig& config);
WaveField ewi_fp_step(const WaveField& state, const SolverConfig& config);
WaveField strang_fp_step(const WaveField& state, const SolverConfig& config);

struct Snapshot {
  double time;
  WaveField field;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::size_t stride = 0;
  std::size_t steps = 0;
  /// Set when t_final is not an integer multiple of tau; holds the length of
  /// the shortened final step.
  bool short_final_step = false;
  double final_step = 0.0;

  const WaveField& final_state() const { return snapshots.back().field; }
};

/// Step count and optional short final step for integrating from t0 to t_final.
struct StepPlan {
  std::size_t full_steps = 0;
  double final_step = 0.0;  // zero when the full steps land on t_final
};
StepPlan plan_steps(double t0, double t_final, double tau);

/// Steps from initial.time() to config.t_final, recording a snapshot every
/// `stride` steps (0: initial and final only) plus the final state.
/// Throws BlowUpError on a non-finite state.
Trajectory evolve(const WaveField& initial, const SolverConfig& config, std::size_t stride);

/// Final state only; does not retain intermediate snapshots.
WaveField evolve_final(const WaveField& initial, const SolverConfig& config);

}  // namespace sfnls
