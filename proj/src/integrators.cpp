#include "sfnls/integrators.hpp"

#include <cmath>
#include <string>

namespace sfnls {
namespace {

const Potential& zero_potential_for(const SpectralGrid& grid) {
  thread_local std::unique_ptr<Potential> cached;
  if (!cached || cached->a() != grid.a() || cached->b() != grid.b() || cached->table_size() < 2 * grid.size()) {
    cached = std::make_unique<Potential>(Potential::none(grid.a(), grid.b(), 2 * grid.size()));
  }
  return *cached;
}

const Potential& potential_of(const SolverConfig& config, const SpectralGrid& grid) {
  return config.potential ? *config.potential : zero_potential_for(grid);
}

bool is_zero(const Potential& potential) {
  if (potential.kind() == PotentialKind::none) return true;
  for (const auto& c : potential.table()) {
    if (c != Complex{}) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::ewi_fs: return "ewi-fs";
    case IntegratorKind::ewi_fp: return "ewi-fp";
    case IntegratorKind::strang_fp: return "strang-fp";
  }
  return "unknown";
}

IntegratorKind parse_integrator(std::string_view name) {
  if (name == "ewi-fs") return IntegratorKind::ewi_fs;
  if (name == "ewi-fp") return IntegratorKind::ewi_fp;
  if (name == "strang-fp") return IntegratorKind::strang_fp;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  check_alpha(alpha);
  nonlinearity.validate();
  quad.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("solver: tau must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("solver: t_final must be positive");
}

BlowUpError::BlowUpError(std::size_t step, double time, const std::string& detail)
    : std::runtime_error("blow-up at step " + std::to_string(step) + " (t = " + std::to_string(time) + "): " + detail),
      step_(step),
      time_(time) {}

Stepper::Stepper(const SolverConfig& config, const SpectralGrid& grid) : config_(config), grid_(grid) {
  config_.validate();
  const Potential& potential = potential_of(config_, grid_);
  if (potential.a() != grid.a() || potential.b() != grid.b()) {
    throw std::invalid_argument("stepper: potential domain does not match grid");
  }
  fixed_ = multipliers(config_.tau);
  if (!is_zero(potential)) {
    if (config_.integrator == IntegratorKind::ewi_fs) {
      potential_efp_ = potential.sample_projected(2 * grid.size(), 3 * grid.size());
    } else {
      potential_grid_ = potential.sample(grid.size());
    }
  }
}

Stepper::Multipliers Stepper::multipliers(double tau) const {
  const std::size_t n = grid_.size();
  Multipliers m{ComplexVector(n), ComplexVector(n)};
  for (std::size_t s = 0; s < n; ++s) {
    const double mu = std::abs(grid_.mu(grid_.mode(s)));
    const double theta = tau * (config_.alpha == 2.0 ? mu * mu : std::pow(mu, config_.alpha));
    m.propagator[s] = std::polar(1.0, -theta);
    m.duhamel[s] = Complex(0.0, -tau) * phi1(theta);
  }
  return m;
}

WaveField Stepper::step(const WaveField& state) const { return step(state, config_.tau); }

WaveField Stepper::step(const WaveField& state, double tau) const {
  if (!(state.grid() == grid_)) throw std::invalid_argument("stepper: state grid does not match");
  if (tau == config_.tau) {
    return config_.integrator == IntegratorKind::strang_fp ? strang(state, tau, fixed_.propagator)
                                                           : ewi(state, tau, fixed_);
  }
  const Multipliers m = multipliers(tau);
  return config_.integrator == IntegratorKind::strang_fp ? strang(state, tau, m.propagator) : ewi(state, tau, m);
}

ComplexVector Stepper::rhs_fs(const WaveField& state) const {
  const std::size_t n = grid_.size();
  const std::size_t k = config_.quad.points(n);
  const bool nonlinear = config_.nonlinearity.beta != 0.0;
  ComplexVector total(n);
  ComplexVector psi3;
  if (!potential_efp_.empty() || (nonlinear && k == 3 * n)) psi3 = samples_on(state, 3 * n);

  if (!potential_efp_.empty()) {
    ComplexVector u(psi3.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = potential_efp_[j] * psi3[j];
    total = restrict_coefficients(u, n);
  }
  if (nonlinear) {
    ComplexVector g = k == 3 * n ? psi3 : samples_on(state, k);
    for (auto& z : g) z = g_point(z, config_.nonlinearity);
    const ComplexVector ghat = restrict_coefficients(g, n);
    for (std::size_t s = 0; s < n; ++s) total[s] += ghat[s];
  }
  return total;
}

ComplexVector Stepper::rhs_fp(const WaveField& state) const {
  ComplexVector u = inverse_dft(state.coeffs(), grid_);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double v = potential_grid_.empty() ? 0.0 : potential_grid_[j];
    u[j] = v * u[j] + g_point(u[j], config_.nonlinearity);
  }
  return forward_dft(u, grid_);
}

WaveField Stepper::ewi(const WaveField& state, double tau, const Multipliers& m) const {
  const auto c = state.coeffs();
  const ComplexVector rhs = config_.integrator == IntegratorKind::ewi_fs ? rhs_fs(state) : rhs_fp(state);
  ComplexVector next(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) next[s] = m.propagator[s] * c[s] + m.duhamel[s] * rhs[s];
  return WaveField(grid_, std::move(next), state.time() + tau);
}

WaveField Stepper::strang(const WaveField& state, double tau, const ComplexVector& propagator) const {
  const double half = 0.5 * tau;
  // Phase flow of V + f(|psi|^2); |psi| is invariant along it, so it is exact.
  auto phase_flow = [&](ComplexVector& u) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double v = potential_grid_.empty() ? 0.0 : potential_grid_[j];
      u[j] *= std::polar(1.0, -half * (v + f_density(std::norm(u[j]), config_.nonlinearity)));
    }
  };
  ComplexVector u = inverse_dft(state.coeffs(), grid_);
  phase_flow(u);
  ComplexVector c = forward_dft(u, grid_);
  for (std::size_t s = 0; s < c.size(); ++s) c[s] *= propagator[s];
  u = inverse_dft(c, grid_);
  phase_flow(u);
  return WaveField(grid_, forward_dft(u, grid_), state.time() + tau);
}

WaveField ewi_fs_step(const WaveField& state, const SolverConfig& config) {
  SolverConfig c = config;
  c.integrator = IntegratorKind::ewi_fs;
  return Stepper(c, state.grid()).step(state);
}

WaveField ewi_fp_step(const WaveField& state, const SolverConfig& config) {
  SolverConfig c = config;
  c.integrator = IntegratorKind::ewi_fp;
  return Stepper(c, state.grid()).step(state);
}

WaveField strang_fp_step(const WaveField& state, const SolverConfig& config) {
  SolverConfig c = config;
  c.integrator = IntegratorKind::strang_fp;
  return Stepper(c, state.grid()).step(state);
}

WaveField ewi_fs_step_operator_form(const WaveField& state, const SolverConfig& config) {
  config.validate();
  const SpectralGrid& grid = state.grid();
  const std::size_t n = grid.size();
  const Potential& potential = potential_of(config, grid);

  ComplexVector projected_rhs;
  if (config.quad.points(n) == 3 * n) {
    // One 3N-point sampling serves both V psi and G(psi).
    const ComplexVector v = potential.sample_projected(2 * n, 3 * n);
    ComplexVector w = samples_on(state, 3 * n);
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = (v[j] + f_density(std::norm(w[j]), config.nonlinearity)) * w[j];
    }
    projected_rhs = restrict_coefficients(w, n);
  } else {
    projected_rhs = b_apply_fs(potential, state, config.nonlinearity, config.quad);
  }

  const WaveField free = free_propagate(state, config.tau, config.alpha);
  const WaveField duhamel = phi1_apply(state.with_coeffs(std::move(projected_rhs)), config.tau, config.alpha);
  ComplexVector next(n);
  const Complex minus_i_tau(0.0, -config.tau);
  for (std::size_t s = 0; s < n; ++s) next[s] = free.coeffs()[s] + minus_i_tau * duhamel.coeffs()[s];
  return WaveField(grid, std::move(next), free.time());
}

StepPlan plan_steps(double t0, double t_final, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("plan_steps: tau must be positive");
  const double span = t_final - t0;
  if (span < 0.0) throw std::invalid_argument("plan_steps: t_final precedes the initial time");
  const double ratio = span / tau;
  const double nearest = std::round(ratio);
  // Step counts such as 1 / 1e-5 are integers up to a few units of rounding.
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return {static_cast<std::size_t>(nearest), 0.0};
  }
  const double whole = std::floor(ratio);
  return {static_cast<std::size_t>(whole), span - whole * tau};
}

namespace {

template <typename OnStep>
WaveField run(const WaveField& initial, const SolverConfig& config, OnStep&& on_step, StepPlan& plan_out) {
  const Stepper stepper(config, initial.grid());
  const double t0 = initial.time();
  const StepPlan plan = plan_steps(t0, config.t_final, config.tau);
  plan_out = plan;
  const std::size_t total = plan.full_steps + (plan.final_step > 0.0 ? 1 : 0);
  WaveField state = initial;
  for (std::size_t k = 1; k <= total; ++k) {
    const bool short_step = k > plan.full_steps;
    try {
      state = short_step ? stepper.step(state, plan.final_step) : stepper.step(state);
    } catch (const NonFiniteField& e) {
      throw BlowUpError(k, t0 + static_cast<double>(k - 1) * config.tau, e.what());
    }
    if (k == total) {
      state = state.at_time(config.t_final);
    } else if (!short_step) {
      state = state.at_time(t0 + static_cast<double>(k) * config.tau);
    }
    on_step(k, total, state);
  }
  return state;
}

}  // namespace

Trajectory evolve(const WaveField& initial, const SolverConfig& config, std::size_t stride) {
  Trajectory trajectory;
  trajectory.stride = stride;
  trajectory.snapshots.push_back({initial.time(), initial});
  StepPlan plan;
  run(
      initial, config,
      [&](std::size_t k, std::size_t total, const WaveField& state) {
        if (k == total || (stride > 0 && k % stride == 0)) trajectory.snapshots.push_back({state.time(), state});
      },
      plan);
  trajectory.steps = plan.full_steps + (plan.final_step > 0.0 ? 1 : 0);
  trajectory.short_final_step = plan.final_step > 0.0;
  trajectory.final_step = plan.final_step;
  return trajectory;
}

WaveField evolve_final(const WaveField& initial, const SolverConfig& config) {
  StepPlan plan;
  return run(initial, config, [](std::size_t, std::size_t, const WaveField&) {}, plan);
}

}  // namespace sfnls
