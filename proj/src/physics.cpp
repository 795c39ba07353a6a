#include "sfnls/physics.hpp"

#include <cmath>

namespace sfnls {
namespace {

constexpr double kDecayExponent = 0.5 + 0.01;

void check_domain(const Potential& potential, const SpectralGrid& grid) {
  if (potential.a() != grid.a() || potential.b() != grid.b()) {
    throw std::invalid_argument("potential domain does not match the field grid");
  }
}

std::size_t slot_of(long l, std::size_t n) {
  return l >= 0 ? static_cast<std::size_t>(l) : static_cast<std::size_t>(l + static_cast<long>(n));
}

long mode_of(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// Unsymmetrized random coefficient v_l of the random-decay potential; zero
// outside T_M.
Complex random_decay_draw(std::uint64_t seed, long l, std::size_t draw_modes, double length) {
  const long half = static_cast<long>(draw_modes / 2);
  if (l < -half || l >= half) return {};
  if (l == 0) return {1.0, 0.0};
  const double mu = std::abs(2.0 * std::numbers::pi * static_cast<double>(l) / length);
  const Complex x{counter_uniform(seed, l, 0), counter_uniform(seed, l, 1)};
  return x / std::pow(mu, kDecayExponent);
}

// Samples at n points of the series sum_{l} coeffs_l e^{i mu_l (x - a)} whose
// coefficients live on T_M (FFT-natural order, M = coeffs.size()).
ComplexVector evaluate_series(std::span<const Complex> coeffs, std::size_t n) {
  const std::size_t m = coeffs.size();
  if (n >= m) return samples_on(coeffs, n);
  if (m % n == 0) {
    const ComplexVector fine = fft::backward(coeffs);
    ComplexVector out(n);
    const std::size_t stride = m / n;
    for (std::size_t j = 0; j < n; ++j) out[j] = fine[j * stride];
    return out;
  }
  ComplexVector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex sum{};
    for (std::size_t s = 0; s < m; ++s) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(mode_of(s, m)) *
                           static_cast<double>(j) / static_cast<double>(n);
      sum += coeffs[s] * std::polar(1.0, phase);
    }
    out[j] = sum;
  }
  return out;
}

}  // namespace

void NonlinearityParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("nonlinearity: sigma must be > 0");
  if (!std::isfinite(beta)) throw std::invalid_argument("nonlinearity: beta must be finite");
}

double f_density(double rho, const NonlinearityParams& params) {
  if (rho < 0.0) throw std::invalid_argument("f_density: rho must be >= 0");
  if (rho == 0.0) return 0.0;
  return params.beta * (params.sigma == 1.0 ? rho : std::pow(rho, params.sigma));
}

Complex g_point(Complex z, const NonlinearityParams& params) noexcept {
  const double rho = std::norm(z);
  if (rho == 0.0) return {};
  return params.beta * (params.sigma == 1.0 ? rho : std::pow(rho, params.sigma)) * z;
}

void QuadratureConfig::validate() const {
  if (k_factor < 1) throw std::invalid_argument("quadrature: K factor must be >= 1");
}

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::none: return "none";
    case PotentialKind::square_well: return "square-well";
    case PotentialKind::random_decay: return "random-decay";
    case PotentialKind::custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::odd_gaussian: return "odd-gaussian";
    case InitialKind::h_alpha: return "h-alpha";
  }
  return "unknown";
}

double counter_uniform(std::uint64_t seed, long mode, int component) noexcept {
  const std::uint64_t zigzag = mode >= 0 ? 2 * static_cast<std::uint64_t>(mode)
                                         : 2 * static_cast<std::uint64_t>(-(mode + 1)) + 1;
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (2 * zigzag + static_cast<std::uint64_t>(component) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53 - 0.5;
}

Potential Potential::none(double a, double b, std::size_t table_size) {
  (void)SpectralGrid(a, b, table_size);
  return Potential(PotentialKind::none, a, b, ComplexVector(table_size));
}

Potential Potential::constant(double a, double b, std::size_t table_size, double c) {
  (void)SpectralGrid(a, b, table_size);
  ComplexVector table(table_size);
  table[0] = c;
  return Potential(PotentialKind::custom, a, b, std::move(table));
}

Potential Potential::custom(double a, double b, ComplexVector table) {
  (void)SpectralGrid(a, b, table.size());
  return Potential(PotentialKind::custom, a, b, std::move(table));
}

Potential Potential::square_well(std::size_t n_max, double a, double b) {
  const SpectralGrid g(a, b, 2 * n_max);
  const double length = g.length();
  constexpr double depth = -4.0;
  constexpr double half_width = 2.0;
  ComplexVector table(g.size());
  table[0] = depth * 2.0 * half_width / length;
  // (1/L) int_{-w}^{w} depth e^{-i mu (x - a)} dx = depth e^{i mu a} 2 sin(w mu) / (L mu)
  auto coefficient = [&](long l) {
    const double mu = g.mu(l);
    return depth * 2.0 * std::sin(half_width * mu) / (length * mu) * std::polar(1.0, mu * a);
  };
  for (long l = 1; l <= g.max_mode(); ++l) {
    table[g.slot(l)] = coefficient(l);
    table[g.slot(-l)] = std::conj(table[g.slot(l)]);
  }
  table[g.slot(g.min_mode())] = coefficient(g.min_mode());
  return Potential(PotentialKind::square_well, a, b, std::move(table));
}

Potential Potential::random_decay(std::uint64_t seed, std::size_t draw_modes, std::size_t n_max, double a,
                                  double b) {
  const SpectralGrid g(a, b, 2 * n_max);
  if (draw_modes < 2 || draw_modes % 2 != 0) throw std::invalid_argument("random potential: mode count must be even");
  const std::size_t kept = std::min(draw_modes, g.size());
  const long half = static_cast<long>(kept / 2);
  // Mode +half is the conjugate partner of the drawn mode -half; it fits when
  // the table is wider than the draws.
  const long top = std::min(half, g.max_mode());
  ComplexVector table(g.size());
  for (long l = -half; l <= top; ++l) {
    // Coefficient of mode l in real(sum v_k e^{i mu_k (x-a)}).
    const Complex v = random_decay_draw(seed, l, draw_modes, g.length());
    const Complex partner = random_decay_draw(seed, -l, draw_modes, g.length());
    table[g.slot(l)] = 0.5 * (v + std::conj(partner));
  }
  Potential p(PotentialKind::random_decay, a, b, std::move(table));
  p.seed_ = seed;
  p.draw_modes_ = draw_modes;
  return p;
}

Complex Potential::coeff(long l) const noexcept {
  const long half = static_cast<long>(table_.size() / 2);
  if (l < -half || l >= half) return {};
  return table_[slot_of(l, table_.size())];
}

std::vector<double> Potential::sample(std::size_t n) const {
  std::vector<double> out(n);
  const double h = (b_ - a_) / static_cast<double>(n);
  switch (kind_) {
    case PotentialKind::none:
      break;
    case PotentialKind::square_well:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = a_ + static_cast<double>(j) * h;
        out[j] = (x > -2.0 && x < 2.0) ? -4.0 : 0.0;
      }
      break;
    case PotentialKind::random_decay: {
      ComplexVector draws(draw_modes_);
      for (std::size_t s = 0; s < draw_modes_; ++s) {
        draws[s] = random_decay_draw(seed_, mode_of(s, draw_modes_), draw_modes_, b_ - a_);
      }
      const ComplexVector values = evaluate_series(draws, n);
      for (std::size_t j = 0; j < n; ++j) out[j] = values[j].real();
      break;
    }
    case PotentialKind::custom: {
      const ComplexVector values = evaluate_series(table_, n);
      for (std::size_t j = 0; j < n; ++j) out[j] = values[j].real();
      break;
    }
  }
  return out;
}

ComplexVector Potential::sample_projected(std::size_t n_modes, std::size_t k) const {
  if (n_modes > table_.size()) {
    throw std::invalid_argument("potential table covers " + std::to_string(table_.size()) + " modes, need " +
                                std::to_string(n_modes));
  }
  if (k < n_modes) throw std::invalid_argument("sample_projected: K must be >= the mode count");
  ComplexVector truncated(n_modes);
  for (std::size_t s = 0; s < n_modes; ++s) truncated[s] = coeff(mode_of(s, n_modes));
  return samples_on(truncated, k);
}

ComplexVector g_apply(const WaveField& field, const NonlinearityParams& params, std::size_t k) {
  ComplexVector values = samples_on(field, k);
  for (auto& z : values) z = g_point(z, params);
  return values;
}

ComplexVector g_coeffs_fswq(const WaveField& field, const NonlinearityParams& params,
                            const QuadratureConfig& quad) {
  quad.validate();
  return restrict_coefficients(g_apply(field, params, quad.points(field.size())), field.size());
}

ComplexVector potential_apply_efp(const Potential& potential, const WaveField& field) {
  check_domain(potential, field.grid());
  const std::size_t n = field.size();
  const ComplexVector v = potential.sample_projected(2 * n, 3 * n);
  ComplexVector u = samples_on(field, 3 * n);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= v[j];
  return restrict_coefficients(u, n);
}

ComplexVector b_apply_fs(const Potential& potential, const WaveField& field, const NonlinearityParams& params,
                         const QuadratureConfig& quad) {
  ComplexVector out = potential_apply_efp(potential, field);
  const ComplexVector g = g_coeffs_fswq(field, params, quad);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] += g[s];
  return out;
}

ComplexVector b_apply_fp(const Potential& potential, const WaveField& field, const NonlinearityParams& params) {
  check_domain(potential, field.grid());
  const std::vector<double> v = potential.sample(field.size());
  ComplexVector u = inverse_dft(field.coeffs(), field.grid());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = v[j] * u[j] + g_point(u[j], params);
  return forward_dft(u, field.grid());
}

double initial_value(InitialKind kind, double alpha, double x) {
  const double envelope = std::exp(-0.5 * x * x);
  switch (kind) {
    case InitialKind::gaussian:
      return envelope;
    case InitialKind::odd_gaussian:
      return x * envelope;
    case InitialKind::h_alpha: {
      if (x == 0.0) return 0.0;
      const double exponent = alpha - 1.5 + 0.01;
      return x * std::pow(std::abs(x), exponent) * envelope;
    }
  }
  return 0.0;
}

WaveField make_initial(InitialKind kind, double alpha, const SpectralGrid& grid) {
  if (kind == InitialKind::h_alpha) check_alpha(alpha);
  ComplexVector samples(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) samples[j] = initial_value(kind, alpha, grid.x(j));
  return WaveField(grid, forward_dft(samples, grid), 0.0);
}

}  // namespace sfnls
