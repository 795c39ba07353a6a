#include "sfnls/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sfnls {
namespace {

long mode_of(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

std::size_t slot_of(long l, std::size_t n) {
  return l >= 0 ? static_cast<std::size_t>(l) : static_cast<std::size_t>(l + static_cast<long>(n));
}

void check_even(std::size_t n, const char* what) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument(std::string(what) + ": size must be even and >= 2");
}

}  // namespace

WaveField::WaveField(SpectralGrid grid, ComplexVector coeffs, double time)
    : grid_(grid), coeffs_(std::move(coeffs)), time_(time) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("WaveField: " + std::to_string(coeffs_.size()) +
                                " coefficients for a grid of " + std::to_string(grid_.size()));
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!std::isfinite(coeffs_[k].real()) || !std::isfinite(coeffs_[k].imag())) {
      throw NonFiniteField("WaveField: non-finite coefficient at mode " + std::to_string(grid_.mode(k)));
    }
  }
  if (!std::isfinite(time_)) throw std::invalid_argument("WaveField: non-finite time");
}

SobolevIndex::SobolevIndex(double s) : s_(s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("SobolevIndex: s must be finite and >= 0");
}

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("fractional order alpha must lie in (1, 2], got " + std::to_string(alpha));
  }
}

ComplexVector forward_dft(std::span<const Complex> samples, const SpectralGrid& grid) {
  if (samples.size() != grid.size()) throw std::invalid_argument("forward_dft: length does not match grid");
  ComplexVector out = fft::forward(samples);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& c : out) c *= scale;
  return out;
}

ComplexVector inverse_dft(std::span<const Complex> coeffs, const SpectralGrid& grid) {
  if (coeffs.size() != grid.size()) throw std::invalid_argument("inverse_dft: length does not match grid");
  return fft::backward(coeffs);
}

ComplexVector samples_on(std::span<const Complex> coeffs, std::size_t k) {
  const std::size_t n = coeffs.size();
  check_even(n, "samples_on");
  if (k < n) throw std::invalid_argument("samples_on: K must be >= N");
  if (k == n) return fft::backward(coeffs);
  ComplexVector padded(k);
  for (std::size_t s = 0; s < n; ++s) {
    const long l = mode_of(s, n);
    padded[slot_of(l, k)] = coeffs[s];
  }
  return fft::backward(padded);
}

ComplexVector restrict_coefficients(std::span<const Complex> samples, std::size_t n) {
  const std::size_t k = samples.size();
  check_even(n, "restrict_coefficients");
  if (k < n) throw std::invalid_argument("restrict_coefficients: K must be >= N");
  const ComplexVector full = fft::forward(samples);
  const double scale = 1.0 / static_cast<double>(k);
  ComplexVector out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const long l = mode_of(s, n);
    out[s] = scale * full[slot_of(l, k)];
  }
  return out;
}

WaveField project(const WaveField& field, std::size_t n_target) {
  const SpectralGrid target = field.grid().resized(n_target);
  if (n_target == field.size()) return field;
  ComplexVector out(n_target);
  for (std::size_t s = 0; s < n_target; ++s) out[s] = field.coeff(target.mode(s));
  return WaveField(target, std::move(out), field.time());
}

WaveField project(const WaveField& field, const SpectralGrid& target) {
  if (!field.grid().same_domain(target)) throw std::invalid_argument("project: incompatible domain");
  return project(field, target.size());
}

WaveField frac_laplacian_apply(const WaveField& field, double alpha) {
  check_alpha(alpha);
  const SpectralGrid& g = field.grid();
  ComplexVector out(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t s = 0; s < out.size(); ++s) {
    // alpha == 2 goes through mu^2 so the symbol matches -d_xx exactly.
    const double mu = std::abs(g.mu(g.mode(s)));
    out[s] *= alpha == 2.0 ? mu * mu : std::pow(mu, alpha);
  }
  return field.with_coeffs(std::move(out));
}

double sobolev_norm(const WaveField& field, SobolevIndex s) {
  const SpectralGrid& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double mu = g.mu(g.mode(k));
    const double weight = s.value() == 0.0 ? 1.0 : std::pow(1.0 + mu * mu, s.value());
    sum += weight * std::norm(field.coeffs()[k]);
  }
  return std::sqrt(sum);
}

double sobolev_seminorm(const WaveField& field, SobolevIndex s) {
  const SpectralGrid& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const long l = g.mode(k);
    if (l == 0 && s.value() > 0.0) continue;
    const double weight = s.value() == 0.0 ? 1.0 : std::pow(std::abs(g.mu(l)), 2.0 * s.value());
    sum += weight * std::norm(field.coeffs()[k]);
  }
  return std::sqrt(sum);
}

WaveField free_propagate(const WaveField& field, double tau, double alpha) {
  check_alpha(alpha);
  const SpectralGrid& g = field.grid();
  ComplexVector out(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const double theta = tau * std::pow(std::abs(g.mu(g.mode(s))), alpha);
    out[s] *= std::polar(1.0, -theta);
  }
  return WaveField(g, std::move(out), field.time() + tau);
}

Complex phi1(double theta) noexcept {
  if (std::abs(theta) < 1e-6) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0, -theta / 2.0 + theta * t2 / 24.0};
  }
  // (1 - e^{-i theta}) / (i theta) = (sin theta - i (1 - cos theta)) / theta,
  // with 1 - cos theta written as 2 sin^2(theta / 2).
  const double half = std::sin(0.5 * theta);
  return {std::sin(theta) / theta, -2.0 * half * half / theta};
}

WaveField phi1_apply(const WaveField& field, double tau, double alpha) {
  check_alpha(alpha);
  if (!(tau > 0.0)) throw std::invalid_argument("phi1_apply: tau must be positive");
  const SpectralGrid& g = field.grid();
  ComplexVector out(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] *= phi1(tau * std::pow(std::abs(g.mu(g.mode(s))), alpha));
  }
  return field.with_coeffs(std::move(out));
}

}  // namespace sfnls
