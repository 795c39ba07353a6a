#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "sfnls/fft.hpp"
#include "sfnls/grid.hpp"

namespace sfnls {

/// Raised when a field would hold a NaN or infinite coefficient.
class NonFiniteField : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Complex wave function stored as its N Fourier coefficients over T_N
/// (FFT-natural order) together with the time it represents.
///
/// Physical samples are psi(x_j) = sum_l coeffs_l e^{i mu_l (x_j - a)}; they are
/// produced on demand by `inverse_dft` / `samples_on`. Values are immutable.
class WaveField {
 public:
  /// Throws std::invalid_argument on a size mismatch and NonFiniteField if any
  /// coefficient is not finite.
  WaveField(SpectralGrid grid, ComplexVector coeffs, double time = 0.0);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  double time() const noexcept { return time_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient of mode l in T_N indexing; zero for modes outside T_N.
  Complex coeff(long l) const noexcept {
    return grid_.contains(l) ? coeffs_[grid_.slot(l)] : Complex{};
  }

  WaveField with_coeffs(ComplexVector coeffs) const { return {grid_, std::move(coeffs), time_}; }
  WaveField at_time(double t) const { return {grid_, coeffs_, t}; }

 private:
  SpectralGrid grid_;
  ComplexVector coeffs_;
  double time_;
};

/// Norm exponent s >= 0 for the periodic Sobolev scale.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const noexcept { return s_; }

 private:
  double s_;
};

/// Throws std::invalid_argument unless 1 < alpha <= 2.
void check_alpha(double alpha);

/// 1/N-normalized discrete transform of N samples onto T_N.
ComplexVector forward_dft(std::span<const Complex> samples, const SpectralGrid& grid);

/// Evaluates sum_l coeffs_l e^{i mu_l (x_j - a)} at the N grid points.
ComplexVector inverse_dft(std::span<const Complex> coeffs, const SpectralGrid& grid);

/// Zero-padded evaluation of a T_N coefficient array at the K equispaced
/// points x_j^K = a + j (b - a) / K. Requires K >= N.
ComplexVector samples_on(std::span<const Complex> coeffs, std::size_t k);
inline ComplexVector samples_on(const WaveField& field, std::size_t k) {
  return samples_on(field.coeffs(), k);
}

/// K-point trapezoidal Fourier coefficients of the given samples, restricted to
/// T_N and returned in FFT-natural order. Requires K >= N.
ComplexVector restrict_coefficients(std::span<const Complex> samples, std::size_t n);

/// Copies the coefficients of T_N ∩ T_{n_target}; other modes are dropped or
/// zero-filled. Time is preserved.
WaveField project(const WaveField& field, std::size_t n_target);
/// As above, additionally checking that the target domain matches.
WaveField project(const WaveField& field, const SpectralGrid& target);

/// Applies the symbol |mu_l|^alpha.
WaveField frac_laplacian_apply(const WaveField& field, double alpha);

double sobolev_norm(const WaveField& field, SobolevIndex s);
double sobolev_seminorm(const WaveField& field, SobolevIndex s);
inline double l2_norm(const WaveField& field) { return sobolev_norm(field, SobolevIndex(0.0)); }

/// Free flow e^{-i tau |mu_l|^alpha} on every mode; advances time by tau.
WaveField free_propagate(const WaveField& field, double tau, double alpha);

/// phi_1(-i theta) = (1 - e^{-i theta}) / (i theta), with phi_1(0) = 1.
/// Uses a cubic Taylor expansion below |theta| = 1e-6.
Complex phi1(double theta) noexcept;

/// Applies the multiplier phi_1(-i tau |mu_l|^alpha). Time is unchanged.
WaveField phi1_apply(const WaveField& field, double tau, double alpha);

}  // namespace sfnls
