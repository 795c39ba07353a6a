#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sfnls/spectral.hpp"

namespace sfnls {

/// f(rho) = beta rho^sigma.
struct NonlinearityParams {
  double beta = 0.0;
  double sigma = 1.0;

  /// Throws std::invalid_argument unless sigma > 0 and beta is finite.
  void validate() const;
};

/// Density function f(rho); f(0) = 0 for every sigma > 0.
double f_density(double rho, const NonlinearityParams& params);

/// Pointwise G(z) = f(|z|^2) z.
Complex g_point(Complex z, const NonlinearityParams& params) noexcept;

/// Quadrature used for the Fourier coefficients of G(psi): K = k_factor * N.
struct QuadratureConfig {
  std::size_t k_factor = 3;

  void validate() const;
  std::size_t points(std::size_t n) const { return k_factor * n; }
};

enum class PotentialKind { none, square_well, random_decay, custom };

std::string_view to_string(PotentialKind kind);

/// Real, time-independent potential held as a Fourier table over T_M
/// (M = table_size(), normally twice the finest planned N).
///
/// The table is Hermitian: coeff(-l) == conj(coeff(l)) whenever both modes are
/// in the table.
class Potential {
 public:
  /// Zero potential on (a, b).
  static Potential none(double a, double b, std::size_t table_size);
  /// Constant potential V = c.
  static Potential constant(double a, double b, std::size_t table_size, double c);
  /// Arbitrary table in FFT-natural order over T_M; the table is its own
  /// defining formula.
  static Potential custom(double a, double b, ComplexVector table);
  /// V = -4 on (-2, 2) and 0 elsewhere, with analytic coefficients over T_{2 n_max}.
  static Potential square_well(std::size_t n_max, double a = -16.0, double b = 16.0);
  /// Random potential real(sum_{l in T_M} v_l e^{i mu_l (x - a)}) with
  /// v_0 = 1 and v_l = x_l / |mu_l|^{0.51}, x_l uniform in the open square
  /// (-1/2, 1/2)^2. The table keeps min(draw_modes, 2 n_max) modes.
  static Potential random_decay(std::uint64_t seed, std::size_t draw_modes, std::size_t n_max,
                                double a = -16.0, double b = 16.0);

  PotentialKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t draw_modes() const noexcept { return draw_modes_; }
  std::size_t table_size() const noexcept { return table_.size(); }
  std::span<const Complex> table() const noexcept { return table_; }

  /// Coefficient of mode l; zero outside the table.
  Complex coeff(long l) const noexcept;

  /// V evaluated from its defining formula at the n points a + j (b - a) / n.
  /// This is what a pseudospectral discretization sees.
  std::vector<double> sample(std::size_t n) const;

  /// (P_{n_modes} V)(x_j^K) for j < K: the truncated series at K points.
  /// Throws std::invalid_argument if the table has fewer than n_modes modes.
  ComplexVector sample_projected(std::size_t n_modes, std::size_t k) const;

 private:
  Potential(PotentialKind kind, double a, double b, ComplexVector table)
      : kind_(kind), a_(a), b_(b), table_(std::move(table)) {}

  PotentialKind kind_;
  double a_;
  double b_;
  ComplexVector table_;
  std::uint64_t seed_ = 0;
  std::size_t draw_modes_ = 0;
};

inline Potential make_potential_square_well(std::size_t n_max) { return Potential::square_well(n_max); }
inline Potential make_potential_random_decay(std::uint64_t seed, std::size_t draw_modes, std::size_t n_max) {
  return Potential::random_decay(seed, draw_modes, n_max);
}

/// Uniform draw in the open interval (-1/2, 1/2) from a counter-based
/// generator: splitmix64 finalizer applied to (seed, mode, component).
double counter_uniform(std::uint64_t seed, long mode, int component) noexcept;

/// G(psi) sampled at the K points x_j^K (zero-padded evaluation of psi).
ComplexVector g_apply(const WaveField& field, const NonlinearityParams& params, std::size_t k);

/// FSwQ: K-point trapezoidal coefficients of G(psi) restricted to T_N.
ComplexVector g_coeffs_fswq(const WaveField& field, const NonlinearityParams& params,
                            const QuadratureConfig& quad);

/// eFP: exact P_N(V psi) for psi in Y_N, via 3N-point sampling of (P_{2N} V) psi.
ComplexVector potential_apply_efp(const Potential& potential, const WaveField& field);

/// P_N(V psi + G(psi)) with eFP for the potential and FSwQ for G.
ComplexVector b_apply_fs(const Potential& potential, const WaveField& field, const NonlinearityParams& params,
                         const QuadratureConfig& quad);

/// Pseudospectral right-hand side I_N(V psi + G(psi)) from N grid samples.
ComplexVector b_apply_fp(const Potential& potential, const WaveField& field, const NonlinearityParams& params);

enum class InitialKind { gaussian, odd_gaussian, h_alpha };

std::string_view to_string(InitialKind kind);

/// psi_0 sampled on the grid and transformed:
///   gaussian      e^{-x^2/2}
///   odd_gaussian  x e^{-x^2/2}
///   h_alpha       x |x|^{alpha - 3/2 + 0.01} e^{-x^2/2}
WaveField make_initial(InitialKind kind, double alpha, const SpectralGrid& grid);

/// Pointwise value of the initial datum.
double initial_value(InitialKind kind, double alpha, double x);

}  // namespace sfnls
