#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sfnls/physics.hpp"

namespace sfnls {

/// Errors of one ladder point measured at time t.
struct ErrorSample {
  double refinement = 0.0;  // tau or h
  double e_l2 = 0.0;
  double e_h_alpha_half = 0.0;
  double t = 0.0;

  bool operator==(const ErrorSample&) const = default;
};

enum class NormKind { l2, energy };
std::string_view to_string(NormKind kind);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::size_t points_discarded = 0;
};

/// Rates predicted for a solution of regularity H^m.
struct ExpectedOrders {
  double alpha = 2.0;
  double m = 2.0;
  double temporal_l2 = 1.0;
  double temporal_energy = 0.5;
  double spatial_l2 = 2.0;
  double spatial_energy = 1.0;

  /// temporal_energy is 1/2 or 1 depending on the regularity regime.
  static ExpectedOrders make(double alpha, double m, double temporal_energy);
};

struct ErrorPair {
  double e_l2;
  double e_h_alpha_half;
};

/// L2 and H^{alpha/2} norms of numerical - reference after zero-padding the
/// numerical field onto the reference grid.
ErrorPair error_pair(const WaveField& numerical, const WaveField& reference, double alpha);

/// Absolute round-off floor below which samples are excluded from fits.
inline constexpr double kRoundOffFloor = 1e-10;

class InsufficientPoints : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares slope of log(error) against log(refinement). Samples below
/// kRoundOffFloor or below `contamination_floor` are discarded.
/// Throws std::invalid_argument for fewer than 3 samples or repeated
/// refinements, and InsufficientPoints when fewer than 2 samples survive.
OrderFit fit_order(std::span<const ErrorSample> samples, NormKind which, double contamination_floor = 0.0);

/// True when a sample is excluded from the fit for `which`.
bool is_discarded(const ErrorSample& sample, NormKind which, double contamination_floor);

/// Indices i at which error[i+1] > 1.1 error[i] along a ladder ordered from
/// coarse to fine. A nonempty result points at reference contamination.
std::vector<std::size_t> monotonicity_violations(std::span<const ErrorSample> samples, NormKind which,
                                                 double tolerance = 0.1);

/// Result of a randomized inequality check.
struct OracleReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;  // worst observed lhs / bound (or relative error)
  std::vector<std::string> witnesses;

  bool passed() const noexcept { return failures == 0; }
};

/// ||phi_1(i tau <grad>) v||_{H^eta} <= 2^{eta/alpha} (1 + mu_1^{-2})^{eta/2} tau^{-eta/alpha} ||v||_{L2}
/// on random fields over (-16, 16).
OracleReport oracle_phi1_bound(std::size_t trials, double alpha, std::span<const double> etas,
                               std::span<const double> taus, std::uint64_t seed = 1);

/// f_2(z) = |z|^{2 sigma - 2} z^2 satisfies |f_2(z1) - f_2(z2)| <= 16 |z1 - z2|^{2 sigma}.
OracleReport oracle_f2_holder(std::size_t trials, std::span<const double> sigmas, std::uint64_t seed = 2);
Complex f2_point(Complex z, double sigma) noexcept;

/// |G(z1) - G(z2)| <= (1 + 2 sigma) |beta| M0^{2 sigma} |z1 - z2| for |z1|, |z2| <= M0.
OracleReport oracle_lipschitz_G(std::size_t trials, double m0, const NonlinearityParams& params,
                                std::uint64_t seed = 3);
double lipschitz_constant(double m0, const NonlinearityParams& params) noexcept;

/// P_N(V psi) by exact convolution, by 16N-point quadrature of (P_{2N}V) psi,
/// and by eFP agree to 1e-12 relative (constant, square-well and random-decay V).
OracleReport oracle_efp_identity(std::size_t trials, std::span<const std::size_t> n_list, std::uint64_t seed = 4);

/// For sigma = 1, FSwQ with K = 3N equals the exact triple convolution on T_N
/// to 1e-12 relative.
OracleReport oracle_fswq_cubic(std::size_t trials, std::span<const std::size_t> n_list, std::uint64_t seed = 5);

/// Relative l2 distance ||a - b|| / max(||b||, tiny).
double relative_difference(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace sfnls
