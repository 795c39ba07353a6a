#include "sfnls/verification.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sfnls {
namespace {

constexpr double kOracleSlack = 1e-12;
constexpr double kExactnessTolerance = 1e-12;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Complex unit_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  return std::polar(1.0, u(rng));
}

// Random element of Y_N with a randomly chosen spectral profile: a single
// mode, a handful of low modes, or all modes with algebraic decay.
WaveField random_field(const SpectralGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> profile(0, 2);
  ComplexVector c(grid.size());
  switch (profile(rng)) {
    case 0: {
      std::uniform_int_distribution<long> pick(grid.min_mode(), grid.max_mode());
      c[grid.slot(pick(rng))] = Complex(normal(rng), normal(rng));
      break;
    }
    case 1:
      for (long l = -3; l <= 3; ++l) {
        if (grid.contains(l)) c[grid.slot(l)] = Complex(normal(rng), normal(rng));
      }
      break;
    default: {
      std::uniform_real_distribution<double> decay(0.0, 2.0);
      const double p = decay(rng);
      for (std::size_t s = 0; s < c.size(); ++s) {
        const double w = std::pow(1.0 + std::abs(static_cast<double>(grid.mode(s))), -p);
        c[s] = w * Complex(normal(rng), normal(rng));
      }
    }
  }
  return WaveField(grid, std::move(c));
}

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
  return os.str();
}

void record(OracleReport& report, double ratio, double limit, const std::string& witness) {
  ++report.trials;
  if (std::isnan(ratio) || ratio > report.max_ratio) report.max_ratio = ratio;
  if (!(ratio <= limit)) {
    ++report.failures;
    if (report.witnesses.size() < 10) report.witnesses.push_back(witness);
  }
}

}  // namespace

std::string_view to_string(NormKind kind) { return kind == NormKind::l2 ? "l2" : "energy"; }

ExpectedOrders ExpectedOrders::make(double alpha, double m, double temporal_energy) {
  ExpectedOrders e;
  e.alpha = alpha;
  e.m = m;
  e.temporal_l2 = 1.0;
  e.temporal_energy = temporal_energy;
  e.spatial_l2 = m;
  e.spatial_energy = m - alpha / 2.0;
  return e;
}

ErrorPair error_pair(const WaveField& numerical, const WaveField& reference, double alpha) {
  if (!numerical.grid().same_domain(reference.grid())) throw std::invalid_argument("error_pair: domain mismatch");
  if (numerical.size() > reference.size()) {
    throw std::invalid_argument("error_pair: reference must be at least as fine as the numerical field");
  }
  const WaveField lifted = project(numerical, reference.size());
  ComplexVector diff(reference.size());
  for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = lifted.coeffs()[s] - reference.coeffs()[s];
  const WaveField d(reference.grid(), std::move(diff), reference.time());
  return {sobolev_norm(d, SobolevIndex(0.0)), sobolev_norm(d, SobolevIndex(alpha / 2.0))};
}

bool is_discarded(const ErrorSample& sample, NormKind which, double contamination_floor) {
  const double e = which == NormKind::l2 ? sample.e_l2 : sample.e_h_alpha_half;
  return !std::isfinite(e) || e < kRoundOffFloor || e < contamination_floor;
}

OrderFit fit_order(std::span<const ErrorSample> samples, NormKind which, double contamination_floor) {
  if (samples.size() < 3) throw std::invalid_argument("fit_order: need at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].refinement > 0.0)) throw std::invalid_argument("fit_order: refinements must be positive");
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (samples[i].refinement == samples[j].refinement) {
        throw std::invalid_argument("fit_order: refinements must be distinct");
      }
    }
  }
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (is_discarded(s, which, contamination_floor)) continue;
    xs.push_back(std::log(s.refinement));
    ys.push_back(std::log(which == NormKind::l2 ? s.e_l2 : s.e_h_alpha_half));
  }
  OrderFit fit;
  fit.points_used = xs.size();
  fit.points_discarded = samples.size() - xs.size();
  if (xs.size() < 2) {
    throw InsufficientPoints("fit_order: " + std::to_string(xs.size()) + " usable point(s) after discarding " +
                             std::to_string(fit.points_discarded));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<std::size_t> monotonicity_violations(std::span<const ErrorSample> samples, NormKind which,
                                                 double tolerance) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double a = which == NormKind::l2 ? samples[i].e_l2 : samples[i].e_h_alpha_half;
    const double b = which == NormKind::l2 ? samples[i + 1].e_l2 : samples[i + 1].e_h_alpha_half;
    if (b > (1.0 + tolerance) * a) out.push_back(i);
  }
  return out;
}

double relative_difference(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_difference: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

OracleReport oracle_phi1_bound(std::size_t trials, double alpha, std::span<const double> etas,
                               std::span<const double> taus, std::uint64_t seed) {
  check_alpha(alpha);
  for (double eta : etas) {
    if (eta < 0.0 || eta > alpha) throw std::invalid_argument("oracle_phi1_bound: eta must lie in [0, alpha]");
  }
  for (double tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("oracle_phi1_bound: tau must lie in (0, 1)");
  }
  OracleReport report{"phi1_bound", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  const std::size_t sizes[] = {16, 64, 256};
  const double mu1 = SpectralGrid(-16.0, 16.0, 2).mu(1);
  for (std::size_t t = 0; t < trials; ++t) {
    const SpectralGrid grid(-16.0, 16.0, sizes[t % 3]);
    const WaveField v = random_field(grid, rng);
    const double v_l2 = l2_norm(v);
    for (double tau : taus) {
      const WaveField w = phi1_apply(v, tau, alpha);
      for (double eta : etas) {
        const double bound = std::pow(2.0, eta / alpha) * std::pow(1.0 + 1.0 / (mu1 * mu1), eta / 2.0) *
                             std::pow(tau, -eta / alpha) * v_l2;
        const double lhs = sobolev_norm(w, SobolevIndex(eta));
        const double ratio = bound > 0.0 ? lhs / bound : (lhs > 0.0 ? INFINITY : 0.0);
        std::ostringstream witness;
        witness << "trial " << t << " N=" << grid.size() << " tau=" << tau << " eta=" << eta << " ratio=" << ratio;
        record(report, ratio, 1.0 + kOracleSlack, witness.str());
      }
    }
  }
  return report;
}

Complex f2_point(Complex z, double sigma) noexcept {
  const double r = std::abs(z);
  if (r == 0.0) return {};
  const Complex u = z / r;
  return std::pow(r, 2.0 * sigma) * u * u;
}

OracleReport oracle_f2_holder(std::size_t trials, std::span<const double> sigmas, std::uint64_t seed) {
  for (double sigma : sigmas) {
    if (!(sigma > 0.0 && sigma <= 0.5)) throw std::invalid_argument("oracle_f2_holder: sigma must lie in (0, 1/2]");
  }
  constexpr double kHolderConstant = 16.0;
  OracleReport report{"f2_holder", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double sigma : sigmas) {
    for (std::size_t t = 0; t < trials; ++t) {
      const double scale = log_uniform(rng, 1e-8, 1e4);
      Complex z1 = scale * std::sqrt(unit(rng)) * unit_phase(rng);
      Complex z2;
      switch (t % 5) {
        case 0:  // independent
          z2 = scale * std::sqrt(unit(rng)) * unit_phase(rng);
          break;
        case 1:  // nearly equal
          z2 = z1 * (1.0 + log_uniform(rng, 1e-12, 1e-1) * unit_phase(rng));
          break;
        case 2:  // both near the origin
          z1 = log_uniform(rng, 1e-300, 1e-6) * unit_phase(rng);
          z2 = log_uniform(rng, 1e-300, 1e-6) * unit_phase(rng);
          break;
        case 3:  // one at the origin
          z2 = {};
          break;
        default: {  // z2 / z1 = r e^{i theta} with (r, theta) near (1, 0)
          const double r = 1.0 - log_uniform(rng, 1e-12, 1.0) * unit(rng);
          const double theta = (unit(rng) < 0.5 ? -1.0 : 1.0) * log_uniform(rng, 1e-12, std::numbers::pi);
          z2 = z1 * std::polar(r, theta);
        }
      }
      const double lhs = std::abs(f2_point(z1, sigma) - f2_point(z2, sigma));
      const double d = std::abs(z1 - z2);
      const double rhs = kHolderConstant * std::pow(d, 2.0 * sigma);
      const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
      record(report, ratio, 1.0 + kOracleSlack,
             "sigma=" + std::to_string(sigma) + " z1=" + describe(z1) + " z2=" + describe(z2));
    }
  }
  return report;
}

double lipschitz_constant(double m0, const NonlinearityParams& params) noexcept {
  return (1.0 + 2.0 * params.sigma) * std::abs(params.beta) * std::pow(m0, 2.0 * params.sigma);
}

OracleReport oracle_lipschitz_G(std::size_t trials, double m0, const NonlinearityParams& params,
                                std::uint64_t seed) {
  if (!(m0 > 0.0)) throw std::invalid_argument("oracle_lipschitz_G: M0 must be positive");
  params.validate();
  const double constant = lipschitz_constant(m0, params);
  OracleReport report{"lipschitz_G", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in_disk = [&] { return m0 * std::sqrt(unit(rng)) * unit_phase(rng); };
  for (std::size_t t = 0; t < trials; ++t) {
    Complex z1 = in_disk();
    Complex z2;
    switch (t % 5) {
      case 0:
        z2 = in_disk();
        break;
      case 1:  // on the boundary circle, where |G'| peaks
        z1 = m0 * unit_phase(rng);
        z2 = m0 * (1.0 - log_uniform(rng, 1e-12, 1e-2)) * unit_phase(rng);
        break;
      case 2:  // close pair near the boundary
        z1 = m0 * (1.0 - log_uniform(rng, 1e-14, 1e-3)) * unit_phase(rng);
        z2 = z1 + log_uniform(rng, 1e-12, 1e-3) * m0 * unit_phase(rng);
        if (std::abs(z2) > m0) z2 *= m0 / std::abs(z2);
        break;
      case 3:  // through or near the origin
        z1 = log_uniform(rng, 1e-12, m0) * unit_phase(rng);
        z2 = -z1 * unit(rng);
        break;
      default:  // antipodal
        z2 = -z1;
    }
    const double d = std::abs(z1 - z2);
    const double lhs = std::abs(g_point(z1, params) - g_point(z2, params));
    double ratio = 0.0;
    if (d > 0.0) ratio = constant > 0.0 ? lhs / (constant * d) : (lhs > 0.0 ? INFINITY : 0.0);
    record(report, ratio, 1.0 + kOracleSlack, "z1=" + describe(z1) + " z2=" + describe(z2));
  }
  return report;
}

OracleReport oracle_efp_identity(std::size_t trials, std::span<const std::size_t> n_list, std::uint64_t seed) {
  OracleReport report{"efp_identity", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  for (std::size_t n : n_list) {
    const SpectralGrid grid(-16.0, 16.0, n);
    const Potential potentials[] = {
        Potential::constant(-16.0, 16.0, 2 * n, -1.75),
        Potential::square_well(n),
        Potential::random_decay(seed + n, std::size_t{1} << 18, n),
    };
    for (std::size_t t = 0; t < trials; ++t) {
      const Potential& v = potentials[t % 3];
      const WaveField psi = random_field(grid, rng);

      // P_N(V psi) by direct convolution with V's own coefficients.
      ComplexVector convolution(n);
      for (std::size_t s = 0; s < n; ++s) {
        const long l = grid.mode(s);
        Complex sum{};
        for (long k = grid.min_mode(); k <= grid.max_mode(); ++k) sum += v.coeff(l - k) * psi.coeff(k);
        convolution[s] = sum;
      }
      // P_N((P_{2N} V) psi) by 16N-point quadrature.
      const ComplexVector vq = v.sample_projected(2 * n, 16 * n);
      ComplexVector u = samples_on(psi, 16 * n);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] *= vq[j];
      const ComplexVector quadrature = restrict_coefficients(u, n);
      const ComplexVector efp = potential_apply_efp(v, psi);

      const double err = std::max({relative_difference(efp, convolution), relative_difference(efp, quadrature),
                                   relative_difference(quadrature, convolution)});
      record(report, err, kExactnessTolerance,
             "N=" + std::to_string(n) + " V=" + std::string(to_string(v.kind())) + " rel=" + std::to_string(err));
    }
  }
  return report;
}

OracleReport oracle_fswq_cubic(std::size_t trials, std::span<const std::size_t> n_list, std::uint64_t seed) {
  OracleReport report{"fswq_cubic", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  const NonlinearityParams cubic{-1.0, 1.0};
  for (std::size_t n : n_list) {
    const SpectralGrid grid(-16.0, 16.0, n);
    const long span = static_cast<long>(n) - 1;
    for (std::size_t t = 0; t < trials; ++t) {
      const WaveField psi = random_field(grid, rng);
      // |psi|^2 has modes in [-(N-1), N-1].
      std::vector<Complex> density(2 * static_cast<std::size_t>(span) + 1);
      for (long m = -span; m <= span; ++m) {
        Complex sum{};
        for (long k = grid.min_mode(); k <= grid.max_mode(); ++k) sum += psi.coeff(k) * std::conj(psi.coeff(k - m));
        density[static_cast<std::size_t>(m + span)] = sum;
      }
      ComplexVector exact(n);
      for (std::size_t s = 0; s < n; ++s) {
        const long l = grid.mode(s);
        Complex sum{};
        for (long m = -span; m <= span; ++m) sum += density[static_cast<std::size_t>(m + span)] * psi.coeff(l - m);
        exact[s] = cubic.beta * sum;
      }
      const ComplexVector fswq = g_coeffs_fswq(psi, cubic, QuadratureConfig{3});
      const double err = relative_difference(fswq, exact);
      record(report, err, kExactnessTolerance, "N=" + std::to_string(n) + " rel=" + std::to_string(err));
    }
  }
  return report;
}

}  // namespace sfnls
