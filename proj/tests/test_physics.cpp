#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sfnls/physics.hpp"

using namespace sfnls;

namespace {

const SpectralGrid kGrid32(-16, 16, 32);

WaveField random_field(std::mt19937_64& rng, const SpectralGrid& g, double decay = 1.0) {
  return {g, oracle::random_coeffs(rng, g.size(), decay)};
}

ComplexVector scaled(std::span<const Complex> v, Complex s) {
  ComplexVector out(v.begin(), v.end());
  for (auto& z : out) z *= s;
  return out;
}

}  // namespace

TEST_CASE("density function") {
  CHECK(f_density(0.0, {-1.0, 0.1}) == 0.0);
  CHECK(f_density(0.0, {2.0, 1.0}) == 0.0);
  CHECK(f_density(1.0, {-1.0, 0.3}) == -1.0);
  CHECK(f_density(4.0, {-1.0, 1.0}) == -4.0);
  CHECK(f_density(2.0, {0.5, 0.5}) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK_THROWS_AS(f_density(-1e-3, {-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS((NonlinearityParams{-1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((NonlinearityParams{NAN, 1.0}.validate()), std::invalid_argument);
  CHECK(g_point(Complex{}, {-1.0, 0.1}) == Complex{});
}

TEST_CASE("g_apply examples") {
  const WaveField zero(kGrid32, ComplexVector(32));
  for (const auto& v : g_apply(zero, {-1.0, 0.3}, 96)) CHECK(v == Complex{});

  ComplexVector c(32);
  c[kGrid32.slot(2)] = 1.0;
  const WaveField mode(kGrid32, c);
  const auto psi = samples_on(mode, 96);
  const auto g = g_apply(mode, {-1.0, 1.0}, 96);
  for (std::size_t j = 0; j < 96; ++j) CHECK(std::abs(g[j] + psi[j]) < 1e-14);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const WaveField f = random_field(rng, kGrid32);
    const Complex phase = std::polar(1.0, angle(rng));
    const WaveField rotated(kGrid32, scaled(f.coeffs(), phase));
    const NonlinearityParams p{-1.3, 0.1 + 0.05 * trial};
    const auto lhs = g_apply(rotated, p, 96);
    const auto rhs = scaled(g_apply(f, p, 96), phase);
    CHECK(oracle::rel_diff(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("FSwQ coefficients") {
  ComplexVector c(32);
  c[kGrid32.slot(1)] = 1.0;
  const auto one = g_coeffs_fswq(WaveField(kGrid32, c), {1.0, 1.0}, {});
  for (std::size_t k = 0; k < 32; ++k) CHECK(std::abs(one[k] - (k == 1 ? 1.0 : 0.0)) < 1e-15);

  std::mt19937_64 rng(22);
  for (std::size_t n : {8u, 16u, 32u}) {
    const SpectralGrid g(-16, 16, n);
    for (int trial = 0; trial < 100; ++trial) {
      const WaveField f = random_field(rng, g, 0.0);
      const auto fswq = g_coeffs_fswq(f, {1.0, 1.0}, {3});
      CHECK(oracle::rel_diff(fswq, oracle::naive_cubic(f.coeffs())) < 1e-12);
    }
  }

  // Nonvanishing smooth field: K = 3N already resolves |psi|^{0.2} psi.
  ComplexVector s(32);
  s[0] = 1.0;
  s[kGrid32.slot(1)] = 0.2;
  s[kGrid32.slot(-2)] = Complex(0.0, 0.1);
  const WaveField smooth(kGrid32, s);
  const auto k3 = g_coeffs_fswq(smooth, {-1.0, 0.1}, {3});
  const auto k16 = g_coeffs_fswq(smooth, {-1.0, 0.1}, {16});
  CHECK(oracle::rel_diff(k3, k16) < 1e-8);
  CHECK_THROWS_AS(QuadratureConfig{0}.validate(), std::invalid_argument);
}

TEST_CASE("eFP examples") {
  std::mt19937_64 rng(23);
  const WaveField f = random_field(rng, kGrid32);
  const Potential c = Potential::constant(-16, 16, 64, 2.5);
  CHECK(oracle::rel_diff(potential_apply_efp(c, f), scaled(f.coeffs(), 2.5)) < 1e-14);

  ComplexVector cosine(64);
  cosine[1] = 0.5;
  cosine[63] = 0.5;
  const Potential v = Potential::custom(-16, 16, cosine);
  ComplexVector unit(32);
  unit[0] = 1.0;
  const auto out = potential_apply_efp(v, WaveField(kGrid32, unit));
  for (std::size_t k = 0; k < 32; ++k) {
    const bool side = k == 1 || k == 31;
    CHECK(std::abs(out[k] - (side ? 0.5 : 0.0)) < 1e-15);
  }

  for (std::size_t n : {8u, 16u, 64u}) {
    const SpectralGrid g(-16, 16, n);
    const Potential rough = Potential::random_decay(99, std::size_t{1} << 18, n);
    const Potential well = Potential::square_well(n);
    for (int trial = 0; trial < 10; ++trial) {
      const WaveField psi = random_field(rng, g, 0.5);
      for (const Potential* p : {&rough, &well}) {
        const auto expected = oracle::naive_product(p->table(), psi.coeffs(), n);
        CHECK(oracle::rel_diff(potential_apply_efp(*p, psi), expected) < 1e-12);
      }
    }
  }

  const Potential short_table = Potential::square_well(8);
  CHECK_THROWS_AS(potential_apply_efp(short_table, f), std::invalid_argument);
  const Potential other_domain = Potential::constant(-8, 8, 64, 1.0);
  CHECK_THROWS_AS(potential_apply_efp(other_domain, f), std::invalid_argument);
}

TEST_CASE("full right-hand side") {
  std::mt19937_64 rng(24);
  const WaveField f = random_field(rng, kGrid32);
  const Potential none = Potential::none(-16, 16, 64);
  for (const auto& z : b_apply_fs(none, f, {0.0, 1.0}, {})) CHECK(z == Complex{});

  const Potential well = Potential::square_well(32);
  CHECK(oracle::rel_diff(b_apply_fs(well, f, {0.0, 1.0}, {}), potential_apply_efp(well, f)) < 1e-15);

  const auto fs = b_apply_fs(well, f, {1.0, 1.0}, {});
  auto expected = oracle::naive_product(well.table(), f.coeffs(), 32);
  const auto cubic = oracle::naive_cubic(f.coeffs());
  for (std::size_t k = 0; k < 32; ++k) expected[k] += cubic[k];
  CHECK(oracle::rel_diff(fs, expected) < 1e-10);

  const Complex phase = std::polar(1.0, 0.7);
  const WaveField rotated(kGrid32, scaled(f.coeffs(), phase));
  const NonlinearityParams p{-1.0, 0.35};
  CHECK(oracle::rel_diff(b_apply_fs(well, rotated, p, {}), scaled(b_apply_fs(well, f, p, {}), phase)) < 1e-13);
}

TEST_CASE("pseudospectral right-hand side") {
  std::mt19937_64 rng(25);
  const WaveField f = random_field(rng, kGrid32);
  const Potential c = Potential::constant(-16, 16, 64, -1.5);
  CHECK(oracle::rel_diff(b_apply_fp(c, f, {0.0, 1.0}), scaled(f.coeffs(), -1.5)) < 1e-14);

  // Two-mode field: FP aliasing of |psi|^2 psi disappears once T_N holds modes up to 9.
  const Potential none = Potential::none(-16, 16, 64);
  std::vector<double> gaps;
  for (std::size_t n : {8u, 16u, 32u}) {
    const SpectralGrid g(-16, 16, n);
    ComplexVector two(n);
    two[g.slot(1)] = 1.0;
    two[g.slot(3)] = Complex(0.0, 0.5);
    const WaveField psi(g, two);
    gaps.push_back(oracle::rel_diff(b_apply_fp(none, psi, {1.0, 1.0}), b_apply_fs(none, psi, {1.0, 1.0}, {})));
  }
  CHECK(gaps[0] > 1e-2);
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < 1e-14);

  const SpectralGrid g16(-16, 16, 16);
  const Potential well = Potential::square_well(16);
  const WaveField psi = random_field(rng, g16, 0.5);
  CHECK(oracle::rel_diff(b_apply_fp(well, psi, {0.0, 1.0}), b_apply_fs(well, psi, {0.0, 1.0}, {})) > 0.1);
}

TEST_CASE("square-well table") {
  const Potential v = Potential::square_well(64);
  CHECK(v.kind() == PotentialKind::square_well);
  CHECK(v.table_size() == 128);
  CHECK(v.coeff(0) == Complex(-0.5));
  const SpectralGrid g(-16, 16, 128);
  for (long l = 1; l < 64; ++l) {
    CHECK(v.coeff(-l) == std::conj(v.coeff(l)));
    const double mu = g.mu(l);
    CHECK(std::abs(v.coeff(l)) == doctest::Approx(std::abs(4 * std::sin(2 * mu) / (16 * mu))).epsilon(1e-13));
  }
  // Partial sums on a fine grid stay within the Gibbs overshoot of the jump
  // (8.95% per isolated jump, slightly more where the two ripples overlap).
  const auto fine = v.sample_projected(128, 4096);
  double lo = 0.0, hi = -10.0;
  for (const auto& z : fine) {
    CHECK(std::abs(z.imag()) < 1e-12);
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
  }
  CHECK(lo >= -4.0 - 0.10 * 4.0);
  CHECK(hi <= 0.10 * 4.0);
  // Well centred at x = 0 (sample index 2048 of 4096), flat far away.
  CHECK(fine[2048].real() == doctest::Approx(-4.0).epsilon(0.02));
  CHECK(std::abs(fine[512].real()) < 0.05);

  const auto samples = v.sample(16);
  for (std::size_t j = 0; j < 16; ++j) CHECK(samples[j] == (j == 8 ? -4.0 : 0.0));
}

TEST_CASE("random-decay table") {
  const Potential v = Potential::random_decay(7, std::size_t{1} << 18, 64);
  CHECK(v.kind() == PotentialKind::random_decay);
  CHECK(v.table_size() == 128);
  CHECK(v.coeff(0) == Complex(1.0));
  const SpectralGrid g(-16, 16, 128);
  for (long l = 1; l < 64; ++l) {
    CHECK(v.coeff(-l) == std::conj(v.coeff(l)));
    CHECK(std::abs(v.coeff(l)) <= std::sqrt(2.0) / 2 * std::pow(g.mu(l), -0.51));
  }
  const Potential again = Potential::random_decay(7, std::size_t{1} << 18, 64);
  CHECK(std::equal(v.table().begin(), v.table().end(), again.table().begin()));
  const Potential other = Potential::random_decay(8, std::size_t{1} << 18, 64);
  CHECK_FALSE(std::equal(v.table().begin(), v.table().end(), other.table().begin()));

  // Fewer draws than the table ceiling: modes beyond the draws stay zero.
  const Potential few = Potential::random_decay(7, 32, 64);
  CHECK(few.table_size() == 128);
  for (long l = -64; l < 64; ++l) {
    if (l < -16 || l > 16) CHECK(few.coeff(l) == Complex{});
  }
  CHECK(few.coeff(16) == std::conj(few.coeff(-16)));
  CHECK(few.coeff(16) != Complex{});

  // With every draw inside the table, pseudospectral sampling of the defining
  // series matches the projected table.
  const auto s = few.sample(256);
  const auto p = few.sample_projected(128, 256);
  for (std::size_t j = 0; j < 256; ++j) {
    CHECK(s[j] == doctest::Approx(p[j].real()).epsilon(1e-12));
    CHECK(std::abs(p[j].imag()) < 1e-12);
  }

  for (long mode = -50; mode <= 50; ++mode) {
    for (int comp = 0; comp < 2; ++comp) {
      const double u = counter_uniform(5, mode, comp);
      CHECK(u > -0.5);
      CHECK(u < 0.5);
    }
  }
  CHECK(counter_uniform(5, 3, 0) != counter_uniform(5, 3, 1));
  CHECK(counter_uniform(5, 3, 0) != counter_uniform(6, 3, 0));
}

TEST_CASE("initial data") {
  const SpectralGrid g(-16, 16, 256);
  const WaveField gauss = make_initial(InitialKind::gaussian, 1.5, g);
  CHECK(inverse_dft(gauss.coeffs(), g)[128].real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(initial_value(InitialKind::gaussian, 1.5, 0.0) == 1.0);
  CHECK(initial_value(InitialKind::h_alpha, 1.5, 0.0) == 0.0);
  for (auto kind : {InitialKind::odd_gaussian, InitialKind::h_alpha}) {
    CHECK(std::abs(make_initial(kind, 1.5, g).coeff(0)) < 1e-14);
    CHECK(initial_value(kind, 1.3, -0.7) == -initial_value(kind, 1.3, 0.7));
  }
  CHECK(std::abs(initial_value(InitialKind::gaussian, 2.0, 16.0)) < 1e-50);
  CHECK(initial_value(InitialKind::h_alpha, 1.5, 2.0) ==
        doctest::Approx(2.0 * std::pow(2.0, 0.01) * std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_initial(InitialKind::h_alpha, 0.9, g), std::invalid_argument);
}

TEST_CASE("h-alpha datum has H^alpha but not H^{alpha+1} regularity") {
  // Norm ladders over N = 2^8 .. 2^13, frozen from the first run.
  struct Ladder {
    double alpha;
    std::vector<double> in_space;  // H^alpha
    std::vector<double> beyond;    // H^{alpha+1}
  };
  const Ladder ladders[] = {
      {1.5,
       {0.343299226562894, 0.343307939767475, 0.343317131531961, 0.343326255003542, 0.343335256089514,
        0.343344132518051},
       {0.637354154334646, 0.640940961625851, 0.654783410288982, 0.706638595387022, 0.881861262131195,
        1.369510802018}},
      {2.0,
       {0.51190268749543, 0.535175813703249, 0.556862617391183, 0.577378667808786, 0.596904129671604,
        0.615550178239815},
       {2.76887758542109, 5.15710686703293, 10.0209997853489, 19.7693547625751, 39.1873771266999,
        77.7888055882046}},
  };
  for (const auto& ladder : ladders) {
    std::size_t i = 0;
    for (std::size_t n = 256; n <= 8192; n *= 2, ++i) {
      const WaveField f = make_initial(InitialKind::h_alpha, ladder.alpha, SpectralGrid(-16, 16, n));
      CHECK(sobolev_norm(f, SobolevIndex(ladder.alpha)) == doctest::Approx(ladder.in_space[i]).epsilon(1e-9));
      CHECK(sobolev_norm(f, SobolevIndex(ladder.alpha + 1)) == doctest::Approx(ladder.beyond[i]).epsilon(1e-9));
    }
    // H^alpha settles (slowly: the datum sits only 0.01 inside H^alpha) while
    // the H^{alpha+1} increments grow.
    for (std::size_t k = 1; k < ladder.in_space.size(); ++k) {
      CHECK(ladder.in_space[k] / ladder.in_space[k - 1] - 1.0 < 0.05);
    }
    for (std::size_t k = 2; k < ladder.in_space.size(); ++k) {
      if (ladder.alpha == 2.0) {
        CHECK(ladder.in_space[k] - ladder.in_space[k - 1] < ladder.in_space[k - 1] - ladder.in_space[k - 2]);
      }
      CHECK(ladder.beyond[k] - ladder.beyond[k - 1] > ladder.beyond[k - 1] - ladder.beyond[k - 2]);
    }
    CHECK(ladder.beyond.back() / ladder.beyond[ladder.beyond.size() - 2] > 1.5);
  }
}
