// Acceptance gate: runs the ten release criteria and prints one PASS/FAIL line
// for each. Exit status is 0 only when every criterion passes.
//
//   acceptance [--cache DIR] [--out DIR] [--only 1,4,9]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sfnls/harness.hpp"

using namespace sfnls;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("note " + what); }
};

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

struct Context {
  fs::path cache;
  fs::path out;
};

constexpr double kTemporalLadder[] = {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3};
constexpr double kSpatialLadder[] = {64, 128, 256, 512};
constexpr std::uint64_t kRandomSeed = 20240601;

StudyConfig temporal_study(const Context& ctx, double alpha, PotentialKind potential) {
  StudyConfig s;
  s.mode = StudyMode::converge_time;
  s.base.alpha = alpha;
  s.base.nonlinearity = {-1.0, 1.0};
  s.base.t_final = 1.0;
  s.base.integrator = IntegratorKind::ewi_fs;
  s.ladder.assign(std::begin(kTemporalLadder), std::end(kTemporalLadder));
  s.reference = {IntegratorKind::strang_fp, 1e-5, 1024};
  s.potential.kind = potential;
  s.potential.seed = kRandomSeed;
  s.initial = InitialKind::gaussian;
  s.expected = ExpectedOrders::make(alpha, alpha, 0.5);
  s.tolerance = 0.15;
  s.cache_dir = ctx.cache;
  return s;
}

StudyConfig spatial_study(const Context& ctx, double alpha, PotentialKind potential, IntegratorKind integrator) {
  StudyConfig s;
  s.mode = StudyMode::converge_space;
  s.base.alpha = alpha;
  s.base.nonlinearity = {-1.0, 1.0};
  s.base.t_final = 1.0;
  s.base.integrator = integrator;
  s.ladder.assign(std::begin(kSpatialLadder), std::end(kSpatialLadder));
  s.reference = {IntegratorKind::ewi_fs, 1e-5, 4096};
  s.potential.kind = potential;
  s.potential.seed = kRandomSeed;
  s.initial = InitialKind::gaussian;
  s.expected = ExpectedOrders::make(alpha, alpha, 0.5);
  s.tolerance = 0.2;
  s.cache_dir = ctx.cache;
  return s;
}

ConvergenceReport run_study(const Context& ctx, const StudyConfig& s, const std::string& tag) {
  ConvergenceReport r = run_convergence_study(s);
  if (!ctx.out.empty()) emit_report(r, ctx.out / tag);
  return r;
}

std::string ladder_text(const ConvergenceReport& r, NormKind norm) {
  std::ostringstream os;
  os.precision(3);
  for (const auto& s : r.samples) os << ' ' << (norm == NormKind::l2 ? s.e_l2 : s.e_h_alpha_half);
  return os.str();
}

// Checks one fitted slope against expected +- tolerance.
void judge(Outcome& o, const ConvergenceReport& r, NormKind norm, double expected, double tolerance,
           const std::string& label) {
  const NormResult& n = norm == NormKind::l2 ? r.l2 : r.energy;
  const std::string name = label + (norm == NormKind::l2 ? " L2" : " H^{a/2}");
  if (r.any_blow_up()) {
    o.require(false, name + ": blow-up on the ladder");
    return;
  }
  if (!n.fit) {
    o.require(false, name + ": no fit (all points below the floor)");
    return;
  }
  const double slope = n.fit->slope;
  o.require(std::abs(slope - expected) <= tolerance,
            fmt("%s slope %.3f, expected %.2f +- %.2f (%zu pts) errors:", name.c_str(), slope, expected, tolerance,
                n.fit->points_used) +
                ladder_text(r, norm));
}

// 1. Linear flow reproduces the analytic phase.
Outcome linear_exactness(const Context&) {
  Outcome o;
  const SpectralGrid g(-16, 16, 64);
  double worst = 0.0;
  for (double alpha : {2.0, 1.5, 1.2}) {
    SolverConfig c;
    c.alpha = alpha;
    c.nonlinearity = {0.0, 1.0};
    c.tau = 1e-2;
    c.t_final = 10.0;  // 1000 steps
    const Stepper stepper(c, g);
    for (long l = g.min_mode(); l <= g.max_mode(); ++l) {
      ComplexVector coeffs(64);
      coeffs[g.slot(l)] = 1.0;
      WaveField state(g, coeffs);
      for (int n = 0; n < 1000; ++n) state = stepper.step(state);
      ComplexVector exact(64);
      exact[g.slot(l)] = std::polar(1.0, -10.0 * std::pow(std::abs(g.mu(l)), alpha));
      worst = std::max(worst, oracle::rel_diff(state.coeffs(), exact));
    }
  }
  o.require(worst <= 1e-12, fmt("max relative error %.2e over all 64 modes, alpha in {2, 1.5, 1.2}", worst));
  return o;
}

// 2. First order in time with the square well.
Outcome temporal_square_well(const Context& ctx) {
  Outcome o;
  for (double alpha : {2.0, 1.5, 1.2}) {
    const auto s = temporal_study(ctx, alpha, PotentialKind::square_well);
    const auto r = run_study(ctx, s, fmt("c2_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, 1.0, 0.15, fmt("alpha=%.1f", alpha));
  }
  return o;
}

// 3. L2 order 1 and energy order 1/2 with the random potential.
Outcome temporal_random(const Context& ctx) {
  Outcome o;
  for (double alpha : {2.0, 1.5, 1.2}) {
    const auto s = temporal_study(ctx, alpha, PotentialKind::random_decay);
    const auto r = run_study(ctx, s, fmt("c3_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, 1.0, 0.15, fmt("alpha=%.1f", alpha));
    judge(o, r, NormKind::energy, 0.5, 0.15, fmt("alpha=%.1f", alpha));
  }
  // Diagnostic only: the same ladder against an EWI-FS reference, which shares
  // the ladder's spatial discretization of V.
  for (double alpha : {2.0, 1.5, 1.2}) {
    auto s = temporal_study(ctx, alpha, PotentialKind::random_decay);
    s.reference.integrator = IntegratorKind::ewi_fs;
    const auto r = run_study(ctx, s, fmt("c3_ewi_ref_alpha%.1f", alpha));
    o.note(fmt("EWI-FS reference, alpha=%.1f: L2 slope %.3f, H^{a/2} slope %.3f", alpha,
               r.l2.fit ? r.l2.fit->slope : NAN, r.energy.fit ? r.energy.fit->slope : NAN));
  }
  return o;
}

// 4. Spatial order alpha with the random potential.
Outcome spatial_random(const Context& ctx) {
  Outcome o;
  for (double alpha : {2.0, 1.5, 1.2}) {
    const auto s = spatial_study(ctx, alpha, PotentialKind::random_decay, IntegratorKind::ewi_fs);
    const auto r = run_study(ctx, s, fmt("c4_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, alpha, 0.2, fmt("alpha=%.1f", alpha));
    judge(o, r, NormKind::energy, alpha / 2, 0.2, fmt("alpha=%.1f", alpha));
  }
  return o;
}

// 5. Spatial order alpha + 1/2 with the square well.
Outcome spatial_square_well(const Context& ctx) {
  Outcome o;
  const std::pair<double, std::pair<double, double>> cases[] = {{2.0, {2.5, 1.5}}, {1.5, {2.0, 1.25}}};
  for (const auto& [alpha, rates] : cases) {
    const auto s = spatial_study(ctx, alpha, PotentialKind::square_well, IntegratorKind::ewi_fs);
    const auto r = run_study(ctx, s, fmt("c5_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, rates.first, 0.2, fmt("alpha=%.1f", alpha));
    judge(o, r, NormKind::energy, rates.second, 0.2, fmt("alpha=%.1f", alpha));
  }
  return o;
}

// 6. The pseudospectral baseline drops to first order with the square well.
Outcome spatial_fp_reduction(const Context& ctx) {
  Outcome o;
  for (double alpha : {2.0, 1.5}) {
    const auto s = spatial_study(ctx, alpha, PotentialKind::square_well, IntegratorKind::ewi_fp);
    const auto r = run_study(ctx, s, fmt("c6_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, 1.0, 0.25, fmt("alpha=%.1f", alpha));
    judge(o, r, NormKind::energy, 1.0, 0.25, fmt("alpha=%.1f", alpha));
  }
  return o;
}

// 7. Temporal order with a sublinear nonlinearity and the H^alpha datum.
Outcome temporal_low_regularity(const Context& ctx) {
  Outcome o;
  for (double alpha : {2.0, 1.5}) {
    auto s = temporal_study(ctx, alpha, PotentialKind::none);
    s.base.nonlinearity = {-1.0, 0.1};
    s.initial = InitialKind::h_alpha;
    const auto r = run_study(ctx, s, fmt("c7_alpha%.1f", alpha));
    judge(o, r, NormKind::l2, 1.0, 0.15, fmt("alpha=%.1f", alpha));
    if (alpha == 2.0) judge(o, r, NormKind::energy, 0.5, 0.15, fmt("alpha=%.1f", alpha));
  }
  return o;
}

void report_oracle(Outcome& o, const OracleReport& r, double max_allowed = INFINITY) {
  const bool ok = r.passed() && r.max_ratio <= max_allowed;
  o.require(ok, fmt("%-22s trials %7zu  failures %zu  max %.3e", r.name.c_str(), r.trials, r.failures, r.max_ratio));
  for (const auto& w : r.witnesses) o.note("witness " + w);
}

// 8. eFP and FSwQ exactness.
Outcome exactness_oracles(const Context&) {
  Outcome o;
  const std::size_t sizes[] = {8, 16, 32, 64};
  report_oracle(o, oracle_efp_identity(100, sizes), 1e-12);
  report_oracle(o, oracle_fswq_cubic(100, sizes), 1e-12);
  return o;
}

// 9. Inequalities with explicit constants.
Outcome inequality_oracles(const Context&) {
  Outcome o;
  const double taus[] = {0.5, 0.1, 1e-2, 1e-3};
  for (double alpha : {2.0, 1.5, 1.2}) {
    const double etas[] = {0.0, alpha / 2, alpha};
    OracleReport r = oracle_phi1_bound(1000, alpha, etas, taus);
    r.name += fmt("_alpha%.1f", alpha);
    report_oracle(o, r);
  }
  const double sigmas[] = {0.1, 0.25, 0.4, 0.5};
  report_oracle(o, oracle_f2_holder(10000, sigmas));
  for (double sigma : {0.1, 0.5, 1.0}) {
    for (double m0 : {0.5, 2.0}) {
      OracleReport r = oracle_lipschitz_G(10000, m0, {-1.0, sigma});
      r.name += fmt("_s%.1f_M%.1f", sigma, m0);
      report_oracle(o, r);
    }
  }
  return o;
}

// 10. Spectral-core properties on randomized inputs.
Outcome spectral_properties(const Context&) {
  Outcome o;
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double parseval = 0.0, round_trip = 0.0, naive = 0.0, isometry = 0.0, symbol = 0.0;
  bool idempotent = true, non_expansive = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::size_t{2} << (trial % 10);  // 2 .. 1024
    const SpectralGrid g(-16, 16, n);
    const WaveField f(g, oracle::random_coeffs(rng, n, 3.0 * unit(rng)));

    const auto samples = inverse_dft(f.coeffs(), g);
    double grid_sum = 0.0;
    for (const auto& v : samples) grid_sum += std::norm(v);
    const double norm = l2_norm(f);
    parseval = std::max(parseval, std::abs(norm * norm - grid_sum / static_cast<double>(n)) / (norm * norm));
    round_trip = std::max(round_trip, oracle::rel_diff(forward_dft(samples, g), f.coeffs()));
    if (n <= 64) naive = std::max(naive, oracle::rel_diff(samples, oracle::naive_inverse(f.coeffs(), n)));

    const double tau = 1.0 - unit(rng);
    const double alpha = 1.0 + 1e-9 + unit(rng) * (1.0 - 1e-9);
    isometry = std::max(isometry, std::abs(l2_norm(free_propagate(f, tau, alpha)) / norm - 1.0));

    if (n >= 4) {
      const WaveField p = project(f, n / 2);
      const WaveField pp = project(p, n / 2);
      idempotent = idempotent && std::equal(p.coeffs().begin(), p.coeffs().end(), pp.coeffs().begin());
      non_expansive = non_expansive && l2_norm(p) <= norm;
    }

    const WaveField lap = frac_laplacian_apply(f, 2.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double mu = g.mu(g.mode(k));
      symbol = std::max(symbol, std::abs(lap.coeffs()[k] - f.coeffs()[k] * (mu * mu)));
    }
  }
  o.require(parseval <= 1e-12, fmt("Parseval max relative gap %.2e (tol 1e-12)", parseval));
  o.require(round_trip <= 1e-12, fmt("DFT round trip max relative error %.2e (tol 1e-12)", round_trip));
  o.require(naive <= 1e-12, fmt("fast vs direct inverse transform %.2e (tol 1e-12)", naive));
  o.require(isometry <= 1e-13, fmt("free propagator L2 drift %.2e over 1000 fields (tol 1e-13)", isometry));
  o.require(idempotent && non_expansive, "projection idempotent and non-expansive");
  o.require(symbol == 0.0, fmt("alpha=2 symbol identity max deviation %.1e (exact)", symbol));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the fractional NLS solver"};
  Context ctx;
  std::string cache = "acceptance_cache";
  std::string out;
  std::vector<int> only;
  app.add_option("--cache", cache, "reference cache directory");
  app.add_option("--out", out, "write study reports under this directory");
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  ctx.cache = cache;
  ctx.out = out;

  const Criterion criteria[] = {
      {1, "linear exactness", linear_exactness},
      {2, "temporal order, square well", temporal_square_well},
      {3, "temporal orders, random potential", temporal_random},
      {4, "spatial order, random potential", spatial_random},
      {5, "spatial order, square well", spatial_square_well},
      {6, "pseudospectral order reduction", spatial_fp_reduction},
      {7, "temporal order, sublinear nonlinearity", temporal_low_regularity},
      {8, "eFP and FSwQ exactness", exactness_oracles},
      {9, "inequality oracles", inequality_oracles},
      {10, "spectral property suite", spectral_properties},
  };
  const std::set<int> selected(only.begin(), only.end());

  int passed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++ran;
    passed += o.pass;
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& d : o.details) std::printf("         %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", passed, ran);
  return passed == ran ? 0 : 1;
}
