#include "sfnls/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "sfnls/harness.hpp"

namespace sfnls {
namespace {

struct Options {
  double alpha = 1.5;
  double sigma = 1.0;
  double beta = -1.0;
  std::string potential = "none";
  std::uint64_t seed = 1;
  std::size_t draw_modes = std::size_t{1} << 18;
  long long n = 1024;
  double tau = 1e-3;
  double t_final = 1.0;
  std::string integrator = "ewi-fs";
  std::string integrator_ref;
  std::string initial = "gaussian";
  std::string ladder;
  std::optional<double> ref_tau;
  std::optional<long long> ref_n;
  std::size_t k_factor = 3;
  std::string out = "sfnls_out";
  std::string cache;
  std::size_t snapshots = 0;
  std::optional<double> expect_m;
  double energy_order = 0.5;
  std::optional<double> tol;
  std::size_t trials = 0;
};

PotentialSpec parse_potential(const Options& o) {
  PotentialSpec spec;
  spec.seed = o.seed;
  spec.draw_modes = o.draw_modes;
  if (o.potential == "none") {
    spec.kind = PotentialKind::none;
  } else if (o.potential == "square-well") {
    spec.kind = PotentialKind::square_well;
  } else if (o.potential == "random-decay") {
    spec.kind = PotentialKind::random_decay;
  } else if (o.potential.rfind("file:", 0) == 0) {
    spec.kind = PotentialKind::custom;
    spec.file = o.potential.substr(5);
  } else {
    throw std::invalid_argument("unknown potential '" + o.potential + "'");
  }
  return spec;
}

InitialKind parse_initial(const std::string& name) {
  if (name == "gaussian") return InitialKind::gaussian;
  if (name == "odd-gaussian") return InitialKind::odd_gaussian;
  if (name == "h-alpha") return InitialKind::h_alpha;
  throw std::invalid_argument("unknown initial datum '" + name + "'");
}

std::vector<double> parse_ladder(const std::string& text, std::vector<double> fallback) {
  if (text.empty()) return fallback;
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad ladder entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

SolverConfig solver_from(const Options& o) {
  SolverConfig c;
  c.alpha = o.alpha;
  c.nonlinearity = {o.beta, o.sigma};
  c.tau = o.tau;
  c.t_final = o.t_final;
  c.integrator = parse_integrator(o.integrator);
  c.quad.k_factor = o.k_factor;
  c.validate();
  return c;
}

std::filesystem::path cache_dir(const Options& o) {
  return o.cache.empty() ? std::filesystem::path(o.out) / "cache" : std::filesystem::path(o.cache);
}

int run_simulate(const Options& o, std::ostream& out) {
  SolverConfig config = solver_from(o);
  const SpectralGrid grid = make_grid(-16.0, 16.0, o.n);
  config.potential = parse_potential(o).build(grid.size());
  const WaveField initial = make_initial(parse_initial(o.initial), o.alpha, grid);
  const Trajectory trajectory = evolve(initial, config, o.snapshots);
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  write_snapshots_csv(trajectory, dir / "snapshots.csv");
  write_field(dir / "final.sfnl", trajectory.final_state(), o.alpha);
  out << "steps=" << trajectory.steps << " snapshots=" << trajectory.snapshots.size()
      << " mass_initial=" << l2_norm(initial) << " mass_final=" << l2_norm(trajectory.final_state()) << '\n';
  if (trajectory.short_final_step) out << "note: final step shortened to " << trajectory.final_step << '\n';
  out << "wrote " << (dir / "snapshots.csv").string() << '\n';
  return kExitOk;
}

int run_converge(const Options& o, StudyMode mode, std::ostream& out) {
  StudyConfig study;
  study.mode = mode;
  study.base = solver_from(o);
  study.potential = parse_potential(o);
  study.initial = parse_initial(o.initial);
  study.cache_dir = cache_dir(o);
  const bool temporal = mode == StudyMode::converge_time;
  if (temporal) {
    study.ladder = parse_ladder(o.ladder, {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3});
    const double tau_min = *std::min_element(study.ladder.begin(), study.ladder.end());
    study.reference.tau = o.ref_tau.value_or(std::min(1e-5, tau_min / 100.0));
    study.reference.n = static_cast<std::size_t>(make_grid(-16, 16, o.ref_n.value_or(o.n)).size());
    study.reference.integrator = parse_integrator(o.integrator_ref.empty() ? "strang-fp" : o.integrator_ref);
    study.tolerance = o.tol.value_or(0.15);
  } else {
    study.ladder = parse_ladder(o.ladder, {64, 128, 256, 512});
    study.reference.tau = o.ref_tau.value_or(1e-5);
    study.reference.n = static_cast<std::size_t>(make_grid(-16, 16, o.ref_n.value_or(4096)).size());
    study.reference.integrator = parse_integrator(o.integrator_ref.empty() ? "ewi-fs" : o.integrator_ref);
    study.tolerance = o.tol.value_or(0.2);
  }
  study.expected = ExpectedOrders::make(o.alpha, o.expect_m.value_or(o.alpha), o.energy_order);

  const ConvergenceReport report = run_convergence_study(study);
  emit_report(report, o.out);

  out << std::setw(14) << (temporal ? "tau" : "h") << std::setw(16) << "e_l2" << std::setw(16) << "e_h_alpha/2"
      << "\n";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    out << std::setw(14) << s.refinement << std::setw(16) << s.e_l2 << std::setw(16) << s.e_h_alpha_half
        << (report.failed[i] ? "  blow-up" : report.discarded[i] ? "  discarded" : "") << '\n';
  }
  for (const NormResult* r : {&report.l2, &report.energy}) {
    out << to_string(r->norm) << ": ";
    if (r->fit) out << "slope " << r->fit->slope << " (expected " << r->expected << ") ";
    out << to_string(r->verdict) << '\n';
  }
  if (report.any_blow_up()) return kExitBlowUp;
  return report.any_fail() ? kExitVerdictFail : kExitOk;
}

int run_verify(const Options& o, std::ostream& out) {
  check_alpha(o.alpha);
  const double alpha = o.alpha;
  const double etas[] = {0.0, alpha / 2.0, alpha};
  const double taus[] = {0.5, 0.1, 1e-2, 1e-3};
  const double holder_sigmas[] = {0.1, 0.25, 0.4, 0.5};
  const std::size_t sizes[] = {8, 16, 32, 64};
  const std::size_t scale = o.trials == 0 ? 1 : o.trials;
  std::vector<OracleReport> reports;
  reports.push_back(oracle_phi1_bound(1000 * scale, alpha, etas, taus));
  reports.push_back(oracle_f2_holder(10000 * scale, holder_sigmas));
  for (double sigma : {0.1, 0.5, 1.0}) {
    OracleReport r = oracle_lipschitz_G(10000 * scale, 2.0, NonlinearityParams{o.beta == 0.0 ? -1.0 : o.beta, sigma});
    r.name += "_sigma" + std::to_string(sigma).substr(0, 3);
    reports.push_back(std::move(r));
  }
  reports.push_back(oracle_efp_identity(100 * scale, sizes));
  reports.push_back(oracle_fswq_cubic(100 * scale, sizes));

  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "verify.csv", std::ios::trunc);
  csv << "oracle,trials,failures,max_ratio,verdict\n";
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.passed();
    csv << r.name << ',' << r.trials << ',' << r.failures << ',' << std::setprecision(17) << r.max_ratio << ','
        << (r.passed() ? "pass" : "fail") << '\n';
    out << std::left << std::setw(22) << r.name << std::right << " trials " << std::setw(7) << r.trials
        << "  failures " << r.failures << "  max " << std::setprecision(6) << r.max_ratio << "  "
        << (r.passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& w : r.witnesses) out << "    witness: " << w << '\n';
  }
  return ok ? kExitOk : kExitVerdictFail;
}

int run_potential_gen(const Options& o, std::ostream& out) {
  const SpectralGrid grid = make_grid(-16.0, 16.0, o.n);
  const auto potential = parse_potential(o).build(grid.size());
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  const auto path = dir / "potential.sfnl";
  write_potential(path, *potential);
  out << "wrote " << path.string() << " (" << potential->table_size() << " modes)\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "fractional order in (1, 2]");
  cmd->add_option("--sigma", o.sigma, "nonlinearity exponent");
  cmd->add_option("--beta", o.beta, "nonlinearity strength");
  cmd->add_option("--potential", o.potential, "none | square-well | random-decay | file:PATH");
  cmd->add_option("--seed", o.seed, "random potential seed");
  cmd->add_option("--draw-modes", o.draw_modes, "mode count of the random potential");
  cmd->add_option("--n", o.n, "grid size (even)");
  cmd->add_option("--tau", o.tau, "time step");
  cmd->add_option("--t-final", o.t_final, "final time");
  cmd->add_option("--integrator", o.integrator, "ewi-fs | ewi-fp | strang-fp");
  cmd->add_option("--initial", o.initial, "gaussian | odd-gaussian | h-alpha");
  cmd->add_option("--k-factor", o.k_factor, "quadrature points per mode for G");
  cmd->add_option("--out", o.out, "output directory");
}

void add_study(CLI::App* cmd, Options& o) {
  cmd->add_option("--ladder", o.ladder, "comma-separated refinements");
  cmd->add_option("--ref-tau", o.ref_tau, "reference time step");
  cmd->add_option("--ref-n", o.ref_n, "reference grid size");
  cmd->add_option("--integrator-ref", o.integrator_ref, "reference integrator");
  cmd->add_option("--cache", o.cache, "reference cache directory");
  cmd->add_option("--expect-m", o.expect_m, "solution regularity m (default alpha)");
  cmd->add_option("--energy-order", o.energy_order, "expected temporal H^{alpha/2} order");
  cmd->add_option("--tol", o.tol, "slope tolerance");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exponential wave integrator for the space-fractional NLS equation", "sfnls"};
  app.require_subcommand(1);
  auto* simulate = app.add_subcommand("simulate", "evolve one configuration and export |psi| snapshots");
  auto* time = app.add_subcommand("converge-time", "temporal convergence study");
  auto* space = app.add_subcommand("converge-space", "spatial convergence study");
  auto* verify = app.add_subcommand("verify", "run the inequality and exactness oracles");
  auto* gen = app.add_subcommand("potential-gen", "write a potential table");
  for (auto* cmd : {simulate, time, space, verify, gen}) add_common(cmd, o);
  simulate->add_option("--snapshots", o.snapshots, "snapshot stride in steps");
  add_study(time, o);
  add_study(space, o);
  verify->add_option("--trials", o.trials, "trial multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(o, out);
    if (*time) return run_converge(o, StudyMode::converge_time, out);
    if (*space) return run_converge(o, StudyMode::converge_space, out);
    if (*verify) return run_verify(o, out);
    if (*gen) return run_potential_gen(o, out);
  } catch (const BlowUpError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sfnls
