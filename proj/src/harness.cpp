#include "sfnls/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace sfnls {
namespace {

constexpr double kDomainA = -16.0;
constexpr double kDomainB = 16.0;
constexpr double kContaminationFactor = 10.0;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += num(values[i]);
  }
  return out;
}

// Runs body(i) for i < count on up to hardware_concurrency threads; the first
// exception is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

NormResult evaluate_norm(std::span<const ErrorSample> samples, NormKind norm, double expected, double floor,
                         double tolerance) {
  NormResult result;
  result.norm = norm;
  result.expected = expected;
  result.contamination_floor = floor;
  try {
    result.fit = fit_order(samples, norm, floor);
    result.verdict = std::abs(result.fit->slope - expected) <= tolerance ? Verdict::pass : Verdict::fail;
  } catch (const InsufficientPoints&) {
    result.verdict = Verdict::floor;
  }
  return result;
}

}  // namespace

std::string_view to_string(StudyMode mode) {
  switch (mode) {
    case StudyMode::converge_time: return "converge-time";
    case StudyMode::converge_space: return "converge-space";
    case StudyMode::simulate: return "simulate";
    case StudyMode::verify: return "verify";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::floor: return "floor";
  }
  return "unknown";
}

std::shared_ptr<const Potential> PotentialSpec::build(std::size_t n_max) const {
  switch (kind) {
    case PotentialKind::none:
      return std::make_shared<const Potential>(Potential::none(kDomainA, kDomainB, 2 * n_max));
    case PotentialKind::square_well:
      return std::make_shared<const Potential>(Potential::square_well(n_max, kDomainA, kDomainB));
    case PotentialKind::random_decay:
      return std::make_shared<const Potential>(Potential::random_decay(seed, draw_modes, n_max, kDomainA, kDomainB));
    case PotentialKind::custom: {
      auto p = std::make_shared<const Potential>(read_potential(file));
      if (p->table_size() < 2 * n_max) {
        throw std::invalid_argument("potential file " + file.string() + " covers " + std::to_string(p->table_size()) +
                                    " modes; the study needs " + std::to_string(2 * n_max));
      }
      return p;
    }
  }
  throw std::invalid_argument("unknown potential kind");
}

std::string PotentialSpec::canonical() const {
  std::string out(to_string(kind));
  if (kind == PotentialKind::random_decay) out += ":seed=" + std::to_string(seed) + ":modes=" + std::to_string(draw_modes);
  if (kind == PotentialKind::custom) {
    std::ifstream is(file, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    out += ":file=";
    out += hex;
  }
  return out;
}

void write_potential(const std::filesystem::path& path, const Potential& potential) {
  const SpectralGrid grid(potential.a(), potential.b(), potential.table_size());
  const ComplexVector table(potential.table().begin(), potential.table().end());
  write_field(path, WaveField(grid, table, 0.0), 0.0);
}

Potential read_potential(const std::filesystem::path& path) {
  const StoredField stored = read_field(path);
  const auto& g = stored.field.grid();
  return Potential::custom(g.a(), g.b(), ComplexVector(stored.field.coeffs().begin(), stored.field.coeffs().end()));
}

void StudyConfig::validate() const {
  base.nonlinearity.validate();
  base.quad.validate();
  check_alpha(base.alpha);
  if (!(base.t_final > 0.0)) throw std::invalid_argument("study: t_final must be positive");
  if (mode != StudyMode::converge_time && mode != StudyMode::converge_space) {
    throw std::invalid_argument("study: mode must be converge-time or converge-space");
  }
  if (ladder.size() < 3) throw std::invalid_argument("study: ladder needs at least 3 points");
  const bool increasing = ladder[1] > ladder[0];
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (increasing ? !(ladder[i] > ladder[i - 1]) : !(ladder[i] < ladder[i - 1])) {
      throw std::invalid_argument("study: ladder must be strictly monotone");
    }
  }
  if (!(reference.tau > 0.0)) throw std::invalid_argument("study: reference tau must be positive");
  (void)SpectralGrid(kDomainA, kDomainB, reference.n);
  if (mode == StudyMode::converge_time) {
    const double tau_min = *std::min_element(ladder.begin(), ladder.end());
    if (!(tau_min > 0.0)) throw std::invalid_argument("study: ladder time steps must be positive");
    if (reference.tau > tau_min / 10.0 * (1.0 + 1e-12)) {
      throw std::invalid_argument("study: reference tau must be <= min ladder tau / 10");
    }
  } else {
    for (double v : ladder) {
      if (v != std::floor(v) || v < 2 || static_cast<std::size_t>(v) % 2 != 0) {
        throw std::invalid_argument("study: spatial ladder entries must be even integers, got " + num(v));
      }
      if (2 * static_cast<std::size_t>(v) > reference.n) {
        throw std::invalid_argument("study: reference N must be >= 2 x every ladder N");
      }
    }
  }
}

std::size_t StudyConfig::finest_n() const {
  std::size_t n = reference.n;
  if (mode == StudyMode::converge_space) {
    for (double v : ladder) n = std::max(n, static_cast<std::size_t>(v));
  }
  return n;
}

bool ConvergenceReport::any_blow_up() const noexcept {
  for (bool f : failed) {
    if (f) return true;
  }
  return false;
}

std::uint64_t reference_key(const StudyConfig& config, const ReferenceSpec& reference) {
  std::ostringstream os;
  os << "sfnls-ref-v1"
     << "|alpha=" << num(config.base.alpha) << "|beta=" << num(config.base.nonlinearity.beta)
     << "|sigma=" << num(config.base.nonlinearity.sigma) << "|potential=" << config.potential.canonical()
     << "|table=" << 2 * config.finest_n() << "|initial=" << to_string(config.initial)
     << "|integrator=" << to_string(reference.integrator) << "|tau=" << num(reference.tau) << "|n=" << reference.n
     << "|t_final=" << num(config.base.t_final) << "|k_factor=" << config.base.quad.k_factor;
  return fnv1a64(os.str());
}

WaveField cached_reference(const StudyConfig& config, const ReferenceSpec& reference,
                           std::shared_ptr<const Potential> potential, bool* from_cache) {
  const FieldCache cache(config.cache_dir);
  const std::uint64_t key = reference_key(config, reference);
  if (auto hit = cache.load(key)) {
    if (from_cache) *from_cache = true;
    return *hit;
  }
  SolverConfig solver = config.base;
  solver.potential = std::move(potential);
  solver.tau = reference.tau;
  solver.integrator = reference.integrator;
  const SpectralGrid grid(kDomainA, kDomainB, reference.n);
  const WaveField result = evolve_final(make_initial(config.initial, config.base.alpha, grid), solver);
  cache.store(key, result, config.base.alpha);
  if (from_cache) *from_cache = false;
  return result;
}

ConvergenceReport run_convergence_study(const StudyConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const bool temporal = config.mode == StudyMode::converge_time;
  const double alpha = config.base.alpha;
  const auto potential = config.potential.build(config.finest_n());

  ConvergenceReport report;
  report.expected = config.expected;
  report.reference_key = reference_key(config, config.reference);
  const WaveField reference = cached_reference(config, config.reference, potential, &report.reference_from_cache);

  double floor_l2 = 0.0, floor_energy = 0.0;
  double ref_err_l2 = std::nan(""), ref_err_energy = std::nan("");
  if (temporal && config.estimate_reference_error) {
    ReferenceSpec coarse = config.reference;
    coarse.tau *= 2.0;
    const WaveField rough = cached_reference(config, coarse, potential);
    const double order = config.reference.integrator == IntegratorKind::strang_fp ? 2.0 : 1.0;
    const ErrorPair diff = error_pair(rough, reference, alpha);
    ref_err_l2 = diff.e_l2 / (std::pow(2.0, order) - 1.0);
    ref_err_energy = diff.e_h_alpha_half / (std::pow(2.0, order) - 1.0);
    floor_l2 = kContaminationFactor * ref_err_l2;
    floor_energy = kContaminationFactor * ref_err_energy;
  }

  const std::size_t count = config.ladder.size();
  report.samples.resize(count);
  std::vector<char> failed(count, 0);
  const WaveField fine_initial =
      make_initial(config.initial, alpha, SpectralGrid(kDomainA, kDomainB, config.reference.n));
  std::vector<std::string> failures(count);
  parallel_for(count, [&](std::size_t i) {
    SolverConfig solver = config.base;
    solver.potential = potential;
    ErrorSample& sample = report.samples[i];
    sample.t = config.base.t_final;
    WaveField initial = fine_initial;
    if (temporal) {
      solver.tau = config.ladder[i];
      sample.refinement = solver.tau;
    } else {
      const auto n = static_cast<std::size_t>(config.ladder[i]);
      solver.tau = config.reference.tau;
      initial = project(fine_initial, n);
      sample.refinement = initial.grid().h();
    }
    try {
      const WaveField result = evolve_final(initial, solver);
      const ErrorPair e = error_pair(result, reference, alpha);
      sample.e_l2 = e.e_l2;
      sample.e_h_alpha_half = e.e_h_alpha_half;
    } catch (const BlowUpError& e) {
      failed[i] = 1;
      failures[i] = e.what();
      sample.e_l2 = sample.e_h_alpha_half = std::nan("");
    }
  });

  report.failed.assign(failed.begin(), failed.end());
  const double expected_l2 = temporal ? config.expected.temporal_l2 : config.expected.spatial_l2;
  const double expected_energy = temporal ? config.expected.temporal_energy : config.expected.spatial_energy;
  report.l2 = evaluate_norm(report.samples, NormKind::l2, expected_l2, floor_l2, config.tolerance);
  report.energy = evaluate_norm(report.samples, NormKind::energy, expected_energy, floor_energy, config.tolerance);
  report.discarded.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    report.discarded[i] = report.failed[i] || is_discarded(report.samples[i], NormKind::l2, floor_l2) ||
                          is_discarded(report.samples[i], NormKind::energy, floor_energy);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  char key_hex[20];
  std::snprintf(key_hex, sizeof key_hex, "%016llx", static_cast<unsigned long long>(report.reference_key));
  auto& m = report.metadata;
  m = {
      {"mode", std::string(to_string(config.mode))},
      {"alpha", num(alpha)},
      {"beta", num(config.base.nonlinearity.beta)},
      {"sigma", num(config.base.nonlinearity.sigma)},
      {"potential", config.potential.canonical()},
      {"potential_seed", std::to_string(config.potential.seed)},
      {"initial", std::string(to_string(config.initial))},
      {"integrator", std::string(to_string(config.base.integrator))},
      {"k_factor", std::to_string(config.base.quad.k_factor)},
      {"t_final", num(config.base.t_final)},
      {"ladder", join(config.ladder)},
      {"reference_integrator", std::string(to_string(config.reference.integrator))},
      {"reference_tau", num(config.reference.tau)},
      {"reference_n", std::to_string(config.reference.n)},
      {"reference_key", key_hex},
      {"reference_error_l2", num(ref_err_l2)},
      {"reference_error_energy", num(ref_err_energy)},
      {"expected_m", num(config.expected.m)},
      {"tolerance", num(config.tolerance)},
      {"format_version", std::to_string(kFieldFormatVersion)},
  };
  for (std::size_t i = 0; i < count; ++i) {
    if (report.failed[i]) m.emplace_back("failure_" + std::to_string(i), failures[i]);
  }
  return report;
}

void emit_report(const ConvergenceReport& report, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto open = [&](const char* name) {
    std::ofstream os(directory / name, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + (directory / name).string());
    return os;
  };
  {
    auto os = open("errors.csv");
    os << "refinement,e_l2,e_h_alpha_half,discarded_flag\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
      const auto& s = report.samples[i];
      os << num(s.refinement) << ',' << num(s.e_l2) << ',' << num(s.e_h_alpha_half) << ','
         << (report.discarded.size() > i && report.discarded[i] ? 1 : 0) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + (directory / "errors.csv").string());
  }
  {
    auto os = open("fit.csv");
    os << "norm,slope,intercept,r2,expected,verdict\n";
    for (const NormResult* r : {&report.l2, &report.energy}) {
      const double nan = std::nan("");
      os << to_string(r->norm) << ',' << num(r->fit ? r->fit->slope : nan) << ','
         << num(r->fit ? r->fit->intercept : nan) << ',' << num(r->fit ? r->fit->r_squared : nan) << ','
         << num(r->expected) << ',' << to_string(r->verdict) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + (directory / "fit.csv").string());
  }
  {
    auto os = open("meta.txt");
    for (const auto& [key, value] : report.metadata) os << key << '=' << value << '\n';
    os << "reference_from_cache=" << (report.reference_from_cache ? "yes" : "no") << '\n';
    os << "wall_seconds=" << num(report.wall_seconds) << '\n';
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "timestamp=" << stamp << '\n';
    if (!os) throw std::runtime_error("write failed: " + (directory / "meta.txt").string());
  }
}

std::vector<ErrorSample> parse_errors_csv(const std::filesystem::path& path, double t) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "refinement,e_l2,e_h_alpha_half,discarded_flag") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<ErrorSample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[4];
    for (auto& c : cell) {
      if (!std::getline(row, c, ',')) throw std::runtime_error(path.string() + ": short row '" + line + "'");
    }
    out.push_back({std::stod(cell[0]), std::stod(cell[1]), std::stod(cell[2]), t});
  }
  return out;
}

void write_snapshots_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "t,x,abs_psi\n";
  char buf[96];
  for (const auto& snap : trajectory.snapshots) {
    const auto& g = snap.field.grid();
    const ComplexVector values = inverse_dft(snap.field.coeffs(), g);
    for (std::size_t j = 0; j < values.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", snap.time, g.x(j), std::abs(values[j]));
      os << buf;
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sfnls
