#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfnls/field_io.hpp"
#include "sfnls/integrators.hpp"
#include "sfnls/verification.hpp"

namespace sfnls {

enum class StudyMode { converge_time, converge_space, simulate, verify };
std::string_view to_string(StudyMode mode);

/// How to build the potential once the finest resolution of a study is known.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  std::uint64_t seed = 1;
  std::size_t draw_modes = std::size_t{1} << 18;
  std::filesystem::path file;  // custom tables only

  /// Table covering T_{2 n_max} on (-16, 16), or the table stored in `file`.
  std::shared_ptr<const Potential> build(std::size_t n_max) const;
  /// Canonical text of every field that changes the potential.
  std::string canonical() const;
};

void write_potential(const std::filesystem::path& path, const Potential& potential);
Potential read_potential(const std::filesystem::path& path);

struct ReferenceSpec {
  IntegratorKind integrator = IntegratorKind::strang_fp;
  double tau = 1e-5;
  std::size_t n = 1024;
};

/// A temporal study fixes N = reference.n and varies tau over the ladder; a
/// spatial study fixes tau = reference.tau and varies N over the ladder.
struct StudyConfig {
  SolverConfig base;  // alpha, nonlinearity, t_final, ladder integrator, quadrature
  StudyMode mode = StudyMode::converge_time;
  std::vector<double> ladder;
  ReferenceSpec reference;
  PotentialSpec potential;
  InitialKind initial = InitialKind::gaussian;
  ExpectedOrders expected;
  double tolerance = 0.15;
  std::filesystem::path cache_dir = "sfnls_cache";
  /// Temporal studies: estimate the reference's own error from a second
  /// reference at 2 tau_ref and discard ladder points within 10x of it.
  bool estimate_reference_error = true;

  void validate() const;
  std::size_t finest_n() const;
};

enum class Verdict { pass, fail, floor };
std::string_view to_string(Verdict verdict);

struct NormResult {
  NormKind norm = NormKind::l2;
  std::optional<OrderFit> fit;
  double expected = 0.0;
  double contamination_floor = 0.0;
  Verdict verdict = Verdict::floor;
};

struct ConvergenceReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ErrorSample> samples;
  std::vector<bool> discarded;
  std::vector<bool> failed;
  NormResult l2;
  NormResult energy;
  ExpectedOrders expected;
  std::uint64_t reference_key = 0;
  bool reference_from_cache = false;
  double wall_seconds = 0.0;

  bool any_fail() const noexcept { return l2.verdict == Verdict::fail || energy.verdict == Verdict::fail; }
  bool any_blow_up() const noexcept;
};

/// Hash over every input that shapes a reference trajectory.
std::uint64_t reference_key(const StudyConfig& config, const ReferenceSpec& reference);

/// Loads the reference for `key` or computes and stores it.
/// `from_cache` reports which path was taken.
WaveField cached_reference(const StudyConfig& config, const ReferenceSpec& reference,
                           std::shared_ptr<const Potential> potential, bool* from_cache = nullptr);

ConvergenceReport run_convergence_study(const StudyConfig& config);

/// Writes errors.csv, fit.csv and meta.txt into `directory`.
void emit_report(const ConvergenceReport& report, const std::filesystem::path& directory);

/// Reads errors.csv back; `t` fills ErrorSample::t, which the table omits.
std::vector<ErrorSample> parse_errors_csv(const std::filesystem::path& path, double t);

/// Writes |psi(x_j, t)| for every snapshot with header `t,x,abs_psi`.
void write_snapshots_csv(const Trajectory& trajectory, const std::filesystem::path& path);

}  // namespace sfnls
