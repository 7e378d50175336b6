#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "superdir/array_model.hpp"
#include "superdir/coupling.hpp"

namespace superdir {

/// Where a sweep takes its coupling matrix from.
struct CouplingSpec {
  enum class Kind { identity, file, synthetic };

  Kind kind = Kind::identity;
  /// Coupling CSV for Kind::file; the same matrix is applied at every spacing.
  std::string path;
  /// Parametric fixture for Kind::synthetic.
  double gamma = 0.3;
  double beta = 0.5;
  /// Kind::synthetic only: beamform with C estimated from synthesized fields
  /// through the spherical-wave pipeline instead of the fixture itself. The
  /// fixture stays the model the array is evaluated under.
  bool estimate = false;

  /// "identity", "file:<path>", "synthetic" or "synthetic:<gamma>,<beta>".
  static CouplingSpec parse(const std::string& text);
  std::string describe() const;
};

struct SweepSpec {
  int antennas = 2;
  PatternKind pattern = PatternKind::half_wave_dipole;
  double spacing_start = 0.05;
  double spacing_stop = 0.5;
  int spacing_steps = 10;
  double theta0_deg = 0.0;
  double phi0_deg = 0.0;
  double efficiency = 1.0;
  CouplingSpec coupling;
  int quadrature_theta = 64;
  int quadrature_phi = 128;
  /// Spherical-wave truncation for estimated coupling; default from geometry.
  std::optional<int> truncation;
  double loading = 0.0;

  /// Throws DomainError on any violated invariant.
  void validate() const;
  /// spacing_steps points from start to stop inclusive (start only when steps = 1).
  std::vector<double> spacings() const;

  /// Strict `key = value` parse; unknown keys are DataErrors.
  static SweepSpec from_config(std::istream& in);
  /// Applies one key to the spec (shared by the config parser and the CLI).
  void set(const std::string& key, const std::string& value);
  /// Parses "start:stop:steps".
  void set_spacing_range(const std::string& range);
};

struct SweepRow {
  double spacing = 0.0;
  /// eᴴ Z⁻¹ e, the uncoupled maximum.
  double dmax = 0.0;
  /// Uncoupled optimum evaluated in the coupled model.
  double d_traditional = 0.0;
  /// Coupled optimum evaluated in the coupled model.
  double d_coupled = 0.0;
  /// Gain of the coupled optimum under the configured efficiency.
  double gain = 0.0;
  double cond_z = 0.0;
  /// False when the point failed numerically; `note` says why and the
  /// numeric fields are NaN.
  bool ok = true;
  std::string note;
};

/// Evaluates one spacing point; never throws on numerical failure.
SweepRow evaluate_sweep_point(const SweepSpec& spec, const CouplingMatrix* file_coupling,
                              double spacing);

/// Rows in ascending spacing order. Points are distributed over `threads`
/// workers; the output does not depend on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// CSV `spacing,dmax,d_traditional,d_coupled,gain,cond_z`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// SUPERDIR_THREADS when set to a positive integer, else hardware concurrency.
unsigned thread_count_from_env();

}  // namespace superdir
