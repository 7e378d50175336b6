// superdir: superdirective ULA synthesis from the command line.
//
// Exit codes: 0 ok, 1 usage, 2 data (unreadable or malformed input files),
// 3 numerical (singular, ill-sampled or inaccurate computation).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "superdir/beamform.hpp"
#include "superdir/coupling.hpp"
#include "superdir/errors.hpp"
#include "superdir/io.hpp"
#include "superdir/radiation.hpp"
#include "superdir/swe.hpp"
#include "superdir/sweep.hpp"

using namespace superdir;

namespace {

constexpr double kDegree = kPi / 180.0;
constexpr double kSpeedOfLight = 299792458.0;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

std::string dbi(double linear) {
  if (!(linear > 0.0)) return "-inf dBi";
  return io::format_short(10.0 * std::log10(linear)) + " dBi";
}

/// Left-aligned columns, padded to the widest cell.
void print_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    std::cout << line << '\n';
  }
}

/// "identity", "synthetic[:g,b]", "file:<path>" or a bare path.
CouplingMatrix resolve_coupling(const std::string& text, int antennas) {
  CouplingSpec spec;
  try {
    spec = CouplingSpec::parse(text);
  } catch (const DataError&) {
    spec.kind = CouplingSpec::Kind::file;
    spec.path = text;
  }
  switch (spec.kind) {
    case CouplingSpec::Kind::identity:
      return CouplingMatrix::identity(antennas);
    case CouplingSpec::Kind::synthetic:
      return parametric_coupling(antennas, spec.gamma, spec.beta);
    case CouplingSpec::Kind::file:
      break;
  }
  auto c = io::read_coupling_csv_file(spec.path);
  if (c.size() != antennas) {
    throw DataError(spec.path + ": coupling matrix is " + std::to_string(c.size()) + "x" +
                    std::to_string(c.size()) + " but the array has " + std::to_string(antennas) +
                    " elements");
  }
  return c;
}

struct ArrayOptions {
  int antennas = 2;
  double spacing = 0.1;
  std::string pattern = "half-wave-dipole";
  double loading = 0.0;
  int quad_theta = SphereQuadrature::kDefaultThetaNodes;
  int quad_phi = SphereQuadrature::kDefaultPhiNodes;

  void add_to(CLI::App& app) {
    app.add_option("-M,--antennas", antennas, "Number of elements")->capture_default_str();
    app.add_option("-d,--spacing", spacing, "Element spacing in wavelengths")->capture_default_str();
    app.add_option("--pattern", pattern, "isotropic, hertzian-dipole or half-wave-dipole")
        ->capture_default_str();
    app.add_option("--loading", loading, "Diagonal loading added to Z")->capture_default_str();
    app.add_option("--quadrature-theta", quad_theta, "Gauss-Legendre nodes in cos(theta)")
        ->capture_default_str();
    app.add_option("--quadrature-phi", quad_phi, "Uniform nodes in phi")->capture_default_str();
  }

  ArrayGeometry geometry() const { return ArrayGeometry(antennas, spacing); }
  ElementPattern element() const { return ElementPattern::from_kind(parse_pattern_kind(pattern)); }
  SphereQuadrature quadrature() const { return SphereQuadrature(quad_theta, quad_phi); }
};

/// Truncation from exactly one of: explicit N, radius in wavelengths, radius
/// in metres (with a frequency), or array spacing for `elements` elements.
struct TruncationOptions {
  std::optional<int> truncation;
  std::optional<double> radius;
  std::optional<double> radius_m;
  std::optional<double> spacing;
  double frequency = 845e6;

  void add_to(CLI::App& app, bool with_spacing) {
    auto* n = app.add_option("-N,--truncation", truncation, "Truncation degree N");
    auto* r = app.add_option("--radius", radius, "Enclosing radius in wavelengths (N = ceil(2 pi r) + 10)");
    auto* rm = app.add_option("--radius-m", radius_m, "Enclosing radius in metres, scaled by --frequency");
    app.add_option("--frequency", frequency, "Frequency in Hz for --radius-m")->capture_default_str();
    n->excludes(r)->excludes(rm);
    r->excludes(rm);
    if (with_spacing) {
      auto* d = app.add_option("--spacing", spacing, "Array spacing in wavelengths; radius from the array extent");
      d->excludes(n)->excludes(r)->excludes(rm);
    }
  }

  int resolve(int elements) const {
    if (truncation) {
      if (*truncation < 1) throw DomainError("truncation must be >= 1");
      return *truncation;
    }
    if (radius) return truncation_degree(*radius);
    if (radius_m) {
      if (!(frequency > 0.0)) throw DomainError("frequency must be > 0");
      return truncation_degree(*radius_m * frequency / kSpeedOfLight);
    }
    if (spacing) return default_coupling_truncation(ArrayGeometry(elements, *spacing));
    throw CLI::RequiredError("one of --truncation, --radius, --radius-m" +
                             std::string(elements > 0 ? " or --spacing" : ""));
  }
};

int run_impedance(const ArrayOptions& array, bool certify, const std::string& out) {
  const auto geometry = array.geometry();
  ImpedanceOptions opts;
  opts.loading = array.loading;
  opts.certify = certify;
  const auto z = impedance_matrix(geometry, array.element(), array.quadrature(), opts);

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < z.size(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < z.size(); ++j) row.push_back(io::format_short(z.values(i, j)));
    rows.push_back(std::move(row));
  }
  print_table(rows);
  std::cout << "cond(Z) = " << io::format_short(z.condition_number) << '\n';
  if (certify) std::cout << "certified against the refined quadrature\n";

  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw DataError("cannot open '" + out + "' for writing");
    f << "row,col,value\n";
    for (int i = 0; i < z.size(); ++i)
      for (int j = 0; j < z.size(); ++j) f << i + 1 << ',' << j + 1 << ',' << io::format_double(z.values(i, j)) << '\n';
  }
  return kOk;
}

struct BeamformOptions {
  ArrayOptions array;
  double theta0 = 0.0;
  double phi0 = 0.0;
  std::string coupling = "identity";
  double efficiency = 1.0;
  bool gain_optimal = false;
  std::string out;
};

int run_beamform(const BeamformOptions& o) {
  const auto geometry = o.array.geometry();
  const auto pattern = o.array.element();
  ImpedanceOptions opts;
  opts.loading = o.array.loading;
  const auto z = impedance_matrix(geometry, pattern, o.array.quadrature(), opts);
  const auto e = steering_vector(geometry, pattern, o.theta0 * kDegree, o.phi0 * kDegree);
  const auto c = resolve_coupling(o.coupling, geometry.size());
  loss_resistance(o.efficiency);  // validates η before any solve

  const auto uncoupled = optimal_beamforming(z, e);
  BeamformingSolution sol = uncoupled;
  if (o.gain_optimal) {
    sol = gain_optimal_beamforming(z, c, e, o.efficiency);
  } else if (c.source() != CouplingSource::identity) {
    sol = coupled_beamforming(z, c, e);
  }
  const double d = coupled_directivity(z, c, e, sol.excitation);
  const double g = gain(z, c, e, sol.excitation, o.efficiency);

  std::cout << "array      M = " << geometry.size() << ", d = " << io::format_short(geometry.spacing())
            << " wavelengths, " << to_string(pattern.kind()) << '\n'
            << "steering   theta0 = " << io::format_short(o.theta0) << " deg, phi0 = " << io::format_short(o.phi0)
            << " deg\n"
            << "coupling   " << o.coupling << '\n'
            << "mode       " << to_string(sol.mode) << '\n'
            << "cond(Z)    " << io::format_short(z.condition_number)
            << (sol.ill_conditioned() ? "  (ill-conditioned)" : "") << "\n\n";

  // Scaled so the strongest element reads 1 at 0 degrees; the CSV keeps the
  // unit-power normalization.
  Eigen::Index strongest = 0;
  sol.excitation.cwiseAbs().maxCoeff(&strongest);
  const cd ref = sol.excitation[strongest];
  std::vector<std::vector<std::string>> rows{{"element", "re", "im", "magnitude", "phase_deg"}};
  for (Eigen::Index m = 0; m < sol.excitation.size(); ++m) {
    const cd v = sol.excitation[m] / ref;
    rows.push_back({std::to_string(m + 1), io::format_short(v.real()), io::format_short(v.imag()),
                    io::format_short(std::abs(v)), io::format_short(std::arg(v) / kDegree)});
  }
  print_table(rows);
  std::cout << '\n';
  print_table({
      {"Dmax (uncoupled)", io::format_short(uncoupled.directivity), dbi(uncoupled.directivity)},
      {"directivity", io::format_short(d), dbi(d)},
      {"gain (eta = " + io::format_short(o.efficiency) + ")", io::format_short(g), dbi(g)},
  });
  if (o.efficiency < 1.0) std::cout << "r_loss = " << io::format_short(loss_resistance(o.efficiency)) << '\n';

  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw DataError("cannot open '" + o.out + "' for writing");
    f << "element,re,im\n";
    for (Eigen::Index m = 0; m < sol.excitation.size(); ++m) {
      f << m + 1 << ',' << io::format_double(sol.excitation[m].real()) << ','
        << io::format_double(sol.excitation[m].imag()) << '\n';
    }
  }
  return kOk;
}

int run_sweep_command(const std::string& config, const std::vector<std::pair<std::string, std::string>>& overrides,
                      const std::string& out, std::optional<unsigned> threads) {
  SweepSpec spec;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw DataError("cannot open '" + config + "' for reading");
    try {
      spec = SweepSpec::from_config(in);
    } catch (const DataError& e) {
      throw DataError(config + ": " + e.what());
    }
  }
  for (const auto& [key, value] : overrides) spec.set(key, value);

  const auto rows = run_sweep(spec, threads.value_or(thread_count_from_env()));
  for (const auto& r : rows) {
    if (!r.ok) std::cerr << "warning: d = " << io::format_short(r.spacing) << ": " << r.note << '\n';
  }
  if (out.empty()) {
    write_sweep_csv(std::cout, rows);
    return kOk;
  }
  std::ofstream f(out);
  if (!f) throw DataError("cannot open '" + out + "' for writing");
  write_sweep_csv(f, rows);

  std::vector<std::vector<std::string>> table{{"spacing", "dmax", "dmax_dBi", "d_traditional", "d_coupled", "gain", "cond_z"}};
  for (const auto& r : rows) {
    table.push_back({io::format_short(r.spacing), io::format_short(r.dmax), dbi(r.dmax),
                     io::format_short(r.d_traditional), io::format_short(r.d_coupled), io::format_short(r.gain),
                     io::format_short(r.cond_z)});
  }
  print_table(table);
  std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
  return kOk;
}

int run_swe_fit(const std::string& input, const TruncationOptions& trunc, const std::string& out) {
  const auto samples = io::read_field_csv_file(input);
  const int n = trunc.resolve(0);
  const auto q = fit_wave_coefficients(samples, n);
  std::ofstream f(out);
  if (!f) throw DataError("cannot open '" + out + "' for writing");
  io::write_coefficient_csv(f, q);

  const double total = q.coefficients.squaredNorm();
  std::vector<std::vector<std::string>> table{{"n", "power_fraction"}};
  std::vector<double> per_degree(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j < q.coefficients.size(); ++j) per_degree[static_cast<std::size_t>(SweIndex::from_flat(j).n)] += std::norm(q.coefficients[j]);
  for (int deg = 1; deg <= std::min(n, 5); ++deg) {
    table.push_back({std::to_string(deg), io::format_short(total > 0 ? per_degree[static_cast<std::size_t>(deg)] / total : 0.0)});
  }
  std::cout << "samples   " << samples.size() << "\nN         " << n << "\nmodes     " << mode_count(n)
            << "\nresidual  " << io::format_short(q.residual) << "\n\n";
  print_table(table);
  return kOk;
}

int run_coupling_estimate(const std::vector<std::string>& isolated_paths, const std::vector<std::string>& active_paths,
                          const TruncationOptions& trunc, const std::string& out) {
  if (isolated_paths.size() != active_paths.size()) {
    throw CLI::ValidationError("--isolated and --active need the same number of files");
  }
  ElementFieldLibrary lib;
  for (const auto& p : isolated_paths) lib.isolated.push_back(io::read_field_csv_file(p));
  for (const auto& p : active_paths) lib.active.push_back(io::read_field_csv_file(p));
  lib.validate();

  const int elements = static_cast<int>(lib.isolated.size());
  const int n = trunc.resolve(elements);
  const SweFitter fitter(lib.isolated.front().directions, n);
  const auto c = estimate_coupling(build_coefficient_set(lib.isolated, fitter),
                                   build_coefficient_set(lib.active, fitter));
  io::write_coupling_csv_file(out, c);

  std::vector<std::vector<std::string>> table;
  for (int i = 0; i < elements; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < elements; ++j) {
      const cd v = c.values()(i, j);
      row.push_back(io::format_short(v.real()) + (v.imag() < 0 ? "-" : "+") + io::format_short(std::abs(v.imag())) + "j");
    }
    table.push_back(std::move(row));
  }
  std::cout << "N = " << n << ", " << elements << " elements, " << fitter.directions().size() << " directions\n";
  print_table(table);
  char residual[32];
  std::snprintf(residual, sizeof residual, "%.3e", c.estimation_residual());
  std::cout << "residual " << residual << '\n';
  return kOk;
}

struct SynthOptions {
  ArrayOptions array;
  std::string coupling = "synthetic";
  std::optional<int> truncation;
  std::string out_dir = ".";
};

int run_coupling_synth(const SynthOptions& o) {
  const auto geometry = o.array.geometry();
  const auto pattern = o.array.element();
  const auto c = resolve_coupling(o.coupling, geometry.size());
  const int n = o.truncation.value_or(default_coupling_truncation(geometry));
  if (n < 1) throw DomainError("truncation must be >= 1");
  const auto grid = default_sampling_grid(n);
  const auto isolated = isolated_fields_synthetic(geometry, pattern, grid);
  const auto active = synthesize_coupled_fields(isolated, c);

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  for (int m = 0; m < geometry.size(); ++m) {
    const auto tag = std::to_string(m + 1) + ".csv";
    io::write_field_csv_file((dir / ("isolated_" + tag)).string(), isolated[static_cast<std::size_t>(m)]);
    io::write_field_csv_file((dir / ("active_" + tag)).string(), active[static_cast<std::size_t>(m)]);
  }
  io::write_coupling_csv_file((dir / "coupling_true.csv").string(), c);
  std::cout << "wrote " << 2 * geometry.size() << " field files (" << grid.size()
            << " directions each) and coupling_true.csv to " << dir.string() << '\n'
            << "grid sized for N = " << n << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superdirective uniform linear array synthesis"};
  app.require_subcommand(1);
  int status = kOk;

  // impedance
  auto* impedance = app.add_subcommand("impedance", "Normalized impedance matrix Z of an array");
  ArrayOptions imp_array;
  bool certify = false;
  std::string imp_out;
  imp_array.add_to(*impedance);
  impedance->add_flag("--certify", certify, "Re-check Z against a quadrature of twice the density");
  impedance->add_option("-o,--output", imp_out, "Write Z as CSV row,col,value");
  impedance->callback([&] { status = run_impedance(imp_array, certify, imp_out); });

  // beamform
  auto* beamform = app.add_subcommand("beamform", "Optimal excitation and directivity for one configuration");
  BeamformOptions bf;
  bf.array.add_to(*beamform);
  beamform->add_option("--theta0", bf.theta0, "Steering polar angle in degrees")->capture_default_str();
  beamform->add_option("--phi0", bf.phi0, "Steering azimuth in degrees")->capture_default_str();
  beamform->add_option("--coupling", bf.coupling, "identity, synthetic[:gamma,beta], file:<csv> or a CSV path")
      ->capture_default_str();
  beamform->add_option("--efficiency", bf.efficiency, "Radiation efficiency in (0, 1]")->capture_default_str();
  beamform->add_flag("--gain-optimal", bf.gain_optimal, "Maximize gain under --efficiency instead of directivity");
  beamform->add_option("-o,--output", bf.out, "Write the unit-power excitation as CSV element,re,im");
  beamform->callback([&] { status = run_beamform(bf); });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Directivity and gain over a range of spacings");
  std::string config;
  std::string sweep_out;
  std::optional<unsigned> threads;
  sweep->add_option("config", config, "key = value configuration file")->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", sweep_out, "Write CSV here and print a table (default: CSV on stdout)");
  sweep->add_option("--threads", threads, "Worker threads (default: SUPERDIR_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  // Every config key is also a flag; flags win over the file.
  const std::vector<std::pair<std::string, std::string>> sweep_keys{
      {"antennas", "Number of elements"},
      {"pattern", "isotropic, hertzian-dipole or half-wave-dipole"},
      {"spacing", "start:stop:steps in wavelengths"},
      {"spacing_start", "First spacing"},
      {"spacing_stop", "Last spacing"},
      {"spacing_steps", "Number of spacings"},
      {"theta0", "Steering polar angle in degrees"},
      {"phi0", "Steering azimuth in degrees"},
      {"efficiency", "Radiation efficiency in (0, 1]"},
      {"coupling", "identity, file:<csv> or synthetic[:gamma,beta]"},
      {"estimate_coupling", "true: beamform with C estimated through spherical waves"},
      {"quadrature_theta", "Gauss-Legendre nodes in cos(theta)"},
      {"quadrature_phi", "Uniform nodes in phi"},
      {"truncation", "Spherical-wave truncation for estimated coupling"},
      {"loading", "Diagonal loading added to Z"},
  };
  std::vector<std::string> sweep_values(sweep_keys.size());
  std::vector<CLI::Option*> sweep_flags;
  for (std::size_t i = 0; i < sweep_keys.size(); ++i) {
    std::string flag = "--" + sweep_keys[i].first;
    std::replace(flag.begin(), flag.end(), '_', '-');
    sweep_flags.push_back(sweep->add_option(flag, sweep_values[i], sweep_keys[i].second));
  }
  sweep->callback([&] {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (std::size_t i = 0; i < sweep_keys.size(); ++i) {
      if (sweep_flags[i]->count() > 0) overrides.emplace_back(sweep_keys[i].first, sweep_values[i]);
    }
    status = run_sweep_command(config, overrides, sweep_out, threads);
  });

  // swe fit
  auto* swe = app.add_subcommand("swe", "Spherical wave expansion");
  swe->require_subcommand(1);
  auto* fit = swe->add_subcommand("fit", "Fit wave coefficients to a field CSV");
  std::string fit_in;
  std::string fit_out;
  TruncationOptions fit_trunc;
  fit->add_option("input", fit_in, "Field CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("-o,--output", fit_out, "Coefficient CSV")->required();
  fit_trunc.add_to(*fit, false);
  fit->callback([&] { status = run_swe_fit(fit_in, fit_trunc, fit_out); });

  // coupling estimate / synth
  auto* coupling = app.add_subcommand("coupling", "Coupling matrix estimation and synthetic fields");
  coupling->require_subcommand(1);
  auto* estimate = coupling->add_subcommand("estimate", "Estimate C from isolated and active field CSVs");
  std::vector<std::string> isolated_paths;
  std::vector<std::string> active_paths;
  std::string est_out;
  TruncationOptions est_trunc;
  estimate->add_option("--isolated", isolated_paths, "Isolated-element field CSVs, element order")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--active", active_paths, "Active-element field CSVs, element order")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("-o,--output", est_out, "Coupling CSV")->required();
  est_trunc.add_to(*estimate, true);
  estimate->callback([&] { status = run_coupling_estimate(isolated_paths, active_paths, est_trunc, est_out); });

  auto* synth = coupling->add_subcommand("synth", "Write synthetic isolated and active field CSVs");
  SynthOptions so;
  so.array.add_to(*synth);
  synth->add_option("--coupling", so.coupling, "identity, synthetic[:gamma,beta], file:<csv> or a CSV path")
      ->capture_default_str();
  synth->add_option("-N,--truncation", so.truncation, "Size the sampling grid for this N (default from the array)");
  synth->add_option("--out-dir", so.out_dir, "Output directory")->capture_default_str();
  synth->callback([&] { status = run_coupling_synth(so); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const ConditioningError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const AccuracyError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InsufficientSamplingError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DegenerateInputError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  return status;
}
