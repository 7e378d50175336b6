#include "superdir/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "superdir/beamform.hpp"
#include "superdir/errors.hpp"
#include "superdir/io.hpp"
#include "superdir/radiation.hpp"

namespace superdir {

namespace {

constexpr double kDegree = kPi / 180.0;

double to_double(const std::string& value, const std::string& key) {
  try {
    return io::parse_double(value, 0);
  } catch (const DataError&) {
    throw DataError("'" + key + "' expects a number, got '" + value + "'");
  }
}

int to_int(const std::string& value, const std::string& key) {
  try {
    return io::parse_int(value, 0);
  } catch (const DataError&) {
    throw DataError("'" + key + "' expects an integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DataError("'" + key + "' expects true or false, got '" + value + "'");
}

}  // namespace

CouplingSpec CouplingSpec::parse(const std::string& text) {
  CouplingSpec spec;
  if (text == "identity") return spec;
  if (text.rfind("file:", 0) == 0) {
    spec.kind = Kind::file;
    spec.path = text.substr(5);
    if (spec.path.empty()) throw DataError("coupling 'file:' needs a path");
    return spec;
  }
  if (text == "synthetic") {
    spec.kind = Kind::synthetic;
    return spec;
  }
  if (text.rfind("synthetic:", 0) == 0) {
    spec.kind = Kind::synthetic;
    const std::string params = text.substr(10);
    const auto comma = params.find(',');
    if (comma == std::string::npos) throw DataError("synthetic coupling expects 'synthetic:<gamma>,<beta>'");
    spec.gamma = to_double(params.substr(0, comma), "coupling gamma");
    spec.beta = to_double(params.substr(comma + 1), "coupling beta");
    return spec;
  }
  throw DataError("coupling must be identity, file:<path> or synthetic[:<gamma>,<beta>], got '" + text + "'");
}

std::string CouplingSpec::describe() const {
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::file:
      return "file:" + path;
    case Kind::synthetic:
      return "synthetic:" + io::format_double(gamma) + "," + io::format_double(beta);
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (antennas < 1) throw DomainError("antennas must be >= 1");
  if (pattern == PatternKind::sampled) throw DomainError("sweeps support analytic element patterns only");
  if (!(spacing_start > 0.0)) throw DomainError("spacing_start must be > 0");
  if (!(spacing_stop > 0.0)) throw DomainError("spacing_stop must be > 0");
  if (spacing_steps < 1) throw DomainError("spacing_steps must be >= 1");
  if (!(theta0_deg >= 0.0 && theta0_deg <= 180.0)) throw DomainError("theta0 must lie in [0, 180] degrees");
  if (!std::isfinite(phi0_deg)) throw DomainError("phi0 must be finite");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw DomainError("efficiency must lie in (0, 1]");
  if (quadrature_theta < 1 || quadrature_phi < 1) throw DomainError("quadrature sizes must be >= 1");
  if (truncation && *truncation < 1) throw DomainError("truncation must be >= 1");
  if (!(loading >= 0.0)) throw DomainError("loading must be >= 0");
  if (coupling.kind == CouplingSpec::Kind::synthetic && !(coupling.gamma > 0.0 && coupling.gamma < 1.0)) {
    throw DomainError("synthetic coupling gamma must lie in (0, 1)");
  }
  if (coupling.estimate && coupling.kind != CouplingSpec::Kind::synthetic) {
    throw DomainError("estimate_coupling applies to synthetic coupling only");
  }
}

std::vector<double> SweepSpec::spacings() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spacing_steps));
  if (spacing_steps == 1) {
    out.push_back(spacing_start);
    return out;
  }
  const double step = (spacing_stop - spacing_start) / (spacing_steps - 1);
  for (int i = 0; i < spacing_steps; ++i) {
    out.push_back(i + 1 == spacing_steps ? spacing_stop : spacing_start + i * step);
  }
  if (step < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

void SweepSpec::set_spacing_range(const std::string& range) {
  const auto first = range.find(':');
  const auto second = first == std::string::npos ? std::string::npos : range.find(':', first + 1);
  if (second == std::string::npos) throw DataError("spacing range must be 'start:stop:steps', got '" + range + "'");
  spacing_start = to_double(range.substr(0, first), "spacing start");
  spacing_stop = to_double(range.substr(first + 1, second - first - 1), "spacing stop");
  spacing_steps = to_int(range.substr(second + 1), "spacing steps");
}

void SweepSpec::set(const std::string& key, const std::string& value) {
  if (key == "antennas") {
    antennas = to_int(value, key);
  } else if (key == "pattern") {
    try {
      pattern = parse_pattern_kind(value);
    } catch (const DomainError& e) {
      throw DataError(e.what());
    }
  } else if (key == "spacing") {
    set_spacing_range(value);
  } else if (key == "spacing_start") {
    spacing_start = to_double(value, key);
  } else if (key == "spacing_stop") {
    spacing_stop = to_double(value, key);
  } else if (key == "spacing_steps") {
    spacing_steps = to_int(value, key);
  } else if (key == "theta0") {
    theta0_deg = to_double(value, key);
  } else if (key == "phi0") {
    phi0_deg = to_double(value, key);
  } else if (key == "efficiency") {
    efficiency = to_double(value, key);
  } else if (key == "coupling") {
    const bool estimate = coupling.estimate;
    coupling = CouplingSpec::parse(value);
    coupling.estimate = estimate;
  } else if (key == "estimate_coupling") {
    coupling.estimate = to_bool(value, key);
  } else if (key == "quadrature_theta") {
    quadrature_theta = to_int(value, key);
  } else if (key == "quadrature_phi") {
    quadrature_phi = to_int(value, key);
  } else if (key == "truncation") {
    truncation = to_int(value, key);
  } else if (key == "loading") {
    loading = to_double(value, key);
  } else {
    throw DataError("unknown key '" + key + "'");
  }
}

SweepSpec SweepSpec::from_config(std::istream& in) {
  SweepSpec spec;
  for (const auto& [key, entry] : io::read_key_values(in)) {
    try {
      spec.set(key, entry.first);
    } catch (const DataError& e) {
      throw DataError(e.what(), entry.second);
    }
  }
  return spec;
}

SweepRow evaluate_sweep_point(const SweepSpec& spec, const CouplingMatrix* file_coupling,
                              double spacing) {
  SweepRow row;
  row.spacing = spacing;
  try {
    const ArrayGeometry geometry(spec.antennas, spacing);
    const ElementPattern pattern = ElementPattern::from_kind(spec.pattern);
    const ImpedanceMatrix z = impedance_matrix(geometry, pattern,
                                               SphereQuadrature(spec.quadrature_theta, spec.quadrature_phi),
                                               ImpedanceOptions{.loading = spec.loading});
    row.cond_z = z.condition_number;
    const SteeringVector e = steering_vector(geometry, pattern, spec.theta0_deg * kDegree, spec.phi0_deg * kDegree);

    CouplingMatrix truth = CouplingMatrix::identity(spec.antennas);
    switch (spec.coupling.kind) {
      case CouplingSpec::Kind::identity:
        break;
      case CouplingSpec::Kind::file:
        if (!file_coupling) throw DataError("file coupling was not loaded");
        if (file_coupling->size() != spec.antennas) {
          throw DataError("coupling file is " + std::to_string(file_coupling->size()) + "x" +
                          std::to_string(file_coupling->size()) + " for " +
                          std::to_string(spec.antennas) + " antennas");
        }
        truth = *file_coupling;
        break;
      case CouplingSpec::Kind::synthetic:
        truth = parametric_coupling(spec.antennas, spec.coupling.gamma, spec.coupling.beta);
        break;
    }
    const CouplingMatrix used =
        spec.coupling.estimate
            ? estimate_synthetic_coupling(geometry, pattern, truth,
                                          spec.truncation.value_or(default_coupling_truncation(geometry)))
            : truth;

    const BeamformingSolution traditional = optimal_beamforming(z, e);
    const BeamformingSolution compensated = coupled_beamforming(z, used, e);
    row.dmax = traditional.directivity;
    row.d_traditional = coupled_directivity(z, truth, e, traditional.excitation);
    row.d_coupled = coupled_directivity(z, truth, e, compensated.excitation);
    row.gain = gain(z, truth, e, compensated.excitation, spec.efficiency);
  } catch (const Error& err) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.ok = false;
    row.note = err.what();
    row.dmax = row.d_traditional = row.d_coupled = row.gain = nan;
    if (row.cond_z == 0.0) row.cond_z = nan;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  std::optional<CouplingMatrix> file_coupling;
  if (spec.coupling.kind == CouplingSpec::Kind::file) {
    file_coupling = io::read_coupling_csv_file(spec.coupling.path);
  }
  const auto spacings = spec.spacings();
  std::vector<SweepRow> rows(spacings.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spacings.size(); i = next++) {
      rows[i] = evaluate_sweep_point(spec, file_coupling ? &*file_coupling : nullptr, spacings[i]);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(spacings.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "spacing,dmax,d_traditional,d_coupled,gain,cond_z\n";
  for (const auto& r : rows) {
    out << io::format_double(r.spacing) << ',' << io::format_double(r.dmax) << ','
        << io::format_double(r.d_traditional) << ',' << io::format_double(r.d_coupled) << ','
        << io::format_double(r.gain) << ',' << io::format_double(r.cond_z) << '\n';
  }
}

unsigned thread_count_from_env() {
  if (const char* env = std::getenv("SUPERDIR_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace superdir
