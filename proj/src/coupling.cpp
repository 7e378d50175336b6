#include "superdir/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "superdir/errors.hpp"

namespace superdir {

std::string_view to_string(CouplingSource source) {
  switch (source) {
    case CouplingSource::identity:
      return "identity";
    case CouplingSource::estimated:
      return "estimated";
    case CouplingSource::prescribed:
      return "prescribed";
  }
  return "unknown";
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXcd values, CouplingSource source, double residual)
    : values_(std::move(values)), source_(source), residual_(residual) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw DimensionError("coupling matrix must be square and non-empty, got " +
                         std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
  }
  if (!values_.allFinite()) throw DomainError("coupling matrix has non-finite entries");
}

CouplingMatrix CouplingMatrix::identity(int element_count) {
  if (element_count < 1) throw DomainError("coupling matrix needs at least one element");
  return CouplingMatrix(Eigen::MatrixXcd::Identity(element_count, element_count),
                        CouplingSource::identity, 0.0);
}

CouplingMatrix CouplingMatrix::prescribed(Eigen::MatrixXcd values) {
  return CouplingMatrix(std::move(values), CouplingSource::prescribed, 0.0);
}

CouplingMatrix CouplingMatrix::estimated(Eigen::MatrixXcd values, double residual) {
  return CouplingMatrix(std::move(values), CouplingSource::estimated, residual);
}

CouplingMatrix parametric_coupling(int element_count, double gamma, double beta) {
  if (element_count < 1) throw DomainError("coupling matrix needs at least one element");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("fixture gamma must lie in (0, 1)");
  if (!std::isfinite(beta)) throw DomainError("fixture beta must be finite");
  Eigen::MatrixXcd c(element_count, element_count);
  for (int m = 0; m < element_count; ++m) {
    for (int n = 0; n < element_count; ++n) {
      const int gap = std::abs(m - n);
      c(m, n) = std::pow(gamma, gap) * std::polar(1.0, -beta * gap);
    }
  }
  return CouplingMatrix::prescribed(std::move(c));
}

void ElementFieldLibrary::validate() const {
  if (isolated.size() != active.size()) {
    throw DataError("got " + std::to_string(isolated.size()) + " isolated and " +
                    std::to_string(active.size()) + " active field sets");
  }
  if (isolated.empty()) throw DataError("element field library is empty");
  const auto& grid = isolated.front().directions;
  auto check = [&](const std::vector<FieldSampleSet>& sets, std::string_view what) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      sets[i].validate();
      if (sets[i].directions != grid) {
        throw DataError(std::string(what) + " field set " + std::to_string(i + 1) +
                        " uses a different direction grid");
      }
    }
  };
  check(isolated, "isolated");
  check(active, "active");
}

std::array<cd, 2> element_field(const ElementPattern& pattern, double theta, double phi) {
  switch (pattern.kind()) {
    case PatternKind::hertzian_dipole:
    case PatternKind::half_wave_dipole: {
      const Eigen::Vector3d& u = pattern.axis();
      const double ct = std::cos(theta);
      const double st = std::sin(theta);
      const double cp = std::cos(phi);
      const double sp = std::sin(phi);
      const double along_theta = u.x() * ct * cp + u.y() * ct * sp - u.z() * st;
      const double along_phi = -u.x() * sp + u.y() * cp;
      const double tangential = std::hypot(along_theta, along_phi);
      if (tangential < 1e-12) return {0.0, 0.0};
      const cd scale = pattern(theta, phi) / tangential;
      return {scale * along_theta, scale * along_phi};
    }
    case PatternKind::isotropic:
    case PatternKind::sampled:
      return {pattern(theta, phi), 0.0};
  }
  return {0.0, 0.0};
}

std::vector<FieldSampleSet> isolated_fields_synthetic(const ArrayGeometry& geometry,
                                                      const ElementPattern& pattern,
                                                      const std::vector<Direction>& grid) {
  std::vector<FieldSampleSet> out(static_cast<std::size_t>(geometry.size()));
  for (auto& set : out) {
    set.directions = grid;
    set.values.resize(2 * static_cast<Eigen::Index>(grid.size()));
  }
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto [theta, phi] = grid[p];
    const auto field = element_field(pattern, theta, phi);
    const Eigen::Vector3d r_hat = unit_direction(theta, phi);
    for (int m = 0; m < geometry.size(); ++m) {
      const cd shift = std::polar(1.0, kWaveNumber * r_hat.dot(geometry.position(m)));
      auto& values = out[static_cast<std::size_t>(m)].values;
      values[2 * static_cast<Eigen::Index>(p)] = shift * field[0];
      values[2 * static_cast<Eigen::Index>(p) + 1] = shift * field[1];
    }
  }
  return out;
}

Eigen::MatrixXcd build_coefficient_set(const std::vector<FieldSampleSet>& fields,
                                       const SweFitter& fitter) {
  if (fields.empty()) throw DimensionError("no field sets to fit");
  Eigen::MatrixXcd stacked(2 * static_cast<Eigen::Index>(fitter.directions().size()),
                           static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    fields[i].validate();
    if (fields[i].directions != fitter.directions()) {
      throw DataError("field set " + std::to_string(i + 1) + " is not on the shared direction grid");
    }
    stacked.col(static_cast<Eigen::Index>(i)) = fields[i].values;
  }
  return fitter.fit_columns(stacked);
}

Eigen::MatrixXcd build_coefficient_set(const std::vector<FieldSampleSet>& fields, int truncation) {
  if (fields.empty()) throw DimensionError("no field sets to fit");
  return build_coefficient_set(fields, SweFitter(fields.front().directions, truncation));
}

std::vector<FieldSampleSet> synthesize_coupled_fields(const std::vector<FieldSampleSet>& isolated,
                                                      const CouplingMatrix& coupling) {
  const auto count = static_cast<std::size_t>(coupling.size());
  if (isolated.size() != count) {
    throw DimensionError(std::to_string(isolated.size()) + " isolated fields for a " +
                         std::to_string(count) + "x" + std::to_string(count) + " coupling matrix");
  }
  const auto& c = coupling.values();
  std::vector<FieldSampleSet> active(count);
  for (std::size_t n = 0; n < count; ++n) {
    active[n].directions = isolated.front().directions;
    active[n].values = Eigen::VectorXcd::Zero(isolated.front().values.size());
    for (std::size_t m = 0; m < count; ++m) {
      if (isolated[m].directions != isolated.front().directions) {
        throw DimensionError("isolated fields do not share one direction grid");
      }
      active[n].values += c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * isolated[m].values;
    }
  }
  return active;
}

CouplingMatrix estimate_coupling(const Eigen::MatrixXcd& qs, const Eigen::MatrixXcd& qc) {
  if (qs.rows() != qc.rows() || qs.cols() != qc.cols() || qs.cols() == 0) {
    throw DimensionError("Qs is " + std::to_string(qs.rows()) + "x" + std::to_string(qs.cols()) +
                         " but Qc is " + std::to_string(qc.rows()) + "x" + std::to_string(qc.cols()));
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(qs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double tolerance = static_cast<double>(std::max(qs.rows(), qs.cols())) *
                           std::numeric_limits<double>::epsilon() * sigma(0);
  const int rank = static_cast<int>((sigma.array() > tolerance).count());
  if (rank < qs.cols()) {
    const double smallest = sigma(sigma.size() - 1);
    throw DegenerateGeometryError(
        "isolated-element coefficients have effective rank " + std::to_string(rank) + " of " +
            std::to_string(qs.cols()) + "; element positions are not distinguishable",
        smallest > 0.0 ? sigma(0) / smallest : std::numeric_limits<double>::infinity(), rank);
  }
  Eigen::MatrixXcd c = svd.solve(qc);
  const double norm = qc.norm();
  const double residual = norm > 0.0 ? (qs * c - qc).norm() / norm : 0.0;
  return CouplingMatrix::estimated(std::move(c), residual);
}

cd active_element_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                          const CouplingMatrix& coupling, int element, double theta, double phi) {
  if (coupling.size() != geometry.size()) {
    throw DimensionError("coupling matrix size does not match the array");
  }
  if (element < 0 || element >= geometry.size()) {
    throw IndexError("element index " + std::to_string(element) + " out of range for " +
                     std::to_string(geometry.size()) + " elements");
  }
  const auto e = steering_vector(geometry, pattern, theta, phi);
  return (coupling.values().col(element).transpose() * e.values)(0);
}

cd coupled_array_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                         const CouplingMatrix& coupling, const Eigen::VectorXcd& excitation,
                         double theta, double phi) {
  if (coupling.size() != geometry.size()) {
    throw DimensionError("coupling matrix size does not match the array");
  }
  if (excitation.size() != geometry.size()) {
    throw DimensionError("excitation length does not match the array");
  }
  return evaluate_array_pattern(geometry, pattern, coupling.values() * excitation, theta, phi);
}

double enclosing_radius(const ArrayGeometry& geometry, double element_radius) {
  return geometry.extent() + element_radius;
}

int default_coupling_truncation(const ArrayGeometry& geometry) {
  return truncation_degree(enclosing_radius(geometry));
}

CouplingMatrix estimate_synthetic_coupling(const ArrayGeometry& geometry,
                                           const ElementPattern& pattern,
                                           const CouplingMatrix& truth, int truncation) {
  const SweFitter fitter(default_sampling_grid(truncation), truncation);
  const auto isolated = isolated_fields_synthetic(geometry, pattern, fitter.directions());
  const auto active = synthesize_coupled_fields(isolated, truth);
  return estimate_coupling(build_coefficient_set(isolated, fitter),
                           build_coefficient_set(active, fitter));
}

}  // namespace superdir
