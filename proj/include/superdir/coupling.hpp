#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "superdir/array_model.hpp"
#include "superdir/swe.hpp"

namespace superdir {

enum class CouplingSource { identity, estimated, prescribed };

std::string_view to_string(CouplingSource source);

/// Complex M x M matrix C taking uncoupled excitations to the excitations the
/// array actually radiates with: column n is the set of weights c_mn with
/// which element m contributes when element n is driven. Not symmetric in
/// general.
class CouplingMatrix {
 public:
  static CouplingMatrix identity(int element_count);
  static CouplingMatrix prescribed(Eigen::MatrixXcd values);
  static CouplingMatrix estimated(Eigen::MatrixXcd values, double residual);

  const Eigen::MatrixXcd& values() const noexcept { return values_; }
  CouplingSource source() const noexcept { return source_; }
  /// ‖Qs C - Qc‖_F / ‖Qc‖_F for estimated matrices, 0 otherwise.
  double estimation_residual() const noexcept { return residual_; }
  int size() const noexcept { return static_cast<int>(values_.rows()); }

 private:
  CouplingMatrix(Eigen::MatrixXcd values, CouplingSource source, double residual);

  Eigen::MatrixXcd values_;
  CouplingSource source_;
  double residual_;
};

/// Test-fixture coupling c_mn = γ^|m-n| exp(-j β |m-n|), γ ∈ (0, 1).
CouplingMatrix parametric_coupling(int element_count, double gamma, double beta);

/// Per-element field sets on one shared direction grid.
struct ElementFieldLibrary {
  /// Single element moved to each array position, no neighbours.
  std::vector<FieldSampleSet> isolated;
  /// Element m driven inside the full array, others terminated.
  std::vector<FieldSampleSet> active;

  /// Throws DataError unless both lists have the same length and every set
  /// shares the first set's grid.
  void validate() const;
};

/// Polarized far field (E_θ, E_φ) of one element at the origin. Dipoles
/// radiate along the tangential projection of their axis with magnitude
/// |k(θ, φ)|; isotropic and sampled patterns are θ̂-polarized.
std::array<cd, 2> element_field(const ElementPattern& pattern, double theta, double phi);

/// Isolated-element fields: the element field phase-shifted to each position.
std::vector<FieldSampleSet> isolated_fields_synthetic(const ArrayGeometry& geometry,
                                                      const ElementPattern& pattern,
                                                      const std::vector<Direction>& grid);

/// Stacks the wave coefficients of each field as columns (2N(N+2) x M).
Eigen::MatrixXcd build_coefficient_set(const std::vector<FieldSampleSet>& fields, int truncation);
/// Same, reusing an existing fitter for the shared grid.
Eigen::MatrixXcd build_coefficient_set(const std::vector<FieldSampleSet>& fields,
                                       const SweFitter& fitter);

/// Active fields by superposition: active n = Σ_m c_mn isolated m.
std::vector<FieldSampleSet> synthesize_coupled_fields(const std::vector<FieldSampleSet>& isolated,
                                                      const CouplingMatrix& coupling);

/// Least-squares solution of Qs C = Qc, column by column. Throws
/// DegenerateGeometryError when Qs does not have full column rank.
CouplingMatrix estimate_coupling(const Eigen::MatrixXcd& qs, const Eigen::MatrixXcd& qc);

/// l⁽ⁿ⁾(θ, φ) = k(θ, φ) Σ_m c_mn exp(j k r̂·r_m) for a 0-based element n.
cd active_element_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                          const CouplingMatrix& coupling, int element, double theta, double phi);

/// l(θ, φ) = Σ_m Σ_n c_nm a_m k(θ, φ) exp(j k r̂·r_n) = (C a)ᵀ e.
cd coupled_array_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                         const CouplingMatrix& coupling, const Eigen::VectorXcd& excitation,
                         double theta, double phi);

/// Radius of the sphere about the origin enclosing every element, assuming
/// each element fits in a sphere of `element_radius` wavelengths.
double enclosing_radius(const ArrayGeometry& geometry, double element_radius = 0.25);

/// truncation_degree(enclosing_radius(geometry)).
int default_coupling_truncation(const ArrayGeometry& geometry);

/// Full synthetic pipeline: isolated fields on the default grid, active
/// fields from `truth`, both fitted, C estimated.
CouplingMatrix estimate_synthetic_coupling(const ArrayGeometry& geometry,
                                           const ElementPattern& pattern,
                                           const CouplingMatrix& truth, int truncation);

}  // namespace superdir
