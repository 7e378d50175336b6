#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "superdir/array_model.hpp"

namespace superdir {

/// Normalized associated Legendre functions at one angle, for 0 ≤ m ≤ n ≤ N.
///
/// P̄ is normalized so that ∫₋₁¹ P̄ₙᵐ(x)² dx = 1 and carries no
/// Condon-Shortley phase. Alongside P̄ the table holds P̄/sin θ (m ≥ 1) and
/// dP̄/dθ, both computed without dividing by sin θ so they stay finite and
/// exact at the poles.
class LegendreTable {
 public:
  LegendreTable(int max_degree, double theta);

  int max_degree() const noexcept { return max_degree_; }
  double value(int n, int m) const { return value_[index(n, m)]; }
  /// P̄ₙᵐ(cos θ) / sin θ; zero for m = 0 (only ever used multiplied by m).
  double over_sin(int n, int m) const { return over_sin_[index(n, m)]; }
  double dtheta(int n, int m) const { return dtheta_[index(n, m)]; }

 private:
  static std::size_t index(int n, int m) {
    return static_cast<std::size_t>(n * (n + 1) / 2 + m);
  }

  int max_degree_;
  std::vector<double> value_;
  std::vector<double> over_sin_;
  std::vector<double> dtheta_;
};

/// Spherical-wave mode (s, m, n): s = 1 TE, s = 2 TM, 1 ≤ n, |m| ≤ n.
///
/// Flattened order runs s fastest, then m, then n:
/// (1,-1,1), (2,-1,1), (1,0,1), (2,0,1), (1,1,1), (2,1,1), (1,-2,2), ...
struct SweIndex {
  int s = 1;
  int m = 0;
  int n = 1;

  /// Throws IndexError for s ∉ {1, 2}, n < 1 or |m| > n.
  void validate() const;
  int flat() const noexcept { return 2 * (n * (n + 1) + m - 1) + (s - 1); }
  static SweIndex from_flat(int j);

  friend bool operator==(const SweIndex&, const SweIndex&) = default;
};

/// Number of modes 2N(N + 2) retained at truncation degree N.
constexpr int mode_count(int truncation) { return 2 * truncation * (truncation + 2); }

/// Truncation rule N = ceil(2π r₀) + 10 for an enclosing radius r₀ in
/// wavelengths.
int truncation_degree(double enclosing_radius);

/// Far-field samples: directions and the interleaved vector
/// [E_θ(d₁), E_φ(d₁), E_θ(d₂), E_φ(d₂), ...].
struct FieldSampleSet {
  std::vector<Direction> directions;
  Eigen::VectorXcd values;

  int size() const noexcept { return static_cast<int>(directions.size()); }
  cd theta_component(int p) const { return values[2 * p]; }
  cd phi_component(int p) const { return values[2 * p + 1]; }

  /// Throws DimensionError on a length mismatch, DegenerateInputError on
  /// repeated directions.
  void validate() const;
};

struct WaveCoefficientSet {
  Eigen::VectorXcd coefficients;
  int truncation = 0;
  /// ‖K̄ q - ε‖ / ‖ε‖ of the fit that produced the set (0 when built directly).
  double residual = 0.0;

  cd operator[](const SweIndex& index) const { return coefficients[index.flat()]; }
};

/// (K_θ, K_φ) of the normalized spherical wave function. With the P̄
/// normalization of LegendreTable the functions are orthonormal under the
/// mean over the sphere.
std::array<cd, 2> eval_spherical_wave_function(const SweIndex& index, double theta, double phi);

/// K̄ of size 2P x 2N(N+2): rows interleave (θ, φ) per direction, columns
/// follow SweIndex::flat.
Eigen::MatrixXcd basis_matrix(const std::vector<Direction>& directions, int truncation);

/// Equiangular fitting grid: (2N + 2) θ-rows at cell centers (poles excluded)
/// by (4N + 4) φ-columns.
std::vector<Direction> default_sampling_grid(int truncation);

/// Least-squares fitter for one direction grid and truncation. Holds the SVD
/// of K̄ so several fields on the same grid share one factorization.
class SweFitter {
 public:
  /// Throws InsufficientSamplingError when 2P < 2N(N+2) and ConditioningError
  /// (with the effective rank) when K̄ is rank deficient.
  SweFitter(std::vector<Direction> directions, int truncation);

  int truncation() const noexcept { return truncation_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }
  int effective_rank() const noexcept { return rank_; }
  const Eigen::MatrixXcd& basis() const noexcept { return basis_; }

  /// Fails with DimensionError when `samples` lives on another grid.
  WaveCoefficientSet fit(const FieldSampleSet& samples) const;
  /// Fits every column of a 2P x K matrix of interleaved fields.
  Eigen::MatrixXcd fit_columns(const Eigen::MatrixXcd& fields) const;

 private:
  std::vector<Direction> directions_;
  int truncation_;
  Eigen::MatrixXcd basis_;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd_;
  int rank_ = 0;
};

WaveCoefficientSet fit_wave_coefficients(const FieldSampleSet& samples, int truncation);

/// E(θ, φ) = Σ Q_smn K_smn(θ, φ) in normalized units.
FieldSampleSet reconstruct_field(const WaveCoefficientSet& coefficients,
                                 const std::vector<Direction>& directions);

}  // namespace superdir
