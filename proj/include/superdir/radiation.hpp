#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "superdir/array_model.hpp"
#include "superdir/quadrature.hpp"

namespace superdir {

struct ImpedanceOptions {
  /// Diagonal loading δ ≥ 0 added as δ·I after integration.
  double loading = 0.0;
  /// Recompute at twice the quadrature density and require every entry to
  /// agree to `certify_tolerance`.
  bool certify = false;
  double certify_tolerance = 1e-10;
};

/// Normalized radiated-power matrix Z (real part of the mutual impedance,
/// dimensionless). aᵀ Z a* is the mean radiated intensity of excitation a.
struct ImpedanceMatrix {
  Eigen::MatrixXd values;
  /// λ_max / λ_min of `values`; infinity when λ_min ≤ 0.
  double condition_number = 0.0;
  double loading = 0.0;
  /// Identifies the (geometry, pattern, quadrature) that produced the matrix.
  std::uint64_t geometry_hash = 0;
  /// Identifies (geometry, pattern) only; used to reject mismatched inputs.
  std::uint64_t array_hash = 0;

  int size() const noexcept { return static_cast<int>(values.rows()); }
};

/// Largest imaginary part tolerated before the real part is taken.
inline constexpr double kImaginaryResidueTolerance = 1e-10;

/// z_mn = (1/4π) ∮ |k|² exp(j k r̂·r_m) exp(-j k r̂·r_n) dΩ by quadrature.
///
/// The result is symmetrized and its real part kept. An element pattern that
/// is not mirror-symmetric about the xy-plane produces a genuinely complex
/// Hermitian matrix; that case is rejected with AccuracyError.
ImpedanceMatrix impedance_matrix(const ArrayGeometry& geometry, const ElementPattern& pattern,
                                 const SphereQuadrature& quadrature = {},
                                 const ImpedanceOptions& options = {});

/// Hash shared by every impedance matrix of this (geometry, pattern) pair.
std::uint64_t array_fingerprint(const ArrayGeometry& geometry, const ElementPattern& pattern);

/// λ_max / λ_min of a symmetric matrix; infinity when λ_min ≤ 0.
double condition_number(const Eigen::MatrixXd& symmetric);

/// aᵀ Z a*.
double radiated_power(const Eigen::MatrixXd& z, const Eigen::VectorXcd& excitation);

/// |aᵀ e(θ0, φ0)|² / (aᵀ Z a*).
double directivity(const ArrayGeometry& geometry, const ElementPattern& pattern,
                   const ImpedanceMatrix& z, const Eigen::VectorXcd& excitation, double theta0,
                   double phi0);

/// Rayleigh quotient |aᵀ e|² / (aᵀ Z a*) for a precomputed steering vector.
double rayleigh_quotient(const Eigen::MatrixXd& z, const Eigen::VectorXcd& e,
                         const Eigen::VectorXcd& excitation);

}  // namespace superdir
