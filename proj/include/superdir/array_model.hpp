#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace superdir {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
/// Free-space wave number with lengths measured in wavelengths.
inline constexpr double kWaveNumber = 2.0 * kPi;

/// Far-field direction in radians.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const Direction&, const Direction&) = default;
};

/// Unit vector r̂(θ, φ).
Eigen::Vector3d unit_direction(double theta, double phi);

/// Uniform linear array on the positive z half-axis, first element at the
/// origin. Lengths in wavelengths.
class ArrayGeometry {
 public:
  ArrayGeometry(int element_count, double spacing);

  int size() const noexcept { return static_cast<int>(positions_.size()); }
  double spacing() const noexcept { return spacing_; }
  const std::vector<Eigen::Vector3d>& positions() const noexcept { return positions_; }
  const Eigen::Vector3d& position(int m) const { return positions_.at(static_cast<std::size_t>(m)); }

  /// Distance from the origin to the farthest element, (M - 1) d.
  double extent() const noexcept { return spacing_ * (size() - 1); }

 private:
  double spacing_;
  std::vector<Eigen::Vector3d> positions_;
};

enum class PatternKind { isotropic, hertzian_dipole, half_wave_dipole, sampled };

std::string_view to_string(PatternKind kind);
/// Accepts "isotropic", "hertzian-dipole", "half-wave-dipole", "sampled".
PatternKind parse_pattern_kind(std::string_view name);

/// Scalar element pattern k(θ, φ).
///
/// Dipole kinds are oriented along `axis` (x by default, perpendicular to the
/// array axis). A sampled pattern lives on an equiangular grid with
/// `theta_count` rows spanning [0, π] inclusive and `phi_count` columns
/// spanning [0, 2π) with wrap-around; values are stored row-major (θ outer)
/// and interpolated bilinearly.
class ElementPattern {
 public:
  static ElementPattern isotropic();
  static ElementPattern hertzian_dipole(const Eigen::Vector3d& axis = Eigen::Vector3d::UnitX());
  static ElementPattern half_wave_dipole(const Eigen::Vector3d& axis = Eigen::Vector3d::UnitX());
  static ElementPattern sampled(int theta_count, int phi_count, std::vector<cd> values);
  /// Analytic kinds only; `sampled` needs grid data.
  static ElementPattern from_kind(PatternKind kind);

  PatternKind kind() const noexcept { return kind_; }
  const Eigen::Vector3d& axis() const noexcept { return axis_; }
  int theta_count() const noexcept { return theta_count_; }
  int phi_count() const noexcept { return phi_count_; }
  const std::vector<cd>& samples() const noexcept { return samples_; }

  /// k(θ, φ). Throws OutOfDomainError for θ outside [0, π].
  cd operator()(double theta, double phi) const;

  /// Stable identifier of the pattern content, used to tie derived matrices
  /// to the pattern that produced them.
  std::uint64_t fingerprint() const;

 private:
  ElementPattern(PatternKind kind, const Eigen::Vector3d& axis) : kind_(kind), axis_(axis) {}

  cd interpolate(double theta, double phi) const;

  PatternKind kind_;
  Eigen::Vector3d axis_;
  int theta_count_ = 0;
  int phi_count_ = 0;
  std::vector<cd> samples_;
};

/// e(θ, φ): entry m is k(θ, φ) exp(j 2π r̂·r_m).
struct SteeringVector {
  Eigen::VectorXcd values;
  Direction direction;

  int size() const noexcept { return static_cast<int>(values.size()); }
};

SteeringVector steering_vector(const ArrayGeometry& geometry, const ElementPattern& pattern,
                               double theta, double phi);

/// Far-field array pattern f(θ, φ) = aᵀ e(θ, φ).
cd evaluate_array_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                          const Eigen::VectorXcd& excitation, double theta, double phi);

}  // namespace superdir
