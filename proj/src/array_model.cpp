#include "superdir/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "superdir/errors.hpp"
#include "hash.hpp"

namespace superdir {

namespace {

// Below this sin(ψ) the half-wave dipole is taken at its on-axis limit of 0.
constexpr double kAxisEpsilon = 1e-12;
// Slack allowed on θ ∈ [0, π] for values produced by floating-point angle math.
constexpr double kThetaSlack = 1e-12;

}  // namespace

Eigen::Vector3d unit_direction(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

ArrayGeometry::ArrayGeometry(int element_count, double spacing) : spacing_(spacing) {
  if (element_count < 1) {
    throw DomainError("array needs at least one element, got " + std::to_string(element_count));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("element spacing must be positive and finite");
  }
  positions_.reserve(static_cast<std::size_t>(element_count));
  for (int m = 0; m < element_count; ++m) {
    positions_.emplace_back(0.0, 0.0, m * spacing);
  }
}

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::isotropic:
      return "isotropic";
    case PatternKind::hertzian_dipole:
      return "hertzian-dipole";
    case PatternKind::half_wave_dipole:
      return "half-wave-dipole";
    case PatternKind::sampled:
      return "sampled";
  }
  return "unknown";
}

PatternKind parse_pattern_kind(std::string_view name) {
  for (auto kind : {PatternKind::isotropic, PatternKind::hertzian_dipole,
                    PatternKind::half_wave_dipole, PatternKind::sampled}) {
    if (name == to_string(kind)) return kind;
  }
  throw DomainError("unknown element pattern '" + std::string(name) + "'");
}

ElementPattern ElementPattern::isotropic() {
  return ElementPattern(PatternKind::isotropic, Eigen::Vector3d::UnitX());
}

ElementPattern ElementPattern::hertzian_dipole(const Eigen::Vector3d& axis) {
  if (!(axis.norm() > 0.0)) throw DomainError("dipole axis must be nonzero");
  return ElementPattern(PatternKind::hertzian_dipole, axis.normalized());
}

ElementPattern ElementPattern::half_wave_dipole(const Eigen::Vector3d& axis) {
  if (!(axis.norm() > 0.0)) throw DomainError("dipole axis must be nonzero");
  return ElementPattern(PatternKind::half_wave_dipole, axis.normalized());
}

ElementPattern ElementPattern::sampled(int theta_count, int phi_count, std::vector<cd> values) {
  if (theta_count < 2 || phi_count < 1) {
    throw DomainError("sampled pattern needs at least 2 theta rows and 1 phi column");
  }
  if (values.size() != static_cast<std::size_t>(theta_count) * static_cast<std::size_t>(phi_count)) {
    throw DimensionError("sampled pattern expects " + std::to_string(theta_count * phi_count) +
                         " values, got " + std::to_string(values.size()));
  }
  ElementPattern p(PatternKind::sampled, Eigen::Vector3d::UnitX());
  p.theta_count_ = theta_count;
  p.phi_count_ = phi_count;
  p.samples_ = std::move(values);
  return p;
}

ElementPattern ElementPattern::from_kind(PatternKind kind) {
  switch (kind) {
    case PatternKind::isotropic:
      return isotropic();
    case PatternKind::hertzian_dipole:
      return hertzian_dipole();
    case PatternKind::half_wave_dipole:
      return half_wave_dipole();
    case PatternKind::sampled:
      break;
  }
  throw DomainError("a sampled pattern cannot be built from its kind alone");
}

cd ElementPattern::operator()(double theta, double phi) const {
  if (!(theta >= -kThetaSlack && theta <= kPi + kThetaSlack)) {
    throw OutOfDomainError("theta = " + std::to_string(theta) + " rad is outside [0, pi]");
  }
  switch (kind_) {
    case PatternKind::isotropic:
      return 1.0;
    case PatternKind::hertzian_dipole: {
      const double c = unit_direction(theta, phi).dot(axis_);
      return std::sqrt(std::max(0.0, 1.0 - c * c));
    }
    case PatternKind::half_wave_dipole: {
      const double c = unit_direction(theta, phi).dot(axis_);
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      if (s < kAxisEpsilon) return 0.0;
      return std::cos(0.5 * kPi * c) / s;
    }
    case PatternKind::sampled:
      return interpolate(std::clamp(theta, 0.0, kPi), phi);
  }
  return 0.0;
}

cd ElementPattern::interpolate(double theta, double phi) const {
  const double dtheta = kPi / (theta_count_ - 1);
  const double dphi = 2.0 * kPi / phi_count_;

  double u = theta / dtheta;
  int i0 = std::min(static_cast<int>(std::floor(u)), theta_count_ - 2);
  const double ft = u - i0;

  double wrapped = std::fmod(phi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  double v = wrapped / dphi;
  int j0 = static_cast<int>(std::floor(v)) % phi_count_;
  const double fp = v - std::floor(v);
  const int j1 = (j0 + 1) % phi_count_;

  auto at = [&](int i, int j) { return samples_[static_cast<std::size_t>(i * phi_count_ + j)]; };
  const cd lower = (1.0 - fp) * at(i0, j0) + fp * at(i0, j1);
  const cd upper = (1.0 - fp) * at(i0 + 1, j0) + fp * at(i0 + 1, j1);
  return (1.0 - ft) * lower + ft * upper;
}

std::uint64_t ElementPattern::fingerprint() const {
  std::uint64_t h = static_cast<std::uint64_t>(kind_) + 1;
  for (int i = 0; i < 3; ++i) h = detail::hash_mix(h, axis_[i]);
  h = detail::hash_mix(h, static_cast<std::uint64_t>(theta_count_));
  h = detail::hash_mix(h, static_cast<std::uint64_t>(phi_count_));
  for (const cd& v : samples_) {
    h = detail::hash_mix(h, v.real());
    h = detail::hash_mix(h, v.imag());
  }
  return h;
}

SteeringVector steering_vector(const ArrayGeometry& geometry, const ElementPattern& pattern,
                               double theta, double phi) {
  const cd k = pattern(theta, phi);
  const Eigen::Vector3d r_hat = unit_direction(theta, phi);
  SteeringVector e{Eigen::VectorXcd(geometry.size()), Direction{theta, phi}};
  for (int m = 0; m < geometry.size(); ++m) {
    e.values[m] = k * std::polar(1.0, kWaveNumber * r_hat.dot(geometry.position(m)));
  }
  return e;
}

cd evaluate_array_pattern(const ArrayGeometry& geometry, const ElementPattern& pattern,
                          const Eigen::VectorXcd& excitation, double theta, double phi) {
  if (excitation.size() != geometry.size()) {
    throw DimensionError("excitation has " + std::to_string(excitation.size()) +
                         " entries for a " + std::to_string(geometry.size()) + "-element array");
  }
  const auto e = steering_vector(geometry, pattern, theta, phi);
  return (excitation.transpose() * e.values)(0);
}

}  // namespace superdir
