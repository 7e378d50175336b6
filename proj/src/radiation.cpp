#include "superdir/radiation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "hash.hpp"
#include "superdir/errors.hpp"

namespace superdir {

namespace {

Eigen::MatrixXcd integrate_power_matrix(const ArrayGeometry& geometry, const ElementPattern& pattern,
                                        const SphereQuadrature& quadrature) {
  const int m = geometry.size();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd row_sum(m, m);
  for (int i = 0; i < quadrature.theta_count(); ++i) {
    const double theta = quadrature.theta_nodes()[static_cast<std::size_t>(i)].theta;
    row_sum.setZero();
    for (int j = 0; j < quadrature.phi_count(); ++j) {
      const auto e = steering_vector(geometry, pattern, theta, quadrature.phi(j));
      row_sum.noalias() += e.values * e.values.adjoint();
    }
    total += quadrature.weight(i) * row_sum;
  }
  return total;
}

}  // namespace

std::uint64_t array_fingerprint(const ArrayGeometry& geometry, const ElementPattern& pattern) {
  std::uint64_t h = pattern.fingerprint();
  h = detail::hash_mix(h, static_cast<std::uint64_t>(geometry.size()));
  return detail::hash_mix(h, geometry.spacing());
}

double condition_number(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

ImpedanceMatrix impedance_matrix(const ArrayGeometry& geometry, const ElementPattern& pattern,
                                 const SphereQuadrature& quadrature,
                                 const ImpedanceOptions& options) {
  if (!(options.loading >= 0.0) || !std::isfinite(options.loading)) {
    throw DomainError("diagonal loading must be a finite value >= 0");
  }

  const Eigen::MatrixXcd raw = integrate_power_matrix(geometry, pattern, quadrature);
  const double residue = raw.imag().cwiseAbs().maxCoeff();
  if (residue > kImaginaryResidueTolerance) {
    throw AccuracyError("impedance integral has imaginary residue " + std::to_string(residue) +
                        "; the element pattern is not symmetric about the array's broadside plane");
  }

  ImpedanceMatrix z;
  z.values = 0.5 * (raw.real() + raw.real().transpose());

  if (options.certify) {
    const Eigen::MatrixXcd fine = integrate_power_matrix(geometry, pattern, quadrature.refined());
    const Eigen::MatrixXd fine_real = 0.5 * (fine.real() + fine.real().transpose());
    const double change = (fine_real - z.values).cwiseAbs().maxCoeff();
    if (!(change < options.certify_tolerance)) {
      throw AccuracyError("quadrature " + std::to_string(quadrature.theta_count()) + "x" +
                          std::to_string(quadrature.phi_count()) +
                          " is too coarse: doubling it changed Z by " + std::to_string(change));
    }
  }

  z.values.diagonal().array() += options.loading;
  z.loading = options.loading;
  z.condition_number = condition_number(z.values);
  z.array_hash = array_fingerprint(geometry, pattern);
  std::uint64_t h = detail::hash_mix(z.array_hash, static_cast<std::uint64_t>(quadrature.theta_count()));
  h = detail::hash_mix(h, static_cast<std::uint64_t>(quadrature.phi_count()));
  z.geometry_hash = detail::hash_mix(h, options.loading);
  return z;
}

double radiated_power(const Eigen::MatrixXd& z, const Eigen::VectorXcd& excitation) {
  if (excitation.size() != z.rows()) {
    throw DimensionError("excitation has " + std::to_string(excitation.size()) +
                         " entries, impedance matrix is " + std::to_string(z.rows()) + "x" +
                         std::to_string(z.cols()));
  }
  // aᵀ Z a* = (a*)ᴴ Z (a*)
  const Eigen::VectorXcd conj = excitation.conjugate();
  return (conj.adjoint() * z.cast<cd>() * conj)(0).real();
}

double rayleigh_quotient(const Eigen::MatrixXd& z, const Eigen::VectorXcd& e,
                         const Eigen::VectorXcd& excitation) {
  if (e.size() != z.rows() || excitation.size() != z.rows()) {
    throw DimensionError("steering vector, excitation and impedance matrix sizes differ");
  }
  if (excitation.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInputError("directivity of a zero excitation is undefined");
  }
  const double power = radiated_power(z, excitation);
  if (!(power > 0.0)) {
    throw ConditioningError("radiated power aT Z a* = " + std::to_string(power) +
                                " is not positive",
                            std::numeric_limits<double>::infinity());
  }
  return std::norm((excitation.transpose() * e)(0)) / power;
}

double directivity(const ArrayGeometry& geometry, const ElementPattern& pattern,
                   const ImpedanceMatrix& z, const Eigen::VectorXcd& excitation, double theta0,
                   double phi0) {
  if (z.array_hash != array_fingerprint(geometry, pattern)) {
    throw DimensionError("impedance matrix was computed for a different array or pattern");
  }
  const auto e = steering_vector(geometry, pattern, theta0, phi0);
  return rayleigh_quotient(z.values, e.values, excitation);
}

}  // namespace superdir
