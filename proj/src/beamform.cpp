#include "superdir/beamform.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "superdir/errors.hpp"

namespace superdir {

namespace {

// Z is treated as singular beyond this condition number (~ 1 / (20 eps)).
constexpr double kSingularThreshold = 2e14;

void check_sizes(const ImpedanceMatrix& z, const SteeringVector& e) {
  if (z.size() != e.size()) {
    throw DimensionError("impedance matrix is " + std::to_string(z.size()) +
                         "x" + std::to_string(z.size()) + " but steering vector has " +
                         std::to_string(e.size()) + " entries");
  }
}

void check_sizes(const ImpedanceMatrix& z, const CouplingMatrix& c, const SteeringVector& e) {
  check_sizes(z, e);
  if (c.size() != z.size()) {
    throw DimensionError("coupling matrix is " + std::to_string(c.size()) + "x" +
                         std::to_string(c.size()) + " for a " + std::to_string(z.size()) +
                         "-element array");
  }
}

/// Solves (Z + shift I) x = rhs by Cholesky, falling back to full-pivot LU
/// when the matrix is not numerically positive definite.
Eigen::VectorXcd solve_symmetric(const Eigen::MatrixXd& z, double condition,
                                 const Eigen::VectorXcd& rhs) {
  if (!(condition < kSingularThreshold)) {
    throw SingularMatrixError("impedance matrix is singular to working precision (condition " +
                                  std::to_string(condition) + ")",
                              condition);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(z);
  if (llt.info() == Eigen::Success) return llt.solve(rhs.real()).cast<cd>() +
                                           cd(0.0, 1.0) * llt.solve(rhs.imag()).cast<cd>();
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(z.cast<cd>());
  if (!lu.isInvertible()) {
    throw SingularMatrixError("impedance matrix is singular", condition);
  }
  return lu.solve(rhs);
}

Eigen::VectorXcd solve_coupling(const CouplingMatrix& c, const Eigen::VectorXcd& rhs) {
  if (c.source() == CouplingSource::identity) return rhs;
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(c.values());
  const double rcond = lu.rcond();
  if (!lu.isInvertible() || !(rcond > std::numeric_limits<double>::epsilon())) {
    throw CouplingSingularError("coupling matrix is singular (reciprocal condition " +
                                    std::to_string(rcond) + ")",
                                rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
  }
  return lu.solve(rhs);
}

double loaded_quotient(const Eigen::MatrixXd& z, double r_loss, const CouplingMatrix& c,
                       const SteeringVector& e, const Eigen::VectorXcd& excitation) {
  if (excitation.size() != z.rows()) {
    throw DimensionError("excitation has " + std::to_string(excitation.size()) + " entries for a " +
                         std::to_string(z.rows()) + "-element array");
  }
  const Eigen::VectorXcd driven = c.values() * excitation;
  if (r_loss == 0.0) return rayleigh_quotient(z, e.values, driven);
  Eigen::MatrixXd loaded = z;
  loaded.diagonal().array() += r_loss;
  return rayleigh_quotient(loaded, e.values, driven);
}

}  // namespace

std::string_view to_string(BeamformingMode mode) {
  switch (mode) {
    case BeamformingMode::uncoupled:
      return "uncoupled";
    case BeamformingMode::coupled:
      return "coupled";
    case BeamformingMode::gain_optimal:
      return "gain-optimal";
  }
  return "unknown";
}

BeamformingSolution optimal_beamforming(const ImpedanceMatrix& z, const SteeringVector& e) {
  check_sizes(z, e);
  const Eigen::VectorXcd x = solve_symmetric(z.values, z.condition_number, e.values.conjugate());
  // D_max = eᴴ Z⁻¹ e = (Z⁻¹ e*)ᵀ e, real up to roundoff
  const double d_max = (x.transpose() * e.values)(0).real();
  if (!(d_max > 0.0)) {
    throw ConditioningError("maximum directivity evaluated to " + std::to_string(d_max),
                            z.condition_number);
  }
  BeamformingSolution out;
  out.excitation = x / std::sqrt(d_max);
  out.directivity = d_max;
  out.direction = e.direction;
  out.mode = BeamformingMode::uncoupled;
  out.condition_number_z = z.condition_number;
  return out;
}

BeamformingSolution coupled_beamforming(const ImpedanceMatrix& z, const CouplingMatrix& c,
                                        const SteeringVector& e) {
  check_sizes(z, c, e);
  const BeamformingSolution uncoupled = optimal_beamforming(z, e);
  BeamformingSolution out = uncoupled;
  out.excitation = solve_coupling(c, uncoupled.excitation);
  out.mode = BeamformingMode::coupled;
  out.directivity = coupled_directivity(z, c, e, out.excitation);
  return out;
}

double coupled_directivity(const ImpedanceMatrix& z, const CouplingMatrix& c,
                           const SteeringVector& e, const Eigen::VectorXcd& excitation) {
  check_sizes(z, c, e);
  return loaded_quotient(z.values, 0.0, c, e, excitation);
}

double loss_resistance(double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw DomainError("radiation efficiency must lie in (0, 1], got " + std::to_string(efficiency));
  }
  return (1.0 - efficiency) / efficiency;
}

double gain(const ImpedanceMatrix& z, const CouplingMatrix& c, const SteeringVector& e,
            const Eigen::VectorXcd& excitation, double efficiency) {
  check_sizes(z, c, e);
  return loaded_quotient(z.values, loss_resistance(efficiency), c, e, excitation);
}

BeamformingSolution gain_optimal_beamforming(const ImpedanceMatrix& z, const CouplingMatrix& c,
                                             const SteeringVector& e, double efficiency) {
  check_sizes(z, c, e);
  const double r_loss = loss_resistance(efficiency);
  Eigen::MatrixXd loaded = z.values;
  loaded.diagonal().array() += r_loss;
  const Eigen::VectorXcd x = solve_symmetric(loaded, condition_number(loaded), e.values.conjugate());
  const Eigen::VectorXcd a = x / std::sqrt(radiated_power(z.values, x));

  BeamformingSolution out;
  out.excitation = solve_coupling(c, a);
  out.mode = BeamformingMode::gain_optimal;
  out.direction = e.direction;
  out.condition_number_z = z.condition_number;
  out.loss_resistance = r_loss;
  out.directivity = loaded_quotient(z.values, r_loss, c, e, out.excitation);
  return out;
}

}  // namespace superdir
