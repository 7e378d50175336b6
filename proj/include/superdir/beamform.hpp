#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "superdir/array_model.hpp"
#include "superdir/coupling.hpp"
#include "superdir/radiation.hpp"

namespace superdir {

enum class BeamformingMode {
  uncoupled,
  coupled,
  /// Maximizes gain under loss instead of directivity. Not part of the
  /// directivity-optimal family; selected explicitly.
  gain_optimal,
};

std::string_view to_string(BeamformingMode mode);

/// Above this condition number of Z a solution is flagged ill-conditioned.
inline constexpr double kIllConditionedThreshold = 1e12;

/// Excitation scaled to unit radiated power: aᵀ Z a* = 1 (uncoupled) or
/// (C b)ᵀ Z (C b)* = 1 (coupled).
struct BeamformingSolution {
  Eigen::VectorXcd excitation;
  double directivity = 0.0;
  Direction direction;
  BeamformingMode mode = BeamformingMode::uncoupled;
  double condition_number_z = 0.0;
  double loss_resistance = 0.0;

  bool ill_conditioned() const noexcept { return condition_number_z > kIllConditionedThreshold; }
};

/// a ∝ Z⁻¹ e*, D_max = eᴴ Z⁻¹ e. Throws SingularMatrixError when Z cannot be
/// factored.
BeamformingSolution optimal_beamforming(const ImpedanceMatrix& z, const SteeringVector& e);

/// b ∝ C⁻¹ Z⁻¹ e*; directivity evaluated through the coupled model.
BeamformingSolution coupled_beamforming(const ImpedanceMatrix& z, const CouplingMatrix& c,
                                        const SteeringVector& e);

/// |(C b)ᵀ e|² / ((C b)ᵀ Z (C b)*).
double coupled_directivity(const ImpedanceMatrix& z, const CouplingMatrix& c,
                           const SteeringVector& e, const Eigen::VectorXcd& excitation);

/// r_loss = (1 - η) / η for η ∈ (0, 1].
double loss_resistance(double efficiency);

/// |(C b)ᵀ e|² / ((C b)ᵀ (Z + r_loss I) (C b)*).
double gain(const ImpedanceMatrix& z, const CouplingMatrix& c, const SteeringVector& e,
            const Eigen::VectorXcd& excitation, double efficiency);

/// b ∝ C⁻¹ (Z + r_loss I)⁻¹ e*, normalized like coupled_beamforming. Its
/// `directivity` field holds the gain it attains.
BeamformingSolution gain_optimal_beamforming(const ImpedanceMatrix& z, const CouplingMatrix& c,
                                             const SteeringVector& e, double efficiency);

}  // namespace superdir
