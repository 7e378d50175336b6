#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "superdir/beamform.hpp"
#include "superdir/errors.hpp"

using namespace superdir;

namespace {

struct Setup {
  ArrayGeometry geometry;
  ElementPattern pattern;
  ImpedanceMatrix z;
  SteeringVector e;

  Setup(int m, double d, ElementPattern p, double theta0, double phi0 = 0.0)
      : geometry(m, d), pattern(std::move(p)), z(impedance_matrix(geometry, pattern)),
        e(steering_vector(geometry, pattern, theta0, phi0)) {}
};

}  // namespace

TEST_CASE("optimal beamforming examples") {
  SUBCASE("single element") {
    const Setup s(1, 0.5, ElementPattern::isotropic(), 0.4);
    const auto sol = optimal_beamforming(s.z, s.e);
    CHECK(std::abs(sol.excitation[0] - 1.0) < 1e-12);
    CHECK(sol.directivity == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("two elements at half wavelength, broadside") {
    const Setup s(2, 0.5, ElementPattern::isotropic(), kPi / 2);
    CHECK(optimal_beamforming(s.z, s.e).directivity == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("two close elements at endfire against the closed-form 2x2 inverse") {
    const Setup s(2, 0.05, ElementPattern::isotropic(), 0.0);
    const double expected = oracle::two_element_endfire_dmax(0.05);
    CHECK(expected == doctest::Approx(3.9735).epsilon(2.5e-4));
    CHECK(std::abs(optimal_beamforming(s.z, s.e).directivity - expected) < 1e-8);
  }
}

TEST_CASE("optimal beamforming is the dominant generalized eigenvector") {
  std::mt19937_64 rng(99);
  for (auto pattern : {ElementPattern::isotropic(), ElementPattern::half_wave_dipole()}) {
    for (int m : {2, 3, 4}) {
      for (double d : {0.08, 0.2, 0.45}) {
        const Setup s(m, d, pattern, 0.0);
        const auto sol = optimal_beamforming(s.z, s.e);
        // unit radiated power and consistency with the radiation module
        CHECK(std::abs(radiated_power(s.z.values, sol.excitation) - 1.0) < 1e-10);
        CHECK(std::abs(directivity(s.geometry, s.pattern, s.z, sol.excitation, 0.0, 0.0) / sol.directivity - 1.0) < 1e-8);

        // brute-force eigensolver on e eᴴ x = D Z x
        const Eigen::MatrixXcd a = s.e.values * s.e.values.adjoint();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(a, s.z.values.cast<cd>());
        const auto& lambda = ges.eigenvalues();
        CHECK(std::abs(lambda.maxCoeff() / sol.directivity - 1.0) < 1e-8);
        // rank one: every other eigenvalue vanishes relative to the top one
        CHECK(std::abs(lambda.head(m - 1).cwiseAbs().maxCoeff()) < 1e-6 * lambda.maxCoeff());

        for (int trial = 0; trial < 200; ++trial) {
          const auto x = oracle::random_complex(m, rng);
          CHECK(rayleigh_quotient(s.z.values, s.e.values, x) <= sol.directivity * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("Rayleigh optimality under small perturbations") {
  std::mt19937_64 rng(1234);
  const Setup s(4, 0.1, ElementPattern::half_wave_dipole(), 0.0);
  const auto sol = optimal_beamforming(s.z, s.e);
  const auto c = CouplingMatrix::prescribed(oracle::random_coupling(4, rng));
  const auto coupled = coupled_beamforming(s.z, c, s.e);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXcd n = oracle::random_complex(4, rng);
    const Eigen::VectorXcd a = sol.excitation + 1e-3 * n;
    CHECK(rayleigh_quotient(s.z.values, s.e.values, a) <= sol.directivity * (1 + 1e-9));
    const Eigen::VectorXcd b = coupled.excitation + 1e-3 * n;
    CHECK(coupled_directivity(s.z, c, s.e, b) <= coupled.directivity * (1 + 1e-9));
  }
}

TEST_CASE("Uzkov limit and half-wavelength sanity") {
  for (int m : {2, 3}) {
    const Setup s(m, 0.01, ElementPattern::isotropic(), 0.0);
    CHECK(optimal_beamforming(s.z, s.e).directivity >= 0.99 * m * m);
  }
  for (int m = 1; m <= 6; ++m) {
    const Setup s(m, 0.5, ElementPattern::isotropic(), kPi / 2);
    CHECK(std::abs(optimal_beamforming(s.z, s.e).directivity - m) < 1e-9);
  }
}

TEST_CASE("coupled beamforming") {
  std::mt19937_64 rng(77);
  const Setup s(4, 0.1, ElementPattern::half_wave_dipole(), 0.0);
  const auto plain = optimal_beamforming(s.z, s.e);

  SUBCASE("identity coupling reproduces the uncoupled solution") {
    const auto sol = coupled_beamforming(s.z, CouplingMatrix::identity(4), s.e);
    CHECK((sol.excitation - plain.excitation).norm() == 0.0);
    CHECK(std::abs(sol.directivity / plain.directivity - 1.0) < 1e-12);
    CHECK(sol.mode == BeamformingMode::coupled);
  }
  SUBCASE("scalar coupling cancels") {
    const cd alpha(0.4, -1.3);
    const auto c = CouplingMatrix::prescribed(alpha * Eigen::MatrixXcd::Identity(4, 4));
    const auto sol = coupled_beamforming(s.z, c, s.e);
    CHECK(std::abs(sol.directivity / plain.directivity - 1.0) < 1e-12);
  }
  SUBCASE("compensation never loses to the uncoupled excitation") {
    for (int draw = 0; draw < 100; ++draw) {
      const auto c = CouplingMatrix::prescribed(oracle::random_coupling(4, rng));
      const auto sol = coupled_beamforming(s.z, c, s.e);
      const double traditional = coupled_directivity(s.z, c, s.e, plain.excitation);
      CHECK(sol.directivity >= traditional * (1 - 1e-12));
      CHECK(std::abs(sol.directivity / plain.directivity - 1.0) < 1e-9);
      const Eigen::VectorXcd driven = c.values() * sol.excitation;
      CHECK(std::abs(radiated_power(s.z.values, driven) - 1.0) < 1e-10);
      CHECK(std::abs(coupled_directivity(s.z, c, s.e, sol.excitation) - sol.directivity) < 1e-12 * sol.directivity);
    }
  }
  SUBCASE("singular coupling") {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Ones(4, 4);
    CHECK_THROWS_AS(coupled_beamforming(s.z, CouplingMatrix::prescribed(c), s.e), CouplingSingularError);
  }
  CHECK_THROWS_AS(coupled_beamforming(s.z, CouplingMatrix::identity(3), s.e), DimensionError);
}

TEST_CASE("coupled directivity equals integration of the coupled pattern") {
  std::mt19937_64 rng(31);
  const double d = 0.15;
  const Setup s(2, d, ElementPattern::half_wave_dipole(), 0.6, 0.4);
  Eigen::MatrixXcd cm(2, 2);
  cm << cd(1.0, 0.1), cd(0.35, -0.2), cd(-0.25, 0.3), cd(0.9, 0.0);
  const auto c = CouplingMatrix::prescribed(cm);
  for (int trial = 0; trial < 5; ++trial) {
    const auto b = oracle::random_complex(2, rng);
    // l(θ, φ) = Σ_m Σ_n c_nm b_m k(θ, φ) exp(j k r̂·r_n), summed literally
    auto l = [&](double t, double p) {
      cd sum = 0.0;
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
          sum += cm(n, m) * b[m] * oracle::x_half_wave(t, p) * std::polar(1.0, 2 * oracle::pi * n * d * std::cos(t));
      return sum;
    };
    const double mean = oracle::sphere_mean([&](double t, double p) { return std::norm(l(t, p)); });
    const double expected = std::norm(l(0.6, 0.4)) / mean;
    CHECK(std::abs(coupled_directivity(s.z, c, s.e, b) / expected - 1.0) < 1e-8);
    // scale invariance
    CHECK(std::abs(coupled_directivity(s.z, c, s.e, cd(0.0, 3.0) * b) / expected - 1.0) < 1e-8);
  }
  CHECK(coupled_directivity(s.z, CouplingMatrix::identity(2), s.e, Eigen::VectorXcd::Ones(2)) ==
        doctest::Approx(rayleigh_quotient(s.z.values, s.e.values, Eigen::VectorXcd::Ones(2))).epsilon(1e-14));
}

TEST_CASE("gain under ohmic loss") {
  std::mt19937_64 rng(8);
  const Setup s(4, 0.1, ElementPattern::half_wave_dipole(), 0.0);
  const auto c = CouplingMatrix::prescribed(oracle::random_coupling(4, rng));
  const auto sol = coupled_beamforming(s.z, c, s.e);

  CHECK(loss_resistance(1.0) == 0.0);
  CHECK(loss_resistance(0.5) == 1.0);
  CHECK(loss_resistance(0.96) == doctest::Approx(0.04 / 0.96));
  CHECK_THROWS_AS(loss_resistance(0.0), DomainError);
  CHECK_THROWS_AS(loss_resistance(1.01), DomainError);
  CHECK_THROWS_AS(gain(s.z, c, s.e, sol.excitation, -0.2), DomainError);

  CHECK(gain(s.z, c, s.e, sol.excitation, 1.0) == sol.directivity);
  double previous = sol.directivity;
  for (double eta : {0.999, 0.99, 0.96, 0.9, 0.5, 0.1}) {
    const double g = gain(s.z, c, s.e, sol.excitation, eta);
    CHECK(g < previous);
    previous = g;
  }

  const auto best = gain_optimal_beamforming(s.z, c, s.e, 0.96);
  CHECK(best.mode == BeamformingMode::gain_optimal);
  CHECK(best.loss_resistance == doctest::Approx(0.04 / 0.96));
  CHECK(std::abs(gain(s.z, c, s.e, best.excitation, 0.96) - best.directivity) < 1e-12 * best.directivity);
  CHECK(best.directivity >= gain(s.z, c, s.e, sol.excitation, 0.96));
  for (int trial = 0; trial < 200; ++trial) {
    CHECK(gain(s.z, c, s.e, oracle::random_complex(4, rng), 0.96) <= best.directivity * (1 + 1e-12));
  }
}

TEST_CASE("singular impedance matrix is reported with its condition") {
  ImpedanceMatrix z;
  z.values = Eigen::MatrixXd::Ones(2, 2);
  z.condition_number = condition_number(z.values);
  SteeringVector e{Eigen::VectorXcd::Ones(2), {0.0, 0.0}};
  try {
    optimal_beamforming(z, e);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& err) {
    CHECK(std::isinf(err.condition()));
  }
}
