#include <cmath>

#include "doctest.h"
#include "superdir/errors.hpp"
#include "superdir/quadrature.hpp"

using namespace superdir;

TEST_CASE("Gauss-Legendre rule integrates polynomials up to degree 2n-1") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto [x, w] = gauss_legendre_rule(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double sum = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK_THROWS_AS(gauss_legendre_rule(0), DomainError);
}

TEST_CASE("sphere quadrature weights are positive and average the constant to 1") {
  const SphereQuadrature q;
  CHECK(q.theta_count() == 64);
  CHECK(q.phi_count() == 128);
  double total = 0.0;
  for (int i = 0; i < q.theta_count(); ++i) {
    CHECK(q.weight(i) > 0.0);
    total += q.weight(i) * q.phi_count();
  }
  CHECK(std::abs(total - 1.0) < 1e-14);
  CHECK(std::abs(q.mean([](double, double) { return 1.0; }) - 1.0) < 1e-14);
  // mean of cos²θ is 1/3, of sin²θ cos²φ also 1/3
  CHECK(std::abs(q.mean([](double t, double) { return std::cos(t) * std::cos(t); }) - 1.0 / 3) < 1e-14);
  CHECK(std::abs(q.mean([](double t, double p) {
    const double c = std::sin(t) * std::cos(p);
    return c * c;
  }) - 1.0 / 3) < 1e-14);
  const auto fine = q.refined();
  CHECK(fine.theta_count() == 128);
  CHECK(fine.phi_count() == 256);
}
