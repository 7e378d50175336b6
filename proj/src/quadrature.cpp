#include "superdir/quadrature.hpp"

#include <cmath>
#include <string>

#include "superdir/array_model.hpp"
#include "superdir/errors.hpp"

namespace superdir {

namespace {

// (P_n(z), P_n'(z)) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double z) {
  double p0 = 1.0;
  double p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 1) p0 = 1.0;
  return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1, got " + std::to_string(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));

  // Newton on P_n from the Tricomi initial guess; roots are symmetric so only
  // the upper half is solved.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, z);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, z).second;
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = -z;
    x[hi] = z;
    w[lo] = weight;
    w[hi] = weight;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
  return {std::move(x), std::move(w)};
}

SphereQuadrature::SphereQuadrature(int theta_count, int phi_count) : phi_count_(phi_count) {
  if (theta_count < 1 || phi_count < 1) {
    throw DomainError("sphere quadrature needs positive node counts");
  }
  auto [x, w] = gauss_legendre_rule(theta_count);
  theta_nodes_.reserve(x.size());
  // ascending θ means descending cos θ
  for (std::size_t i = x.size(); i-- > 0;) {
    theta_nodes_.push_back({std::acos(x[i]), w[i]});
  }
}

double SphereQuadrature::phi(int j) const noexcept { return 2.0 * kPi * j / phi_count_; }

double SphereQuadrature::weight(int i) const noexcept {
  // (GL weight) * (2π / Nφ) / (4π)
  return theta_nodes_[static_cast<std::size_t>(i)].weight / (2.0 * phi_count_);
}

}  // namespace superdir
