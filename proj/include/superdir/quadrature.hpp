#pragma once

#include <utility>
#include <vector>

namespace superdir {

/// n-point Gauss-Legendre rule on [-1, 1]: (nodes, weights), nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n);

struct ThetaNode {
  double theta;
  /// Gauss-Legendre weight in cos θ.
  double weight;
};

/// Product rule on the unit sphere: Gauss-Legendre in cos θ times a uniform
/// φ grid. `weight(i)` already carries the 1/(4π) factor, so the rule
/// computes the mean of a function over the sphere.
class SphereQuadrature {
 public:
  static constexpr int kDefaultThetaNodes = 64;
  static constexpr int kDefaultPhiNodes = 128;

  SphereQuadrature(int theta_count = kDefaultThetaNodes, int phi_count = kDefaultPhiNodes);

  const std::vector<ThetaNode>& theta_nodes() const noexcept { return theta_nodes_; }
  int theta_count() const noexcept { return static_cast<int>(theta_nodes_.size()); }
  int phi_count() const noexcept { return phi_count_; }
  double phi(int j) const noexcept;
  /// Weight of every node in θ-row i, normalized so that all weights sum to 1.
  double weight(int i) const noexcept;

  /// Same scheme at twice the density in both angles.
  SphereQuadrature refined() const { return SphereQuadrature(2 * theta_count(), 2 * phi_count_); }

  /// Mean of f(θ, φ) over the sphere, summed in a fixed order.
  template <typename F>
  auto mean(F&& f) const {
    using T = decltype(f(0.0, 0.0));
    T total{};
    for (int i = 0; i < theta_count(); ++i) {
      T row{};
      for (int j = 0; j < phi_count_; ++j) row += f(theta_nodes_[i].theta, phi(j));
      total += weight(i) * row;
    }
    return total;
  }

 private:
  std::vector<ThetaNode> theta_nodes_;
  int phi_count_;
};

}  // namespace superdir
