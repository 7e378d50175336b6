#include <cmath>
#include <string>

#include "superdir/errors.hpp"
#include "superdir/swe.hpp"

namespace superdir {

// Recurrences, with x = cos θ, s = sin θ and U = P̄/s:
//   U₁¹ = √3/2,  Uₘᵐ = √((2m+1)/(2m)) s Uₘ₋₁ᵐ⁻¹
//   Uₘ₊₁ᵐ = √(2m+3) x Uₘᵐ
//   Uₙᵐ = aₙᵐ (x Uₙ₋₁ᵐ - bₙᵐ Uₙ₋₂ᵐ),  a = √((4n²-1)/(n²-m²)),
//                                        b = √(((n-1)²-m²)/(4(n-1)²-1))
//   dP̄ₙᵐ/dθ = n x Uₙᵐ - √((2n+1)(n²-m²)/(2n-1)) Uₙ₋₁ᵐ      (m ≥ 1)
//   dP̄ₙ⁰/dθ = -√(n(n+1)) P̄ₙ¹
// m = 0 runs the same n-recurrence on P̄ directly from P̄₀⁰ = 1/√2.
LegendreTable::LegendreTable(int max_degree, double theta) : max_degree_(max_degree) {
  if (max_degree < 0) throw IndexError("Legendre table needs a degree >= 0");
  const std::size_t count = index(max_degree, max_degree) + 1;
  value_.assign(count, 0.0);
  over_sin_.assign(count, 0.0);
  dtheta_.assign(count, 0.0);

  const double x = std::cos(theta);
  const double s = std::sin(theta);

  auto run_degree_recurrence = [&](std::vector<double>& out, int m, double seed) {
    out[index(m, m)] = seed;
    if (m + 1 <= max_degree) out[index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * seed;
    for (int n = m + 2; n <= max_degree; ++n) {
      const double nn = n;
      const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - m * m));
      const double b = std::sqrt(((nn - 1.0) * (nn - 1.0) - m * m) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
      out[index(n, m)] = a * (x * out[index(n - 1, m)] - b * out[index(n - 2, m)]);
    }
  };

  run_degree_recurrence(value_, 0, std::sqrt(0.5));

  double seed = std::sqrt(3.0) / 2.0;
  for (int m = 1; m <= max_degree; ++m) {
    if (m > 1) seed *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    run_degree_recurrence(over_sin_, m, seed);
    for (int n = m; n <= max_degree; ++n) {
      const double u = over_sin_[index(n, m)];
      value_[index(n, m)] = s * u;
      const double previous = n > m ? over_sin_[index(n - 1, m)] : 0.0;
      const double c = std::sqrt((2.0 * n + 1.0) * (double(n) * n - double(m) * m) / (2.0 * n - 1.0));
      dtheta_[index(n, m)] = n * x * u - c * previous;
    }
  }
  for (int n = 1; n <= max_degree; ++n) {
    dtheta_[index(n, 0)] = -std::sqrt(double(n) * (n + 1)) * value_[index(n, 1)];
  }
}

}  // namespace superdir
