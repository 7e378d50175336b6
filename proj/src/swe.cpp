#include "superdir/swe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "superdir/errors.hpp"

namespace superdir {

namespace {

constexpr cd kJ{0.0, 1.0};

// (-j)^p for p ≥ 0
cd minus_j_power(int p) {
  switch (p % 4) {
    case 0:
      return 1.0;
    case 1:
      return -kJ;
    case 2:
      return -1.0;
    default:
      return kJ;
  }
}

// (-m/|m|)^m, taken as 1 at m = 0
double order_sign(int m) { return (m > 0 && m % 2 == 1) ? -1.0 : 1.0; }

std::array<cd, 2> mode_components(const LegendreTable& table, const SweIndex& idx, cd azimuth) {
  const int am = std::abs(idx.m);
  const double norm = std::sqrt(2.0 / (idx.n * (idx.n + 1.0))) * order_sign(idx.m);
  const cd m_term = kJ * double(idx.m) * table.over_sin(idx.n, am);
  const double d_term = table.dtheta(idx.n, am);
  if (idx.s == 1) {
    const cd pre = norm * azimuth * minus_j_power(idx.n + 1);
    return {pre * m_term, -pre * d_term};
  }
  const cd pre = norm * azimuth * minus_j_power(idx.n);
  return {pre * d_term, pre * m_term};
}

}  // namespace

void SweIndex::validate() const {
  if (s != 1 && s != 2) throw IndexError("mode type s must be 1 (TE) or 2 (TM), got " + std::to_string(s));
  if (n < 1) throw IndexError("mode degree n must be >= 1, got " + std::to_string(n));
  if (std::abs(m) > n) {
    throw IndexError("mode order |m| = " + std::to_string(std::abs(m)) + " exceeds degree n = " +
                     std::to_string(n));
  }
}

SweIndex SweIndex::from_flat(int j) {
  if (j < 0) throw IndexError("negative flat mode index");
  const int k = j / 2 + 1;  // n(n+1) + m
  int n = static_cast<int>(std::sqrt(static_cast<double>(k)));
  while (n * n > k) --n;
  while ((n + 1) * (n + 1) <= k) ++n;
  return {j % 2 + 1, k - n * (n + 1), n};
}

int truncation_degree(double enclosing_radius) {
  if (!(enclosing_radius >= 0.0) || !std::isfinite(enclosing_radius)) {
    throw DomainError("enclosing radius must be finite and >= 0");
  }
  return static_cast<int>(std::ceil(kWaveNumber * enclosing_radius)) + 10;
}

void FieldSampleSet::validate() const {
  if (values.size() != 2 * static_cast<Eigen::Index>(directions.size())) {
    throw DimensionError("field sample set has " + std::to_string(directions.size()) +
                         " directions but " + std::to_string(values.size()) + " values");
  }
  std::vector<std::pair<double, double>> sorted;
  sorted.reserve(directions.size());
  for (const auto& d : directions) sorted.emplace_back(d.theta, d.phi);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DegenerateInputError("field sample set contains repeated directions");
  }
}

std::array<cd, 2> eval_spherical_wave_function(const SweIndex& index, double theta, double phi) {
  index.validate();
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw OutOfDomainError("theta = " + std::to_string(theta) + " rad is outside [0, pi]");
  }
  const LegendreTable table(index.n, theta);
  return mode_components(table, index, std::polar(1.0, index.m * phi));
}

Eigen::MatrixXcd basis_matrix(const std::vector<Direction>& directions, int truncation) {
  if (truncation < 1) throw IndexError("truncation degree must be >= 1");
  if (directions.empty()) throw DimensionError("basis matrix needs at least one direction");
  const auto rows = 2 * static_cast<Eigen::Index>(directions.size());
  Eigen::MatrixXcd k(rows, mode_count(truncation));
  std::vector<cd> azimuth(static_cast<std::size_t>(2 * truncation + 1));
  for (std::size_t p = 0; p < directions.size(); ++p) {
    const auto [theta, phi] = directions[p];
    if (!(theta >= 0.0 && theta <= kPi)) {
      throw OutOfDomainError("theta = " + std::to_string(theta) + " rad is outside [0, pi]");
    }
    const LegendreTable table(truncation, theta);
    for (int m = -truncation; m <= truncation; ++m) {
      azimuth[static_cast<std::size_t>(m + truncation)] = std::polar(1.0, m * phi);
    }
    const auto row = 2 * static_cast<Eigen::Index>(p);
    for (int n = 1; n <= truncation; ++n) {
      for (int m = -n; m <= n; ++m) {
        for (int s = 1; s <= 2; ++s) {
          const SweIndex idx{s, m, n};
          const auto c = mode_components(table, idx, azimuth[static_cast<std::size_t>(m + truncation)]);
          k(row, idx.flat()) = c[0];
          k(row + 1, idx.flat()) = c[1];
        }
      }
    }
  }
  return k;
}

std::vector<Direction> default_sampling_grid(int truncation) {
  if (truncation < 1) throw IndexError("truncation degree must be >= 1");
  const int rows = 2 * truncation + 2;
  const int cols = 4 * truncation + 4;
  std::vector<Direction> grid;
  grid.reserve(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows; ++i) {
    const double theta = (i + 0.5) * kPi / rows;
    for (int j = 0; j < cols; ++j) grid.push_back({theta, 2.0 * kPi * j / cols});
  }
  return grid;
}

SweFitter::SweFitter(std::vector<Direction> directions, int truncation)
    : directions_(std::move(directions)), truncation_(truncation) {
  const auto unknowns = mode_count(truncation);
  const auto rows = 2 * static_cast<Eigen::Index>(directions_.size());
  if (rows < unknowns) {
    throw InsufficientSamplingError(std::to_string(directions_.size()) + " directions give " +
                                    std::to_string(rows) + " equations for " +
                                    std::to_string(unknowns) + " wave coefficients at N = " +
                                    std::to_string(truncation));
  }
  basis_ = basis_matrix(directions_, truncation);
  svd_.compute(basis_, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const auto& sigma = svd_.singularValues();
  const double tolerance = static_cast<double>(std::max<Eigen::Index>(rows, unknowns)) *
                           std::numeric_limits<double>::epsilon();
  svd_.setThreshold(tolerance);
  const double cutoff = tolerance * sigma(0);
  rank_ = static_cast<int>((sigma.array() > cutoff).count());
  if (rank_ < unknowns) {
    const double smallest = sigma(sigma.size() - 1);
    throw ConditioningError("spherical-wave basis is rank deficient on this grid: effective rank " +
                                std::to_string(rank_) + " of " + std::to_string(unknowns),
                            smallest > 0.0 ? sigma(0) / smallest : std::numeric_limits<double>::infinity(),
                            rank_);
  }
}

Eigen::MatrixXcd SweFitter::fit_columns(const Eigen::MatrixXcd& fields) const {
  if (fields.rows() != basis_.rows()) {
    throw DimensionError("field matrix has " + std::to_string(fields.rows()) + " rows, grid needs " +
                         std::to_string(basis_.rows()));
  }
  return svd_.solve(fields);
}

WaveCoefficientSet SweFitter::fit(const FieldSampleSet& samples) const {
  samples.validate();
  if (samples.directions != directions_) {
    throw DimensionError("field samples are not on the fitter's direction grid");
  }
  WaveCoefficientSet out;
  out.truncation = truncation_;
  out.coefficients = svd_.solve(samples.values);
  const double norm = samples.values.norm();
  out.residual = norm > 0.0 ? (basis_ * out.coefficients - samples.values).norm() / norm : 0.0;
  return out;
}

WaveCoefficientSet fit_wave_coefficients(const FieldSampleSet& samples, int truncation) {
  samples.validate();
  return SweFitter(samples.directions, truncation).fit(samples);
}

FieldSampleSet reconstruct_field(const WaveCoefficientSet& coefficients,
                                 const std::vector<Direction>& directions) {
  if (coefficients.coefficients.size() != mode_count(coefficients.truncation)) {
    throw DimensionError("coefficient vector length does not match truncation N = " +
                         std::to_string(coefficients.truncation));
  }
  FieldSampleSet out;
  out.directions = directions;
  out.values = basis_matrix(directions, coefficients.truncation) * coefficients.coefficients;
  return out;
}

}  // namespace superdir
