// Acceptance run: one line per criterion, PASS or FAIL, with the measured
// quantities and wall time. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "superdir/beamform.hpp"
#include "superdir/coupling.hpp"
#include "superdir/quadrature.hpp"
#include "superdir/swe.hpp"
#include "superdir/sweep.hpp"

using namespace superdir;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) detail += " [x]";
  }
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

double endfire_dmax(int m, double d, const ElementPattern& pattern, double theta0 = 0.0) {
  const ArrayGeometry g(m, d);
  return optimal_beamforming(impedance_matrix(g, pattern), steering_vector(g, pattern, theta0, 0.0)).directivity;
}

Outcome uzkov_limit() {
  Outcome o;
  const auto iso = ElementPattern::isotropic();
  for (int m : {2, 3}) {
    const double d = endfire_dmax(m, 0.01, iso);
    o.require(d >= 0.99 * m * m, "M=" + std::to_string(m) + " Dmax(0.01)=" + fmt("%.5f", d));
  }
  const double d = endfire_dmax(2, 0.05, iso);
  const double closed = oracle::two_element_endfire_dmax(0.05);
  o.require(std::abs(d - 3.9735) <= 1e-3 && std::abs(d - closed) < 1e-9,
            "M=2 Dmax(0.05)=" + fmt("%.6f", d) + " closed form " + fmt("%.6f", closed));
  return o;
}

Outcome half_wavelength() {
  Outcome o;
  for (int m : {2, 4}) {
    const double d = endfire_dmax(m, 0.5, ElementPattern::isotropic(), kPi / 2);
    o.require(std::abs(d - m) < 1e-9, "M=" + std::to_string(m) + " |Dmax-M|=" + fmt("%.1e", std::abs(d - m)));
  }
  return o;
}

Outcome dipole_maxima() {
  Outcome o;
  const auto dipole = ElementPattern::half_wave_dipole();
  const double cited[] = {5.24, 10.8, 18.4};
  for (int m = 2; m <= 4; ++m) {
    double best = 0.0;
    double at = 0.0;
    for (int i = 0; i <= 90; ++i) {
      const double d = 0.05 + 0.005 * i;
      const double value = endfire_dmax(m, d, dipole);
      if (value > best) {
        best = value;
        at = d;
      }
    }
    const double target = cited[m - 2];
    o.require(std::abs(best / target - 1.0) <= 0.10,
              "M=" + std::to_string(m) + " max " + fmt("%.3f", best) + " at d=" + fmt("%.3f", at) +
                  " vs " + fmt("%.2f", target));
  }
  return o;
}

Outcome figure_points() {
  Outcome o;
  const auto dipole = ElementPattern::half_wave_dipole();
  const double d2 = endfire_dmax(2, 0.1, dipole);
  const double d4 = endfire_dmax(4, 0.1, dipole);
  o.require(d2 >= 5.0 && d2 <= 6.2, "M=2 Dmax(0.1)=" + fmt("%.3f", d2) + " in [5.0, 6.2]");
  o.require(d4 >= 17.0 && d4 <= 20.8, "M=4 Dmax(0.1)=" + fmt("%.3f", d4) + " in [17.0, 20.8]");
  return o;
}

Outcome coupling_round_trip() {
  Outcome o;
  std::mt19937_64 rng(7);
  const auto pattern = ElementPattern::half_wave_dipole();
  for (int m : {2, 3, 4}) {
    const ArrayGeometry g(m, 0.15);
    const int n = default_coupling_truncation(g);
    const SweFitter fitter(default_sampling_grid(n), n);
    const auto isolated = isolated_fields_synthetic(g, pattern, fitter.directions());
    const Eigen::MatrixXcd truth = oracle::random_coupling(m, rng);
    auto active = synthesize_coupled_fields(isolated, CouplingMatrix::prescribed(truth));
    const Eigen::MatrixXcd qs = build_coefficient_set(isolated, fitter);
    const double clean =
        (estimate_coupling(qs, build_coefficient_set(active, fitter)).values() - truth).norm() / truth.norm();
    for (auto& set : active) {
      const Eigen::VectorXcd noise = oracle::random_complex(static_cast<int>(set.values.size()), rng);
      set.values += 1e-6 * set.values.norm() / noise.norm() * noise;
    }
    const double noisy =
        (estimate_coupling(qs, build_coefficient_set(active, fitter)).values() - truth).norm() / truth.norm();
    o.require(n <= 15 && clean < 1e-8 && noisy < 1e-4,
              "M=" + std::to_string(m) + " N=" + std::to_string(n) + " err " + fmt("%.1e", clean) +
                  " noisy " + fmt("%.1e", noisy));
  }
  return o;
}

Outcome swe_consistency() {
  Outcome o;
  std::mt19937_64 rng(8);
  const int n = 6;
  const auto grid = default_sampling_grid(n);
  WaveCoefficientSet q;
  q.truncation = n;
  q.coefficients = oracle::random_complex(mode_count(n), rng);
  const auto field = reconstruct_field(q, grid);
  const auto fit = fit_wave_coefficients(field, n);
  const double round = (reconstruct_field(fit, grid).values - field.values).norm() / field.values.norm();
  o.require(round < 1e-9, "round trip " + fmt("%.1e", round));

  const SphereQuadrature quad(n + 1, 2 * n + 2);
  std::vector<Direction> nodes;
  Eigen::VectorXd w(2 * quad.theta_count() * quad.phi_count());
  for (int i = 0; i < quad.theta_count(); ++i) {
    for (int j = 0; j < quad.phi_count(); ++j) {
      w.segment(2 * static_cast<Eigen::Index>(nodes.size()), 2).setConstant(quad.weight(i));
      nodes.push_back({quad.theta_nodes()[static_cast<std::size_t>(i)].theta, quad.phi(j)});
    }
  }
  const Eigen::MatrixXcd k = basis_matrix(nodes, n);
  const Eigen::MatrixXcd gram = k.adjoint() * w.asDiagonal() * k;
  const double gram_err = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  o.require(gram_err < 1e-10, "Gram " + fmt("%.1e", gram_err));

  const auto dipole = ElementPattern::hertzian_dipole();
  const auto dgrid = default_sampling_grid(2);
  FieldSampleSet dfield;
  dfield.directions = dgrid;
  dfield.values.resize(2 * static_cast<Eigen::Index>(dgrid.size()));
  for (std::size_t p = 0; p < dgrid.size(); ++p) {
    const auto f = element_field(dipole, dgrid[p].theta, dgrid[p].phi);
    dfield.values[2 * static_cast<Eigen::Index>(p)] = f[0];
    dfield.values[2 * static_cast<Eigen::Index>(p) + 1] = f[1];
  }
  WaveCoefficientSet tm1 = fit_wave_coefficients(dfield, 2);
  for (int j = 0; j < tm1.coefficients.size(); ++j) {
    const auto idx = SweIndex::from_flat(j);
    if (!(idx.n == 1 && idx.s == 2)) tm1.coefficients[j] = 0.0;
  }
  const double dipole_res = (reconstruct_field(tm1, dgrid).values - dfield.values).norm() / dfield.values.norm();
  o.require(dipole_res < 1e-8, "dipole n=1 TM residual " + fmt("%.1e", dipole_res));
  return o;
}

Outcome rayleigh_suite() {
  Outcome o;
  std::mt19937_64 rng(9);
  const ArrayGeometry g(4, 0.1);
  const auto pattern = ElementPattern::half_wave_dipole();
  const auto z = impedance_matrix(g, pattern);
  const auto e = steering_vector(g, pattern, 0.0, 0.0);
  const auto plain = optimal_beamforming(z, e);
  const auto c = CouplingMatrix::prescribed(oracle::random_coupling(4, rng));
  const auto coupled = coupled_beamforming(z, c, e);
  double worst_plain = -1.0;
  double worst_coupled = -1.0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXcd n = oracle::random_complex(4, rng);
    worst_plain = std::max(worst_plain, rayleigh_quotient(z.values, e.values, plain.excitation + 1e-3 * n) / plain.directivity - 1.0);
    worst_coupled = std::max(worst_coupled, coupled_directivity(z, c, e, coupled.excitation + 1e-3 * n) / coupled.directivity - 1.0);
  }
  o.require(worst_plain <= 1e-9, "uncoupled worst excess " + fmt("%.1e", worst_plain));
  o.require(worst_coupled <= 1e-9, "coupled worst excess " + fmt("%.1e", worst_coupled));

  double worst_brute = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const ArrayGeometry gm(m, 0.17);
    const auto zm = impedance_matrix(gm, pattern);
    for (int t = 0; t < 3; ++t) {
      const auto a = oracle::random_complex(m, rng);
      const double quadratic = directivity(gm, pattern, zm, a, 0.7, 0.3);
      const double brute = oracle::brute_force_directivity(a, 0.17, oracle::x_half_wave, 0.7, 0.3);
      worst_brute = std::max(worst_brute, std::abs(quadratic / brute - 1.0));
    }
  }
  o.require(worst_brute < 1e-8, "brute-force mismatch " + fmt("%.1e", worst_brute));
  return o;
}

Outcome loss_behavior() {
  Outcome o;
  const auto pattern = ElementPattern::half_wave_dipole();
  const auto identity = CouplingMatrix::identity(4);
  auto gain_at = [&](double d, double eta) {
    const ArrayGeometry g(4, d);
    const auto z = impedance_matrix(g, pattern);
    const auto e = steering_vector(g, pattern, 0.0, 0.0);
    const auto b = coupled_beamforming(z, identity, e);
    return std::pair{gain(z, identity, e, b.excitation, eta), b.directivity};
  };
  double peak = 0.0;
  double at = 0.0;
  for (int i = 0; i <= 90; ++i) {
    const double d = 0.05 + 0.005 * i;
    const double g = gain_at(d, 0.96).first;
    if (g > peak) {
      peak = g;
      at = d;
    }
  }
  const double g05 = gain_at(0.05, 0.96).first;
  const double g33 = gain_at(0.33, 0.96).first;
  const double g50 = gain_at(0.5, 0.96).first;
  o.require(g33 > g05 && g33 > g50, "G(0.05)=" + fmt("%.4f", g05) + " G(0.33)=" + fmt("%.3f", g33) +
                                        " G(0.5)=" + fmt("%.3f", g50));
  o.require(at >= 0.2 && at <= 0.45, "peak at d=" + fmt("%.3f", at));
  o.require(std::abs(peak / 9.6 - 1.0) <= 0.15, "peak G=" + fmt("%.3f", peak));
  const auto [lossless, dc] = gain_at(0.2, 1.0);
  o.require(lossless == dc, "G=D_c at eta=1");
  return o;
}

Outcome determinism() {
  Outcome o;
  SweepSpec spec;
  spec.antennas = 4;
  spec.spacing_steps = 16;
  spec.efficiency = 0.96;
  spec.coupling = CouplingSpec::parse("synthetic");
  std::ostringstream one;
  std::ostringstream many;
  write_sweep_csv(one, run_sweep(spec, 1));
  write_sweep_csv(many, run_sweep(spec, 4));
  o.require(one.str() == many.str(), "1 vs 4 threads, " + std::to_string(one.str().size()) + " bytes");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"uzkov-limit", 1.0, uzkov_limit},
      {"half-wavelength-sanity", 1.0, half_wavelength},
      {"dipole-maxima", 30.0, dipole_maxima},
      {"figure-points", 5.0, figure_points},
      {"coupling-round-trip", 60.0, coupling_round_trip},
      {"swe-self-consistency", 0.0, swe_consistency},
      {"rayleigh-optimality", 0.0, rayleigh_suite},
      {"loss-behavior", 0.0, loss_behavior},
      {"determinism", 0.0, determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0) o.require(seconds < c.limit_s, "limit " + fmt("%.0f s", c.limit_s));
    std::printf("%s %d %-24s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, seconds, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
