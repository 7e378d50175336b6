#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "superdir/errors.hpp"
#include "superdir/io.hpp"
#include "superdir/sweep.hpp"

using namespace superdir;

namespace {

template <typename F>
std::size_t error_line(F&& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("coupling CSV round trip is bit exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 5;
    Eigen::MatrixXcd c = oracle::random_complex(m, m, rng);
    c(0, 0) *= std::pow(10.0, exponent(rng));
    std::stringstream buffer;
    io::write_coupling_csv(buffer, CouplingMatrix::prescribed(c));
    const auto back = io::read_coupling_csv(buffer);
    CHECK(back.values() == c);
  }
}

TEST_CASE("coefficient and field CSV round trips") {
  std::mt19937_64 rng(12);
  WaveCoefficientSet q;
  q.truncation = 3;
  q.coefficients = oracle::random_complex(mode_count(3), rng);
  std::stringstream buffer;
  io::write_coefficient_csv(buffer, q);
  const auto back = io::read_coefficient_csv(buffer);
  CHECK(back.truncation == 3);
  CHECK(back.coefficients == q.coefficients);

  FieldSampleSet f;
  f.directions = {{0.0, 0.0}, {1.0, 2.0}, {kPi, 0.5}};
  f.values = oracle::random_complex(6, rng);
  std::stringstream fb;
  io::write_field_csv(fb, f);
  const auto fback = io::read_field_csv(fb);
  CHECK(fback.values == f.values);
  for (int p = 0; p < 3; ++p) {
    CHECK(fback.directions[static_cast<std::size_t>(p)].theta ==
          doctest::Approx(f.directions[static_cast<std::size_t>(p)].theta).epsilon(1e-15));
  }
}

TEST_CASE("malformed CSV reports the offending line") {
  CHECK(error_line([] {
          std::istringstream in("row,col,re,im\n1,1,1.0,0\n1,2,abc,0\n");
          io::read_coupling_csv(in);
        }) == 3);
  CHECK(error_line([] {
          std::istringstream in("row,col,re,im\n1,1,1.0\n");
          io::read_coupling_csv(in);
        }) == 2);
  CHECK(error_line([] {
          std::istringstream in("wrong,header\n");
          io::read_coupling_csv(in);
        }) == 1);
  CHECK(error_line([] {
          std::istringstream in("theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi\n10,0,1,0,0,0\n\n10,0,1,0,0,0\n");
          io::read_field_csv(in);
        }) == 4);
  CHECK(error_line([] {
          std::istringstream in("theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi\n190,0,1,0,0,0\n");
          io::read_field_csv(in);
        }) == 2);
  CHECK(error_line([] {
          std::istringstream in("s,m,n,re,im\n1,2,1,0,0\n");
          io::read_coefficient_csv(in);
        }) == 2);
  std::istringstream incomplete("row,col,re,im\n1,1,1,0\n2,2,1,0\n");
  CHECK_THROWS_AS(io::read_coupling_csv(incomplete), DataError);
}

TEST_CASE("number parsing is strict") {
  CHECK(io::parse_double("1.5e-3", 1) == 1.5e-3);
  CHECK(io::parse_double("+2", 1) == 2.0);
  CHECK_THROWS_AS(io::parse_double("1.5x", 4), DataError);
  CHECK_THROWS_AS(io::parse_double("", 4), DataError);
  CHECK_THROWS_AS(io::parse_int("3.0", 4), DataError);
  CHECK(io::format_short(18.4237) == "18.42");
}

TEST_CASE("sweep configuration") {
  std::istringstream good(
      "# four dipoles\n"
      "antennas = 4\n"
      "pattern = half-wave-dipole\n"
      "spacing = 0.05:0.5:10\n"
      "efficiency = 0.96\n"
      "coupling = synthetic:0.2,0.7\n");
  const auto spec = SweepSpec::from_config(good);
  CHECK(spec.antennas == 4);
  CHECK(spec.spacing_steps == 10);
  CHECK(spec.efficiency == 0.96);
  CHECK(spec.coupling.kind == CouplingSpec::Kind::synthetic);
  CHECK(spec.coupling.gamma == 0.2);
  CHECK(spec.coupling.beta == 0.7);
  const auto d = spec.spacings();
  CHECK(d.front() == 0.05);
  CHECK(d.back() == 0.5);
  CHECK(d.size() == 10);

  CHECK(error_line([] {
          std::istringstream in("antennas = 2\nspacnig = 0.1:0.2:2\n");
          SweepSpec::from_config(in);
        }) == 2);
  CHECK(error_line([] {
          std::istringstream in("antennas = 2\nantennas = 3\n");
          SweepSpec::from_config(in);
        }) == 2);
  CHECK(error_line([] {
          std::istringstream in("\n\nantennas two\n");
          SweepSpec::from_config(in);
        }) == 3);
  CHECK(error_line([] {
          std::istringstream in("pattern = yagi\n");
          SweepSpec::from_config(in);
        }) == 1);
  CHECK_THROWS_AS(CouplingSpec::parse("synthetic:0.3"), DataError);
  CHECK(CouplingSpec::parse("file:c.csv").path == "c.csv");

  SweepSpec bad;
  bad.efficiency = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
