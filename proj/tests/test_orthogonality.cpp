#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pcdoa/array_model.hpp"
#include "pcdoa/error.hpp"
#include "pcdoa/orthogonality.hpp"

using namespace pcdoa;

TEST_SUITE("orthogonality") {

TEST_CASE("cross covariance structure") {
  std::mt19937_64 rng(3);
  const CMatrix s = oracle::random_complex(3, 7, rng);
  const SourceCrossCovariance c = cross_covariance(s);
  CHECK((c.covariance - c.covariance.adjoint()).norm() == 0.0);
  CHECK((c.conjugate_covariance - c.conjugate_covariance.transpose()).norm() == 0.0);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(c.covariance(i, i).real() >= 0.0);
  Complex r10{};
  for (Eigen::Index k = 0; k < 7; ++k) r10 += s(1, k) * std::conj(s(0, k));
  CHECK(std::abs(c.covariance(1, 0) - r10 / 7.0) < 1e-12);
}

TEST_CASE("coherence") {
  CMatrix s(2, 4);
  s << 1, 1, 1, 1, 1, -1, 1, -1;
  CHECK(coherence(s) == doctest::Approx(0.0));
  s.row(1) = Complex(0.0, 2.0) * s.row(0);
  CHECK(coherence(s) == doctest::Approx(1.0));
  CHECK_THROWS_AS(coherence(CMatrix::Ones(1, 3)), InvalidParameter);
  s.row(1).setZero();
  CHECK_THROWS_AS(coherence(s), DegenerateInputError);
}

TEST_CASE("sinc and Dirichlet kernels") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(kPi) == doctest::Approx(0.0));
  CHECK(sinc(kPi / 2) == doctest::Approx(2.0 / kPi));
  CHECK(sinc(1e-10) == doctest::Approx(1.0));
  CHECK(dirichlet(10, 0.0) == 1.0);
  CHECK(dirichlet(10, kPi / 10) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dirichlet(3, kPi) == doctest::Approx(1.0));
  CHECK(dirichlet(4, kPi) == doctest::Approx(-1.0));
  for (double x : {0.1, 0.7, 1.3}) {
    Complex sum{};
    for (int m = 0; m < 6; ++m) sum += std::exp(Complex(0.0, 2.0 * m * x));
    CHECK(std::abs(dirichlet(6, x)) == doctest::Approx(std::abs(sum) / 6.0));
  }
}

TEST_CASE("expected correlation moments") {
  const auto at_delta = expected_correlation(kPi, 10);
  CHECK(at_delta.magnitude == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_delta.power == doctest::Approx(0.1));
  const auto zero = expected_correlation(0.0, 10);
  CHECK(zero.magnitude == 1.0);
  CHECK(zero.power == doctest::Approx(1.0));
  CHECK(expected_correlation(kPi / 2, 10).magnitude == doctest::Approx(2.0 / kPi));
}

TEST_CASE("expected power never drops below 1/K and stays in [0, 1]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rho(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    for (int k : {2, 5, 10, 40}) {
      const auto m = expected_correlation(rho(rng), k);
      CHECK(m.power >= 1.0 / k - 1e-15);
      CHECK(m.power <= 1.0 + 1e-15);
      CHECK(m.magnitude * m.magnitude <= m.power + 1e-15);
    }
  }
}

TEST_CASE("full-array statistics scale the subarray moments by the Dirichlet factor") {
  const auto st = full_array_correlation(1.2, 1.2 + 10.0, 0.5, 450.0, 10, 10, 1.0);
  const double ds = std::sin(deg_to_rad(1.2)) - std::sin(deg_to_rad(11.2));
  CHECK(st.rho == doctest::Approx(kPi * 450.0 * ds));
  CHECK(st.varphi == doctest::Approx(kPi * 0.5 * ds));
  const double m = dirichlet(10, st.varphi);
  CHECK(st.expected_magnitude == doctest::Approx(std::abs(m) * std::abs(sinc(st.rho))));
  CHECK(st.expected_power == doctest::Approx(m * m * expected_correlation(st.rho, 10).power));
  CHECK(st.expected_power >= 0.0);
  CHECK(st.expected_power <= 1.0);
}

TEST_CASE("library Monte Carlo agrees with the brute-force oracle") {
  for (double rho : {0.3, kPi / 2, kPi, 4.0}) {
    const auto lib = sample_correlation(rho, 10, 40000, 5);
    const auto ref = oracle::correlation_moments(rho, 10, 40000, 6);
    const auto closed = expected_correlation(rho, 10);
    CHECK(std::abs(lib.magnitude - closed.magnitude) < 0.01);
    CHECK(std::abs(std::abs(ref.mean) - closed.magnitude) < 0.01);
    CHECK(lib.power == doctest::Approx(ref.power).epsilon(0.03));
  }
}

TEST_CASE("correlation truth of a geometry matches direct summation") {
  GeometryParams p;
  p.layout = Layout::uniform_random;
  p.seed = 4;
  const ArrayGeometry g = build_geometry(p);
  SourceScenario s;
  s.directions_deg = {1.2, 1.5};
  s.amplitudes = {Complex(2.0, 0.0), Complex(0.0, 3.0)};
  const CMatrix sig = source_signal_matrix(g, s);
  const auto cov = cross_covariance(sig);
  const std::vector<double> xi(g.inter_displacements().begin(), g.inter_displacements().end());
  CHECK(std::abs(cov.covariance(1, 0)) / 6.0 ==
        doctest::Approx(oracle::subarray_correlation(xi, 1.0, 1.2, 1.5)));
}

}
