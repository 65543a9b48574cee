#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pcdoa/array_model.hpp"
#include "pcdoa/error.hpp"
#include "pcdoa/estimators.hpp"
#include "pcdoa/jade.hpp"

using namespace pcdoa;

namespace {

// L rows exp(j (2 pi f_l t / 64 + alpha_l)) with a Sidon frequency set.
CMatrix orthogonal_sources(int l, std::mt19937_64& rng) {
  const auto f = oracle::sidon_frequencies(l, rng);
  std::uniform_real_distribution<double> alpha(-kPi, kPi);
  CMatrix h(l, 64);
  for (int i = 0; i < l; ++i) {
    const double a = alpha(rng);
    for (int t = 0; t < 64; ++t) h(i, t) = std::polar(1.0, 2.0 * kPi * f[static_cast<std::size_t>(i)] * t / 64.0 + a);
  }
  return h;
}

CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = oracle::random_complex(n, n, rng);
  return Eigen::HouseholderQR<CMatrix>(a).householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

TEST_SUITE("jade") {

TEST_CASE("sample cumulant matches the loop oracle") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const CMatrix m = oracle::random_complex(4, 13, rng);
    const CVector a = m.row(0).transpose(), b = m.row(1).transpose(), c = m.row(2).transpose(),
                  d = m.row(3).transpose();
    CHECK(std::abs(sample_cumulant(a, b, c, d) - oracle::cumulant(a, b, c, d)) < 1e-12);
  }
  CHECK_THROWS_AS(sample_cumulant(CVector::Ones(3), CVector::Ones(3), CVector::Ones(2), CVector::Ones(3)),
                  ShapeError);
}

TEST_CASE("cumulant of unit-modulus rows with Sidon frequencies is -1 on the diagonal only") {
  std::mt19937_64 rng(5);
  const CMatrix h = orthogonal_sources(3, rng);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          const Complex v = sample_cumulant(h.row(a).transpose(), h.row(b).adjoint(),
                                            h.row(c).transpose(), h.row(d).adjoint());
          const double expected = (a == b && b == c && c == d) ? -1.0 : 0.0;
          CHECK(std::abs(v - expected) < 1e-12);
        }
}

TEST_CASE("cumulant index layout") {
  static_assert(cumulant_index(0, 0, 3) == 0);
  static_assert(cumulant_index(2, 0, 3) == 2);
  static_assert(cumulant_index(0, 1, 3) == 3);
  static_assert(cumulant_index(2, 2, 3) == 8);
}

TEST_CASE("whitening of a noise-free mixture gives an identity covariance") {
  std::mt19937_64 rng(8);
  const CMatrix h = orthogonal_sources(2, rng);
  const CMatrix y = oracle::random_complex(10, 2, rng) * h;
  const WhiteningResult w = estimate_whitener(y, 2);
  CHECK(w.noise_estimate == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  const CMatrix cov = w.whitened * w.whitened.adjoint() / 64.0;
  CHECK((cov - CMatrix::Identity(2, 2)).norm() < 1e-9);
  CHECK(w.covariance_spectrum.size() == 10);
}

TEST_CASE("rank deficiency names the failing eigenvalue") {
  std::mt19937_64 rng(9);
  const CMatrix y = oracle::random_complex(6, 1, rng) * oracle::random_complex(1, 20, rng);
  try {
    estimate_whitener(y, 2);
    FAIL("expected a rank deficiency");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(estimate_whitener(y, 6), ShapeError);
}

TEST_CASE("cumulant matrix of whitened orthogonal sources") {
  std::mt19937_64 rng(10);
  const CMatrix h = orthogonal_sources(3, rng);
  const CumulantMatrixSet set = cumulant_matrix_set(h);
  CHECK((set.cumulant_matrix - set.cumulant_matrix.adjoint()).norm() < 1e-12);
  REQUIRE(set.matrices.size() == 3);
  for (int l = 0; l < 3; ++l) CHECK(set.eigenvalues(l) == doctest::Approx(-1.0));
  for (int l = 3; l < 9; ++l) CHECK(std::abs(set.spectrum(l)) < 1e-12);
  // Degenerate top eigenvalue: the eigenmatrices span the diagonal matrices.
  for (const CMatrix& m : set.matrices)
    CHECK((m - CMatrix(m.diagonal().asDiagonal())).norm() < 1e-12);
  CHECK_THROWS_AS(cumulant_matrix_set(CMatrix::Ones(3, 3)), ShapeError);
}

TEST_CASE("joint diagonalization recovers a common unitary basis") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = random_unitary(3, rng);
    std::vector<CMatrix> set;
    for (int i = 0; i < 4; ++i) {
      const RVector d = RVector::NullaryExpr(3, [&] { return n(rng); });
      set.push_back(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    }
    double frob_in = 0.0;
    for (const CMatrix& m : set) frob_in += m.squaredNorm();

    const UnitaryDiagonalizer jd = joint_diagonalize(set);
    CHECK(jd.off_diagonal_energy < 1e-8);
    CHECK((jd.rotation.adjoint() * jd.rotation - CMatrix::Identity(3, 3)).norm() < 1e-10);
    double frob_out = 0.0;
    for (const CMatrix& m : jd.transformed) frob_out += m.squaredNorm();
    CHECK(std::abs(frob_out - frob_in) < 1e-9 * frob_in);

    // Columns of V match columns of U up to permutation and phase.
    const CMatrix overlap = (u.adjoint() * jd.rotation).cwiseAbs().cast<Complex>();
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(overlap.col(j).cwiseAbs().maxCoeff() > 1.0 - 1e-8);
    for (std::size_t s = 1; s < jd.sweep_energies.size(); ++s)
      CHECK(jd.sweep_energies[s] <= jd.sweep_energies[s - 1] + 1e-12);
  }
}

TEST_CASE("separation of mixed orthogonal sources") {
  std::mt19937_64 rng(21);
  for (int l : {2, 3}) {
    const CMatrix h = orthogonal_sources(l, rng);
    const CMatrix y = oracle::random_complex(10, l, rng) * h;
    const SeparationResult r = jade_separate(y, l);
    for (int i = 0; i < l; ++i) {
      double best = 0.0;
      for (int j = 0; j < l; ++j) best = std::max(best, oracle::row_correlation(r.separated, j, h, i));
      CHECK(best > 0.999);
    }
  }
}

TEST_CASE("phase offsets from a noise-free orthogonal array scenario") {
  const ArrayGeometry g = build_geometry({});
  SourceScenario s;
  // Equidistant, K = 10: a separation of 4.5 resolution cells gives R = 0.
  const double t1 = 1.2;
  const double sin1 = std::sin(deg_to_rad(t1));
  s.directions_deg = {t1, rad_to_deg(std::asin(sin1 + 9.0 / 450.0 * 0.5))};
  s.amplitudes = {Complex(1.0, 0.0), Complex(0.0, 2.0)};
  const Synthesis data = synthesize(g, s);
  const SeparationResult r = jade_separate(data.measurements, 2);
  const CMatrix phi = estimate_phase_offsets(r.separated).offsets;
  const CMatrix truth = estimate_phase_offsets(data.source_signals).offsets;
  CHECK(std::abs(truth.row(0).dot(truth.row(1))) / 10.0 < 1e-12);
  CHECK(std::abs(phi.row(0).dot(phi.row(1))) / 10.0 < 1e-6);
  CHECK(jade_cost(phi, false) <= jade_cost(truth, false) + 1e-12);
  for (int i = 0; i < 2; ++i) {
    double best = 0.0;
    for (int j = 0; j < 2; ++j) best = std::max(best, oracle::row_correlation(phi, j, truth, i));
    CHECK(best > 0.9);
  }
}

TEST_CASE("cumulant cost equals the second-order closed form") {
  std::mt19937_64 rng(30);
  std::uniform_int_distribution<int> pick_l(1, 3), pick_k(2, 8);
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  for (int i = 0; i < 200; ++i) {
    const int l = pick_l(rng), k = pick_k(rng);
    CMatrix s = oracle::random_unit_modulus(l, k, rng);
    for (int r = 0; r < l; ++r) s.row(r) *= mag(rng);
    for (bool diag : {false, true}) {
      const double a = jade_cost(s, diag);
      const double b = jade_cost_closed_form(s, diag);
      const double c = oracle::jade_closed_form(s, diag);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
      CHECK(std::abs(b - c) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
  }
}

}
