#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pcdoa/error.hpp"
#include "pcdoa/hermitian_eigen.hpp"

using namespace pcdoa;

namespace {

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = oracle::random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_SUITE("hermitian_eigen") {

TEST_CASE("matches Eigen's self-adjoint solver") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 9;
    const CMatrix a = random_hermitian(n, rng);
    const EigenDecomposition ours = hermitian_eigen(a);
    const Eigen::SelfAdjointEigenSolver<CMatrix> ref(a);

    RVector ours_sorted = ours.values;
    RVector ref_sorted = ref.eigenvalues();
    std::sort(ours_sorted.data(), ours_sorted.data() + n);
    std::sort(ref_sorted.data(), ref_sorted.data() + n);
    CHECK((ours_sorted - ref_sorted).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + a.norm()));

    const CMatrix v = ours.vectors;
    CHECK((v.adjoint() * v - CMatrix::Identity(n, n)).norm() < 1e-12 * n);
    const CMatrix rebuilt = v * ours.values.cast<Complex>().asDiagonal() * v.adjoint();
    CHECK((rebuilt - a).norm() < 1e-12 * (1.0 + a.norm()));
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      CHECK(std::abs(ours.values(i)) >= std::abs(ours.values(i + 1)));
  }
}

TEST_CASE("already diagonal input keeps its order among equal magnitudes") {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = -2.0;
  a(2, 2) = 5.0;
  const EigenDecomposition e = hermitian_eigen(a);
  CHECK(e.values(0) == 5.0);
  CHECK(e.values(1) == 2.0);
  CHECK(e.values(2) == -2.0);
  CHECK(e.sweeps == 0);
}

TEST_CASE("plane rotations") {
  std::mt19937_64 rng(2);
  const CMatrix a = random_hermitian(5, rng);
  const double c = std::cos(0.3);
  const Complex s = std::polar(std::sin(0.3), 0.7);
  const PlaneRotation g{1, 3, Complex(c, 0.0), -std::conj(s), s, Complex(c, 0.0)};
  CMatrix dense = CMatrix::Identity(5, 5);
  dense(1, 1) = g.pp;
  dense(1, 3) = g.pq;
  dense(3, 1) = g.qp;
  dense(3, 3) = g.qq;
  CHECK((dense.adjoint() * dense - CMatrix::Identity(5, 5)).norm() < 1e-15);

  CMatrix b = a;
  apply_congruence(b, g);
  CHECK((b - dense.adjoint() * a * dense).norm() < 1e-13);
  CMatrix v = a;
  apply_right(v, g);
  CHECK((v - a * dense).norm() < 1e-13);
}

TEST_CASE("non-square input is rejected") {
  CHECK_THROWS_AS(hermitian_eigen(CMatrix::Zero(2, 3)), ShapeError);
}

}
