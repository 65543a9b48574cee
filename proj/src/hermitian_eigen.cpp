#include "pcdoa/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pcdoa/error.hpp"

namespace pcdoa {

void apply_congruence(CMatrix& a, const PlaneRotation& g) {
  const Eigen::Index p = g.p;
  const Eigen::Index q = g.q;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * g.pp + aiq * g.qp;
    a(i, q) = aip * g.pq + aiq * g.qq;
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex apj = a(p, j);
    const Complex aqj = a(q, j);
    a(p, j) = std::conj(g.pp) * apj + std::conj(g.qp) * aqj;
    a(q, j) = std::conj(g.pq) * apj + std::conj(g.qq) * aqj;
  }
}

void apply_right(CMatrix& v, const PlaneRotation& g) {
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const Complex vip = v(i, g.p);
    const Complex viq = v(i, g.q);
    v(i, g.p) = vip * g.pp + viq * g.qp;
    v(i, g.q) = vip * g.pq + viq * g.qq;
  }
}

namespace {

double off_diagonal_norm2(const CMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) sum += std::norm(a(i, j));
  return 2.0 * sum;
}

// Rotation zeroing a(p, q) of a Hermitian matrix. The phase of a(p, q) is
// first moved onto the diagonal so the remaining problem is the real
// symmetric 2x2 Jacobi rotation.
PlaneRotation jacobi_rotation(const CMatrix& a, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  const Complex unphase = std::conj(apq) / magnitude;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * magnitude);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  return PlaneRotation{p, q, Complex(c, 0.0), Complex(s, 0.0), -s * unphase, c * unphase};
}

}  // namespace

EigenDecomposition hermitian_eigen(const CMatrix& input, int max_sweeps) {
  if (input.rows() != input.cols()) throw ShapeError("eigendecomposition needs a square matrix");
  const Eigen::Index n = input.rows();

  CMatrix a = 0.5 * (input + input.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale2 = a.squaredNorm();

  EigenDecomposition out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    if (off_diagonal_norm2(a) <= eps * eps * scale2) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double magnitude = std::abs(a(p, q));
        if (magnitude == 0.0) continue;
        // Negligible against both diagonal entries: zero it without rotating.
        const double dp = std::abs(a(p, p).real());
        const double dq = std::abs(a(q, q).real());
        if (out.sweeps > 3 && dp + 100.0 * magnitude == dp && dq + 100.0 * magnitude == dq) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const PlaneRotation g = jacobi_rotation(a, p, q);
        apply_congruence(a, g);
        apply_right(v, g);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::abs(a(i, i).real()) > std::abs(a(j, j).real());
  });

  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src).real();
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

}  // namespace pcdoa
