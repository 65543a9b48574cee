#pragma once

// Brute-force reference computations used by the tests. They deliberately
// avoid the library's vectorized code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "pcdoa/array_model.hpp"
#include "pcdoa/types.hpp"

namespace oracle {

using pcdoa::CMatrix;
using pcdoa::Complex;
using pcdoa::CVector;

inline Complex cumulant(const CVector& a, const CVector& b, const CVector& c, const CVector& d) {
  const double t = static_cast<double>(a.size());
  Complex fourth{}, ab{}, cd{}, ac{}, bd{}, ad{}, bc{};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    fourth += a(i) * b(i) * c(i) * d(i);
    ab += a(i) * b(i);
    cd += c(i) * d(i);
    ac += a(i) * c(i);
    bd += b(i) * d(i);
    ad += a(i) * d(i);
    bc += b(i) * c(i);
  }
  return fourth / t - (ab * cd + ac * bd + ad * bc) / (t * t);
}

/// sum_{r,p,q} |R~_rp conj(R~_rq) + R_rq R_pr|^2 with R, R~ from loops.
inline double jade_closed_form(const CMatrix& s, bool include_diagonal) {
  const auto l = s.rows();
  const auto k = s.cols();
  auto r = [&](Eigen::Index i, Eigen::Index j) {
    Complex sum{};
    for (Eigen::Index n = 0; n < k; ++n) sum += s(i, n) * std::conj(s(j, n));
    return sum / static_cast<double>(k);
  };
  auto rt = [&](Eigen::Index i, Eigen::Index j) {
    Complex sum{};
    for (Eigen::Index n = 0; n < k; ++n) sum += s(i, n) * s(j, n);
    return sum / static_cast<double>(k);
  };
  double cost = 0.0;
  for (Eigen::Index a = 0; a < l; ++a)
    for (Eigen::Index p = 0; p < l; ++p)
      for (Eigen::Index q = 0; q < l; ++q) {
        if (!include_diagonal && a == p && p == q) continue;
        cost += std::norm(rt(a, p) * std::conj(rt(a, q)) + r(a, q) * r(p, a));
      }
  return cost;
}

/// C(theta, s) by explicit per-subarray, per-element loops.
inline double nls_cost(const CMatrix& x, const pcdoa::ArrayGeometry& g, const CMatrix& phi,
                       const std::vector<double>& theta_deg, const std::vector<Complex>& s) {
  const auto eta = g.intra_displacements();
  double cost = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k)
    for (Eigen::Index m = 0; m < x.rows(); ++m) {
      Complex model{};
      for (std::size_t l = 0; l < theta_deg.size(); ++l) {
        const double phase = 2.0 * pcdoa::kPi / g.wavelength() * eta[static_cast<std::size_t>(m)] *
                             std::sin(theta_deg[l] * pcdoa::kPi / 180.0);
        model += std::exp(Complex(0.0, phase)) * phi(static_cast<Eigen::Index>(l), k) * s[l];
      }
      cost += std::norm(x(m, k) - model);
    }
  return cost;
}

/// |(1/K) sum_k exp(j 2 pi / lambda xi_k (sin t2 - sin t1))|.
inline double subarray_correlation(const std::vector<double>& xi, double lambda, double t1_deg,
                                   double t2_deg) {
  const double ds = std::sin(t2_deg * pcdoa::kPi / 180.0) - std::sin(t1_deg * pcdoa::kPi / 180.0);
  Complex sum{};
  for (double x : xi) sum += std::exp(Complex(0.0, 2.0 * pcdoa::kPi / lambda * x * ds));
  return std::abs(sum) / static_cast<double>(xi.size());
}

struct Moments {
  Complex mean;
  double power;
};

/// Monte Carlo of R = (1/K) sum_k exp(j 2 rho u_k), u_k ~ U[0, 1] for all k.
inline Moments correlation_moments(double rho, int k, int draws, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Moments out{Complex{}, 0.0};
  for (int d = 0; d < draws; ++d) {
    Complex r{};
    for (int i = 0; i < k; ++i) r += std::exp(Complex(0.0, 2.0 * rho * u(rng)));
    r /= static_cast<double>(k);
    out.mean += r;
    out.power += std::norm(r);
  }
  out.mean /= static_cast<double>(draws);
  out.power /= draws;
  return out;
}

/// Mean over random layouts of the full-array correlation
///   G = (1 / (M K)) sum_{k,m} exp(j 2 pi / lambda (xi_k + eta_m) ds),
/// xi_k ~ U[0, D] for every k, eta_m = m d.
inline Complex full_array_mean(double ds, int elements, double d, int subarrays, double aperture,
                               double lambda, int draws, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::uniform_real_distribution<double> u(0.0, aperture);
  Complex mean{};
  std::vector<double> xi(static_cast<std::size_t>(subarrays));
  for (int t = 0; t < draws; ++t) {
    for (double& x : xi) x = u(rng);
    Complex g{};
    for (double x : xi)
      for (int m = 0; m < elements; ++m)
        g += std::exp(Complex(0.0, 2.0 * pcdoa::kPi / lambda * (x + m * d) * ds));
    mean += g / static_cast<double>(elements * subarrays);
  }
  return mean / static_cast<double>(draws);
}

/// Recursive enumeration of all assignments; returns the minimum total
/// squared error.
inline double best_assignment_error(const std::vector<double>& est, const std::vector<double>& truth) {
  std::vector<bool> used(est.size(), false);
  double best = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == truth.size()) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t j = 0; j < est.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      const double e = est[j] - truth[i];
      self(self, i + 1, acc + e * e);
      used[j] = false;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

/// L distinct frequencies in [1, 31] whose pairwise sums (with repetition)
/// are all distinct, so that rows exp(j 2 pi f t / T), T = 64, have
/// cumulants Cum(a, b*, c, d*) = -[a = b = c = d].
inline std::vector<int> sidon_frequencies(int l, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, 31);
  for (;;) {
    std::vector<int> f;
    while (static_cast<int>(f.size()) < l) {
      const int v = pick(rng);
      if (std::find(f.begin(), f.end(), v) == f.end()) f.push_back(v);
    }
    std::vector<int> sums;
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i; j < f.size(); ++j) sums.push_back(f[i] + f[j]);
    std::sort(sums.begin(), sums.end());
    if (std::adjacent_find(sums.begin(), sums.end()) == sums.end()) return f;
  }
}

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline CMatrix random_unit_modulus(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-pcdoa::kPi, pcdoa::kPi);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = std::polar(1.0, a(rng));
  return m;
}

/// |<a, b>| / (|a| |b|) for row vectors.
inline double row_correlation(const CMatrix& a, Eigen::Index i, const CMatrix& b, Eigen::Index j) {
  const Complex inner = a.row(i).dot(b.row(j));
  return std::abs(inner) / (a.row(i).norm() * b.row(j).norm());
}

}  // namespace oracle
