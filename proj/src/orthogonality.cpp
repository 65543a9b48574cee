#include "pcdoa/orthogonality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pcdoa/error.hpp"

namespace pcdoa {

namespace {
constexpr double kSeriesCutoff = 1e-8;
}

SourceCrossCovariance cross_covariance(const CMatrix& sources) {
  if (sources.rows() == 0 || sources.cols() == 0) throw ShapeError("empty source matrix");
  const double inv_k = 1.0 / static_cast<double>(sources.cols());
  SourceCrossCovariance out;
  out.covariance = inv_k * sources * sources.adjoint();
  out.conjugate_covariance = inv_k * sources * sources.transpose();
  // Exact structure, independent of rounding in the products above.
  out.covariance = 0.5 * (out.covariance + out.covariance.adjoint()).eval();
  out.conjugate_covariance =
      0.5 * (out.conjugate_covariance + out.conjugate_covariance.transpose()).eval();
  return out;
}

double coherence(const CMatrix& sources) {
  if (sources.rows() < 2) throw InvalidParameter("coherence needs at least two rows");
  RVector norms(sources.rows());
  for (Eigen::Index i = 0; i < sources.rows(); ++i) {
    norms(i) = sources.row(i).norm();
    if (norms(i) == 0.0) throw DegenerateInputError("source row is identically zero");
  }
  double mu = 0.0;
  for (Eigen::Index i = 0; i < sources.rows(); ++i)
    for (Eigen::Index j = i + 1; j < sources.rows(); ++j) {
      const Complex inner = (sources.row(i) * sources.row(j).adjoint())(0, 0);
      mu = std::max(mu, std::abs(inner) / (norms(i) * norms(j)));
    }
  return std::min(mu, 1.0);
}

double sinc(double x) {
  if (std::abs(x) < kSeriesCutoff) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double dirichlet(int n, double x) {
  const double denominator = n * std::sin(x);
  if (std::abs(denominator) < kSeriesCutoff) {
    // sin x ~ 0: x near a multiple of pi, the ratio tends to +-1.
    const double cycles = std::round(x / kPi);
    const double sign = (static_cast<long long>(cycles) * (n - 1)) % 2 == 0 ? 1.0 : -1.0;
    return sign;
  }
  return std::sin(n * x) / denominator;
}

double correlation_argument(double sin_separation, double aperture, double wavelength) {
  return kPi * aperture / wavelength * sin_separation;
}

CorrelationMoments expected_correlation(double rho, int subarrays) {
  if (subarrays < 1) throw InvalidParameter("need at least one subarray");
  const double s = sinc(rho);
  const double inv_k = 1.0 / subarrays;
  return {std::abs(s), inv_k + (1.0 - inv_k) * s * s};
}

CorrelationStatistics full_array_correlation(double theta_i_deg, double theta_j_deg,
                                             double spacing, double aperture, int elements,
                                             int subarrays, double wavelength) {
  if (elements < 1) throw InvalidParameter("need at least one element per subarray");
  const double separation = std::sin(deg_to_rad(theta_i_deg)) - std::sin(deg_to_rad(theta_j_deg));
  CorrelationStatistics out{};
  out.rho = correlation_argument(separation, aperture, wavelength);
  out.varphi = kPi * spacing / wavelength * separation;
  out.dirichlet_factor = dirichlet(elements, out.varphi);
  const auto moments = expected_correlation(out.rho, subarrays);
  const double m2 = out.dirichlet_factor * out.dirichlet_factor;
  out.expected_magnitude = std::abs(out.dirichlet_factor) * moments.magnitude;
  out.expected_power = m2 * moments.power;
  return out;
}

CorrelationMoments sample_correlation(double rho, int subarrays, int draws, std::uint64_t seed) {
  if (subarrays < 1 || draws < 1) throw InvalidParameter("need positive subarrays and draws");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Complex mean_r{0.0, 0.0};
  double mean_power = 0.0;
  for (int t = 0; t < draws; ++t) {
    Complex r{0.0, 0.0};
    // exp(j 2 pi xi / lambda * dsin) = exp(j 2 rho xi / D), xi / D uniform on [0, 1].
    for (int k = 0; k < subarrays; ++k) r += std::polar(1.0, 2.0 * rho * unit(rng));
    r /= static_cast<double>(subarrays);
    mean_r += r;
    mean_power += std::norm(r);
  }
  return {std::abs(mean_r) / draws, mean_power / draws};
}

}  // namespace pcdoa
