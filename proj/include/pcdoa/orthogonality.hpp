#pragma once

#include <cstdint>

#include "pcdoa/types.hpp"

namespace pcdoa {

/// Second-order statistics of the source rows of S (L x K).
struct SourceCrossCovariance {
  CMatrix covariance;            // R = S S^H / K, Hermitian
  CMatrix conjugate_covariance;  // R~ = S S^T / K, complex symmetric
};

SourceCrossCovariance cross_covariance(const CMatrix& sources);

/// Largest normalized inner product between two distinct rows of S.
/// Throws DegenerateInputError on an all-zero row.
double coherence(const CMatrix& sources);

/// sin(x)/x, with the series expansion near zero.
double sinc(double x);

/// sin(n x) / (n sin x), with the limit 1 where sin x vanishes.
double dirichlet(int n, double x);

/// rho = pi * D / lambda * (sin(theta_i) - sin(theta_j)), given the sin-space
/// separation.
double correlation_argument(double sin_separation, double aperture, double wavelength);

struct CorrelationMoments {
  double magnitude;  // |E[R]|
  double power;      // E[|R|^2]
};

/// Closed-form moments of the off-diagonal R_ij when every xi_k is uniform on
/// [0, D]: |E[R]| = |sinc(rho)|, E|R|^2 = 1/K + (1 - 1/K) sinc(rho)^2.
CorrelationMoments expected_correlation(double rho, int subarrays);

struct CorrelationStatistics {
  double rho;                 // pi D (sin theta_i - sin theta_j) / lambda
  double varphi;              // pi d (sin theta_i - sin theta_j) / lambda
  double expected_magnitude;  // |E[G]| = |M| |sinc(rho)|
  double expected_power;      // E|G|^2 = M^2 (1/K + (1 - 1/K) sinc(rho)^2)
  double dirichlet_factor;    // M = sin(M-bar varphi) / (M-bar sin varphi), signed
};

/// Full-array angular correlation coefficient statistics for uniform-random
/// subarray placement and intra-subarray positions (m-1)d.
CorrelationStatistics full_array_correlation(double theta_i_deg, double theta_j_deg,
                                             double spacing, double aperture, int elements,
                                             int subarrays, double wavelength);

/// Monte-Carlo estimate of (|E[R]|, E|R|^2) by direct summation over `draws`
/// geometries with every xi_k drawn uniform on [0, D].
CorrelationMoments sample_correlation(double rho, int subarrays, int draws, std::uint64_t seed);

}  // namespace pcdoa
