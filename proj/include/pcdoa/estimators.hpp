#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcdoa/array_model.hpp"
#include "pcdoa/types.hpp"

namespace pcdoa {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct PhaseOffsetEstimate {
  CMatrix offsets;     // L x K, unit modulus
  BoolMatrix degenerate;  // entries whose magnitude fell below the threshold
};

/// Entry-wise normalization of the separated rows. Entries with modulus
/// below `magnitude_threshold` are replaced by 1 and flagged.
PhaseOffsetEstimate estimate_phase_offsets(const CMatrix& separated, double magnitude_threshold);

/// Same with the threshold 1e-12 * max |entry|.
PhaseOffsetEstimate estimate_phase_offsets(const CMatrix& separated);

/// Inclusive angle grid in degrees.
struct AngleGrid {
  double start = -89.99;
  double stop = 89.99;
  double step = 0.01;

  /// start + i * step for every i that stays at or below stop (up to a
  /// 1e-9 step slack). Throws InvalidParameter when empty or outside (-90, 90).
  std::vector<double> points() const;
};

struct DoaEstimate {
  std::vector<double> directions_deg;
  std::vector<Complex> amplitudes;   // NLS only
  std::vector<RVector> spectra;      // MF only, one per source over grid_deg
  std::vector<double> grid_deg;      // MF only
  int iterations = 0;
  double final_cost = 0.0;
  std::vector<double> cost_history;  // NLS: initial cost, then every accepted step
};

/// One matched-filter search per source:
///   theta_l = argmax |sum_k x_k^H b(theta) phi_lk|.
/// The first grid point wins ties.
DoaEstimate bss_mf(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                   const AngleGrid& grid = {});

/// C(theta, s) = sum_k || x_k - B(theta) Phi_k s ||^2.
double nls_cost(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                std::span<const double> thetas_deg, std::span<const Complex> amplitudes);

struct NlsGradient {
  RVector theta;       // dC/dtheta_l, theta in radians
  CVector amplitudes;  // dC/dRe s_l + j dC/dIm s_l
};

NlsGradient nls_gradient(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                         std::span<const double> thetas_deg, std::span<const Complex> amplitudes);

/// Least-squares amplitudes for fixed directions (column-pivoting QR).
std::vector<Complex> least_squares_amplitudes(const CMatrix& x, const ArrayGeometry& geometry,
                                              const CMatrix& offsets,
                                              std::span<const double> thetas_deg);

struct NlsOptions {
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  int max_halvings = 50;
  int max_iterations = 500;
  double tolerance = 1e-10;  // relative cost decrease per iteration
};

/// Alternating Armijo gradient descent, amplitudes first, then directions.
/// Directions are kept inside (-90, 90) degrees. Throws DomainError on a
/// non-finite gradient or an initial direction outside the domain.
DoaEstimate bss_nls(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                    std::span<const double> initial_deg, std::span<const Complex> initial_amplitudes,
                    const NlsOptions& options = {});

/// Starts from `initial_deg` with least-squares amplitudes.
DoaEstimate bss_nls(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                    std::span<const double> initial_deg, const NlsOptions& options = {});

struct SourceMatch {
  std::vector<std::size_t> permutation;  // truth i is paired with estimate permutation[i]
  double squared_error = 0.0;            // degrees^2
};

/// Exhaustive search over the L! pairings (L <= 8); the lexicographically
/// smallest permutation wins ties.
SourceMatch match_sources(std::span<const double> estimates_deg,
                          std::span<const double> truths_deg);

}  // namespace pcdoa
