#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcdoa/types.hpp"

namespace pcdoa {

enum class Layout { equidistant, uniform_random };

/// Parameters for build_geometry(). All lengths share the unit of
/// `wavelength`.
struct GeometryParams {
  Layout layout = Layout::equidistant;
  int subarrays = 10;       // K
  int elements = 10;        // M-bar, elements per subarray
  double spacing = 0.5;     // d, intra-subarray element spacing
  double aperture = 450.0;  // D, span of the inter-subarray displacements
  double wavelength = 1.0;
  std::uint64_t seed = 0;   // only used by Layout::uniform_random
};

/// Partly calibrated linear array made of identical subarrays.
///
/// Element m of subarray k sits at xi[k] + eta[m]. The intra-subarray
/// displacements eta are known to the estimators; the inter-subarray
/// displacements xi are only used to synthesize data and to evaluate
/// ground-truth statistics.
class ArrayGeometry {
 public:
  /// Throws InvalidParameter unless eta[0] == 0, xi[0] == 0, both have at
  /// least two finite entries, and wavelength and aperture are positive.
  ArrayGeometry(double wavelength, std::vector<double> intra_displacements,
                std::vector<double> inter_displacements, double aperture);

  double wavelength() const noexcept { return wavelength_; }
  std::span<const double> intra_displacements() const noexcept { return intra_; }
  std::span<const double> inter_displacements() const noexcept { return inter_; }
  int elements() const noexcept { return static_cast<int>(intra_.size()); }
  int subarrays() const noexcept { return static_cast<int>(inter_.size()); }

  /// Nominal aperture D used for the resolution cell.
  double aperture() const noexcept { return aperture_; }
  /// Resolution cell in sin-space, lambda / D.
  double resolution() const noexcept { return wavelength_ / aperture_; }

  /// Absolute element positions, subarray-major (all of subarray 1 first).
  std::vector<double> element_positions() const;
  /// max(position) - min(position) over all elements.
  double element_extent() const;

 private:
  double wavelength_;
  std::vector<double> intra_;
  std::vector<double> inter_;
  double aperture_;
};

ArrayGeometry build_geometry(const GeometryParams& params);

/// Far-field sources seen by the array. Directions are degrees.
struct SourceScenario {
  std::vector<double> directions_deg;
  std::vector<Complex> amplitudes;
  double noise_variance = 0.0;  // per complex entry; SNR = 1 / noise_variance
  std::uint64_t seed = 0;

  std::size_t sources() const noexcept { return directions_deg.size(); }

  /// Throws on hard violations (shape, range, identifiability) and returns
  /// human-readable warnings for soft ones (mixed-sign directions).
  std::vector<std::string> validate(const ArrayGeometry& geometry) const;
};

/// sigma^2 = 10^(-snr_db / 10).
double noise_variance_from_snr_db(double snr_db);

/// b(theta)_m = exp(j 2 pi / lambda * eta_m * sin(theta)).
CVector steering_vector(const ArrayGeometry& geometry, double theta_deg);

/// Columns are steering vectors, one per direction (M-bar x L).
CMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const double> thetas_deg);

/// phi_k(theta) = exp(j 2 pi / lambda * xi_k * sin(theta)).
Complex phase_offset(double inter_displacement, double theta_deg, double wavelength);

/// Noise-free L x K source matrix; row l is s_l * (phi_1(theta_l), ..., phi_K(theta_l)).
CMatrix source_signal_matrix(const ArrayGeometry& geometry, const SourceScenario& scenario);

struct Synthesis {
  CMatrix measurements;    // X, M-bar x K, column k is subarray k's snapshot
  CMatrix source_signals;  // S, L x K, noise free
};

/// X = B(theta) S + N with N circular Gaussian of variance noise_variance per
/// entry, drawn from a generator seeded with scenario.seed. The noise is drawn
/// column by column, real part before imaginary part.
Synthesis synthesize(const ArrayGeometry& geometry, const SourceScenario& scenario);

}  // namespace pcdoa
