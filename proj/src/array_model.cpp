#include "pcdoa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pcdoa/error.hpp"

namespace pcdoa {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool in_open_domain(double theta_deg) { return theta_deg > -90.0 && theta_deg < 90.0; }

}  // namespace

ArrayGeometry::ArrayGeometry(double wavelength, std::vector<double> intra_displacements,
                             std::vector<double> inter_displacements, double aperture)
    : wavelength_(wavelength),
      intra_(std::move(intra_displacements)),
      inter_(std::move(inter_displacements)),
      aperture_(aperture) {
  if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_))
    throw InvalidParameter("wavelength must be positive and finite");
  if (!(aperture_ > 0.0) || !std::isfinite(aperture_))
    throw InvalidParameter("aperture must be positive and finite");
  if (intra_.size() < 2) throw InvalidParameter("a subarray needs at least two elements");
  if (inter_.size() < 2) throw InvalidParameter("the array needs at least two subarrays");
  if (!all_finite(intra_) || !all_finite(inter_))
    throw InvalidParameter("displacements must be finite");
  if (intra_.front() != 0.0) throw InvalidParameter("first intra-subarray displacement must be 0");
  if (inter_.front() != 0.0) throw InvalidParameter("first inter-subarray displacement must be 0");
}

std::vector<double> ArrayGeometry::element_positions() const {
  std::vector<double> positions;
  positions.reserve(intra_.size() * inter_.size());
  for (double xi : inter_)
    for (double eta : intra_) positions.push_back(xi + eta);
  return positions;
}

double ArrayGeometry::element_extent() const {
  const auto positions = element_positions();
  const auto [lo, hi] = std::minmax_element(positions.begin(), positions.end());
  return *hi - *lo;
}

ArrayGeometry build_geometry(const GeometryParams& p) {
  if (p.subarrays < 2) throw InvalidParameter("need at least two subarrays");
  if (p.elements < 2) throw InvalidParameter("need at least two elements per subarray");
  if (!(p.spacing > 0.0)) throw InvalidParameter("element spacing must be positive");
  if (!(p.aperture > 0.0)) throw InvalidParameter("aperture must be positive");
  if (!(p.wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
  if (!(p.aperture > (p.elements - 1) * p.spacing))
    throw InvalidParameter("aperture must exceed the subarray length (M-1)d");

  std::vector<double> intra(static_cast<std::size_t>(p.elements));
  for (int m = 0; m < p.elements; ++m) intra[static_cast<std::size_t>(m)] = m * p.spacing;

  std::vector<double> inter(static_cast<std::size_t>(p.subarrays), 0.0);
  switch (p.layout) {
    case Layout::equidistant:
      for (int k = 1; k < p.subarrays; ++k)
        inter[static_cast<std::size_t>(k)] = k * p.aperture / (p.subarrays - 1);
      break;
    case Layout::uniform_random: {
      std::mt19937_64 rng(p.seed);
      std::uniform_real_distribution<double> position(0.0, p.aperture);
      for (int k = 1; k < p.subarrays; ++k) inter[static_cast<std::size_t>(k)] = position(rng);
      break;
    }
  }
  return ArrayGeometry(p.wavelength, std::move(intra), std::move(inter), p.aperture);
}

std::vector<std::string> SourceScenario::validate(const ArrayGeometry& geometry) const {
  if (directions_deg.empty()) throw InvalidParameter("scenario has no sources");
  if (directions_deg.size() != amplitudes.size())
    throw ShapeError("directions and amplitudes differ in length");
  for (double theta : directions_deg)
    if (!in_open_domain(theta)) throw DomainError("source direction outside (-90, 90) degrees");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw InvalidParameter("noise variance must be finite and nonnegative");
  if (static_cast<int>(sources()) >= geometry.elements()) {
    std::ostringstream msg;
    msg << sources() << " sources need more than " << geometry.elements()
        << " elements per subarray";
    throw IdentifiabilityError(msg.str());
  }

  std::vector<std::string> warnings;
  const bool any_positive = std::any_of(directions_deg.begin(), directions_deg.end(),
                                        [](double t) { return t > 0.0; });
  const bool any_negative = std::any_of(directions_deg.begin(), directions_deg.end(),
                                        [](double t) { return t < 0.0; });
  if (any_positive && any_negative)
    warnings.emplace_back(
        "directions have mixed signs; sum-frequency terms may not be decorrelated");
  return warnings;
}

double noise_variance_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
  const double wavenumber_sin = 2.0 * kPi / geometry.wavelength() * std::sin(deg_to_rad(theta_deg));
  const auto eta = geometry.intra_displacements();
  CVector b(static_cast<Eigen::Index>(eta.size()));
  for (std::size_t m = 0; m < eta.size(); ++m)
    b(static_cast<Eigen::Index>(m)) = std::polar(1.0, wavenumber_sin * eta[m]);
  return b;
}

CMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const double> thetas_deg) {
  CMatrix b(geometry.elements(), static_cast<Eigen::Index>(thetas_deg.size()));
  for (std::size_t l = 0; l < thetas_deg.size(); ++l)
    b.col(static_cast<Eigen::Index>(l)) = steering_vector(geometry, thetas_deg[l]);
  return b;
}

Complex phase_offset(double inter_displacement, double theta_deg, double wavelength) {
  return std::polar(1.0, 2.0 * kPi / wavelength * inter_displacement * std::sin(deg_to_rad(theta_deg)));
}

CMatrix source_signal_matrix(const ArrayGeometry& geometry, const SourceScenario& scenario) {
  const auto xi = geometry.inter_displacements();
  CMatrix s(static_cast<Eigen::Index>(scenario.sources()), geometry.subarrays());
  for (std::size_t l = 0; l < scenario.sources(); ++l)
    for (std::size_t k = 0; k < xi.size(); ++k)
      s(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
          scenario.amplitudes[l] *
          phase_offset(xi[k], scenario.directions_deg[l], geometry.wavelength());
  return s;
}

Synthesis synthesize(const ArrayGeometry& geometry, const SourceScenario& scenario) {
  scenario.validate(geometry);

  Synthesis out;
  out.source_signals = source_signal_matrix(geometry, scenario);
  out.measurements = steering_matrix(geometry, scenario.directions_deg) * out.source_signals;

  if (scenario.noise_variance > 0.0) {
    std::mt19937_64 rng(scenario.seed);
    std::normal_distribution<double> component(0.0, std::sqrt(scenario.noise_variance / 2.0));
    for (Eigen::Index k = 0; k < out.measurements.cols(); ++k)
      for (Eigen::Index m = 0; m < out.measurements.rows(); ++m) {
        const double re = component(rng);
        const double im = component(rng);
        out.measurements(m, k) += Complex(re, im);
      }
  }
  return out;
}

}  // namespace pcdoa
