#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pcdoa/array_model.hpp"
#include "pcdoa/estimators.hpp"
#include "pcdoa/jade.hpp"

namespace pcdoa {

enum class Estimator { mf, nls };
enum class SweepAxis { none, snr, separation };

struct ScenarioSpec {
  std::vector<double> directions_deg;
  std::vector<Complex> amplitudes;
  double snr_db = std::numeric_limits<double>::infinity();  // infinity: noiseless
};

struct TrialConfig {
  GeometryParams geometry;
  ScenarioSpec scenario;
  Estimator estimator = Estimator::nls;
  AngleGrid grid;
  NlsOptions nls;
  JointDiagonalizationOptions jade;
  SweepAxis axis = SweepAxis::none;
  /// SNR in dB, or the offset (sin theta_2 - sin theta_1) / Delta of the
  /// second source.
  std::vector<double> sweep_values;
  int trials = 1;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws InvalidParameter on a malformed configuration.
  void validate() const;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// mix64(mix64(mix64(base) ^ sweep) ^ trial).
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t sweep_index,
                         std::uint64_t trial_index) noexcept;

/// Directions and noise level at one sweep point.
ScenarioSpec scenario_at(const TrialConfig& config, const ArrayGeometry& geometry,
                         std::size_t sweep_index);

struct TrialResult {
  bool ok = false;
  std::string error;                  // set when !ok
  std::vector<double> truths_deg;
  std::vector<double> estimates_deg;  // aligned to truths_deg
  double squared_error = 0.0;         // degrees^2, summed over sources
  bool resolved = false;              // every |sin est - sin truth| < Delta / 2
  int iterations = 0;
  std::vector<double> cost_history;   // NLS only
};

/// One synthesize, separate, phase-offset and estimate pass. Library errors
/// are recorded in the result instead of propagating.
TrialResult run_trial(const TrialConfig& config, std::size_t sweep_index, std::size_t trial_index);

struct MonteCarloPoint {
  double value = 0.0;
  double rmse_deg = 0.0;      // over successful trials
  double resolve_rate = 0.0;  // over all trials
  int trials_ok = 0;
  int failed = 0;
  bool valid = false;         // false when every trial failed
  double wall_seconds = 0.0;
  std::vector<TrialResult> trials;
};

struct MonteCarloReport {
  std::vector<MonteCarloPoint> points;
};

MonteCarloReport monte_carlo(const TrialConfig& config);

/// sqrt(mean of summed squared errors) over successful trials; 0 if none.
double rmse_deg(const std::vector<TrialResult>& trials);

struct OrthogonalityConfig {
  GeometryParams geometry;
  double theta1_deg = 1.2;
  std::vector<Complex> amplitudes{Complex(1.0, 0.0), Complex(1.0, 0.0)};
  double snr_db = 40.0;
  std::vector<double> separations;  // (sin theta_2 - sin theta_1) / Delta
  std::uint64_t seed = 0;
  JointDiagonalizationOptions jade;
};

struct OrthogonalityCurve {
  std::vector<double> separation;
  std::vector<double> truth;     // |R_21| / (|s_1| |s_2|) of the geometry
  std::vector<double> estimate;  // NaN where separation failed
};

/// Truth against |(1/K) sum_k phi-hat_2k conj(phi-hat_1k)| from JADE.
OrthogonalityCurve orthogonality_experiment(const OrthogonalityConfig& config);

/// Truth against the geometry-averaged |sinc rho|.
OrthogonalityCurve orthogonality_statistics(const OrthogonalityConfig& config);

/// Normalized |R_21| of the noise-free sources at (theta_1, theta_2).
double normalized_correlation(const ArrayGeometry& geometry, double theta1_deg, double theta2_deg);

/// theta_2 = asin(sin theta_1 + u Delta) in degrees. Throws DomainError if
/// the sine leaves (-1, 1).
double offset_direction(double theta1_deg, double separation, double resolution);

/// Runs fn(0..n-1) on up to `threads` workers (0: hardware concurrency).
/// The first exception thrown by fn is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace pcdoa
