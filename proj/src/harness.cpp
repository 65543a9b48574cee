#include "pcdoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pcdoa/error.hpp"
#include "pcdoa/orthogonality.hpp"

namespace pcdoa {

void TrialConfig::validate() const {
  if (trials < 1) throw InvalidParameter("trial count must be at least 1");
  if (scenario.directions_deg.empty()) throw InvalidParameter("scenario has no sources");
  if (scenario.directions_deg.size() != scenario.amplitudes.size())
    throw InvalidParameter("directions and amplitudes differ in count");
  for (double t : scenario.directions_deg)
    if (!(t > -90.0 && t < 90.0)) throw InvalidParameter("source direction outside (-90, 90) degrees");
  for (const Complex& a : scenario.amplitudes)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw InvalidParameter("source amplitude is not finite");
  if (std::isnan(scenario.snr_db)) throw InvalidParameter("SNR is NaN");
  for (double v : sweep_values)
    if (!std::isfinite(v)) throw InvalidParameter("sweep values must be finite");
  if (!std::is_sorted(sweep_values.begin(), sweep_values.end()))
    throw InvalidParameter("sweep values must be sorted");
  if (axis != SweepAxis::none && sweep_values.empty())
    throw InvalidParameter("sweep axis set without values");
  if (axis == SweepAxis::separation && scenario.directions_deg.size() < 2)
    throw InvalidParameter("separation sweep needs two sources");
  grid.points();
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t sweep_index,
                         std::uint64_t trial_index) noexcept {
  return mix64(mix64(mix64(base_seed) ^ sweep_index) ^ trial_index);
}

double offset_direction(double theta1_deg, double separation, double resolution) {
  const double s = std::sin(deg_to_rad(theta1_deg)) + separation * resolution;
  if (!(std::abs(s) < 1.0)) throw DomainError("offset direction leaves the visible region");
  return rad_to_deg(std::asin(s));
}

ScenarioSpec scenario_at(const TrialConfig& config, const ArrayGeometry& geometry,
                         std::size_t sweep_index) {
  ScenarioSpec out = config.scenario;
  if (config.axis == SweepAxis::none) return out;
  const double value = config.sweep_values.at(sweep_index);
  if (config.axis == SweepAxis::snr) {
    out.snr_db = value;
  } else {
    out.directions_deg[1] =
        offset_direction(out.directions_deg[0], value, geometry.resolution());
  }
  return out;
}

TrialResult run_trial(const TrialConfig& config, std::size_t sweep_index, std::size_t trial_index) {
  TrialResult out;
  try {
    const ArrayGeometry geometry = build_geometry(config.geometry);
    const ScenarioSpec spec = scenario_at(config, geometry, sweep_index);
    out.truths_deg = spec.directions_deg;

    SourceScenario scenario;
    scenario.directions_deg = spec.directions_deg;
    scenario.amplitudes = spec.amplitudes;
    scenario.noise_variance =
        std::isinf(spec.snr_db) && spec.snr_db > 0 ? 0.0 : noise_variance_from_snr_db(spec.snr_db);
    scenario.seed = trial_seed(config.base_seed, sweep_index, trial_index);

    const Synthesis data = synthesize(geometry, scenario);
    const int sources = static_cast<int>(scenario.sources());
    const SeparationResult separation = jade_separate(data.measurements, sources, config.jade);
    const PhaseOffsetEstimate offsets = estimate_phase_offsets(separation.separated);

    DoaEstimate estimate = bss_mf(data.measurements, geometry, offsets.offsets, config.grid);
    if (config.estimator == Estimator::nls) {
      estimate = bss_nls(data.measurements, geometry, offsets.offsets, estimate.directions_deg,
                         config.nls);
      out.iterations = estimate.iterations;
      out.cost_history = std::move(estimate.cost_history);
    }

    const SourceMatch match = match_sources(estimate.directions_deg, out.truths_deg);
    out.squared_error = match.squared_error;
    out.resolved = true;
    for (std::size_t i = 0; i < out.truths_deg.size(); ++i) {
      const double est = estimate.directions_deg[match.permutation[i]];
      out.estimates_deg.push_back(est);
      const double gap = std::abs(std::sin(deg_to_rad(est)) - std::sin(deg_to_rad(out.truths_deg[i])));
      if (!(gap < geometry.resolution() / 2.0)) out.resolved = false;
    }
    out.ok = true;
  } catch (const Error& e) {
    out.ok = false;
    out.resolved = false;
    out.error = e.what();
  }
  return out;
}

double rmse_deg(const std::vector<TrialResult>& trials) {
  double sum = 0.0;
  int n = 0;
  for (const TrialResult& t : trials)
    if (t.ok) {
      sum += t.squared_error;
      ++n;
    }
  return n == 0 ? 0.0 : std::sqrt(sum / n);
}

MonteCarloReport monte_carlo(const TrialConfig& config) {
  config.validate();
  const std::size_t points = config.axis == SweepAxis::none ? 1 : config.sweep_values.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  MonteCarloReport report;
  report.points.resize(points);
  for (std::size_t p = 0; p < points; ++p) {
    MonteCarloPoint& point = report.points[p];
    point.value = config.axis == SweepAxis::none ? config.scenario.snr_db : config.sweep_values[p];
    point.trials.resize(trials);

    const auto start = std::chrono::steady_clock::now();
    parallel_for(trials, config.threads,
                 [&](std::size_t t) { point.trials[t] = run_trial(config, p, t); });
    point.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    int resolved = 0;
    for (const TrialResult& t : point.trials) {
      if (t.ok) ++point.trials_ok;
      else ++point.failed;
      if (t.resolved) ++resolved;
    }
    point.valid = point.trials_ok > 0;
    point.rmse_deg = rmse_deg(point.trials);
    point.resolve_rate = static_cast<double>(resolved) / static_cast<double>(trials);
  }
  return report;
}

double normalized_correlation(const ArrayGeometry& geometry, double theta1_deg, double theta2_deg) {
  const auto xi = geometry.inter_displacements();
  Complex sum{0.0, 0.0};
  for (double x : xi)
    sum += phase_offset(x, theta2_deg, geometry.wavelength()) *
           std::conj(phase_offset(x, theta1_deg, geometry.wavelength()));
  return std::abs(sum) / static_cast<double>(xi.size());
}

namespace {

OrthogonalityCurve truth_curve(const OrthogonalityConfig& config, const ArrayGeometry& geometry) {
  OrthogonalityCurve out;
  for (double u : config.separations) {
    const double theta2 = offset_direction(config.theta1_deg, u, geometry.resolution());
    out.separation.push_back(u);
    out.truth.push_back(normalized_correlation(geometry, config.theta1_deg, theta2));
  }
  return out;
}

}  // namespace

OrthogonalityCurve orthogonality_experiment(const OrthogonalityConfig& config) {
  if (config.amplitudes.size() != 2) throw InvalidParameter("orthogonality experiment needs two sources");
  const ArrayGeometry geometry = build_geometry(config.geometry);
  OrthogonalityCurve out = truth_curve(config, geometry);
  out.estimate.resize(out.separation.size());

  const double variance = std::isinf(config.snr_db) && config.snr_db > 0
                              ? 0.0
                              : noise_variance_from_snr_db(config.snr_db);
  for (std::size_t i = 0; i < out.separation.size(); ++i) {
    try {
      SourceScenario scenario;
      scenario.directions_deg = {config.theta1_deg,
                                 offset_direction(config.theta1_deg, out.separation[i],
                                                  geometry.resolution())};
      scenario.amplitudes = config.amplitudes;
      scenario.noise_variance = variance;
      scenario.seed = trial_seed(config.seed, i, 0);
      const Synthesis data = synthesize(geometry, scenario);
      const SeparationResult sep = jade_separate(data.measurements, 2, config.jade);
      const CMatrix phi = estimate_phase_offsets(sep.separated).offsets;
      const Complex r = (phi.row(1) * phi.row(0).adjoint())(0, 0) / static_cast<double>(phi.cols());
      out.estimate[i] = std::abs(r);
    } catch (const Error&) {
      out.estimate[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

OrthogonalityCurve orthogonality_statistics(const OrthogonalityConfig& config) {
  const ArrayGeometry geometry = build_geometry(config.geometry);
  OrthogonalityCurve out = truth_curve(config, geometry);
  for (double u : out.separation) {
    // sin-space separation u * Delta gives rho = pi * u.
    out.estimate.push_back(expected_correlation(kPi * u, geometry.subarrays()).magnitude);
  }
  return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pcdoa
