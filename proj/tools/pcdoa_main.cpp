// pcdoa: command-line front end for the partly calibrated array toolkit.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcdoa/config.hpp"
#include "pcdoa/error.hpp"
#include "pcdoa/jade.hpp"
#include "pcdoa/report_io.hpp"
#include "pcdoa/snapshot_csv.hpp"

namespace fs = std::filesystem;
using namespace pcdoa;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct CommonOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> snr_db;
  std::optional<std::string> estimator;
  std::string input;
  std::optional<std::string> add;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "config file or name under configs/")->required();
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--snr-db", o.snr_db, "SNR in dB");
  cmd->add_option("--estimator", o.estimator, "mf or nls")
      ->check(CLI::IsMember({"mf", "nls"}));
}

RunConfig resolve(const CommonOptions& o) {
  RunConfig config = load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.trials) {
    if (*o.trials < 1) throw ConfigError("--trials must be positive");
    config.trials = *o.trials;
  }
  if (o.snr_db) config.scenario.snr_db = *o.snr_db;
  if (o.estimator) config.estimators = {*o.estimator == "mf" ? Estimator::mf : Estimator::nls};
  try {
    trial_config(config, config.estimators.front()).validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return config;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_sidecar(const fs::path& out, const std::string& command, const RunConfig& config) {
  write_json(out / "run.json",
             {{"command", command}, {"version", PCDOA_VERSION}, {"config", to_json(config)}});
}

SourceScenario scenario_of(const RunConfig& config) {
  SourceScenario s;
  s.directions_deg = config.scenario.directions_deg;
  s.amplitudes = config.scenario.amplitudes;
  s.noise_variance = std::isfinite(config.scenario.snr_db)
                         ? noise_variance_from_snr_db(config.scenario.snr_db)
                         : 0.0;
  s.seed = config.seed;
  return s;
}

void estimate_and_write(const CMatrix& x, const ArrayGeometry& geometry, const RunConfig& config,
                        const fs::path& out) {
  const int sources = static_cast<int>(config.scenario.directions_deg.size());
  const SeparationResult separation = jade_separate(x, sources);
  const PhaseOffsetEstimate offsets = estimate_phase_offsets(separation.separated);
  const DoaEstimate mf = bss_mf(x, geometry, offsets.offsets, config.grid);
  write_spectra_csv(out / "spectra.csv", mf);
  for (Estimator e : config.estimators) {
    const DoaEstimate result =
        e == Estimator::mf ? mf : bss_nls(x, geometry, offsets.offsets, mf.directions_deg);
    write_estimates_csv(out / ("estimates_" + to_string(e) + ".csv"), result);
    std::cerr << to_string(e) << ":";
    for (double d : result.directions_deg) std::cerr << ' ' << format_double(d);
    std::cerr << '\n';
  }
}

int run_synth(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const fs::path out = prepare_out(o.out);
  const ArrayGeometry geometry = build_geometry(config.geometry);
  const Synthesis data = synthesize(geometry, scenario_of(config));
  write_snapshot_csv(out / "snapshot.csv", data.measurements);
  write_sidecar(out, "synth", config);
  return kOk;
}

int run_estimate(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const fs::path out = prepare_out(o.out);
  const ArrayGeometry geometry = build_geometry(config.geometry);
  const Synthesis data = synthesize(geometry, scenario_of(config));
  estimate_and_write(data.measurements, geometry, config, out);
  write_sidecar(out, "estimate", config);
  return kOk;
}

int run_ingest(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const fs::path out = prepare_out(o.out);
  const ArrayGeometry geometry = build_geometry(config.geometry);
  CMatrix x = read_snapshot_csv(o.input, geometry.elements(), geometry.subarrays());
  if (o.add) x += read_snapshot_csv(*o.add, geometry.elements(), geometry.subarrays());
  estimate_and_write(x, geometry, config, out);
  write_sidecar(out, "ingest", config);
  return kOk;
}

int run_orthogonality(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const fs::path out = prepare_out(o.out);
  for (Layout layout : config.layouts) {
    const OrthogonalityConfig oc = orthogonality_config(config, layout);
    const OrthogonalityCurve curve = config.mode == OrthogonalityMode::jade
                                         ? orthogonality_experiment(oc)
                                         : orthogonality_statistics(oc);
    write_orthogonality_csv(out / ("orthogonality_" + to_string(layout) + ".csv"), curve);
  }
  write_sidecar(out, "orthogonality", config);
  return kOk;
}

int run_monte_carlo(const CommonOptions& o, bool separation_sweep, const std::string& command) {
  const RunConfig config = resolve(o);
  if (separation_sweep && config.axis != SweepAxis::separation)
    throw ConfigError("sweep needs run.sweep.axis = separation");
  if (!separation_sweep && config.axis == SweepAxis::separation)
    throw ConfigError("montecarlo needs run.sweep.axis = snr or none");
  const fs::path out = prepare_out(o.out);
  for (Estimator e : config.estimators) {
    const MonteCarloReport report = monte_carlo(trial_config(config, e));
    write_rmse_csv(out / ("rmse_" + to_string(e) + ".csv"), report);
    for (const MonteCarloPoint& p : report.points) {
      std::cerr << to_string(e) << " " << format_double(p.value) << ": " << p.wall_seconds << " s";
      if (p.failed > 0) std::cerr << ", " << p.failed << " failed";
      std::cerr << '\n';
    }
  }
  write_sidecar(out, command, config);
  return kOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidParameter*>(&e))
    return kConfig;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ParseError*>(&e)) return kIo;
  return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direction finding with partly calibrated arrays"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PCDOA_VERSION);

  CommonOptions o;
  auto* synth = app.add_subcommand("synth", "write a synthesized snapshot");
  auto* estimate = app.add_subcommand("estimate", "synthesize and estimate directions");
  auto* ortho = app.add_subcommand("orthogonality", "orthogonality curves per layout");
  auto* mc = app.add_subcommand("montecarlo", "RMSE against SNR");
  auto* sweep = app.add_subcommand("sweep", "RMSE against source separation");
  auto* ingest = app.add_subcommand("ingest", "estimate directions from snapshot files");
  for (auto* cmd : {synth, estimate, ortho, mc, sweep, ingest}) add_common(cmd, o);
  ingest->add_option("--input", o.input, "snapshot CSV")->required();
  ingest->add_option("--add", o.add, "snapshot CSV added to --input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (*synth) code = run_synth(o);
    else if (*estimate) code = run_estimate(o);
    else if (*ortho) code = run_orthogonality(o);
    else if (*mc) code = run_monte_carlo(o, false, "montecarlo");
    else if (*sweep) code = run_monte_carlo(o, true, "sweep");
    else if (*ingest) code = run_ingest(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "wall clock: " << seconds << " s\n";
  return code;
}
