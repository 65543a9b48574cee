#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pcdoa/estimators.hpp"
#include "pcdoa/harness.hpp"

namespace pcdoa {

/// Shortest decimal that parses back to the same binary64.
std::string format_double(double value);

/// theta_deg,source_index,value (1-based source index).
void write_spectra_csv(const std::filesystem::path& path, const DoaEstimate& estimate);

/// source_index,direction_deg,amplitude_real,amplitude_imag,final_cost
void write_estimates_csv(const std::filesystem::path& path, const DoaEstimate& estimate);

/// sweep_value,rmse_deg,resolve_rate,trials_ok
void write_rmse_csv(const std::filesystem::path& path, const MonteCarloReport& report);

/// separation_over_delta,truth,estimate
void write_orthogonality_csv(const std::filesystem::path& path, const OrthogonalityCurve& curve);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& document);

}  // namespace pcdoa
