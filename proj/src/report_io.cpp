#include "pcdoa/report_io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "pcdoa/error.hpp"

namespace pcdoa {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buffer.data(), end);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_spectra_csv(const std::filesystem::path& path, const DoaEstimate& estimate) {
  auto out = open_for_write(path);
  out << "theta_deg,source_index,value\n";
  for (std::size_t l = 0; l < estimate.spectra.size(); ++l)
    for (std::size_t g = 0; g < estimate.grid_deg.size(); ++g)
      out << format_double(estimate.grid_deg[g]) << ',' << (l + 1) << ','
          << format_double(estimate.spectra[l](static_cast<Eigen::Index>(g))) << '\n';
  finish(out, path);
}

void write_estimates_csv(const std::filesystem::path& path, const DoaEstimate& estimate) {
  auto out = open_for_write(path);
  out << "source_index,direction_deg,amplitude_real,amplitude_imag,final_cost\n";
  for (std::size_t l = 0; l < estimate.directions_deg.size(); ++l) {
    const Complex a = l < estimate.amplitudes.size() ? estimate.amplitudes[l] : Complex(0.0, 0.0);
    out << (l + 1) << ',' << format_double(estimate.directions_deg[l]) << ','
        << format_double(a.real()) << ',' << format_double(a.imag()) << ','
        << format_double(estimate.final_cost) << '\n';
  }
  finish(out, path);
}

void write_rmse_csv(const std::filesystem::path& path, const MonteCarloReport& report) {
  auto out = open_for_write(path);
  out << "sweep_value,rmse_deg,resolve_rate,trials_ok\n";
  for (const MonteCarloPoint& p : report.points)
    out << format_double(p.value) << ','
        << (p.valid ? format_double(p.rmse_deg) : std::string("nan")) << ','
        << format_double(p.resolve_rate) << ',' << p.trials_ok << '\n';
  finish(out, path);
}

void write_orthogonality_csv(const std::filesystem::path& path, const OrthogonalityCurve& curve) {
  auto out = open_for_write(path);
  out << "separation_over_delta,truth,estimate\n";
  for (std::size_t i = 0; i < curve.separation.size(); ++i)
    out << format_double(curve.separation[i]) << ',' << format_double(curve.truth[i]) << ','
        << format_double(curve.estimate[i]) << '\n';
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& document) {
  auto out = open_for_write(path);
  out << document.dump(2) << '\n';
  finish(out, path);
}

}  // namespace pcdoa
