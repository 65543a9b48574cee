#include "pcdoa/snapshot_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcdoa/error.hpp"
#include "pcdoa/report_io.hpp"

namespace pcdoa {

namespace {

constexpr const char* kHeader = "element_index,subarray_index,real,imag";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, std::size_t row, const char* name) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last || text.empty())
    throw ParseError(row, std::string("row ") + std::to_string(row) + ": field " + name +
                              " is not numeric: '" + text + "'");
  return value;
}

}  // namespace

void write_snapshot_csv(const std::filesystem::path& path, const CMatrix& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << kHeader << '\n';
  for (Eigen::Index k = 0; k < x.cols(); ++k)
    for (Eigen::Index m = 0; m < x.rows(); ++m)
      out << (m + 1) << ',' << (k + 1) << ',' << format_double(x(m, k).real()) << ','
          << format_double(x(m, k).imag()) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

CMatrix read_snapshot_csv(const std::filesystem::path& path, int elements, int subarrays) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "row 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParseError(1, "row 1: expected header '" + std::string(kHeader) + "'");

  CMatrix x = CMatrix::Zero(elements, subarrays);
  std::vector<bool> seen(static_cast<std::size_t>(elements) * static_cast<std::size_t>(subarrays),
                         false);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 4)
      throw ParseError(row, "row " + std::to_string(row) + ": expected 4 fields, got " +
                                std::to_string(fields.size()));
    const int m = parse_field<int>(fields[0], row, "element_index");
    const int k = parse_field<int>(fields[1], row, "subarray_index");
    const double re = parse_field<double>(fields[2], row, "real");
    const double im = parse_field<double>(fields[3], row, "imag");
    if (m < 1 || m > elements || k < 1 || k > subarrays)
      throw ParseError(row, "row " + std::to_string(row) + ": cell (" + std::to_string(m) + ", " +
                                std::to_string(k) + ") outside " + std::to_string(elements) +
                                " x " + std::to_string(subarrays));
    const auto slot = static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(elements) +
                      static_cast<std::size_t>(m - 1);
    if (seen[slot])
      throw ParseError(row, "row " + std::to_string(row) + ": duplicate cell (" +
                                std::to_string(m) + ", " + std::to_string(k) + ")");
    seen[slot] = true;
    x(m - 1, k - 1) = Complex(re, im);
  }

  for (int k = 1; k <= subarrays; ++k)
    for (int m = 1; m <= elements; ++m)
      if (!seen[static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(elements) +
                static_cast<std::size_t>(m - 1)])
        throw ParseError(row, "missing cell (element " + std::to_string(m) + ", subarray " +
                                  std::to_string(k) + ")");
  return x;
}

}  // namespace pcdoa
