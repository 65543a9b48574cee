#pragma once

#include <filesystem>

#include "pcdoa/types.hpp"

namespace pcdoa {

/// Writes `element_index,subarray_index,real,imag` with 1-based indices,
/// subarray-major, full round-trip precision.
void write_snapshot_csv(const std::filesystem::path& path, const CMatrix& x);

/// Reads a snapshot written in any row order. Throws ParseError naming the
/// row for malformed, duplicate or out-of-range cells and naming the
/// (element, subarray) pair for a missing cell; IoError if unreadable.
CMatrix read_snapshot_csv(const std::filesystem::path& path, int elements, int subarrays);

}  // namespace pcdoa
