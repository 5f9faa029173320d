#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "gbbm/evolve.hpp"

namespace gbbm {

/// 17-significant-digit decimal rendering, round-trip exact for doubles.
std::string format_g17(double v);

/// Whole-file atomic write (temp file + rename).
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

/// CSV with a header line and %.17g numeric cells.
void write_csv_atomic(const std::filesystem::path& path,
                      const std::string& header,
                      const std::vector<std::vector<double>>& rows);

// Binary snapshot layout: 48-byte header (magic "GBBM1" padded to 8
// bytes, u32 N1, u32 N2, f64 time, f64 nu1, 16-byte flux name), then
// N1*(N2-1) little-endian f64 of v and the same of u, row-major.
inline constexpr std::size_t kSnapshotHeaderBytes = 48;
inline constexpr std::size_t kSnapshotFluxNameBytes = 16;

struct SnapshotData {
  int N1 = 0;
  int N2 = 0;
  double time = 0.0;
  double nu1 = 0.0;
  std::string flux_name;
  std::vector<double> v, u;
};

void write_snapshot_atomic(const std::filesystem::path& path,
                           const SimState& state, const BoundarySignal& h);
SnapshotData read_snapshot(const std::filesystem::path& path);

}  // namespace gbbm
