#include "gbbm/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace gbbm {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv_atomic(const std::filesystem::path& path,
                      const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out = header;
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_g17(row[i]);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  s.append(b, 4);
}
void put_f64(std::string& s, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  s.append(b, 8);
}

}  // namespace

void write_snapshot_atomic(const std::filesystem::path& path,
                           const SimState& state, const BoundarySignal& h) {
  const GridSpec& g = *state.v.grid();
  std::string out;
  out.reserve(kSnapshotHeaderBytes + 2 * g.size() * 8);

  char magic[8] = {'G', 'B', 'B', 'M', '1', 0, 0, 0};
  out.append(magic, 8);
  put_u32(out, static_cast<std::uint32_t>(g.N1()));
  put_u32(out, static_cast<std::uint32_t>(g.N2()));
  put_f64(out, state.t);
  put_f64(out, state.nu1);
  char name[kSnapshotFluxNameBytes] = {};
  std::strncpy(name, state.flux_name.c_str(), kSnapshotFluxNameBytes - 1);
  out.append(name, kSnapshotFluxNameBytes);

  for (double x : state.v.values()) put_f64(out, x);

  const std::vector<double> hrow = h.sample(g, state.t);
  const std::vector<double> e = lifting_profile(g);
  for (int i = 0; i < g.nx(); ++i) {
    for (int k = 0; k < g.ny(); ++k) {
      put_f64(out, state.v.at(i, k) + hrow[i] * e[k]);
    }
  }
  write_file_atomic(path, out);
}

SnapshotData read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < kSnapshotHeaderBytes ||
      std::memcmp(buf.data(), "GBBM1\0\0\0", 8) != 0) {
    throw std::runtime_error("not a GBBM1 snapshot: " + path.string());
  }
  SnapshotData d;
  std::uint32_t n1 = 0, n2 = 0;
  std::memcpy(&n1, buf.data() + 8, 4);
  std::memcpy(&n2, buf.data() + 12, 4);
  std::memcpy(&d.time, buf.data() + 16, 8);
  std::memcpy(&d.nu1, buf.data() + 24, 8);
  d.N1 = static_cast<int>(n1);
  d.N2 = static_cast<int>(n2);
  const char* name = buf.data() + 32;
  d.flux_name.assign(name, strnlen(name, kSnapshotFluxNameBytes));

  const std::size_t count = static_cast<std::size_t>(d.N1) * (d.N2 - 1);
  if (buf.size() != kSnapshotHeaderBytes + 2 * count * 8) {
    throw std::runtime_error("snapshot payload size mismatch: " +
                             path.string());
  }
  d.v.resize(count);
  d.u.resize(count);
  std::memcpy(d.v.data(), buf.data() + kSnapshotHeaderBytes, count * 8);
  std::memcpy(d.u.data(), buf.data() + kSnapshotHeaderBytes + count * 8,
              count * 8);
  return d;
}

}  // namespace gbbm
