#pragma once

// Binary snapshot files. Layout, little-endian throughout:
//   "LPNS" | u32 version = 1 | u32 n | f64 nu | f64 t | 16 zero bytes
// followed by the three full complex cubes (re, im as f64) in DFT index
// order, row-major over (i1, i2, i3).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "lpns/errors.hpp"
#include "lpns/field.hpp"
#include "lpns/solver.hpp"

namespace lpns {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 44;

inline std::size_t snapshot_payload_bytes(int n) {
  return 3 * static_cast<std::size_t>(n) * n * n * 16;
}

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  buf.insert(buf.end(), bytes.begin(), bytes.end());
}

template <class T>
T get_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const SolverState& s) {
  std::vector<unsigned char> buf;
  buf.reserve(kSnapshotHeaderBytes + snapshot_payload_bytes(s.u.grid.n));
  for (char ch : {'L', 'P', 'N', 'S'}) buf.push_back(static_cast<unsigned char>(ch));
  detail::put_le<std::uint32_t>(buf, kSnapshotVersion);
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(s.u.grid.n));
  detail::put_le<double>(buf, s.nu);
  detail::put_le<double>(buf, s.t);
  buf.insert(buf.end(), 16, 0);
  for (const auto& comp : s.u.coeffs) {
    for (const Complex& c : comp) {
      detail::put_le<double>(buf, c.real());
      detail::put_le<double>(buf, c.imag());
    }
  }
  return buf;
}

inline SolverState decode_snapshot(const std::vector<unsigned char>& buf, const std::string& name = "snapshot") {
  if (buf.size() < kSnapshotHeaderBytes) {
    throw IoError(name + ": truncated header, expected " + std::to_string(kSnapshotHeaderBytes) +
                  " bytes, found " + std::to_string(buf.size()));
  }
  if (std::memcmp(buf.data(), "LPNS", 4) != 0) throw IoError(name + ": bad magic");
  const auto version = detail::get_le<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion) {
    throw IoError(name + ": unsupported version " + std::to_string(version) + ", expected " +
                  std::to_string(kSnapshotVersion));
  }
  const auto n = detail::get_le<std::uint32_t>(buf.data() + 8);
  if (n < 8 || n > 512 || !is_power_of_two(int(n))) {
    throw IoError(name + ": invalid grid size " + std::to_string(n));
  }
  const std::size_t expected = kSnapshotHeaderBytes + snapshot_payload_bytes(int(n));
  if (buf.size() != expected) {
    throw IoError(name + ": payload size mismatch, expected " + std::to_string(expected) +
                  " bytes, found " + std::to_string(buf.size()));
  }
  SolverState s;
  s.nu = detail::get_le<double>(buf.data() + 12);
  s.t = detail::get_le<double>(buf.data() + 20);
  s.u = SpectralField::zeros(Grid{int(n)});
  const unsigned char* p = buf.data() + kSnapshotHeaderBytes;
  for (auto& comp : s.u.coeffs) {
    for (Complex& c : comp) {
      c = Complex(detail::get_le<double>(p), detail::get_le<double>(p + 8));
      p += 16;
    }
  }
  s.u.divergence_free = divergence_defect(s.u) <= 1e-12;
  s.u.dealiased = true;
  for_each_mode(s.u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    if (!retained_by_dealias(s.u.grid, k1, k2, k3)) {
      for (const auto& comp : s.u.coeffs) {
        if (comp[i] != Complex{}) s.u.dealiased = false;
      }
    }
  });
  return s;
}

inline void write_snapshot(const std::filesystem::path& path, const SolverState& s) {
  const auto buf = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline SolverState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(buf, path.string());
}

}  // namespace lpns
