#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lpns {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform collocation grid on the periodic box [0, 2pi)^3.
///
/// Wavenumbers use DFT ordering: k = idx for idx < n/2, idx - n otherwise.
/// The Nyquist planes (idx == n/2) are never populated, so the largest
/// resolvable |k_j| is n/2 - 1.
struct Grid {
  int n = 0;

  double spacing() const { return kTwoPi / n; }
  double weight() const {
    const double h = spacing();
    return h * h * h;
  }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  int max_resolved() const { return n / 2 - 1; }

  int wavenumber(int idx) const { return idx < n / 2 ? idx : idx - n; }
  int index(int k) const { return k >= 0 ? k : k + n; }
  bool is_nyquist(int idx) const { return idx == n / 2; }

  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

/// Checked constructor for user-facing grids: n must be a power of two in
/// [8, 512].
inline Grid make_grid(int n) {
  if (!is_power_of_two(n) || n < 8 || n > 512) {
    throw std::invalid_argument("grid size must be a power of two in [8, 512], got " +
                                std::to_string(n));
  }
  return Grid{n};
}

/// Visit every mode as f(flat_index, k1, k2, k3), row-major over (idx1, idx2, idx3).
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.n; ++i2) {
      const int k2 = g.wavenumber(i2);
      for (int i3 = 0; i3 < g.n; ++i3, ++idx) {
        f(idx, k1, k2, g.wavenumber(i3));
      }
    }
  }
}

}  // namespace lpns
