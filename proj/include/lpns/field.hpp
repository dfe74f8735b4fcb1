#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lpns/fft.hpp"
#include "lpns/grid.hpp"

namespace lpns {

using ComplexCube = std::vector<Complex>;
using RealCube = std::vector<double>;

/// Velocity u(x) = sum_k u_hat(k) e^{ik.x}, stored as three full complex
/// cubes in DFT index order.
struct SpectralField {
  Grid grid;
  std::array<ComplexCube, 3> coeffs;
  bool divergence_free = false;
  bool dealiased = false;

  static SpectralField zeros(const Grid& g) {
    SpectralField u{g, {}, false, false};
    for (auto& c : u.coeffs) c.assign(g.size(), Complex{});
    return u;
  }

  Complex& at(int comp, int k1, int k2, int k3) {
    return coeffs[comp][grid.flat(grid.index(k1), grid.index(k2), grid.index(k3))];
  }
  const Complex& at(int comp, int k1, int k2, int k3) const {
    return coeffs[comp][grid.flat(grid.index(k1), grid.index(k2), grid.index(k3))];
  }

  /// Sets u_hat(k) = v and u_hat(-k) = conj(v) so the field stays real.
  void set_mode(int k1, int k2, int k3, const std::array<Complex, 3>& v) {
    for (int c = 0; c < 3; ++c) {
      at(c, k1, k2, k3) = v[c];
      at(c, -k1, -k2, -k3) = std::conj(v[c]);
    }
  }
};

/// Collocation samples of a real vector field at x = h * idx.
struct PhysicalField {
  Grid grid;
  std::array<RealCube, 3> values;

  static PhysicalField zeros(const Grid& g) {
    PhysicalField v{g, {}};
    for (auto& c : v.values) c.assign(g.size(), 0.0);
    return v;
  }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}

inline SpectralField operator+(SpectralField a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  for (int c = 0; c < 3; ++c) {
    auto& x = a.coeffs[c];
    const auto& y = b.coeffs[c];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  }
  a.divergence_free = a.divergence_free && b.divergence_free;
  a.dealiased = a.dealiased && b.dealiased;
  return a;
}

inline SpectralField operator-(SpectralField a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  for (int c = 0; c < 3; ++c) {
    auto& x = a.coeffs[c];
    const auto& y = b.coeffs[c];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  }
  a.divergence_free = a.divergence_free && b.divergence_free;
  a.dealiased = a.dealiased && b.dealiased;
  return a;
}

inline SpectralField operator*(double s, SpectralField a) {
  for (auto& comp : a.coeffs) {
    for (auto& x : comp) x *= s;
  }
  return a;
}

inline double max_abs(const SpectralField& u) {
  double m = 0.0;
  for (const auto& comp : u.coeffs) {
    for (const auto& x : comp) m = std::max(m, std::abs(x));
  }
  return m;
}

/// max_k |u_hat(k) - v_hat(k)| over all components.
inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < a.coeffs[c].size(); ++i) {
      m = std::max(m, std::abs(a.coeffs[c][i] - b.coeffs[c][i]));
    }
  }
  return m;
}

/// max_k |k . u_hat(k)| / max_k |u_hat(k)|; zero for the zero field.
inline double divergence_defect(const SpectralField& u) {
  double num = 0.0;
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    const Complex d = double(k1) * u.coeffs[0][i] + double(k2) * u.coeffs[1][i] +
                      double(k3) * u.coeffs[2][i];
    num = std::max(num, std::abs(d));
  });
  const double den = max_abs(u);
  return den > 0.0 ? num / den : 0.0;
}

/// max_k |u_hat(-k) - conj(u_hat(k))|, skipping the (unused) Nyquist planes.
inline double hermitian_defect(const SpectralField& u) {
  const Grid& g = u.grid;
  double m = 0.0;
  for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
    if (g.is_nyquist(g.index(k1)) || g.is_nyquist(g.index(k2)) || g.is_nyquist(g.index(k3)))
      return;
    for (int c = 0; c < 3; ++c) {
      m = std::max(m, std::abs(u.at(c, -k1, -k2, -k3) - std::conj(u.coeffs[c][i])));
    }
  });
  return m;
}

/// Largest Euclidean |k| carrying a nonzero coefficient.
inline double max_active_wavenumber(const SpectralField& u) {
  double kmax = 0.0;
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    if (u.coeffs[0][i] != Complex{} || u.coeffs[1][i] != Complex{} ||
        u.coeffs[2][i] != Complex{}) {
      kmax = std::max(kmax, std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3)));
    }
  });
  return kmax;
}

}  // namespace lpns
