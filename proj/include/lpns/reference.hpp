#pragma once

// Slow reference evaluations used to cross-check the fast paths: direct
// O(n^6) DFT sums and explicit triad convolutions. Nothing here calls FFTW.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "lpns/field.hpp"
#include "lpns/grid.hpp"

namespace lpns::reference {

/// u(x) = sum_k u_hat(k) e^{ik.x} at every collocation point, summed directly.
inline PhysicalField direct_inverse_dft(const SpectralField& u) {
  const Grid& g = u.grid;
  const int n = g.n;
  std::vector<Complex> twiddle(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int x = 0; x < n; ++x)
      twiddle[k * n + x] = std::polar(1.0, kTwoPi * double(k) * x / n);

  PhysicalField v = PhysicalField::zeros(g);
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2)
      for (int x3 = 0; x3 < n; ++x3) {
        std::array<Complex, 3> acc{};
        for (int i1 = 0; i1 < n; ++i1)
          for (int i2 = 0; i2 < n; ++i2) {
            const Complex t12 = twiddle[i1 * n + x1] * twiddle[i2 * n + x2];
            for (int i3 = 0; i3 < n; ++i3) {
              const Complex t = t12 * twiddle[i3 * n + x3];
              const std::size_t idx = g.flat(i1, i2, i3);
              for (int c = 0; c < 3; ++c) acc[c] += u.coeffs[c][idx] * t;
            }
          }
        const std::size_t p = g.flat(x1, x2, x3);
        for (int c = 0; c < 3; ++c) v.values[c][p] = acc[c].real();
      }
  return v;
}

namespace detail {
struct Mode {
  int k1, k2, k3;
  std::array<Complex, 3> c;
};

inline std::vector<Mode> active_modes(const SpectralField& u) {
  std::vector<Mode> modes;
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    const std::array<Complex, 3> c{u.coeffs[0][i], u.coeffs[1][i], u.coeffs[2][i]};
    if (c[0] != Complex{} || c[1] != Complex{} || c[2] != Complex{}) modes.push_back({k1, k2, k3, c});
  });
  return modes;
}
}  // namespace detail

/// (u . grad) u by explicit convolution over all pairs of active modes,
/// keeping only output modes retained by the 2/3 rule.
inline SpectralField direct_advection(const SpectralField& u) {
  const Grid& g = u.grid;
  SpectralField out = SpectralField::zeros(g);
  const auto modes = detail::active_modes(u);
  for (const auto& p : modes) {
    for (const auto& q : modes) {
      const int k1 = p.k1 + q.k1, k2 = p.k2 + q.k2, k3 = p.k3 + q.k3;
      if (3 * std::abs(k1) > g.n || 3 * std::abs(k2) > g.n || 3 * std::abs(k3) > g.n) continue;
      // (u_hat(p) . i q) u_hat(q)
      const Complex adv = Complex(0.0, 1.0) * (p.c[0] * double(q.k1) + p.c[1] * double(q.k2) +
                                               p.c[2] * double(q.k3));
      for (int c = 0; c < 3; ++c) out.at(c, k1, k2, k3) += adv * q.c[c];
    }
  }
  out.dealiased = true;
  return out;
}

/// Spectral coefficients of the symmetric tensor u_i u_j (index 3i+j), by
/// explicit convolution; the result lives on `target`, which must resolve
/// every sum of two active modes.
inline std::array<std::vector<Complex>, 9> direct_tensor_product(const SpectralField& u,
                                                                 const Grid& target) {
  std::array<std::vector<Complex>, 9> out;
  for (auto& c : out) c.assign(target.size(), Complex{});
  const auto modes = detail::active_modes(u);
  for (const auto& p : modes) {
    for (const auto& q : modes) {
      const std::size_t idx = target.flat(target.index(p.k1 + q.k1), target.index(p.k2 + q.k2),
                                          target.index(p.k3 + q.k3));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[3 * i + j][idx] += p.c[i] * q.c[j];
    }
  }
  return out;
}

/// Evaluate sum_k c(k) e^{ik.x} at one point x.
inline double evaluate_at(const Grid& g, const std::vector<Complex>& c, const std::array<double, 3>& x) {
  Complex acc{};
  for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
    if (c[i] == Complex{}) return;
    acc += c[i] * std::polar(1.0, k1 * x[0] + k2 * x[1] + k3 * x[2]);
  });
  return acc.real();
}

}  // namespace lpns::reference
