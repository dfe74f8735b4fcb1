#pragma once

// Transforms, Fourier multipliers and norms for periodic vector fields.
// Convention: u(x) = sum_k u_hat(k) e^{ik.x}, so integrals over the box pick
// up a (2 pi)^3 factor in Parseval's identity.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpns/fft.hpp"
#include "lpns/field.hpp"
#include "lpns/grid.hpp"

namespace lpns {

inline constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void check_oversample(int oversample) {
  if (oversample != 1 && oversample != 2 && oversample != 4) {
    throw std::invalid_argument("oversample must be 1, 2 or 4, got " + std::to_string(oversample));
  }
}

/// Real samples of one spectral component on the (oversample * n)^3 grid.
inline RealCube to_physical_scalar(const Grid& g, const ComplexCube& c, int oversample = 1) {
  const int m = g.n * oversample;
  RealCube out(static_cast<std::size_t>(m) * m * m);
  detail::inverse_real(g, c.data(), m, out.data());
  return out;
}

inline ComplexCube to_spectral_scalar(const Grid& g, const RealCube& v) {
  ComplexCube out(g.size());
  detail::forward_real(g, v.data(), out.data());
  return out;
}

inline PhysicalField to_physical(const SpectralField& u, int oversample = 1) {
  check_oversample(oversample);
  PhysicalField v{Grid{u.grid.n * oversample}, {}};
  for (int c = 0; c < 3; ++c) v.values[c] = to_physical_scalar(u.grid, u.coeffs[c], oversample);
  return v;
}

inline SpectralField to_spectral(const PhysicalField& v) {
  SpectralField u{v.grid, {}, false, false};
  for (int c = 0; c < 3; ++c) u.coeffs[c] = to_spectral_scalar(v.grid, v.values[c]);
  return u;
}

/// Same field on a finer m^3 grid (m a multiple of n), modes zero-padded.
inline SpectralField pad(const SpectralField& u, int m) {
  if (m < u.grid.n || m % u.grid.n != 0) throw std::invalid_argument("pad: bad target size");
  SpectralField out = SpectralField::zeros(Grid{m});
  out.divergence_free = u.divergence_free;
  out.dealiased = u.dealiased;
  const int kmax = u.grid.max_resolved();
  for (int c = 0; c < 3; ++c) {
    for (int k1 = -kmax; k1 <= kmax; ++k1)
      for (int k2 = -kmax; k2 <= kmax; ++k2)
        for (int k3 = -kmax; k3 <= kmax; ++k3) out.at(c, k1, k2, k3) = u.at(c, k1, k2, k3);
  }
  return out;
}

/// u_hat(k) <- u_hat(k) - k (k . u_hat(k)) / |k|^2 for k != 0.
inline SpectralField leray_project(SpectralField u) {
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    const double k2sum = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
    if (k2sum == 0.0) return;
    const Complex dot = double(k1) * u.coeffs[0][i] + double(k2) * u.coeffs[1][i] +
                        double(k3) * u.coeffs[2][i];
    const Complex s = dot / k2sum;
    u.coeffs[0][i] -= double(k1) * s;
    u.coeffs[1][i] -= double(k2) * s;
    u.coeffs[2][i] -= double(k3) * s;
  });
  u.divergence_free = true;
  return u;
}

/// Zero-average normalization: u_hat(0) = 0.
inline SpectralField remove_mean(SpectralField u) {
  for (auto& c : u.coeffs) c[0] = Complex{};
  return u;
}

/// 2/3 rule: a mode survives iff 3|k_j| <= n for every axis.
inline bool retained_by_dealias(const Grid& g, int k1, int k2, int k3) {
  return 3 * std::abs(k1) <= g.n && 3 * std::abs(k2) <= g.n && 3 * std::abs(k3) <= g.n;
}

inline SpectralField dealias(SpectralField u) {
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    if (!retained_by_dealias(u.grid, k1, k2, k3)) {
      for (auto& c : u.coeffs) c[i] = Complex{};
    }
  });
  u.dealiased = true;
  return u;
}

/// Spectral velocity gradient; component(i, j) holds d_i u_j.
struct VelocityGradient {
  Grid grid;
  std::array<ComplexCube, 9> coeffs;

  const ComplexCube& component(int i, int j) const { return coeffs[3 * i + j]; }
};

inline VelocityGradient gradient(const SpectralField& u) {
  VelocityGradient g{u.grid, {}};
  for (auto& c : g.coeffs) c.assign(u.grid.size(), Complex{});
  for_each_mode(u.grid, [&](std::size_t idx, int k1, int k2, int k3) {
    const std::array<double, 3> k{double(k1), double(k2), double(k3)};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) g.coeffs[3 * i + j][idx] = Complex(0.0, k[i]) * u.coeffs[j][idx];
    }
  });
  return g;
}

/// Pseudo-spectral (u . grad) u followed by the 2/3 dealiasing mask. The
/// result is not Leray-projected.
inline SpectralField nonlinear_advection(const SpectralField& u) {
  const Grid& g = u.grid;
  const PhysicalField v = to_physical(u);
  const VelocityGradient grad = gradient(u);
  PhysicalField prod = PhysicalField::zeros(g);
  for (int j = 0; j < 3; ++j) {
    auto& out = prod.values[j];
    for (int i = 0; i < 3; ++i) {
      const RealCube dij = to_physical_scalar(g, grad.component(i, j));
      const RealCube& ui = v.values[i];
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += ui[x] * dij[x];
    }
  }
  SpectralField n = dealias(to_spectral(prod));
  n.divergence_free = false;
  return n;
}

/// div(u (x) u), dealiased. Equals nonlinear_advection(u) for divergence-free,
/// dealiased u, with 9 transforms instead of 15.
inline SpectralField divergence_advection(const SpectralField& u) {
  const Grid& g = u.grid;
  const PhysicalField v = to_physical(u);
  std::array<ComplexCube, 6> uu;  // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
  RealCube prod(g.size());
  int slot = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j, ++slot) {
      const auto& a = v.values[i];
      const auto& b = v.values[j];
      for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = a[x] * b[x];
      uu[slot] = to_spectral_scalar(g, prod);
    }
  }
  constexpr int sym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  SpectralField n = SpectralField::zeros(g);
  for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
    if (!retained_by_dealias(g, k1, k2, k3)) return;
    const double k[3] = {double(k1), double(k2), double(k3)};
    for (int j = 0; j < 3; ++j) {
      Complex s{};
      for (int i = 0; i < 3; ++i) s += k[i] * uu[sym[i][j]][idx];
      n.coeffs[j][idx] = Complex(-s.imag(), s.real());
    }
  });
  n.dealiased = true;
  n.divergence_free = false;
  return n;
}

/// (2 pi)^3 sum_k Re(a_hat(k) . conj(b_hat(k))) = integral of a . b.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& x = a.coeffs[c];
    const auto& y = b.coeffs[c];
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] * std::conj(y[i])).real();
  }
  return kBoxVolume * s;
}

/// (2 pi)^3 sum_k w(|k|) |u_hat(k)|^2 for a radial weight w.
template <class Weight>
double weighted_energy(const SpectralField& u, Weight&& w) {
  double s = 0.0;
  for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, int k3) {
    const double a = std::norm(u.coeffs[0][i]) + std::norm(u.coeffs[1][i]) + std::norm(u.coeffs[2][i]);
    if (a == 0.0) return;
    s += w(std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3))) * a;
  });
  return kBoxVolume * s;
}

/// ||u||_2^2
inline double energy(const SpectralField& u) {
  return weighted_energy(u, [](double) { return 1.0; });
}

/// ||grad u||_2^2
inline double enstrophy(const SpectralField& u) {
  return weighted_energy(u, [](double k) { return k * k; });
}

inline double lebesgue_norm_of_samples(const PhysicalField& v, double m) {
  const std::size_t npts = v.grid.size();
  if (std::isinf(m)) {
    double mx = 0.0;
    for (std::size_t x = 0; x < npts; ++x) {
      const double a = v.values[0][x], b = v.values[1][x], c = v.values[2][x];
      mx = std::max(mx, a * a + b * b + c * c);
    }
    return std::sqrt(mx);
  }
  double s = 0.0;
  for (std::size_t x = 0; x < npts; ++x) {
    const double a = v.values[0][x], b = v.values[1][x], c = v.values[2][x];
    const double mag2 = a * a + b * b + c * c;
    s += m == 2.0 ? mag2 : std::pow(mag2, 0.5 * m);
  }
  return std::pow(s * v.grid.weight(), 1.0 / m);
}

/// L^m norm of the pointwise Euclidean magnitude, by quadrature on the
/// (oversample * n)^3 grid; m = kInf gives the grid maximum.
inline double norm_lp(const SpectralField& u, double m, int oversample = 2) {
  if (!(m >= 1.0)) throw std::invalid_argument("norm_lp: exponent must be >= 1 or inf");
  check_oversample(oversample);
  return lebesgue_norm_of_samples(to_physical(u, oversample), m);
}

inline double norm_hs(const SpectralField& u, double s) {
  if (!(s >= -2.0 && s <= 4.0)) throw std::invalid_argument("norm_hs: s must lie in [-2, 4]");
  return std::sqrt(weighted_energy(u, [s](double k) { return k > 0.0 ? std::pow(k, 2.0 * s) : 0.0; }));
}

/// max_x of the Frobenius norm of the 3x3 matrix grad u, on the oversampled grid.
inline double grad_linf(const SpectralField& u, int oversample = 2) {
  check_oversample(oversample);
  const VelocityGradient grad = gradient(u);
  const int m = u.grid.n * oversample;
  RealCube frob2(static_cast<std::size_t>(m) * m * m, 0.0);
  for (const auto& comp : grad.coeffs) {
    const RealCube d = to_physical_scalar(u.grid, comp, oversample);
    for (std::size_t x = 0; x < d.size(); ++x) frob2[x] += d[x] * d[x];
  }
  return std::sqrt(*std::max_element(frob2.begin(), frob2.end()));
}

}  // namespace lpns
