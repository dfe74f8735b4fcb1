#pragma once

// Initial conditions and seeded random fields.
//
// Random coefficients are drawn from a counter-based generator keyed by
// (seed, k, component), so the same seed produces the same continuous field
// on every grid that resolves its modes.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>

#include "lpns/field.hpp"
#include "lpns/lp_bank.hpp"
#include "lpns/spectral.hpp"

namespace lpns {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stateless generator: every draw is a pure function of (seed, key).
class CounterRng {
 public:
  static constexpr const char* name = "splitmix64-counter-v1";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::initializer_list<std::int64_t> key) const {
    std::uint64_t h = splitmix64(seed_);
    for (std::int64_t k : key) h = splitmix64(h ^ static_cast<std::uint64_t>(k));
    return h;
  }

  /// Uniform in (0, 1).
  double uniform(std::initializer_list<std::int64_t> key) const {
    return (static_cast<double>(bits(key) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard complex normal (unit variance per real/imag part).
  Complex complex_normal(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) const {
    const double u1 = uniform({a, b, c, d, 0});
    const double u2 = uniform({a, b, c, d, 1});
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  std::uint64_t seed_;
};

namespace detail {

/// True for exactly one member of each {k, -k} pair with k != 0.
inline bool canonical_half(int k1, int k2, int k3) {
  if (k1 != 0) return k1 > 0;
  if (k2 != 0) return k2 > 0;
  return k3 > 0;
}

template <class Amplitude>
SpectralField random_hermitian(const Grid& g, std::uint64_t seed, Amplitude&& amp) {
  const CounterRng rng(seed);
  SpectralField u = SpectralField::zeros(g);
  const int kmax = g.max_resolved();
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k3 = -kmax; k3 <= kmax; ++k3) {
        if (!canonical_half(k1, k2, k3)) continue;
        const double a = amp(k1, k2, k3);
        if (a == 0.0) continue;
        u.set_mode(k1, k2, k3,
                   {a * rng.complex_normal(k1, k2, k3, 0), a * rng.complex_normal(k1, k2, k3, 1),
                    a * rng.complex_normal(k1, k2, k3, 2)});
      }
  return u;
}

}  // namespace detail

/// u = A (sin x1 cos x2, -cos x1 sin x2, 0).
inline SpectralField ic_taylor_green(const Grid& g, double amplitude = 1.0) {
  SpectralField u = SpectralField::zeros(g);
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      u.at(0, s1, s2, 0) = Complex(0.0, -0.25 * amplitude * s1);
      u.at(1, s1, s2, 0) = Complex(0.0, 0.25 * amplitude * s2);
    }
  }
  u.divergence_free = true;
  u.dealiased = true;
  return u;
}

/// Real field with independent complex-normal coefficients on every
/// resolvable mode except k = 0. Neither solenoidal nor dealiased.
inline SpectralField random_hermitian_field(const Grid& g, std::uint64_t seed) {
  return detail::random_hermitian(g, seed, [](int, int, int) { return 1.0; });
}

/// Random-phase spectrum |u_hat(k)| ~ |k|^{slope/2} exp(-(|k|/k_peak)^2),
/// Leray-projected, dealiased, and scaled to ||u||_2 = amplitude.
inline SpectralField ic_random_spectrum(const Grid& g, std::uint64_t seed, double slope,
                                        double k_peak, double amplitude = 1.0) {
  if (!(k_peak > 0.0) || 3.0 * k_peak >= g.n) {
    throw std::invalid_argument("ic_random_spectrum: k_peak must lie in (0, n/3)");
  }
  SpectralField u = detail::random_hermitian(g, seed, [&](int k1, int k2, int k3) {
    const double k = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
    return std::pow(k, 0.5 * slope) * std::exp(-(k / k_peak) * (k / k_peak));
  });
  u = dealias(leray_project(std::move(u)));
  const double e = energy(u);
  if (e == 0.0) throw std::runtime_error("ic_random_spectrum produced an empty field");
  u = (amplitude / std::sqrt(e)) * std::move(u);
  u.divergence_free = true;
  u.dealiased = true;
  return u;
}

/// Delta_q applied to a unit-amplitude random field.
inline SpectralField random_shell_field(const DyadicFilterBank& bank, int q, std::uint64_t seed) {
  return bank.shell(random_hermitian_field(bank.grid(), seed), q);
}

}  // namespace lpns
