#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpns/ic.hpp"
#include "lpns/lp_bank.hpp"

namespace {

using namespace lpns;
constexpr double kPi = std::numbers::pi;

TEST(DyadicSymbol, Examples) {
  EXPECT_EQ(dyadic_symbol(-1, 0.5), 1.0);
  EXPECT_EQ(dyadic_symbol(0, 1.0), 1.0);
  EXPECT_EQ(dyadic_symbol(3, 0.0), 0.0);
  EXPECT_THROW(dyadic_symbol(-2, 1.0), std::invalid_argument);
  EXPECT_THROW(dyadic_symbol(0, -0.1), std::invalid_argument);
}

TEST(DyadicSymbol, ProfileShape) {
  double prev = 1.0;
  for (int i = 0; i <= 400; ++i) {
    const double xi = i / 200.0;
    const double c = cutoff_profile(xi);
    EXPECT_LE(c, prev);
    EXPECT_GE(c, 0.0);
    if (xi <= 0.75) EXPECT_EQ(c, 1.0);
    if (xi >= 1.0) EXPECT_EQ(c, 0.0);
    prev = c;
    for (int q = 0; q < 4; ++q) {
      const double phi = dyadic_symbol(q, xi * 8);
      EXPECT_GE(phi, 0.0);
      EXPECT_LE(phi, 1.0);
    }
  }
  // Smoothstep midpoint value.
  EXPECT_DOUBLE_EQ(cutoff_profile(0.875), 0.5);
}

TEST(FilterBank, QmaxCoversCorners) {
  EXPECT_EQ(DyadicFilterBank::q_max_for(make_grid(8)), 2);
  EXPECT_EQ(DyadicFilterBank::q_max_for(make_grid(16)), 4);
  EXPECT_EQ(DyadicFilterBank::q_max_for(make_grid(32)), 5);
  EXPECT_EQ(DyadicFilterBank::q_max_for(make_grid(64)), 6);
}

TEST(FilterBank, PartitionOfUnityPerMode) {
  for (int n : {8, 16, 32}) {
    const DyadicFilterBank bank(make_grid(n));
    const Grid& g = bank.grid();
    double worst = 0.0;
    for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
      if (std::max({std::abs(k1), std::abs(k2), std::abs(k3)}) > g.max_resolved()) return;
      const double k = bank.kmag()[i];
      double s = 0.0;
      for (int q = -1; q <= bank.q_max(); ++q) s += dyadic_symbol(q, k);
      worst = std::max(worst, std::abs(s - 1.0));
    });
    EXPECT_LT(worst, 1e-14) << "n=" << n;
  }
}

TEST(FilterBank, ShellPlacement) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  // |k| = 1 lives entirely in shell 0.
  EXPECT_EQ(dyadic_symbol(0, 1.0), 1.0);
  EXPECT_EQ(dyadic_symbol(-1, 1.0), 0.0);
  EXPECT_EQ(dyadic_symbol(1, 1.0), 0.0);
  // |k| = sqrt 2: weights phi(sqrt2) in shell 0 and phi(sqrt2/2) in shell 1.
  const double w0 = dyadic_symbol(0, std::sqrt(2.0));
  const double w1 = dyadic_symbol(1, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(w0, cutoff_profile(std::sqrt(2.0) / 2) - cutoff_profile(std::sqrt(2.0)));
  EXPECT_DOUBLE_EQ(w1, cutoff_profile(std::sqrt(2.0) / 4) - cutoff_profile(std::sqrt(2.0) / 2));
  EXPECT_DOUBLE_EQ(w0 + w1, 1.0);
  const SpectralField tg = ic_taylor_green(g);
  EXPECT_LT(max_abs_diff(bank.shell(tg, 0), w0 * tg), 1e-16);
}

TEST(FilterBank, ReconstructionAndComplementarity) {
  for (int n : {8, 16, 32}) {
    const DyadicFilterBank bank(make_grid(n));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SpectralField u = random_hermitian_field(bank.grid(), 100 + seed);
      SpectralField sum = SpectralField::zeros(bank.grid());
      for (int q = -1; q <= bank.q_max(); ++q) sum = sum + bank.shell(u, q);
      EXPECT_LT(max_abs_diff(sum, u) / max_abs(u), 1e-13);
      EXPECT_LT(max_abs_diff(bank.low(u, bank.q_max() + 1), u), 1e-16);
      for (int p = 1; p <= bank.q_max(); ++p) {
        EXPECT_LT(max_abs_diff(bank.low(u, p - 1) + bank.high(u, p), u) / max_abs(u), 1e-15);
      }
    }
  }
}

TEST(FilterBank, AdjacencyDisjointSupports) {
  const DyadicFilterBank bank(make_grid(32));
  for (double k : bank.kmag())
    for (int q = -1; q <= bank.q_max(); ++q)
      for (int r = q + 2; r <= bank.q_max(); ++r)
        EXPECT_EQ(dyadic_symbol(q, k) * dyadic_symbol(r, k), 0.0);
}

TEST(FilterBank, BandExamples) {
  const Grid g = make_grid(32);
  const DyadicFilterBank bank(g);
  EXPECT_EQ(max_abs(bank.band(ic_taylor_green(g), 5, BandSide::high)), 0.0);
  EXPECT_THROW(bank.shell(ic_taylor_green(g), bank.q_max() + 1), std::out_of_range);
}

TEST(FilterBank, TildeProjection) {
  const Grid g = make_grid(32);
  const DyadicFilterBank bank(g);
  const SpectralField u = random_hermitian_field(g, 5);
  // Window covering every shell except q=-1 (the zero mode, absent here).
  EXPECT_LT(max_abs_diff(bank.tilde(u, 3, 3), u) / max_abs(u), 1e-15);
  // Field in shell 1, window around p=4 with b=1: disjoint.
  EXPECT_EQ(max_abs(bank.tilde(bank.shell(u, 1), 4, 1)), 0.0);
  // Single mode |k| = 2^p is reproduced for any b >= 1.
  for (int p = 1; p <= 3; ++p) {
    SpectralField m = SpectralField::zeros(g);
    m.set_mode(1 << p, 0, 0, {0.0, 1.0, 0.0});
    for (int b = 1; b <= p; ++b) EXPECT_LT(max_abs_diff(bank.tilde(m, p, b), m), 1e-16);
  }
  EXPECT_THROW(bank.tilde(u, 1, 2), std::invalid_argument);
}

TEST(FilterBank, BandParsevalMatchesQuadrature) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  const SpectralField u = random_hermitian_field(g, 77);
  for (int p = 0; p <= bank.q_max(); ++p) {
    const SpectralField hp = bank.high(u, p);
    const double spectral = weighted_energy(u, [p](double k) {
      const double h = high_symbol(p, k);
      return h * h;
    });
    const PhysicalField v = to_physical(hp);
    double quad = 0.0;
    for (int c = 0; c < 3; ++c)
      for (double x : v.values[c]) quad += x * x;
    quad *= g.weight();
    EXPECT_NEAR(quad, spectral, 1e-12 * energy(u));
  }
}

TEST(Besov, Examples) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  SpectralField u = SpectralField::zeros(g);
  u.set_mode(1, 0, 0, {0.0, 0.5, 0.0});
  EXPECT_NEAR(besov_norm(u, bank, -1.0), 1.0, 1e-14);
  EXPECT_EQ(besov_norm(SpectralField::zeros(g), bank, -1.0), 0.0);
  const SpectralField r = random_hermitian_field(g, 8);
  EXPECT_NEAR(besov_norm(2.0 * r, bank, -1.0), 2.0 * besov_norm(r, bank, -1.0), 1e-12);
  EXPECT_THROW(besov_norm(r, bank, 3.0), std::invalid_argument);
}

TEST(Bernstein, CosineShell) {
  const Grid g = make_grid(32);
  const DyadicFilterBank bank(g);
  for (int q = 0; q <= 3; ++q) {
    SpectralField u = SpectralField::zeros(g);
    u.set_mode(1 << q, 0, 0, {0.0, 0.5, 0.0});
    // ||cos||_inf = 1, ||cos||_2 = sqrt((2pi)^3 / 2)
    const double expected = 1.0 / (std::pow(2.0, 1.5 * q) * std::sqrt(std::pow(2 * kPi, 3) / 2));
    EXPECT_NEAR(bernstein_ratio(u, bank, q, 2.0, kInf), expected, 1e-13);
    EXPECT_NEAR(bernstein_ratio(2.0 * u, bank, q, 2.0, kInf), expected, 1e-13);
    EXPECT_EQ(bernstein_ratio(u, bank, q, 3.0, 3.0), 1.0);
  }
  EXPECT_THROW(bernstein_ratio(SpectralField::zeros(g), bank, 1, 2.0, kInf), std::domain_error);
}

TEST(ShellStatistics, TaylorGreen) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  const ShellSpectrum s = shell_statistics(ic_taylor_green(g), bank);
  const double e = 4 * std::pow(kPi, 3);
  EXPECT_NEAR(s.shell_e(0) + s.shell_e(1), e, 1e-10);
  for (int q = 2; q <= bank.q_max(); ++q) EXPECT_EQ(s.shell_e(q), 0.0);
  EXPECT_NEAR(s.band_energy[0], e, 1e-10);
  EXPECT_EQ(s.band_energy[1], 0.0);
  for (int p = 0; p <= bank.q_max(); ++p) {
    EXPECT_NEAR(s.low_grad_linf[p], std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(s.low_lp(2.0, p), std::sqrt(e), 1e-10);
  }
  EXPECT_NEAR(s.scaled_shell_sup(0), 1.0, 1e-14);
}

TEST(ShellStatistics, ZeroAndMonotone) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  const ShellSpectrum z = shell_statistics(SpectralField::zeros(g), bank);
  for (double x : z.shell_energy) EXPECT_EQ(x, 0.0);
  for (double x : z.band_enstrophy) EXPECT_EQ(x, 0.0);
  for (double x : z.low_grad_linf) EXPECT_EQ(x, 0.0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField u = random_hermitian_field(g, seed);
    const ShellSpectrum s = shell_statistics(u, bank);
    double sum = 0.0;
    for (double x : s.shell_energy) sum += x;
    EXPECT_GE(sum, 0.5 * s.energy);
    EXPECT_LE(sum, 2.0 * s.energy);
    for (std::size_t p = 1; p < s.band_energy.size(); ++p) {
      EXPECT_LE(s.band_energy[p], s.band_energy[p - 1]);
      EXPECT_LE(s.band_enstrophy[p], s.band_enstrophy[p - 1]);
    }
  }
}

}  // namespace
