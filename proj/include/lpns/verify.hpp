#pragma once

// Identity and oracle checks run by `lpns verify`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lpns/flux.hpp"
#include "lpns/ic.hpp"
#include "lpns/ledger.hpp"
#include "lpns/reference.hpp"
#include "lpns/snapshot.hpp"
#include "lpns/solver.hpp"

namespace lpns {

struct VerifyCheck {
  std::string name;
  double value = 0.0;      // worst observed defect
  double tolerance = 0.0;  // pass iff value <= tolerance
  bool passed() const { return std::isfinite(value) && value <= tolerance; }
};

namespace detail {

inline SpectralField verify_field(const Grid& g, std::uint64_t seed) {
  return remove_mean(dealias(leray_project(random_hermitian_field(g, seed))));
}

inline double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a) / std::abs(b); }

}  // namespace detail

/// Runs every check on an n^3 grid (the O(n^6) oracles use min(n, 16)).
inline std::vector<VerifyCheck> run_verify_suite(int n, std::uint64_t seed) {
  using detail::rel;
  using detail::verify_field;
  const Grid g = make_grid(n);
  const Grid small = make_grid(std::min(n, 16));
  const DyadicFilterBank bank(g);
  std::vector<VerifyCheck> out;
  const int fields = 10;

  {
    double worst = 0.0;
    for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
      if (std::max({std::abs(k1), std::abs(k2), std::abs(k3)}) > g.max_resolved()) return;
      double s = 0.0;
      for (int q = -1; q <= bank.q_max(); ++q) s += dyadic_symbol(q, bank.kmag()[i]);
      worst = std::max(worst, std::abs(s - 1.0));
    });
    out.push_back({"partition_of_unity", worst, 1e-13});
  }
  {
    double worst = 0.0;
    for (int f = 0; f < fields; ++f) {
      const SpectralField u = random_hermitian_field(g, seed + f);
      SpectralField sum = SpectralField::zeros(g);
      for (int q = -1; q <= bank.q_max(); ++q) sum = sum + bank.shell(u, q);
      worst = std::max(worst, max_abs_diff(sum, u) / max_abs(u));
    }
    out.push_back({"shell_reconstruction", worst, 1e-13});
  }
  {
    double worst = 0.0;
    for (int f = 0; f < fields; ++f) {
      const SpectralField u = random_hermitian_field(g, seed + 100 + f);
      const SpectralField pu = leray_project(u);
      worst = std::max(worst, divergence_defect(pu));
      worst = std::max(worst, max_abs_diff(leray_project(pu), pu) / max_abs(pu));
    }
    out.push_back({"leray_projection", worst, 1e-12});
  }
  {
    const SpectralField u = random_hermitian_field(small, seed + 200);
    const PhysicalField fast = to_physical(u);
    const PhysicalField slow = reference::direct_inverse_dft(u);
    double worst = 0.0, scale = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t x = 0; x < fast.values[c].size(); ++x) {
        worst = std::max(worst, std::abs(fast.values[c][x] - slow.values[c][x]));
        scale = std::max(scale, std::abs(slow.values[c][x]));
      }
    }
    out.push_back({"transform_vs_direct_dft", worst / scale, 1e-12});
    const SpectralField back = to_spectral(fast);
    out.push_back({"transform_round_trip", max_abs_diff(back, u) / max_abs(u), 1e-13});
  }
  {
    const SpectralField u = verify_field(small, seed + 300);
    const SpectralField fast = nonlinear_advection(u);
    const SpectralField slow = reference::direct_advection(u);
    out.push_back({"advection_vs_convolution", max_abs_diff(fast, slow) / max_abs(slow), 1e-10});
  }
  {
    double worst_identity = 0.0, worst_total = 0.0;
    for (int f = 0; f < fields; ++f) {
      const SpectralField u = verify_field(g, seed + 400 + f);
      const SpectralField nl = nonlinear_advection(u);
      const double scale = flux_scale(u);
      for (int p = 1; p <= bank.q_max(); ++p) {
        worst_identity = std::max(worst_identity, flux_identity_residual(u, nl, bank, p, scale));
      }
      worst_total = std::max(worst_total, std::abs(total_flux(u, nl)) / scale);
    }
    out.push_back({"flux_identity", worst_identity, 1e-9});
    out.push_back({"flux_total_cancellation", worst_total, 1e-10});
  }
  {
    const SpectralField u = verify_field(g, seed + 500);
    double worst = 0.0;
    const double usup = norm_lp(u, kInf);
    for (int p = 0; p <= bank.q_max(); ++p) worst = std::max(worst, cet_remainder(u, bank, p).split_defect);
    out.push_back({"cet_split", worst / (usup * usup), 1e-12});
  }
  {
    const SpectralField u0 = ic_taylor_green(g);
    SolverState s{u0, 0.0, 1.0, 0};
    for (int i = 0; i < 20; ++i) s = step(s, 1e-3);
    const SpectralField expected = std::exp(-2.0 * s.t) * u0;
    out.push_back({"taylor_green_exact_decay", max_abs_diff(s.u, expected) / max_abs(expected), 1e-10});
  }
  {
    const SolverState a{ic_random_spectrum(g, seed + 600, -5.0 / 3.0, g.n / 4.0), 0.0, 0.1, 0};
    const SolverState b = step(a, 1e-3);
    double worst = energy_balance_residual(a, b);
    for (int q = -1; q <= bank.q_max(); ++q) worst = std::max(worst, shell_balance_residual(a, b, q).residual);
    out.push_back({"energy_and_shell_balance", worst, 1e-8});
  }
  {
    const SolverState s{verify_field(g, seed + 700), 0.375, 0.01, 0};
    const SolverState r = decode_snapshot(encode_snapshot(s));
    double diff = r.t == s.t && r.nu == s.nu ? 0.0 : 1.0;
    for (int c = 0; c < 3; ++c) {
      if (r.u.coeffs[c] != s.u.coeffs[c]) diff = 1.0;
    }
    out.push_back({"snapshot_round_trip", diff, 0.0});
  }
  {
    WindowLedger ledger;
    for (int i = 0; i <= 1024; ++i) {
      LedgerSample s;
      s.t = i / 1024.0;
      s.spectrum.q_max = 3;
      s.spectrum.band_enstrophy.assign(4, std::exp(-2.0 * s.t));
      ledger.append(std::move(s));
    }
    const double exact = 0.5 * (std::exp(-2.0 * (1.0 - 1.0 / 64.0)) - std::exp(-2.0));
    out.push_back({"window_trapezoid", rel(ledger.window_D(3, 1.0).value - exact, exact), 1e-6});
  }
  return out;
}

inline std::string format_verify_table(const std::vector<VerifyCheck>& checks) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %-12s %-10s %s\n", "check", "value", "tolerance", "result");
  out += line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "%-28s %-12.3e %-10.1e %s\n", c.name.c_str(), c.value, c.tolerance,
                  c.passed() ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

}  // namespace lpns
