#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpns/ic.hpp"
#include "lpns/ledger.hpp"

namespace {

using namespace lpns;
constexpr double kPi = std::numbers::pi;

// Sample whose band series are all given by one scalar function of t.
LedgerSample synthetic(double t, int q_max, double (*f)(double)) {
  LedgerSample s;
  s.t = t;
  s.spectrum.q_max = q_max;
  const double v = f(t);
  s.spectrum.band_energy.assign(q_max + 1, v);
  s.spectrum.band_enstrophy.assign(q_max + 1, v);
  s.spectrum.low_grad_linf.assign(q_max + 1, v);
  s.spectrum.shell_linf.assign(q_max + 2, v);
  s.flux_high.assign(q_max + 1, v);
  return s;
}

WindowLedger synthetic_ledger(double (*f)(double), double t0, double t1, int intervals,
                              LedgerSettings settings = {}) {
  WindowLedger ledger(settings);
  for (int i = 0; i <= intervals; ++i) {
    ledger.append(synthetic(t0 + (t1 - t0) * i / intervals, 6, f));
  }
  return ledger;
}

WindowLedger exact_taylor_green_ledger(int n, int intervals, double t_end) {
  const Grid g = make_grid(n);
  const DyadicFilterBank bank(g);
  const SpectralField u0 = ic_taylor_green(g);
  WindowLedger ledger;
  for (int i = 0; i <= intervals; ++i) {
    const double t = t_end * i / intervals;
    ledger.append(make_sample({std::exp(-2.0 * t) * u0, t, 1.0, i}, bank));
  }
  return ledger;
}

TEST(Window, ConstantSeries) {
  const auto ledger = synthetic_ledger([](double) { return 3.0; }, 0.0, 1.0, 256);
  for (int p = 1; p <= 3; ++p) {
    for (double c : {1.0, 4.0}) {
      const WindowValue v = ledger.window_int(WindowLedger::band_energy(p), p, 1.0, c);
      EXPECT_TRUE(v.resolved());
      EXPECT_NEAR(v.value, 3.0 * c * std::ldexp(1.0, -2 * p), 1e-13);
    }
    EXPECT_EQ(ledger.window_sup(WindowLedger::band_energy(p), p, 1.0).value, 3.0);
  }
}

TEST(Window, RejectsTimesBeyondTheRecord) {
  const auto ledger = synthetic_ledger([](double) { return 1.0; }, 0.0, 1.0, 64);
  EXPECT_THROW(ledger.window_E(1, 1.5), std::out_of_range);
  EXPECT_THROW(WindowLedger().window_E(0, 0.0), std::logic_error);
}

TEST(Window, AppendRequiresIncreasingTimes) {
  WindowLedger ledger;
  ledger.append(synthetic(0.5, 3, [](double) { return 1.0; }));
  EXPECT_THROW(ledger.append(synthetic(0.5, 3, [](double) { return 1.0; })), std::invalid_argument);
  EXPECT_THROW(ledger.append(synthetic(0.25, 3, [](double) { return 1.0; })), std::invalid_argument);
}

TEST(Window, FlagsUnderResolvedWindows) {
  const auto sparse = synthetic_ledger([](double) { return 1.0; }, 0.0, 1.0, 8);
  EXPECT_FALSE(sparse.window_D(2, 1.0).resolved());  // only t = 1 lies in [15/16, 1]
  EXPECT_TRUE(sparse.window_D(0, 1.0).resolved());
  // Window reaching before the first sample.
  EXPECT_FALSE(sparse.window_D(0, 0.5).resolved());
}

TEST(Window, ExponentialIntegralMatchesClosedForm) {
  const auto ledger = synthetic_ledger([](double t) { return std::exp(-2.0 * t); }, 0.0, 1.0, 512);
  const double exact = 0.5 * (std::exp(-2.0 * (1.0 - 1.0 / 64.0)) - std::exp(-2.0));
  EXPECT_NEAR(exact, 2.1480e-3, 1e-7);
  const WindowValue v = ledger.window_int(WindowLedger::band_enstrophy(3), 3, 1.0);
  EXPECT_TRUE(v.resolved());
  EXPECT_EQ(v.samples, 9);
  // Leading trapezoid error: h^2/12 * (f'(b) - f'(a)).
  const double h = 1.0 / 512.0;
  const double predicted = h * h / 12.0 * (-2.0 * std::exp(-2.0) + 2.0 * std::exp(-2.0 * (1.0 - 1.0 / 64.0)));
  EXPECT_NEAR(v.value - exact, predicted, 1e-3 * std::abs(predicted));
  EXPECT_LT(std::abs(v.value - exact), 1e-6);

  const auto fine = synthetic_ledger([](double t) { return std::exp(-2.0 * t); }, 0.0, 1.0, 1024);
  EXPECT_LT(std::abs(fine.window_int(WindowLedger::band_enstrophy(3), 3, 1.0).value - exact) / exact, 1e-6);
}

TEST(Window, LeftEdgeInterpolation) {
  // Linear data is integrated exactly even when the window edge falls between samples.
  const auto ledger = synthetic_ledger([](double t) { return 2.0 + 3.0 * t; }, 0.0, 1.0, 100);
  const double a = 1.0 - 1.0 / 16.0;
  const double exact = 2.0 * (1.0 - a) + 1.5 * (1.0 - a * a);
  EXPECT_NEAR(ledger.window_int(WindowLedger::band_enstrophy(2), 2, 1.0).value, exact, 1e-14);
  const double T = 0.7331;
  const double b = T - 1.0 / 16.0;
  EXPECT_NEAR(ledger.window_int(WindowLedger::band_enstrophy(2), 2, T).value,
              2.0 * (T - b) + 1.5 * (T * T - b * b), 1e-14);
}

TEST(Window, SelfConvergesUnderCadenceHalving) {
  auto f = [](double t) { return 2.0 + std::exp(-t) * std::cos(9.0 * t); };
  const double exact_hi = [] {
    // Antiderivative of e^{-t} cos 9t is e^{-t}(9 sin 9t - cos 9t)/82.
    auto F = [](double t) { return 2.0 * t + std::exp(-t) * (9.0 * std::sin(9.0 * t) - std::cos(9.0 * t)) / 82.0; };
    return F(1.0) - F(0.75);
  }();
  std::vector<double> errs;
  for (int intervals : {64, 128, 256}) {
    const auto ledger = synthetic_ledger(f, 0.0, 1.0, intervals);
    errs.push_back(std::abs(ledger.window_D(1, 1.0).value - exact_hi));
  }
  EXPECT_NEAR(errs[0] / errs[1], 4.0, 0.2);
  EXPECT_NEAR(errs[1] / errs[2], 4.0, 0.2);
}

TEST(Window, WindowsNest) {
  const auto ledger = synthetic_ledger([](double t) { return 1.0 + t * t; }, 0.0, 1.0, 512);
  for (int p = 2; p <= 4; ++p) {
    for (int b = 1; b <= 2; ++b) {
      EXPECT_LE(ledger.window_D(p, 1.0).value,
                ledger.window_int(WindowLedger::band_enstrophy(p), p - b, 1.0).value);
      EXPECT_LE(ledger.window_E(p, 0.9).value,
                ledger.window_sup(WindowLedger::band_energy(p), p - b, 0.9).value);
    }
  }
}

TEST(Monitor, BandStaircase) {
  EXPECT_EQ(WindowLedger::monitor_band(1.0 / 64.0, 6), 3);
  EXPECT_EQ(WindowLedger::monitor_band(2.0, 6), 0);
  EXPECT_EQ(WindowLedger::monitor_band(1e-9, 6), 6);
  int prev = 0;
  for (int i = 0; i < 4000; ++i) {
    const double gap = std::pow(2.0, -i * 0.004);
    const int q = WindowLedger::monitor_band(gap, 100);
    EXPECT_TRUE(q == prev || q == prev + 1);
    // q is the largest integer with 4^{-q} >= gap.
    EXPECT_GE(std::ldexp(1.0, -2 * q), gap * (1 - 1e-15));
    EXPECT_LT(std::ldexp(1.0, -2 * (q + 1)), gap);
    prev = q;
  }
  EXPECT_EQ(prev, 7);
}

TEST(Monitor, CriticalExponentLeavesPureBandNorm) {
  const auto ledger = exact_taylor_green_ledger(16, 64, 1.0);
  for (const auto& pt : ledger.leray_monitor(1.0, 3.0)) {
    const auto& s = *std::find_if(ledger.samples().begin(), ledger.samples().end(),
                                  [&](const LedgerSample& x) { return x.t == pt.t; });
    EXPECT_EQ(pt.value, s.spectrum.low_lp(3.0, pt.q));
  }
}

TEST(Monitor, TaylorGreenClosedForm) {
  // ||u_{<=q}||_2 = sqrt(4 pi^3) e^{-2t} for every q >= 0.
  const auto ledger = exact_taylor_green_ledger(16, 64, 1.0);
  const auto series = ledger.leray_monitor(1.0, 2.0);
  ASSERT_EQ(series.size(), 64u);
  for (const auto& pt : series) {
    const double expected = std::sqrt(4.0 * kPi * kPi * kPi) * std::exp(-2.0 * pt.t) * std::pow(1.0 - pt.t, -0.25);
    EXPECT_NEAR(pt.value, expected, 1e-12 * expected);
  }
  EXPECT_THROW(ledger.leray_monitor(1.0, 3.5), std::invalid_argument);
}

TEST(Criteria, FrozenField) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  const SpectralField u = ic_random_spectrum(g, 8, -5.0 / 3.0, 3.0);
  WindowLedger ledger;
  for (int i = 0; i <= 64; ++i) ledger.append(make_sample({u, i / 64.0, 1.0, i}, bank));
  const ShellSpectrum spec = shell_statistics(u, bank);
  for (int p = 0; p <= bank.q_max(); ++p) {
    EXPECT_DOUBLE_EQ(ledger.window_E(p, 1.0).value, spec.band_energy[p]);
    EXPECT_NEAR(ledger.window_D(p, 1.0).value, std::ldexp(spec.band_enstrophy[p], -2 * p),
                1e-13 * spec.band_enstrophy[0]);
    EXPECT_NEAR(ledger.dissipation(p, 1.0).value, std::ldexp(spec.band_enstrophy[p], -p),
                1e-13 * spec.band_enstrophy[0]);
  }
  for (int p = 1; p <= bank.q_max(); ++p) {
    EXPECT_LE(ledger.window_E(p, 1.0).value, ledger.window_E(p - 1, 1.0).value);
    EXPECT_LE(ledger.window_D(p, 1.0).value, ledger.window_D(p - 1, 1.0).value);
    EXPECT_LE(ledger.dissipation(p, 1.0).value, ledger.dissipation(p - 1, 1.0).value);
  }
  for (int p = 2; p <= bank.q_max(); ++p) {
    const double width = 16.0 * std::ldexp(1.0, -2 * p);
    EXPECT_NEAR(ledger.bkm_window(p, 1.0).value, width * spec.low_grad_linf[p], 1e-12 * spec.low_grad_linf[p]);
  }
}

TEST(Criteria, TaylorGreenWindows) {
  const auto ledger = exact_taylor_green_ledger(16, 256, 1.0);
  const double pi3 = kPi * kPi * kPi;
  EXPECT_NEAR(ledger.window_E(0, 1.0).value, 4.0 * pi3, 1e-12 * pi3);
  EXPECT_NEAR(ledger.window_D(0, 1.0).value, 2.0 * pi3 * (1.0 - std::exp(-4.0)), 1e-4 * pi3);
  for (int p = 2; p <= 4; ++p) {
    EXPECT_EQ(ledger.window_E(p, 1.0).value, 0.0);
    EXPECT_EQ(ledger.window_D(p, 1.0).value, 0.0);
    EXPECT_EQ(ledger.dissipation(p, 1.0).value, 0.0);
  }
  // ||grad u||_inf = sqrt(2) e^{-2t} and every low band holds the whole flow.
  for (int p = 2; p <= 4; ++p) {
    const double a = std::max(0.0, 1.0 - 16.0 * std::ldexp(1.0, -2 * p));
    const double exact = std::sqrt(2.0) * 0.5 * (std::exp(-2.0 * a) - std::exp(-2.0));
    EXPECT_NEAR(ledger.bkm_window(p, 1.0).value, exact, 1e-4 * exact);
  }
  EXPECT_LT(ledger.bkm_window(4, 1.0).value, ledger.bkm_window(3, 1.0).value);
  // Only shell 0 carries the flow, with ||u_0||_inf = e^{-2t}.
  EXPECT_NEAR(ledger.b1inf_window(0, 1.0).value, 1.0, 1e-12);
  EXPECT_NEAR(ledger.b1inf_window(1, 1.0).value, std::exp(-2.0 * 0.75), 1e-12);
  EXPECT_EQ(ledger.b1inf_window(4, 1.0).value, 0.0);
  const CheckResult it = ledger.iteration_check(4, 1.0, 1.5);
  EXPECT_EQ(it.lhs, 0.0);
}

TEST(Criteria, ZeroField) {
  const Grid g = make_grid(8);
  const DyadicFilterBank bank(g);
  WindowLedger ledger;
  for (int i = 0; i <= 32; ++i) ledger.append(make_sample({SpectralField::zeros(g), i / 32.0, 1.0, i}, bank));
  for (int p = 0; p <= bank.q_max(); ++p) {
    EXPECT_EQ(ledger.dissipation(p, 1.0).value, 0.0);
    EXPECT_EQ(ledger.bkm_window(p, 1.0).value, 0.0);
  }
  const CheckResult it = ledger.iteration_check(2, 1.0, 1.5);
  EXPECT_EQ(it.lhs, 0.0);
  EXPECT_EQ(it.rhs, 0.0);
  EXPECT_EQ(it.ratio, 0.0);
  const CheckResult fw = ledger.flux_window_check(2, 1.0);
  EXPECT_EQ(fw.lhs, 0.0);
  EXPECT_EQ(fw.ratio, 0.0);
  EXPECT_FALSE(ledger.decay_fit(1.0, {0, 1, 2}).defined);
}

TEST(DecayFit, ExactPowerLaw) {
  // D_p = 4^{-p} band_d = 2^{-3p/2} when band_d = 2^{p/2}, with E_p = 0.
  WindowLedger ledger;
  for (int i = 0; i <= 64; ++i) {
    LedgerSample s;
    s.t = i / 64.0;
    s.spectrum.q_max = 6;
    s.spectrum.band_energy.assign(7, 0.0);
    for (int p = 0; p <= 6; ++p) s.spectrum.band_enstrophy.push_back(std::pow(2.0, 0.5 * p));
    ledger.append(s);
  }
  const DecayFit fit = ledger.decay_fit(1.0, {0, 1, 2});
  ASSERT_TRUE(fit.defined);
  EXPECT_NEAR(fit.alpha, 1.5, 1e-9);
  EXPECT_LT(fit.residual, 1e-9);
  // p = 3 windows hold only 2 samples and drop out of the fit.
  EXPECT_EQ(ledger.decay_fit(1.0, {0, 1, 2, 3, 4}).points, 3);
}

TEST(DecayFit, BandLimitedFieldRestrictsRange) {
  const Grid g = make_grid(16);
  const DyadicFilterBank bank(g);
  const SpectralField u = ic_taylor_green(g);
  WindowLedger ledger;
  for (int i = 0; i <= 256; ++i) ledger.append(make_sample({u, i / 256.0, 1.0, i}, bank));
  // Only band 0 carries the flow.
  const DecayFit fit = ledger.decay_fit(1.0, {0, 1, 2, 3, 4});
  EXPECT_EQ(fit.points, 1);
  EXPECT_FALSE(fit.defined);

  // Dealiased modes reach |k| <= 5 sqrt(3), so bands p >= 4 are empty.
  const SpectralField r = ic_random_spectrum(g, 2, -5.0 / 3.0, 3.0);
  WindowLedger frozen;
  for (int i = 0; i <= 256; ++i) frozen.append(make_sample({r, i / 256.0, 1.0, i}, bank));
  EXPECT_EQ(frozen.window_D(4, 1.0).value, 0.0);
  const DecayFit rfit = frozen.decay_fit(1.0, {0, 1, 2, 3, 4});
  EXPECT_EQ(rfit.points, 4);
  EXPECT_TRUE(rfit.defined);
  EXPECT_GT(rfit.alpha, 0.0);
}

TEST(CriterionReport, RowsCoverMonitoredBands) {
  const auto ledger = exact_taylor_green_ledger(16, 256, 1.0);
  const CriterionReport rep = compute_criteria(ledger, 0, 4, 2.0);
  ASSERT_EQ(rep.rows.size(), 5u);
  EXPECT_EQ(rep.t_ref, 1.0);
  EXPECT_FALSE(rep.rows[1].iteration.has_value());
  EXPECT_TRUE(rep.rows[2].iteration.has_value());
  EXPECT_EQ(rep.leray.size(), 256u);
  for (const auto& row : rep.rows) {
    EXPECT_GE(row.E, 0.0);
    EXPECT_GE(row.D, 0.0);
    EXPECT_TRUE(std::isfinite(row.bkm));
  }
}

}  // namespace
