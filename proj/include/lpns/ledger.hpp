#pragma once

// Time-ordered store of per-sample spectra and fluxes, with suprema and
// integrals over the dyadic windows [T - c 4^{-p}, T] and the criterion
// monitors built on them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpns/flux.hpp"
#include "lpns/lp_bank.hpp"
#include "lpns/solver.hpp"

namespace lpns {

struct LedgerSample {
  double t = 0.0;
  long step = 0;
  ShellSpectrum spectrum;
  std::vector<double> flux_high;  // Pi_{>=p} for p in [0, q_max]
  double transfer_defect = 0.0;   // |int (u.grad)u . u| / flux scale
};

struct SampleOptions {
  ShellStatsOptions stats;
};

inline LedgerSample make_sample(const SolverState& s, const DyadicFilterBank& bank,
                                const SampleOptions& opts = {}) {
  LedgerSample out;
  out.t = s.t;
  out.step = s.step_count;
  out.spectrum = shell_statistics(s.u, bank, opts.stats);
  out.spectrum.t = s.t;
  const SpectralField n = nonlinear_advection(s.u);
  for (int p = 0; p <= bank.q_max(); ++p) out.flux_high.push_back(flux_high(s.u, n, bank, p));
  const double scale = flux_scale(s.u, opts.stats.oversample);
  out.transfer_defect = std::abs(total_flux(s.u, n)) / (scale + kFluxScaleFloor);
  return out;
}

struct LedgerSettings {
  int b = 2;
  double c_bkm = 16.0;   // window width scale of the BKM integral
  double alpha = 1.5;
  double delta = 0.1;    // hypothesis threshold of the flux-window check
  int min_samples = 4;
};

enum class WindowStatus { resolved, under_resolved };

struct WindowValue {
  double value = 0.0;
  WindowStatus status = WindowStatus::resolved;
  int samples = 0;

  bool resolved() const { return status == WindowStatus::resolved; }
};

using SeriesSelector = std::function<double(const LedgerSample&)>;

struct MonitorPoint {
  double t = 0.0;
  int q = 0;
  double value = 0.0;
};

struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool resolved = true;
};

struct DecayFit {
  bool defined = false;
  double alpha = 0.0;
  double residual = 0.0;  // rms misfit of log2 values
  int points = 0;
};

inline double check_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

class WindowLedger {
 public:
  WindowLedger() = default;
  explicit WindowLedger(LedgerSettings settings) : settings_(settings) {}

  const LedgerSettings& settings() const { return settings_; }
  const std::vector<LedgerSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  double last_time() const {
    if (samples_.empty()) throw std::logic_error("ledger is empty");
    return samples_.back().t;
  }
  int q_max() const { return samples_.empty() ? -1 : samples_.front().spectrum.q_max; }

  void append(LedgerSample s) {
    if (!samples_.empty()) {
      if (!(s.t > samples_.back().t)) {
        throw std::invalid_argument("ledger samples must have strictly increasing times");
      }
      if (s.spectrum.q_max != samples_.front().spectrum.q_max) {
        throw std::invalid_argument("ledger samples come from different grids");
      }
    }
    samples_.push_back(std::move(s));
  }

  /// Max of the series over samples in [T - width, T].
  WindowValue window_sup(const SeriesSelector& f, double width, double T) const {
    const auto [lo, hi, edge_ok] = locate(width, T);
    WindowValue out;
    out.samples = int(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) out.value = std::max(out.value, f(samples_[i]));
    if (out.samples < settings_.min_samples || !edge_ok) out.status = WindowStatus::under_resolved;
    return out;
  }

  /// Trapezoid integral over [T - width, T], interpolating linearly at both
  /// edges when they fall between samples.
  WindowValue window_int(const SeriesSelector& f, double width, double T) const {
    const auto [lo, hi, edge_ok] = locate(width, T);
    WindowValue out;
    out.samples = int(hi - lo);
    if (out.samples < settings_.min_samples || !edge_ok) out.status = WindowStatus::under_resolved;
    if (hi == lo) return out;
    const double a = T - width;
    std::vector<double> ts, vs;
    if (lo > 0 && samples_[lo].t > a) {
      ts.push_back(a);
      vs.push_back(interpolate(f, lo - 1, a));
    }
    for (std::size_t i = lo; i < hi; ++i) {
      ts.push_back(samples_[i].t);
      vs.push_back(f(samples_[i]));
    }
    if (hi < samples_.size() && ts.back() < T) {
      ts.push_back(T);
      vs.push_back(interpolate(f, hi - 1, T));
    }
    for (std::size_t i = 1; i < ts.size(); ++i) out.value += 0.5 * (ts[i] - ts[i - 1]) * (vs[i] + vs[i - 1]);
    return out;
  }

  static double window_width(int p, double c = 1.0) { return c * std::ldexp(1.0, -2 * p); }

  WindowValue window_sup(const SeriesSelector& f, int p, double T) const {
    return window_sup(f, window_width(p), T);
  }
  WindowValue window_int(const SeriesSelector& f, int p, double T, double c = 1.0) const {
    return window_int(f, window_width(p, c), T);
  }

  /// sup over I_p(T) of ||u_{>=p}||_2^2
  WindowValue window_E(int p, double T) const { return window_sup(band_energy(p), p, T); }
  /// integral over I_p(T) of ||grad u_{>=p}||_2^2
  WindowValue window_D(int p, double T) const { return window_int(band_enstrophy(p), p, T); }

  /// integral of ||grad u_{<=p}||_inf over [T - c_bkm 4^{-p}, T]
  WindowValue bkm_window(int p, double T) const {
    return window_int(low_gradient(p), p, T, settings_.c_bkm);
  }

  /// sup over I_p(T) of max_{|r-p|<=b+1} lambda_r^{-1} ||u_r||_inf
  WindowValue b1inf_window(int p, double T) const { return window_sup(b1inf_series(p), p, T); }

  /// (t, q(t), ||u_{<=q(t)}||_m (T_ref - t)^{(m-3)/(2m)}) for samples before T_ref.
  std::vector<MonitorPoint> leray_monitor(double t_ref, double m) const {
    if (!(m >= 2.0 && m <= 3.0)) throw std::invalid_argument("leray_monitor: m must lie in [2, 3]");
    std::vector<MonitorPoint> out;
    for (const auto& s : samples_) {
      if (!(s.t < t_ref)) continue;
      const double gap = t_ref - s.t;
      const int q = monitor_band(gap, s.spectrum.q_max);
      out.push_back({s.t, q, s.spectrum.low_lp(m, q) * std::pow(gap, (m - 3.0) / (2.0 * m))});
    }
    return out;
  }

  /// floor(log2(gap^{-1/2})) clamped to [0, q_max]
  static int monitor_band(double gap, int q_max) {
    const double raw = std::floor(-0.5 * std::log2(gap));
    return int(std::clamp(raw, 0.0, double(q_max)));
  }

  /// lambda_p D_p(T)
  WindowValue dissipation(int p, double T) const {
    WindowValue d = window_D(p, T);
    d.value *= dyadic_lambda(p);
    return d;
  }

  /// max{E_p, D_p} against 2^{-b alpha} D_{p-b} + integral over I_{p-b} of |Pi_{>=p}|
  CheckResult iteration_check(int p, double T, double alpha) const {
    const int b = settings_.b;
    if (p < b) throw std::out_of_range("iteration_check needs p >= b");
    const WindowValue e = window_E(p, T), d = window_D(p, T), d_low = window_D(p - b, T);
    const WindowValue flux = window_int(flux_magnitude(p), p - b, T);
    CheckResult out;
    out.lhs = std::max(e.value, d.value);
    out.rhs = std::pow(2.0, -b * alpha) * d_low.value + flux.value;
    out.ratio = check_ratio(out.lhs, out.rhs);
    out.resolved = e.resolved() && d.resolved() && d_low.resolved() && flux.resolved();
    return out;
  }

  /// integral over I_{p-b} of |Pi_{>=p}| against delta sum_{r<=p-b} E_r 4^{-(p-b-r)},
  /// delta = max(2 delta_hyp, integral over I_{p-b} of ||grad u_{<=p}||_inf).
  /// Only resolved E_r enter the sum.
  CheckResult flux_window_check(int p, double T) const {
    const int b = settings_.b;
    if (p < b) throw std::out_of_range("flux_window_check needs p >= b");
    const WindowValue flux = window_int(flux_magnitude(p), p - b, T);
    const WindowValue g = window_int(low_gradient(p), p - b, T);
    const double delta = std::max(2.0 * settings_.delta, g.value);
    double sum = 0.0;
    for (int r = 0; r <= p - b; ++r) {
      const WindowValue e = window_E(r, T);
      if (e.resolved()) sum += std::ldexp(e.value, -2 * (p - b - r));
    }
    CheckResult out;
    out.lhs = flux.value;
    out.rhs = delta * sum;
    out.ratio = check_ratio(out.lhs, out.rhs);
    out.resolved = flux.resolved() && g.resolved();
    return out;
  }

  /// Negated least-squares slope of log2 max{D_p, E_p} against p over the
  /// resolved, nonzero entries of ps.
  DecayFit decay_fit(double T, const std::vector<int>& ps) const {
    std::vector<double> xs, ys;
    for (int p : ps) {
      const WindowValue e = window_E(p, T), d = window_D(p, T);
      const double v = std::max(e.value, d.value);
      if (!e.resolved() || !d.resolved() || !(v > 0.0)) continue;
      xs.push_back(p);
      ys.push_back(std::log2(v));
    }
    return fit_decay(xs, ys);
  }

  static DecayFit fit_decay(const std::vector<double>& xs, const std::vector<double>& ys) {
    DecayFit out;
    out.points = int(xs.size());
    if (xs.size() < 3) return out;
    const double n = double(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / n;
      my += ys[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (my + slope * (xs[i] - mx));
      ss += r * r;
    }
    out.defined = true;
    out.alpha = -slope;
    out.residual = std::sqrt(ss / n);
    return out;
  }

  static SeriesSelector band_energy(int p) {
    return [p](const LedgerSample& s) { return s.spectrum.band_energy.at(p); };
  }
  static SeriesSelector band_enstrophy(int p) {
    return [p](const LedgerSample& s) { return s.spectrum.band_enstrophy.at(p); };
  }
  static SeriesSelector low_gradient(int p) {
    return [p](const LedgerSample& s) { return s.spectrum.low_grad_linf.at(p); };
  }
  static SeriesSelector flux_magnitude(int p) {
    return [p](const LedgerSample& s) { return std::abs(s.flux_high.at(p)); };
  }
  SeriesSelector b1inf_series(int p) const {
    const int reach = settings_.b + 1;
    return [p, reach](const LedgerSample& s) {
      double best = 0.0;
      const int lo = std::max(-1, p - reach), hi = std::min(s.spectrum.q_max, p + reach);
      for (int r = lo; r <= hi; ++r) best = std::max(best, s.spectrum.scaled_shell_sup(r));
      return best;
    };
  }

 private:
  struct Span {
    std::size_t lo, hi;
    bool edge_ok;  // the window starts inside the recorded span
  };

  double tolerance(double T) const { return 1e-10 * std::max(1.0, std::abs(T)); }

  Span locate(double width, double T) const {
    if (samples_.empty()) throw std::logic_error("window query on an empty ledger");
    const double eps = tolerance(T);
    if (T > samples_.back().t + eps) {
      throw std::out_of_range("window end " + std::to_string(T) + " is beyond the last sample at " +
                              std::to_string(samples_.back().t));
    }
    const double a = T - width;
    const auto first = std::lower_bound(samples_.begin(), samples_.end(), a - eps,
                                        [](const LedgerSample& s, double v) { return s.t < v; });
    const auto last = std::upper_bound(samples_.begin(), samples_.end(), T + eps,
                                       [](double v, const LedgerSample& s) { return v < s.t; });
    const std::size_t lo = std::size_t(first - samples_.begin());
    const std::size_t hi = std::max(lo, std::size_t(last - samples_.begin()));
    return {lo, hi, samples_.front().t <= a + eps};
  }

  double interpolate(const SeriesSelector& f, std::size_t i, double t) const {
    const auto& s0 = samples_[i];
    const auto& s1 = samples_[i + 1];
    const double w = (t - s0.t) / (s1.t - s0.t);
    return (1.0 - w) * f(s0) + w * f(s1);
  }

  LedgerSettings settings_;
  std::vector<LedgerSample> samples_;
};

struct CriterionRow {
  int p = 0;
  double E = 0.0;
  double D = 0.0;
  double s = 0.0;
  double bkm = 0.0;
  double b1inf = 0.0;
  std::optional<CheckResult> flux_window;
  std::optional<CheckResult> iteration;
  bool resolved = true;
};

struct CriterionReport {
  double t_ref = 0.0;
  std::vector<CriterionRow> rows;
  DecayFit alpha_fit;
  double leray_m = 2.0;
  std::vector<MonitorPoint> leray;
};

inline CriterionReport compute_criteria(const WindowLedger& ledger, int p_min, int p_max, double m,
                                        std::optional<double> t_ref = std::nullopt) {
  CriterionReport rep;
  rep.leray_m = m;
  if (ledger.empty()) return rep;
  rep.t_ref = t_ref.value_or(ledger.last_time());
  const int hi = std::min(p_max, ledger.q_max());
  std::vector<int> ps;
  for (int p = std::max(0, p_min); p <= hi; ++p) {
    CriterionRow row;
    row.p = p;
    const WindowValue e = ledger.window_E(p, rep.t_ref), d = ledger.window_D(p, rep.t_ref);
    const WindowValue bkm = ledger.bkm_window(p, rep.t_ref);
    const WindowValue b1 = ledger.b1inf_window(p, rep.t_ref);
    row.E = e.value;
    row.D = d.value;
    row.s = dyadic_lambda(p) * d.value;
    row.bkm = bkm.value;
    row.b1inf = b1.value;
    row.resolved = e.resolved() && d.resolved() && bkm.resolved() && b1.resolved();
    if (p >= ledger.settings().b) {
      row.flux_window = ledger.flux_window_check(p, rep.t_ref);
      row.iteration = ledger.iteration_check(p, rep.t_ref, ledger.settings().alpha);
      row.resolved = row.resolved && row.flux_window->resolved && row.iteration->resolved;
    }
    rep.rows.push_back(row);
    ps.push_back(p);
  }
  rep.alpha_fit = ledger.decay_fit(rep.t_ref, ps);
  rep.leray = ledger.leray_monitor(rep.t_ref, m);
  return rep;
}

}  // namespace lpns
