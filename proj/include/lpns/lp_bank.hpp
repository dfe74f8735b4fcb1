#pragma once

// Littlewood-Paley filter bank on the periodic grid.
//
// The cutoff chi equals 1 on [0, 3/4], 0 on [1, inf), and follows a quintic
// smoothstep in between. Shell symbols are phi_q(xi) = chi(xi/2^{q+1}) -
// chi(xi/2^q) for q >= 0 and chi(xi) for q = -1, so partial sums telescope:
// low band u_{<=p} has symbol chi(|k|/2^{p+1}), high band u_{>=p} has symbol
// 1 - chi(|k|/2^p). Shells are measured against the Euclidean |k|.

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpns/field.hpp"
#include "lpns/spectral.hpp"

namespace lpns {

inline double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

/// chi(xi): 1 for xi <= 3/4, 0 for xi >= 1, smooth and non-increasing.
inline double cutoff_profile(double xi) {
  if (xi <= 0.75) return 1.0;
  if (xi >= 1.0) return 0.0;
  return 1.0 - smoothstep((xi - 0.75) * 4.0);
}

/// lambda_q = 2^q, with lambda_{-1} := 1.
inline double dyadic_lambda(int q) { return q < 0 ? 1.0 : std::ldexp(1.0, q); }

inline double dyadic_symbol(int q, double xi) {
  if (q < -1) throw std::invalid_argument("dyadic_symbol: shell index must be >= -1");
  if (!(xi >= 0.0)) throw std::invalid_argument("dyadic_symbol: xi must be >= 0");
  if (q == -1) return cutoff_profile(xi);
  return cutoff_profile(std::ldexp(xi, -(q + 1))) - cutoff_profile(std::ldexp(xi, -q));
}

/// Symbol of u_{<=p} (p >= -1).
inline double low_symbol(int p, double xi) { return cutoff_profile(std::ldexp(xi, -(p + 1))); }

/// Symbol of u_{>=p} (p >= 0), complementary to low_symbol(p - 1).
inline double high_symbol(int p, double xi) { return 1.0 - cutoff_profile(std::ldexp(xi, -p)); }

enum class BandSide { low, high };

class DyadicFilterBank {
 public:
  explicit DyadicFilterBank(const Grid& g)
      : grid_(g), q_max_(q_max_for(g)), kmag_(std::make_shared<std::vector<double>>(g.size())) {
    auto& km = *kmag_;
    for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
      km[i] = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
    });
  }

  /// Smallest shell index whose telescoped low symbol is 1 on every
  /// resolvable mode, i.e. 3/4 * 2^{q+1} >= sqrt(3) (n/2 - 1).
  static int q_max_for(const Grid& g) {
    const double kcorner = std::sqrt(3.0) * g.max_resolved();
    int q = 0;
    while (0.75 * std::ldexp(1.0, q + 1) < kcorner) ++q;
    return q;
  }

  const Grid& grid() const { return grid_; }
  int q_max() const { return q_max_; }
  const std::vector<double>& kmag() const { return *kmag_; }

  template <class Symbol>
  SpectralField apply(const SpectralField& u, Symbol&& symbol) const {
    require_same_grid(u.grid, grid_);
    SpectralField out = u;
    const auto& km = *kmag_;
    for (auto& comp : out.coeffs) {
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= symbol(km[i]);
    }
    return out;
  }

  /// Delta_q u
  SpectralField shell(const SpectralField& u, int q) const {
    if (q < -1 || q > q_max_) {
      throw std::out_of_range("shell index " + std::to_string(q) + " outside [-1, " +
                              std::to_string(q_max_) + "]");
    }
    return apply(u, [q](double k) { return dyadic_symbol(q, k); });
  }

  SpectralField low(const SpectralField& u, int p) const {
    if (p < -1) throw std::out_of_range("low band index must be >= -1");
    return apply(u, [p](double k) { return low_symbol(p, k); });
  }

  SpectralField high(const SpectralField& u, int p) const {
    if (p < 0) throw std::out_of_range("high band index must be >= 0");
    return apply(u, [p](double k) { return high_symbol(p, k); });
  }

  SpectralField band(const SpectralField& u, int p, BandSide side) const {
    return side == BandSide::low ? low(u, p) : high(u, p);
  }

  /// sum_{|r-p| <= b} Delta_r u
  SpectralField tilde(const SpectralField& u, int p, int b) const {
    if (b < 1 || p < b) throw std::invalid_argument("tilde projection needs p >= b >= 1");
    const int lo = std::max(-1, p - b);
    const int hi = std::min(q_max_, p + b);
    return apply(u, [lo, hi](double k) {
      double s = 0.0;
      for (int r = lo; r <= hi; ++r) s += dyadic_symbol(r, k);
      return s;
    });
  }

 private:
  Grid grid_;
  int q_max_;
  std::shared_ptr<std::vector<double>> kmag_;
};

/// B^s_{inf,inf} norm: max_q lambda_q^s ||Delta_q u||_inf.
inline double besov_norm(const SpectralField& u, const DyadicFilterBank& bank, double s,
                         int oversample = 2) {
  if (!(s >= -2.0 && s <= 2.0)) throw std::invalid_argument("besov_norm: s must lie in [-2, 2]");
  double best = 0.0;
  for (int q = -1; q <= bank.q_max(); ++q) {
    const SpectralField uq = bank.shell(u, q);
    if (max_abs(uq) == 0.0) continue;
    best = std::max(best, std::pow(dyadic_lambda(q), s) * norm_lp(uq, kInf, oversample));
  }
  return best;
}

/// ||u_q||_r / (lambda_q^{3(1/s - 1/r)} ||u_q||_s), with u_q = Delta_q u.
inline double bernstein_ratio(const SpectralField& u, const DyadicFilterBank& bank, int q,
                              double s_exp, double r_exp, int oversample = 2) {
  if (!(s_exp >= 1.0 && r_exp >= s_exp)) {
    throw std::invalid_argument("bernstein_ratio needs 1 <= s <= r");
  }
  const SpectralField uq = bank.shell(u, q);
  const double denom_norm = norm_lp(uq, s_exp, oversample);
  if (denom_norm == 0.0) throw std::domain_error("bernstein_ratio: shell is empty");
  if (s_exp == r_exp) return 1.0;
  const double inv_r = std::isinf(r_exp) ? 0.0 : 1.0 / r_exp;
  const double scale = std::pow(dyadic_lambda(q), 3.0 * (1.0 / s_exp - inv_r));
  return norm_lp(uq, r_exp, oversample) / (scale * denom_norm);
}

/// Per-shell and per-band scalars of one velocity snapshot.
///
/// Shell arrays are indexed by q + 1 for q in [-1, q_max]; band arrays by p
/// in [0, q_max].
struct ShellSpectrum {
  double t = 0.0;
  int q_max = 0;
  double energy = 0.0;
  double enstrophy = 0.0;
  std::vector<double> shell_energy;     // ||u_q||_2^2
  std::vector<double> shell_enstrophy;  // ||grad u_q||_2^2
  std::vector<double> shell_linf;       // ||u_q||_inf
  std::vector<double> band_energy;      // ||u_{>=p}||_2^2
  std::vector<double> band_enstrophy;   // ||grad u_{>=p}||_2^2
  std::vector<double> low_grad_linf;    // ||grad u_{<=p}||_inf (Frobenius)
  std::vector<double> lebesgue_exponents;
  std::vector<std::vector<double>> low_lebesgue;  // [exponent][p] ||u_{<=p}||_m

  double shell_e(int q) const { return shell_energy.at(q + 1); }
  double shell_d(int q) const { return shell_enstrophy.at(q + 1); }
  double shell_sup(int q) const { return shell_linf.at(q + 1); }
  /// lambda_p^{-1} ||u_p||_inf
  double scaled_shell_sup(int q) const { return shell_sup(q) / dyadic_lambda(q); }

  std::size_t exponent_slot(double m) const {
    for (std::size_t i = 0; i < lebesgue_exponents.size(); ++i) {
      if (lebesgue_exponents[i] == m) return i;
    }
    throw std::out_of_range("Lebesgue exponent " + std::to_string(m) + " was not sampled");
  }
  double low_lp(double m, int p) const { return low_lebesgue[exponent_slot(m)].at(p); }
};

struct ShellStatsOptions {
  std::vector<double> lebesgue_exponents{2.0, 2.5, 3.0};
  int oversample = 2;
};

inline ShellSpectrum shell_statistics(const SpectralField& u, const DyadicFilterBank& bank,
                                      const ShellStatsOptions& opts = {}) {
  const int qmax = bank.q_max();
  ShellSpectrum s;
  s.q_max = qmax;
  s.energy = energy(u);
  s.enstrophy = enstrophy(u);
  s.lebesgue_exponents = opts.lebesgue_exponents;

  for (int q = -1; q <= qmax; ++q) {
    const auto w = [q](double k) { return dyadic_symbol(q, k); };
    const double eq = weighted_energy(u, [&](double k) { return w(k) * w(k); });
    s.shell_energy.push_back(eq);
    s.shell_enstrophy.push_back(weighted_energy(u, [&](double k) { return w(k) * w(k) * k * k; }));
    s.shell_linf.push_back(eq > 0.0 ? norm_lp(bank.shell(u, q), kInf, opts.oversample) : 0.0);
  }
  for (int p = 0; p <= qmax; ++p) {
    const auto h = [p](double k) { return high_symbol(p, k); };
    s.band_energy.push_back(weighted_energy(u, [&](double k) { return h(k) * h(k); }));
    s.band_enstrophy.push_back(weighted_energy(u, [&](double k) { return h(k) * h(k) * k * k; }));
  }

  // Once the low symbol is 1 on every active mode, u_{<=p} = u and the
  // physical-space norms repeat.
  const double kactive = max_active_wavenumber(u);
  s.low_lebesgue.assign(opts.lebesgue_exponents.size(), {});
  bool saturated = false;
  for (int p = 0; p <= qmax; ++p) {
    if (!saturated) {
      const SpectralField low = bank.low(u, p);
      s.low_grad_linf.push_back(grad_linf(low, opts.oversample));
      const PhysicalField v = to_physical(low, opts.oversample);
      for (std::size_t e = 0; e < opts.lebesgue_exponents.size(); ++e) {
        s.low_lebesgue[e].push_back(lebesgue_norm_of_samples(v, opts.lebesgue_exponents[e]));
      }
      saturated = 0.75 * std::ldexp(1.0, p + 1) >= kactive;
    } else {
      s.low_grad_linf.push_back(s.low_grad_linf.back());
      for (auto& series : s.low_lebesgue) series.push_back(series.back());
    }
  }
  return s;
}

}  // namespace lpns
