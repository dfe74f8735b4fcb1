#pragma once

// Energy-flux functionals across the dyadic split, the exact algebraic
// identity relating high, low and cross fluxes, and the CET remainder.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpns/field.hpp"
#include "lpns/lp_bank.hpp"
#include "lpns/solver.hpp"
#include "lpns/spectral.hpp"

namespace lpns {

/// (2 pi)^3 sum_k w(|k|) Re(a_hat . conj b_hat)
template <class Weight>
double weighted_inner(const SpectralField& a, const SpectralField& b, const DyadicFilterBank& bank,
                      Weight&& w) {
  require_same_grid(a.grid, b.grid);
  require_same_grid(a.grid, bank.grid());
  const auto& km = bank.kmag();
  double s = 0.0;
  for (std::size_t i = 0; i < km.size(); ++i) {
    const double d = (a.coeffs[0][i] * std::conj(b.coeffs[0][i])).real() +
                     (a.coeffs[1][i] * std::conj(b.coeffs[1][i])).real() +
                     (a.coeffs[2][i] * std::conj(b.coeffs[2][i])).real();
    if (d != 0.0) s += w(km[i]) * d;
  }
  return kBoxVolume * s;
}

/// Scale of a trilinear flux: ||u||_2 ||grad u||_2 ||u||_inf.
inline double flux_scale(const SpectralField& u, int oversample = 2) {
  return std::sqrt(energy(u)) * std::sqrt(enstrophy(u)) * norm_lp(u, kInf, oversample);
}

inline constexpr double kFluxScaleFloor = 1e-300;

/// integral of (u.grad)u . H_p^2 u, with n = nonlinear_advection(u).
inline double flux_high(const SpectralField& u, const SpectralField& n, const DyadicFilterBank& bank,
                        int p) {
  if (p < 0) throw std::out_of_range("flux_high: p must be >= 0");
  return weighted_inner(n, u, bank, [p](double k) {
    const double h = high_symbol(p, k);
    return h * h;
  });
}

inline double flux_high(const SpectralField& u, const DyadicFilterBank& bank, int p) {
  return flux_high(u, nonlinear_advection(u), bank, p);
}

/// integral of (u.grad)u . M_p^2 u with M_p the low symbol of u_{<=p}.
inline double flux_low(const SpectralField& u, const SpectralField& n, const DyadicFilterBank& bank,
                       int p) {
  if (p < -1) throw std::out_of_range("flux_low: p must be >= -1");
  return weighted_inner(n, u, bank, [p](double k) {
    const double l = low_symbol(p, k);
    return l * l;
  });
}

inline double flux_low(const SpectralField& u, const DyadicFilterBank& bank, int p) {
  return flux_low(u, nonlinear_advection(u), bank, p);
}

/// integral of (u.grad)u . H_p M_{p-1} u
inline double flux_cross(const SpectralField& u, const SpectralField& n, const DyadicFilterBank& bank,
                         int p) {
  if (p < 0) throw std::out_of_range("flux_cross: p must be >= 0");
  return weighted_inner(n, u, bank, [p](double k) { return high_symbol(p, k) * low_symbol(p - 1, k); });
}

/// integral of (u.grad)u . u, zero for divergence-free u.
inline double total_flux(const SpectralField& u, const SpectralField& n) { return inner_product(n, u); }

struct FluxSample {
  double t = 0.0;
  int p = 0;
  double pi_high = 0.0;
  double pi_low = 0.0;
  double cross = 0.0;
  double identity_residual = 0.0;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  double ratio = 0.0;
};

inline double flux_identity_residual(const SpectralField& u, const SpectralField& n,
                                     const DyadicFilterBank& bank, int p, double scale) {
  const double sum = flux_high(u, n, bank, p) + flux_low(u, n, bank, p - 1) + 2.0 * flux_cross(u, n, bank, p);
  return std::abs(sum) / (scale + kFluxScaleFloor);
}

/// |Pi_{>=p} + Pi_{<=p-1} + 2 cross| / (||u||_2 ||grad u||_2 ||u||_inf + eps)
inline double flux_identity_residual(const SpectralField& u, const DyadicFilterBank& bank, int p) {
  return flux_identity_residual(u, nonlinear_advection(u), bank, p, flux_scale(u));
}

/// Right side of the cutoff flux bound without its constant:
/// [sum_{r<=p} 4^{r-p} ||u_r||^2 + sum_{r>p} ||u_r||^2] ||grad u_{<p}||_inf.
inline double flux_bound_rhs(const SpectralField& u, const DyadicFilterBank& bank, int p,
                             int oversample = 2) {
  double weighted = 0.0;
  for (int r = -1; r <= bank.q_max(); ++r) {
    const double er = weighted_energy(u, [r](double k) {
      const double f = dyadic_symbol(r, k);
      return f * f;
    });
    weighted += r <= p ? std::ldexp(er, 2 * (r - p)) : er;
  }
  if (weighted == 0.0) return 0.0;
  return weighted * grad_linf(bank.low(u, p - 1), oversample);
}

/// Fills every FluxSample field for band p. A vanishing bound with a
/// non-negligible flux is reported as an error.
inline FluxSample flux_bound_ratio(const SpectralField& u, const SpectralField& n,
                                   const DyadicFilterBank& bank, int p, double scale,
                                   int oversample = 2) {
  FluxSample s;
  s.p = p;
  s.pi_high = flux_high(u, n, bank, p);
  s.pi_low = flux_low(u, n, bank, p - 1);
  s.cross = flux_cross(u, n, bank, p);
  s.identity_residual = std::abs(s.pi_high + s.pi_low + 2.0 * s.cross) / (scale + kFluxScaleFloor);
  s.bound_lhs = std::abs(s.pi_high);
  s.bound_rhs = flux_bound_rhs(u, bank, p, oversample);
  if (s.bound_rhs > 0.0) {
    s.ratio = s.bound_lhs / s.bound_rhs;
  } else if (s.bound_lhs > 1e-12 * scale) {
    throw std::domain_error("flux bound vanishes while |Pi_{>=" + std::to_string(p) +
                            "}| = " + std::to_string(s.bound_lhs));
  }
  return s;
}

inline FluxSample flux_bound_ratio(const SpectralField& u, const DyadicFilterBank& bank, int p,
                                   int oversample = 2) {
  return flux_bound_ratio(u, nonlinear_advection(u), bank, p, flux_scale(u, oversample), oversample);
}

/// Symmetric tensor field on a physical grid, component 3i+j.
struct TensorSamples {
  Grid grid;
  std::array<RealCube, 9> values;
};

inline double l1_frobenius(const TensorSamples& r) {
  const std::size_t npts = r.grid.size();
  double s = 0.0;
  for (std::size_t x = 0; x < npts; ++x) {
    double f2 = 0.0;
    for (const auto& c : r.values) f2 += c[x] * c[x];
    s += std::sqrt(f2);
  }
  return s * r.grid.weight();
}

struct CetRemainder {
  TensorSamples r;   // r_p on the doubled grid
  TensorSamples r1;  // low part M r_p
  TensorSamples r2;  // high part (1 - M) r_p
  double l1_r = 0.0;
  double l1_r1 = 0.0;
  double l1_r2 = 0.0;
  double split_defect = 0.0;  // max |r1 + r2 - r|
  double bound = 0.0;         // sum_{r<=p} ||u_r||^2 4^{-|p-r|}
  double ratio = 0.0;         // l1_r1 / bound
};

/// r_p = M(u (x) u) + u_{>p} (x) u_{>p} - u_{<=p} (x) u_{<=p}, with M the single
/// low multiplier of band p. Products are formed on the 2n grid, where every
/// quadratic mode of a resolved field is representable.
inline CetRemainder cet_remainder(const SpectralField& u, const DyadicFilterBank& bank, int p) {
  require_same_grid(u.grid, bank.grid());
  if (p < -1) throw std::out_of_range("cet_remainder: p must be >= -1");
  const Grid fine{2 * u.grid.n};
  const DyadicFilterBank fine_bank(fine);
  const auto m_sym = [p](double k) { return low_symbol(p, k); };
  const auto h_sym = [p](double k) { return 1.0 - low_symbol(p, k); };

  const SpectralField uf = pad(u, fine.n);
  const PhysicalField v = to_physical(uf);
  const PhysicalField vl = to_physical(fine_bank.apply(uf, m_sym));
  const PhysicalField vh = to_physical(fine_bank.apply(uf, h_sym));
  const auto& km = fine_bank.kmag();

  CetRemainder out;
  out.r.grid = out.r1.grid = out.r2.grid = fine;
  const std::size_t npts = fine.size();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      RealCube uu(npts);
      for (std::size_t x = 0; x < npts; ++x) uu[x] = v.values[i][x] * v.values[j][x];
      ComplexCube c = to_spectral_scalar(fine, uu);
      for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m_sym(km[k]);
      RealCube r = to_physical_scalar(fine, c);
      for (std::size_t x = 0; x < npts; ++x) {
        r[x] += vh.values[i][x] * vh.values[j][x] - vl.values[i][x] * vl.values[j][x];
      }
      ComplexCube rc = to_spectral_scalar(fine, r);
      ComplexCube lo = rc, hi = rc;
      for (std::size_t k = 0; k < rc.size(); ++k) {
        lo[k] *= m_sym(km[k]);
        hi[k] *= h_sym(km[k]);
      }
      RealCube r1 = to_physical_scalar(fine, lo);
      RealCube r2 = to_physical_scalar(fine, hi);
      for (std::size_t x = 0; x < npts; ++x) {
        out.split_defect = std::max(out.split_defect, std::abs(r1[x] + r2[x] - r[x]));
      }
      out.r.values[3 * j + i] = r;
      out.r1.values[3 * j + i] = r1;
      out.r2.values[3 * j + i] = r2;
      out.r.values[3 * i + j] = std::move(r);
      out.r1.values[3 * i + j] = std::move(r1);
      out.r2.values[3 * i + j] = std::move(r2);
    }
  }
  out.l1_r = l1_frobenius(out.r);
  out.l1_r1 = l1_frobenius(out.r1);
  out.l1_r2 = l1_frobenius(out.r2);
  for (int r = -1; r <= std::min(p, bank.q_max()); ++r) {
    const double er = weighted_energy(u, [r](double k) {
      const double f = dyadic_symbol(r, k);
      return f * f;
    });
    out.bound += std::ldexp(er, -2 * std::abs(p - r));
  }
  out.ratio = out.bound > 0.0 ? out.l1_r1 / out.bound : 0.0;
  return out;
}

/// -2 integral of Delta_q((u.grad)u) . u for q in [-1, q_max], indexed q + 1.
/// These telescope to -2 integral (u.grad)u . u.
inline std::vector<double> shell_transfers(const SpectralField& u, const SpectralField& n,
                                           const DyadicFilterBank& bank) {
  std::vector<double> out;
  for (int q = -1; q <= bank.q_max(); ++q) {
    out.push_back(-2.0 * weighted_inner(n, u, bank, [q](double k) { return dyadic_symbol(q, k); }));
  }
  return out;
}

/// -2 integral of Delta_q((u.grad)u) . Delta_q u, the nonlinear term in the
/// evolution of ||u_q||_2^2.
inline double shell_energy_transfer(const SpectralField& u, const SpectralField& n,
                                    const DyadicFilterBank& bank, int q) {
  return -2.0 * weighted_inner(n, u, bank, [q](double k) {
    const double f = dyadic_symbol(q, k);
    return f * f;
  });
}

struct ShellBalance {
  double residual = 0.0;
  double transfer = 0.0;          // mean of the two endpoint transfers
  double inequality_ratio = 0.0;  // |transfer| over the trilinear shell bound at t1
};

/// Trapezoid check of d/dt ||u_q||^2 + 2 nu ||grad u_q||^2 = -2 int Delta_q N . u_q
/// across one step, normalized by ||u_1||_2^2.
inline ShellBalance shell_balance_residual(const SolverState& s1, const SolverState& s2, int q) {
  require_same_grid(s1.u.grid, s2.u.grid);
  const DyadicFilterBank bank(s1.u.grid);
  if (q < -1 || q > bank.q_max()) throw std::out_of_range("shell_balance_residual: q out of range");
  const double nu = s1.nu;
  const double dt = s2.t - s1.t;
  const auto sq = [q](double k) {
    const double f = dyadic_symbol(q, k);
    return f * f;
  };
  const auto sqk = [q](double k) {
    const double f = dyadic_symbol(q, k);
    return f * f * k * k;
  };
  const double e1 = weighted_energy(s1.u, sq), e2 = weighted_energy(s2.u, sq);
  const double d1 = weighted_energy(s1.u, sqk), d2 = weighted_energy(s2.u, sqk);
  const double t1 = shell_energy_transfer(s1.u, nonlinear_advection(s1.u), bank, q);
  const double t2 = shell_energy_transfer(s2.u, nonlinear_advection(s2.u), bank, q);

  ShellBalance out;
  out.transfer = 0.5 * (t1 + t2);
  const double total = energy(s1.u);
  if (total == 0.0) return out;
  out.residual = std::abs(e2 - e1 + dt * (nu * (d1 + d2) - out.transfer)) / total;

  std::vector<double> norms;
  for (int r = -1; r <= bank.q_max(); ++r) {
    norms.push_back(std::sqrt(weighted_energy(s1.u, [r](double k) {
      const double f = dyadic_symbol(r, k);
      return f * f;
    })));
  }
  const auto nr = [&](int r) { return norms[r + 1]; };
  double low = 0.0, near = 0.0, tail = 0.0;
  for (int r = -1; r <= bank.q_max(); ++r) {
    if (r <= q) low += std::pow(dyadic_lambda(r), 2.5) * nr(r);
    if (std::abs(r - q) <= 2) near += nr(r);
    if (r >= q - 2) tail += nr(r) * nr(r);
  }
  const double bound = low * near * nr(q) + std::pow(dyadic_lambda(q), 2.5) * tail * nr(q);
  out.inequality_ratio = bound > 0.0 ? std::abs(t1) / bound : 0.0;
  return out;
}

}  // namespace lpns
