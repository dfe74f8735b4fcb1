#pragma once

// Integrating-factor RK4 for d/dt u + P[(u . grad) u] = nu lap u on the torus.
// The viscous propagator exp(-nu |k|^2 t) is applied exactly; the classical
// four-stage scheme advances w = exp(nu |k|^2 t) u_hat.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "lpns/errors.hpp"
#include "lpns/field.hpp"
#include "lpns/spectral.hpp"

namespace lpns {

struct SolverState {
  SpectralField u;
  double t = 0.0;
  double nu = 1.0;
  long step_count = 0;
};

/// -P[(u . grad) u], dealiased. Stage fields are solenoidal, so the
/// divergence form is used.
inline SpectralField advection_rhs(const SpectralField& u) {
  SpectralField r = leray_project(divergence_advection(u));
  for (auto& comp : r.coeffs)
    for (auto& x : comp) x = -x;
  r.dealiased = true;
  return r;
}

namespace detail {

inline std::vector<double> viscous_factors(const Grid& g, double nu, double dt) {
  std::vector<double> f(g.size());
  for_each_mode(g, [&](std::size_t i, int k1, int k2, int k3) {
    f[i] = std::exp(-nu * double(k1 * k1 + k2 * k2 + k3 * k3) * dt);
  });
  return f;
}

inline bool all_finite(const SpectralField& u) {
  for (const auto& comp : u.coeffs)
    for (const auto& x : comp)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

}  // namespace detail

inline SolverState step(const SolverState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const Grid& g = s.u.grid;
  const std::vector<double> eh = detail::viscous_factors(g, s.nu, 0.5 * dt);
  const std::size_t size = g.size();

  auto combine = [&](auto&& f) {
    SpectralField out = SpectralField::zeros(g);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < size; ++i) out.coeffs[c][i] = f(c, i);
    out.dealiased = true;
    return out;
  };
  const auto& u = s.u.coeffs;

  const SpectralField a = advection_rhs(s.u);
  const SpectralField u2 = combine([&](int c, std::size_t i) {
    return eh[i] * (u[c][i] + 0.5 * dt * a.coeffs[c][i]);
  });
  const SpectralField b = advection_rhs(u2);
  const SpectralField u3 = combine([&](int c, std::size_t i) {
    return eh[i] * u[c][i] + 0.5 * dt * b.coeffs[c][i];
  });
  const SpectralField c3 = advection_rhs(u3);
  const SpectralField u4 = combine([&](int c, std::size_t i) {
    const double e = eh[i] * eh[i];
    return e * u[c][i] + dt * eh[i] * c3.coeffs[c][i];
  });
  const SpectralField d = advection_rhs(u4);
  SpectralField next = combine([&](int c, std::size_t i) {
    const double e = eh[i] * eh[i];
    return e * u[c][i] + (dt / 6.0) * (e * a.coeffs[c][i] +
                                       2.0 * eh[i] * (b.coeffs[c][i] + c3.coeffs[c][i]) +
                                       d.coeffs[c][i]);
  });
  next = remove_mean(dealias(leray_project(std::move(next))));

  if (!detail::all_finite(next)) {
    std::ostringstream msg;
    msg << "non-finite velocity after step " << s.step_count + 1 << " (t=" << s.t + dt << ")";
    throw NumericalError(msg.str());
  }
  return SolverState{std::move(next), s.t + dt, s.nu, s.step_count + 1};
}

/// dt = cfl * h / max(||u||_inf, 1e-8), capped at dt_max.
inline double cfl_dt(const SolverState& s, double cfl, double dt_max) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("cfl target must lie in (0, 0.5]");
  const double umax = std::max(norm_lp(s.u, kInf, 1), 1e-8);
  return std::min(cfl * s.u.grid.spacing() / umax, dt_max);
}

/// Trapezoid residual of the energy equality over one step, relative to the
/// initial energy:
///   |E1 - E0 + nu dt (D0 + D1) + dt (T0 + T1) / 2| / E0,  T = 2 int (u.grad)u . u.
inline double energy_balance_residual(const SolverState& before, const SolverState& after) {
  const double e0 = energy(before.u);
  if (e0 == 0.0) return 0.0;
  const double dt = after.t - before.t;
  const double e1 = energy(after.u);
  const double d0 = enstrophy(before.u), d1 = enstrophy(after.u);
  const double t0 = 2.0 * inner_product(nonlinear_advection(before.u), before.u);
  const double t1 = 2.0 * inner_product(nonlinear_advection(after.u), after.u);
  return std::abs(e1 - e0 + before.nu * dt * (d0 + d1) + 0.5 * dt * (t0 + t1)) / e0;
}

}  // namespace lpns
