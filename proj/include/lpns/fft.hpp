#pragma once

// Thin RAII layer over FFTW's 3D real transforms. Spectral data is kept as
// full complex cubes; the half-spectrum layout FFTW wants is built on the fly.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "lpns/grid.hpp"

namespace lpns {

using Complex = std::complex<double>;

namespace detail {

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T, FftwDeleter<T>>;

inline std::size_t half_size(int n) {
  return static_cast<std::size_t>(n) * n * (n / 2 + 1);
}

/// Forward and inverse plans for one cube size. Plans are immutable once
/// created and FFTW's new-array execute functions are thread-safe.
class RealFftPlans {
 public:
  explicit RealFftPlans(int n) : n_(n) {
    const std::size_t cube = static_cast<std::size_t>(n) * n * n;
    FftwBuffer<double> real(fftw_alloc_real(cube));
    FftwBuffer<fftw_complex> half(fftw_alloc_complex(half_size(n)));
    forward_ = fftw_plan_dft_r2c_3d(n, n, n, real.get(), half.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_3d(n, n, n, half.get(), real.get(), FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) {
      throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
    }
  }
  RealFftPlans(const RealFftPlans&) = delete;
  RealFftPlans& operator=(const RealFftPlans&) = delete;
  ~RealFftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  int n() const { return n_; }
  fftw_plan forward() const { return forward_; }
  fftw_plan inverse() const { return inverse_; }

 private:
  int n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

inline const RealFftPlans& plans_for(int n) {
  // FFTW's planner is not re-entrant; serialize plan creation only.
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<RealFftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFftPlans>(n);
  return *slot;
}

struct Workspace {
  FftwBuffer<double> real;
  FftwBuffer<fftw_complex> half;
};

inline Workspace& workspace_for(int n) {
  thread_local std::map<int, Workspace> spaces;
  auto it = spaces.find(n);
  if (it == spaces.end()) {
    Workspace ws{FftwBuffer<double>(fftw_alloc_real(static_cast<std::size_t>(n) * n * n)),
                 FftwBuffer<fftw_complex>(fftw_alloc_complex(half_size(n)))};
    it = spaces.emplace(n, std::move(ws)).first;
  }
  return it->second;
}

/// Evaluate u(x) = sum_k c(k) e^{ik.x} on an m^3 grid (m >= src.n) from a
/// Hermitian full cube on `src`. Modes are zero-padded into the finer cube.
inline void inverse_real(const Grid& src, const Complex* coeffs, int m, double* out) {
  if (m < src.n) throw std::invalid_argument("inverse_real: target grid coarser than source");
  const auto& plans = plans_for(m);
  auto& ws = workspace_for(m);
  const int mh = m / 2 + 1;
  auto* half = reinterpret_cast<Complex*>(ws.half.get());
  std::fill(half, half + half_size(m), Complex{});

  const int kmax = src.max_resolved();
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    const int s1 = src.index(k1);
    const int d1 = k1 >= 0 ? k1 : k1 + m;
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      const int s2 = src.index(k2);
      const int d2 = k2 >= 0 ? k2 : k2 + m;
      const Complex* row = coeffs + src.flat(s1, s2, 0);
      Complex* dst = half + (static_cast<std::size_t>(d1) * m + d2) * mh;
      std::copy(row, row + kmax + 1, dst);
    }
  }
  fftw_execute_dft_c2r(plans.inverse(), ws.half.get(), ws.real.get());
  std::copy(ws.real.get(), ws.real.get() + static_cast<std::size_t>(m) * m * m, out);
}

/// Fourier coefficients c(k) = n^-3 sum_x v(x) e^{-ik.x} of real samples on
/// grid g, written as a full Hermitian cube with the Nyquist planes zeroed.
inline void forward_real(const Grid& g, const double* in, Complex* out) {
  const int n = g.n;
  const auto& plans = plans_for(n);
  auto& ws = workspace_for(n);
  const std::size_t cube = g.size();
  std::copy(in, in + cube, ws.real.get());
  fftw_execute_dft_r2c(plans.forward(), ws.real.get(), ws.half.get());

  const auto* half = reinterpret_cast<const Complex*>(ws.half.get());
  const int nh = n / 2 + 1;
  const double scale = 1.0 / static_cast<double>(cube);
  for (int i1 = 0; i1 < n; ++i1) {
    const int j1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      const int j2 = (n - i2) % n;
      const Complex* src = half + (static_cast<std::size_t>(i1) * n + i2) * nh;
      const Complex* mirror = half + (static_cast<std::size_t>(j1) * n + j2) * nh;
      Complex* dst = out + g.flat(i1, i2, 0);
      const bool nyq = g.is_nyquist(i1) || g.is_nyquist(i2);
      for (int i3 = 0; i3 < n; ++i3) {
        if (nyq || g.is_nyquist(i3)) {
          dst[i3] = Complex{};
        } else if (i3 < nh) {
          dst[i3] = src[i3] * scale;
        } else {
          dst[i3] = std::conj(mirror[n - i3]) * scale;
        }
      }
    }
  }
}

}  // namespace detail
}  // namespace lpns
