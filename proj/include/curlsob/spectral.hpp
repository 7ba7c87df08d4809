#pragma once

#include <complex>
#include <type_traits>

#include <Eigen/Core>

#include "curlsob/field.hpp"

namespace curlsob {

/// Discrete Fourier coefficients of a field.
///
/// Real fields use the half-complex layout n x n x (n/2+1) (z halved); complex
/// fields use the full n^3 layout. Coefficients are unnormalized forward DFT values.
template <typename S, int C>
struct Spectrum {
  static constexpr bool kHalf = std::is_same_v<S, double>;
  using Coefficients = Eigen::Matrix<std::complex<double>, C, Eigen::Dynamic>;

  Grid grid;
  Coefficients coeffs;

  static int nz(const Grid& g) { return kHalf ? g.n() / 2 + 1 : g.n(); }
  static Index mode_count(const Grid& g) { return Index(g.n()) * g.n() * nz(g); }
};

/// Wavenumber data of one Fourier mode.
///
/// k is the true wavenumber (pi/L times the signed frequency index); d is the
/// first-derivative wavenumber, equal to k except that Nyquist components are
/// zeroed for real fields so odd-order multipliers preserve Hermitian symmetry.
/// weight is the Parseval multiplicity of the mode in the stored layout.
struct Mode {
  Eigen::Vector3d k;
  Eigen::Vector3d d;
  double weight;
  bool zero() const { return k.squaredNorm() == 0.0; }
};

namespace spectral {

template <typename S, int C>
Spectrum<S, C> forward(const Field<S, C>& f);

/// Inverse transform including the 1/n^3 normalization.
template <typename S, int C>
Field<S, C> backward(Spectrum<S, C> sp);

/// Calls fn(mode_index, mode) for every stored mode, in storage order.
template <typename S, int C, typename Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const int n = grid.n();
  const int nz = Spectrum<S, C>::nz(grid);
  const double k0 = grid.fundamental_wavenumber();
  constexpr bool half = Spectrum<S, C>::kHalf;
  auto signed_freq = [n](int m) { return m < n / 2 ? m : m - n; };
  Index idx = 0;
  for (int i = 0; i < n; ++i) {
    const double kx = k0 * signed_freq(i);
    const double dx = (half && i == n / 2) ? 0.0 : kx;
    for (int j = 0; j < n; ++j) {
      const double ky = k0 * signed_freq(j);
      const double dy = (half && j == n / 2) ? 0.0 : ky;
      for (int m = 0; m < nz; ++m, ++idx) {
        const double kz = half ? k0 * m : k0 * signed_freq(m);
        const double dz = (half && m == n / 2) ? 0.0 : kz;
        const double weight = (!half || m == 0 || m == n / 2) ? 1.0 : 2.0;
        fn(idx, Mode{{kx, ky, kz}, {dx, dy, dz}, weight});
      }
    }
  }
}

/// Sum over all modes of weight * Re<a_hat, b_hat> h^3 / n^3; equals inner(a, b) by Parseval.
template <typename S, int C>
double spectral_inner(const Spectrum<S, C>& a, const Spectrum<S, C>& b);

/// Frequency-domain L^2 norm squared; equals lp_norm(f, 2)^2 by Parseval.
template <typename S, int C>
double spectral_norm_squared(const Spectrum<S, C>& sp) {
  return spectral_inner(sp, sp);
}

/// Number of FFT threads in use (from CURLSOB_THREADS, capped by hardware).
int fft_threads();

}  // namespace spectral

/// Spectral curl, multiplication by i k x (.) per mode.
VectorField curl(const VectorField& v);
ScalarField divergence(const VectorField& v);
VectorField gradient(const ScalarField& f);

/// Laplacian via the multiplier -|k|^2.
template <typename S, int C>
Field<S, C> laplacian(const Field<S, C>& f);

/// Mean removed by inverse_laplacian, reported when non-negligible.
struct MeanRemoval {
  bool removed = false;
  double max_abs_mean = 0.0;
};

/// (-Delta)^{-1} via the multiplier 1/|k|^2; the zero mode (mean) is set to zero.
template <int C>
Field<double, C> inverse_laplacian(const Field<double, C>& f, MeanRemoval* note = nullptr);

/// Heat semigroup e^{t Delta}: multiplier exp(-t |k|^2). Rejects t < 0.
template <typename S, int C>
Field<S, C> heat(const Field<S, C>& f, double t);

/// Coulomb-gauge potential with curl equal to B: A_hat = i k x B_hat / |k|^2, zero mode dropped.
VectorField biot_savart(const VectorField& b);

}  // namespace curlsob
