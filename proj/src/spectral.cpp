#include "curlsob/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "curlsob/log.hpp"
#include "curlsob/norms.hpp"
#include "fft.hpp"

namespace curlsob {
namespace spectral {

template <typename S, int C>
Spectrum<S, C> forward(const Field<S, C>& f) {
  const Grid& g = f.grid();
  Spectrum<S, C> sp{g, typename Spectrum<S, C>::Coefficients(C, Spectrum<S, C>::mode_count(g))};
  if constexpr (Spectrum<S, C>::kHalf) {
    fft::r2c(g.n(), C, f.values().data(), sp.coeffs.data());
  } else {
    fft::c2c(g.n(), C, true, f.values().data(), sp.coeffs.data());
  }
  return sp;
}

template <typename S, int C>
Field<S, C> backward(Spectrum<S, C> sp) {
  const Grid& g = sp.grid;
  Field<S, C> out(g);
  if constexpr (Spectrum<S, C>::kHalf) {
    // c2r consumes only the Hermitian part, so the output is real by construction.
    fft::c2r(g.n(), C, sp.coeffs.data(), out.values().data());
  } else {
    fft::c2c(g.n(), C, false, sp.coeffs.data(), out.values().data());
  }
  out.values() *= S(1.0 / double(g.size()));
  return out;
}

template <typename S, int C>
double spectral_inner(const Spectrum<S, C>& a, const Spectrum<S, C>& b) {
  Field<S, C>::require_same_grid(a.grid, b.grid);
  std::vector<double> weights(std::size_t(a.coeffs.cols()));
  for_each_mode<S, C>(a.grid, [&](Index idx, const Mode& m) { weights[std::size_t(idx)] = m.weight; });
  const double sum = pairwise_sum(0, a.coeffs.cols(), [&](Index i) {
    return weights[std::size_t(i)] * std::real(a.coeffs.col(i).dot(b.coeffs.col(i)));
  });
  return sum * a.grid.cell_volume() / double(a.grid.size());
}

int fft_threads() { return fft::threads(); }

template Spectrum<double, 1> forward(const Field<double, 1>&);
template Spectrum<double, 3> forward(const Field<double, 3>&);
template Spectrum<std::complex<double>, 2> forward(const Field<std::complex<double>, 2>&);
template Field<double, 1> backward(Spectrum<double, 1>);
template Field<double, 3> backward(Spectrum<double, 3>);
template Field<std::complex<double>, 2> backward(Spectrum<std::complex<double>, 2>);
template double spectral_inner(const Spectrum<double, 1>&, const Spectrum<double, 1>&);
template double spectral_inner(const Spectrum<double, 3>&, const Spectrum<double, 3>&);
template double spectral_inner(const Spectrum<std::complex<double>, 2>&,
                               const Spectrum<std::complex<double>, 2>&);

}  // namespace spectral

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// d x a for real d and complex a. Eigen's complex cross() conjugates its result.
Eigen::Vector3cd cross_rc(const Eigen::Vector3d& d, const Eigen::Vector3cd& a) {
  return {d.y() * a.z() - d.z() * a.y(), d.z() * a.x() - d.x() * a.z(), d.x() * a.y() - d.y() * a.x()};
}

template <typename S, int C, typename Multiplier>
Field<S, C> apply_scalar_multiplier(const Field<S, C>& f, Multiplier&& mult) {
  auto sp = spectral::forward(f);
  spectral::for_each_mode<S, C>(f.grid(), [&](Index idx, const Mode& m) { sp.coeffs.col(idx) *= mult(m); });
  return spectral::backward(std::move(sp));
}

}  // namespace

VectorField curl(const VectorField& v) {
  auto sp = spectral::forward(v);
  spectral::for_each_mode<double, 3>(v.grid(), [&](Index idx, const Mode& m) {
    sp.coeffs.col(idx) = kI * cross_rc(m.d, sp.coeffs.col(idx));
  });
  return spectral::backward(std::move(sp));
}

ScalarField divergence(const VectorField& v) {
  const auto sp = spectral::forward(v);
  Spectrum<double, 1> out{v.grid(), Spectrum<double, 1>::Coefficients(1, sp.coeffs.cols())};
  spectral::for_each_mode<double, 3>(v.grid(), [&](Index idx, const Mode& m) {
    out.coeffs(0, idx) = kI * (m.d.cast<std::complex<double>>().dot(sp.coeffs.col(idx)));
  });
  return spectral::backward(std::move(out));
}

VectorField gradient(const ScalarField& f) {
  const auto sp = spectral::forward(f);
  Spectrum<double, 3> out{f.grid(), Spectrum<double, 3>::Coefficients(3, sp.coeffs.cols())};
  spectral::for_each_mode<double, 1>(f.grid(), [&](Index idx, const Mode& m) {
    out.coeffs.col(idx) = kI * sp.coeffs(0, idx) * m.d.cast<std::complex<double>>();
  });
  return spectral::backward(std::move(out));
}

template <typename S, int C>
Field<S, C> laplacian(const Field<S, C>& f) {
  return apply_scalar_multiplier(f, [](const Mode& m) { return -m.k.squaredNorm(); });
}

template <int C>
Field<double, C> inverse_laplacian(const Field<double, C>& f, MeanRemoval* note) {
  auto sp = spectral::forward(f);
  // Zero mode is stored first in both layouts.
  const double max_mean = sp.coeffs.col(0).cwiseAbs().maxCoeff() / double(f.size());
  const double scale = std::max(f.values().cwiseAbs().maxCoeff(), 1e-300);
  MeanRemoval removal{max_mean > 1e-12 * scale, max_mean};
  if (removal.removed) log::debug("inverse_laplacian: removed nonzero mean ", max_mean);
  if (note) *note = removal;
  spectral::for_each_mode<double, C>(f.grid(), [&](Index idx, const Mode& m) {
    const double k2 = m.k.squaredNorm();
    sp.coeffs.col(idx) *= k2 > 0.0 ? 1.0 / k2 : 0.0;
  });
  return spectral::backward(std::move(sp));
}

template <typename S, int C>
Field<S, C> heat(const Field<S, C>& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat: time t must be >= 0");
  if (t == 0.0) return f;
  return apply_scalar_multiplier(f, [t](const Mode& m) { return std::exp(-t * m.k.squaredNorm()); });
}

VectorField biot_savart(const VectorField& b) {
  auto sp = spectral::forward(b);
  spectral::for_each_mode<double, 3>(b.grid(), [&](Index idx, const Mode& m) {
    const double d2 = m.d.squaredNorm();
    if (d2 == 0.0) {
      sp.coeffs.col(idx).setZero();
      return;
    }
    sp.coeffs.col(idx) = (kI / d2) * cross_rc(m.d, sp.coeffs.col(idx));
  });
  return spectral::backward(std::move(sp));
}

template Field<double, 1> laplacian(const Field<double, 1>&);
template Field<double, 3> laplacian(const Field<double, 3>&);
template Field<std::complex<double>, 2> laplacian(const Field<std::complex<double>, 2>&);
template Field<double, 1> inverse_laplacian(const Field<double, 1>&, MeanRemoval*);
template Field<double, 3> inverse_laplacian(const Field<double, 3>&, MeanRemoval*);
template Field<double, 1> heat(const Field<double, 1>&, double);
template Field<double, 3> heat(const Field<double, 3>&, double);
template Field<std::complex<double>, 2> heat(const Field<std::complex<double>, 2>&, double);

}  // namespace curlsob
