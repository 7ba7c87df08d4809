#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curlsob/field.hpp"

namespace curlsob {

/// Deterministic pairwise summation of term(i) over [begin, end).
template <typename Fn>
double pairwise_sum(Index begin, Index end, const Fn& term) {
  constexpr Index kLeaf = 256;
  if (end - begin <= kLeaf) {
    double s = 0.0;
    for (Index i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const Index mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

namespace detail {

inline double pow_abs(double r, double p) {
  if (p == 2.0) return r * r;
  if (p == 3.0) return r * r * r;
  if (p == 1.5) return r * std::sqrt(r);
  if (p == 1.0) return r;
  return std::pow(r, p);
}

}  // namespace detail

/// Riemann-sum L^p norm (sum |f|^p h^3)^{1/p}; |f| is the pointwise Euclidean
/// magnitude for vector and spinor fields. p = infinity gives the max.
template <typename S, int C>
double lp_norm(const Field<S, C>& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent p must be >= 1");
  const auto& v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (Index s = 0; s < f.size(); ++s) m = std::max(m, v.col(s).norm());
    return m;
  }
  const double sum =
      pairwise_sum(0, f.size(), [&](Index s) { return detail::pow_abs(v.col(s).norm(), p); });
  return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

/// Integral of |f|^p, i.e. lp_norm(f, p)^p without the final root.
template <typename S, int C>
double lp_integral(const Field<S, C>& f, double p) {
  const auto& v = f.values();
  return pairwise_sum(0, f.size(), [&](Index s) { return detail::pow_abs(v.col(s).norm(), p); }) *
         f.grid().cell_volume();
}

/// Real L^2 inner product  integral of Re<a, b> dx.
template <typename S, int C>
double inner(const Field<S, C>& a, const Field<S, C>& b) {
  a.check_same_grid(b);
  const auto& x = a.values();
  const auto& y = b.values();
  return pairwise_sum(0, a.size(),
                      [&](Index s) { return std::real(x.col(s).dot(y.col(s))); }) *
         a.grid().cell_volume();
}

inline double mean(const ScalarField& f) {
  const auto& v = f.values();
  return pairwise_sum(0, f.size(), [&](Index s) { return v(s); }) / double(f.size());
}

}  // namespace curlsob
