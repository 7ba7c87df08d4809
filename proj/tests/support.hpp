#pragma once

#include <cmath>
#include <numbers>

#include "curlsob/field.hpp"

namespace testsupport {

using curlsob::Grid;
using curlsob::Index;
using curlsob::ScalarField;
using curlsob::VectorField;

// Fourth-order periodic central difference of component c along axis.
inline double fd4(const VectorField& v, int c, int axis, int i, int j, int k) {
  const Grid& g = v.grid();
  const int n = g.n();
  auto at = [&](int off) {
    int idx[3] = {i, j, k};
    idx[axis] = ((idx[axis] + off) % n + n) % n;
    return v.at(g.site(idx[0], idx[1], idx[2]))(c);
  };
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * g.spacing());
}

inline VectorField fd4_curl(const VectorField& v) {
  const Grid& g = v.grid();
  VectorField out(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      for (int k = 0; k < g.n(); ++k) {
        auto d = [&](int c, int axis) { return fd4(v, c, axis, i, j, k); };
        out.at(g.site(i, j, k)) = Eigen::Vector3d(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
      }
  return out;
}

inline ScalarField fd4_divergence(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      for (int k = 0; k < g.n(); ++k)
        out.values()(g.site(i, j, k)) = fd4(v, 0, 0, i, j, k) + fd4(v, 1, 1, i, j, k) + fd4(v, 2, 2, i, j, k);
  return out;
}

// Max of |a - b| over sites with |x| < radius.
template <typename F>
double interior_max_diff(const F& a, const F& b, double radius) {
  double m = 0.0;
  for (Index s = 0; s < a.size(); ++s)
    if (a.grid().position(s).norm() < radius) m = std::max(m, (a.at(s) - b.at(s)).norm());
  return m;
}

template <typename F>
double max_abs(const F& a) {
  double m = 0.0;
  for (Index s = 0; s < a.size(); ++s) m = std::max(m, a.at(s).norm());
  return m;
}

inline double rel_close(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
