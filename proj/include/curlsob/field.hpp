#pragma once

#include <complex>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "curlsob/grid.hpp"

namespace curlsob {

/// Samples of a Components-valued field on a Grid, one column per site.
///
/// Columns are stored contiguously, so components are interleaved per site in
/// the same order as the vf3 file layout.
template <typename Scalar_, int Components_>
class Field {
 public:
  using Scalar = Scalar_;
  static constexpr int Components = Components_;
  using Storage = Eigen::Matrix<Scalar, Components, Eigen::Dynamic>;
  using Site = Eigen::Matrix<Scalar, Components, 1>;

  explicit Field(const Grid& grid) : grid_(grid), values_(Storage::Zero(Components, grid.size())) {}

  Field(const Grid& grid, Storage values) : grid_(grid), values_(std::move(values)) {
    if (values_.cols() != grid_.size())
      throw std::invalid_argument("field sample count does not match grid");
  }

  const Grid& grid() const { return grid_; }
  Index size() const { return values_.cols(); }

  const Storage& values() const { return values_; }
  Storage& values() { return values_; }

  auto at(Index site) { return values_.col(site); }
  auto at(Index site) const { return values_.col(site); }

  bool all_finite() const { return values_.allFinite(); }

  Field& operator+=(const Field& other) {
    check_same_grid(other);
    values_ += other.values_;
    return *this;
  }
  Field& operator-=(const Field& other) {
    check_same_grid(other);
    values_ -= other.values_;
    return *this;
  }
  Field& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }

  void check_same_grid(const Field& other) const { require_same_grid(grid_, other.grid_); }

  static void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("grid mismatch");
  }

 private:
  Grid grid_;
  Storage values_;
};

using ScalarField = Field<double, 1>;
using VectorField = Field<double, 3>;
using SpinorField = Field<std::complex<double>, 2>;
using Spinor = Eigen::Vector2cd;

template <typename S, int C>
Field<S, C> operator+(Field<S, C> a, const Field<S, C>& b) {
  a += b;
  return a;
}
template <typename S, int C>
Field<S, C> operator-(Field<S, C> a, const Field<S, C>& b) {
  a -= b;
  return a;
}
template <typename S, int C>
Field<S, C> operator-(Field<S, C> a) {
  a *= S(-1);
  return a;
}
template <typename S, int C>
Field<S, C> operator*(S c, Field<S, C> a) {
  a *= c;
  return a;
}
template <typename S, int C>
Field<S, C> operator*(Field<S, C> a, S c) {
  a *= c;
  return a;
}

/// Evaluates fn(position) at every site. fn returns something assignable to a column.
template <typename FieldT, typename Fn>
FieldT sample(const Grid& grid, Fn&& fn) {
  FieldT out(grid);
  for (Index s = 0; s < grid.size(); ++s) out.at(s) = fn(grid.position(s));
  return out;
}

/// Pointwise Euclidean magnitude |f(x)|.
template <typename S, int C>
ScalarField magnitude(const Field<S, C>& f) {
  ScalarField out(f.grid());
  out.values() = f.values().colwise().norm();
  return out;
}

/// Pointwise product of a scalar field with a field of any kind.
template <typename S, int C>
Field<S, C> operator*(const ScalarField& weight, Field<S, C> f) {
  Field<S, C>::require_same_grid(weight.grid(), f.grid());
  for (Index s = 0; s < f.size(); ++s) f.at(s) *= weight.values()(s);
  return f;
}

/// |v| v, the flux appearing in the nonlinear gauge condition.
inline VectorField norm_times(const VectorField& v) {
  VectorField out(v.grid());
  for (Index s = 0; s < v.size(); ++s) out.at(s) = v.at(s).norm() * v.at(s);
  return out;
}

inline ScalarField dot(const VectorField& a, const VectorField& b) {
  a.check_same_grid(b);
  ScalarField out(a.grid());
  out.values() = a.values().cwiseProduct(b.values()).colwise().sum();
  return out;
}

inline VectorField cross(const VectorField& a, const VectorField& b) {
  a.check_same_grid(b);
  VectorField out(a.grid());
  for (Index s = 0; s < a.size(); ++s)
    out.at(s) = Eigen::Vector3d(a.at(s)).cross(Eigen::Vector3d(b.at(s)));
  return out;
}

template <typename S, int C>
Field<S, C> constant_field(const Grid& grid, const typename Field<S, C>::Site& value) {
  Field<S, C> out(grid);
  out.values().colwise() = value;
  return out;
}

}  // namespace curlsob
