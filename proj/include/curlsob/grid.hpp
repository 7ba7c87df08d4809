#pragma once

#include <Eigen/Core>

namespace curlsob {

using Index = Eigen::Index;

/// Periodic cubic lattice on [-L, L)^3 with n points per axis.
///
/// Sites are addressed row-major with z fastest: site(i, j, k) = (i*n + j)*n + k,
/// where i indexes x. Coordinates are x_i = -L + i*h with h = 2L/n.
class Grid {
 public:
  Grid(int n, double box_half_width);

  int n() const { return n_; }
  double box_half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double cell_volume() const { return spacing_ * spacing_ * spacing_; }
  Index size() const { return Index(n_) * n_ * n_; }

  double coordinate(int i) const { return -half_width_ + i * spacing_; }

  Index site(int i, int j, int k) const { return (Index(i) * n_ + j) * n_ + k; }

  Eigen::Vector3d position(Index site) const {
    const Index nn = Index(n_) * n_;
    const int i = int(site / nn);
    const int j = int((site / n_) % n_);
    const int k = int(site % n_);
    return {coordinate(i), coordinate(j), coordinate(k)};
  }

  /// Fundamental wavenumber pi/L; the frequency set per axis is {-n/2, ..., n/2-1} times this.
  double fundamental_wavenumber() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

 private:
  int n_;
  double half_width_;
  double spacing_;
};

/// Validating constructor: n must be even and >= 8, L > 0.
Grid make_grid(int n, double box_half_width);

}  // namespace curlsob
