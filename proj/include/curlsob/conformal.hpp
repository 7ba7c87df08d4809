#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "curlsob/field.hpp"

namespace curlsob {

using SpherePoint = Eigen::Vector4d;

/// S(x) = (2x, 1 - |x|^2) / (1 + |x|^2).
SpherePoint stereographic(const Eigen::Vector3d& x);

/// Inverse projection s -> s_{1..3} / (1 + s_4) for unit s. Throws std::domain_error at s_4 = -1.
Eigen::Vector3d inverse_stereographic(const SpherePoint& s);

/// DS(x), the 4x3 Jacobian of the projection.
Eigen::Matrix<double, 4, 3> stereographic_jacobian(const Eigen::Vector3d& x);

/// Tangent 1-form alpha at S(x) with DS(x)^T alpha = a.
Eigen::Vector4d pushforward_1form(const Eigen::Vector3d& x, const Eigen::Vector3d& a);

/// Tangent 2-form beta at S(x) (antisymmetric 4x4) whose pullback DS^T beta DS is the
/// 2-form with Hodge dual b, i.e. omega_jk = eps_jkl b_l.
Eigen::Matrix4d pushforward_2form(const Eigen::Vector3d& x, const Eigen::Vector3d& b);

/// Norm of a 2-form: sqrt(sum_{i<j} beta_ij^2).
double form_norm(const Eigen::Matrix4d& beta);

struct SphereSampleSet {
  std::vector<SpherePoint> points;
  std::vector<Eigen::Vector3d> preimages;  // S^{-1}(points)
  std::vector<double> weights;             // sum to 2 pi^2
  std::vector<Eigen::Vector4d> forms;      // tangent 1-form values (empty until pushed forward)
  std::uint64_t seed = 0;
};

/// N uniform points on S^3 from normalized 4-D Gaussians, equal weights 2 pi^2 / N.
SphereSampleSet sample_sphere(long count, std::uint64_t seed);

/// Band-limited-accurate local interpolation (tensor cubic Lagrange, periodic) of a grid
/// field at x; points outside [-L, L)^3 read as zero.
Eigen::Vector3d interpolate(const VectorField& f, const Eigen::Vector3d& x);

/// Spectral zero-padding onto a grid `factor` times finer over the same box.
VectorField refine(const VectorField& f, int factor);

/// Pushes A forward at the given R^3 points. Throws std::out_of_range for points outside
/// the box.
SphereSampleSet pushforward_field(const VectorField& a, const std::vector<Eigen::Vector3d>& points);

/// Fills set.forms from A at the preimages; preimages outside the box get alpha = 0.
void pushforward_into(const VectorField& a, SphereSampleSet& set);

struct ConformalReport {
  double lhs = 0.0;        // R^3 side on the grid
  double rhs = 0.0;        // S^3 side by Monte Carlo
  double gap = 0.0;        // |lhs - rhs| / max(|lhs|, |rhs|), 0 when both vanish
  double std_error = 0.0;  // Monte Carlo standard error of rhs
  long samples = 0;
  std::uint64_t seed = 0;
};

/// int |curl A|^{3/2} dx against int |d alpha|^{3/2} d omega.
ConformalReport conformal_energy_check(const VectorField& a, long samples = 1000000, std::uint64_t seed = 42);

/// int |A|^3 dx against int |alpha|^3 d omega (apply to the gauge-fixed A').
ConformalReport seminorm_identity_check(const VectorField& a, long samples = 1000000, std::uint64_t seed = 42);

/// int |A1 - A2|^q (2/(1+x^2))^{3-q} dx against int |alpha1 - alpha2|^q d omega, q in [1, 3).
ConformalReport weighted_norm_check(const VectorField& a1, const VectorField& a2, double q,
                                    long samples = 1000000, std::uint64_t seed = 42);

/// (2 / (1 + |x|^2))^{3-q}, the R^3 weight matching |alpha|^q d omega.
double conformal_weight(const Eigen::Vector3d& x, double q);

struct GrandNormParams {
  double theta = 1.0;
  std::vector<double> deltas;  // decreasing, in (0, 2]

  /// 40 log-spaced deltas from 2 down to 1e-4.
  static GrandNormParams standard(double theta);
};

/// max over deltas of delta^{theta/3} (sum w |f|^{3-delta} / sum w)^{1/(3-delta)}.
double grand_norm(std::span<const double> values, std::span<const double> weights, const GrandNormParams& params);

/// (sum w |f|^p / sum w)^{1/p}.
double normalized_norm(std::span<const double> values, std::span<const double> weights, double p);

}  // namespace curlsob
