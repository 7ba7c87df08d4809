#pragma once

#include <cstdint>
#include <vector>

#include "curlsob/field.hpp"
#include "curlsob/gauge.hpp"

namespace curlsob {

struct QuotientOptions {
  GaugeOptions gauge;
  double eps_reg = 1e-8;  // curl regularization relative to max |curl A|
};

struct QuotientReport {
  double curl_norm = 0.0;    // ||curl A||_{3/2}
  double seminorm = 0.0;     // |||A|||_3
  double quotient = 0.0;     // curl_norm^{3/2} / seminorm^{3/2}
  double multiplier = 0.0;   // curl_norm^{3/2} / ||A'||_3^3
  double el_residual = 0.0;  // el_residual(A', multiplier)
  GaugeResult gauge;         // the gauge-fixed representative A'
};

/// Sobolev quotient with its multiplier and Euler-Lagrange residual at the gauge-fixed A'.
/// Throws std::domain_error("degenerate: gradient field") when |||A|||_3 < 1e-8 ||A||_3.
QuotientReport quotient(const VectorField& a, const QuotientOptions& opts = {});

/// Same report from an existing gauge solve of A.
QuotientReport quotient(const VectorField& a, GaugeResult gauge, double eps_reg = 1e-8);

/// curl_norm^{3/2} / ||A||_3^3 for A taken as given (no gauge fixing).
double multiplier(const VectorField& a);

/// rho_eps(B) = (|B|^2 + eps^2)^{-1/4} B.
VectorField regularized_flux(const VectorField& b, double eps);

/// E = curl rho_eps(curl A) - lambda |A| A with eps = eps_reg max |curl A|.
VectorField el_vector(const VectorField& a, double lambda, double eps_reg = 1e-8);

/// ||(-Delta)^{-1/2} E||_2 / (||(-Delta)^{-1/2} curl rho||_2 + lambda ||(-Delta)^{-1/2} |A|A||_2).
/// Rejects lambda <= 0.
double el_residual(const VectorField& a, double lambda, double eps_reg = 1e-8);

/// ||(-Delta)^{-1/2} v||_2, zero mode dropped.
double negative_sobolev_norm(const VectorField& v);

/// Log-spaced times for heat-kernel suprema: `count` points in [h^2, (2L)^2].
std::vector<double> heat_times(const Grid& grid, int count = 60);

struct HeatPeak {
  double value = 0.0;              // t |heat(f, t)(x)| at the peak
  double t = 0.0;                  // t*
  Eigen::Vector3d x = Eigen::Vector3d::Zero();  // x*, refined below grid spacing
};

/// Maximizer of t |heat(f, t)(x)| over the time grid and all sites; t* is refined by
/// golden-section search in log t between the neighbours of the best grid time.
template <typename S, int C>
HeatPeak heat_peak(const Field<S, C>& f, int count = 60);

struct RecenterResult {
  double scale = 1.0;                              // lambda = sqrt(t*)
  Eigen::Vector3d shift = Eigen::Vector3d::Zero(); // a = x*
  VectorField field;                               // lambda A(lambda y + a)
};

/// Moves the concentration point of curl A to the origin and its heat scale to 1.
/// Resampling uses separable trigonometric interpolation; points outside the box read as 0.
RecenterResult recenter(const VectorField& a);

/// lambda A(lambda y + a) on the same grid (the resampling used by recenter).
VectorField dilate_translate(const VectorField& a, double scale, const Eigen::Vector3d& shift);

struct ImprovedReport {
  double ratio = 0.0;         // R
  double holder_ratio = 0.0;  // sup_t t ||heat(B,t)||_inf / ||B||_{3/2}
  double sup_value = 0.0;     // sup_t t ||heat(B,t)||_inf
  double t_star = 0.0;
  double numerator = 0.0;     // |||A|||_3 (or ||psi||_3)
  double b_norm = 0.0;        // ||B||_{3/2}
};

/// R(A) = |||A|||_3 / (||curl A||_{3/2}^{1/2} (sup_t t ||heat(curl A, t)||_inf)^{1/2}).
ImprovedReport improved_ratio(const VectorField& a, const GaugeOptions& gauge = {});

/// Spinor analogue with B replaced by dirac(psi) and |||A|||_3 by ||psi||_3.
ImprovedReport improved_ratio_spinor(const SpinorField& psi);

/// Pointwise elementary inequalities. Each returns (larger side) - (smaller side), which is
/// nonnegative when the inequality holds.
///   elementary_curl: <|v|^{-1/2} v - |w|^{-1/2} w, v - w> - c (|v|^2+|w|^2)^{-1/4} |v-w|^2
///   elementary_flux: (|x|+|y|) |x-y| - | |x|x - |y|y |
///   elementary_helm: <|x-a|(x-a) - |y-b|(y-b), x-y> - (|x-y|^3/2 - (|x|+|y|+|a|+|b|)|a-b||x-y|)
double elementary_curl(const Eigen::Vector3d& v, const Eigen::Vector3d& w, double c = 1.0);
double elementary_flux(const Eigen::Vector3d& x, const Eigen::Vector3d& y);
double elementary_helm(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const Eigen::Vector3d& a,
                       const Eigen::Vector3d& b);

struct InequalityReport {
  long samples = 0;
  long violations = 0;
  double min_margin = 0.0;  // smallest (larger - smaller) / scale seen
};

enum class Elementary { kCurl, kFlux, kHelm };

/// Draws `samples` random tuples (Gaussian directions, log-uniform magnitudes over six
/// decades, plus near-coincident pairs) and counts violations beyond rounding.
InequalityReport check_elementary(Elementary which, long samples, std::uint64_t seed, double c = 1.0);

/// Largest c for which elementary_curl holds on all sampled pairs (empirical sharp constant).
double elementary_curl_constant(long samples, std::uint64_t seed);

}  // namespace curlsob
