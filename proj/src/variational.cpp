#include "curlsob/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curlsob/closed_forms.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/random.hpp"
#include "curlsob/spectral.hpp"

namespace curlsob {

// ---------------------------------------------------------------------------
// Quotient and Euler-Lagrange residual

double multiplier(const VectorField& a) {
  const double a3 = lp_integral(a, 3.0);
  if (!(a3 > 0.0)) throw std::domain_error("multiplier: zero field");
  return lp_integral(curl(a), 1.5) / a3;
}

VectorField regularized_flux(const VectorField& b, double eps) {
  VectorField out(b.grid());
  const double e2 = eps * eps;
  for (Index s = 0; s < b.size(); ++s) {
    const double m2 = b.at(s).squaredNorm() + e2;
    out.at(s) = m2 > 0.0 ? Eigen::Vector3d(b.at(s) / std::pow(m2, 0.25)) : Eigen::Vector3d::Zero();
  }
  return out;
}

namespace {

struct ElParts {
  VectorField curl_rho;
  VectorField flux;  // |A| A
};

ElParts el_parts(const VectorField& a, double eps_reg) {
  const VectorField b = curl(a);
  double bmax = 0.0;
  for (Index s = 0; s < b.size(); ++s) bmax = std::max(bmax, b.at(s).norm());
  return {curl(regularized_flux(b, eps_reg * bmax)), norm_times(a)};
}

}  // namespace

VectorField el_vector(const VectorField& a, double lambda, double eps_reg) {
  ElParts p = el_parts(a, eps_reg);
  p.curl_rho -= lambda * p.flux;
  return std::move(p.curl_rho);
}

double negative_sobolev_norm(const VectorField& v) {
  const auto sp = spectral::forward(v);
  std::vector<double> terms(std::size_t(sp.coeffs.cols()), 0.0);
  spectral::for_each_mode<double, 3>(v.grid(), [&](Index idx, const Mode& m) {
    const double k2 = m.k.squaredNorm();
    if (k2 > 0.0) terms[std::size_t(idx)] = m.weight * sp.coeffs.col(idx).squaredNorm() / k2;
  });
  const double sum = pairwise_sum(0, Index(terms.size()), [&](Index i) { return terms[std::size_t(i)]; });
  return std::sqrt(sum * v.grid().cell_volume() / double(v.grid().size()));
}

double el_residual(const VectorField& a, double lambda, double eps_reg) {
  if (!(lambda > 0.0)) throw std::invalid_argument("el_residual: lambda must be positive");
  const ElParts p = el_parts(a, eps_reg);
  const double num = negative_sobolev_norm(p.curl_rho - lambda * p.flux);
  const double den = negative_sobolev_norm(p.curl_rho) + lambda * negative_sobolev_norm(p.flux);
  return den > 0.0 ? num / den : 0.0;
}

QuotientReport quotient(const VectorField& a, GaugeResult gauge, double eps_reg) {
  const double a_norm = lp_norm(a, 3.0);
  QuotientReport r{.gauge = std::move(gauge)};
  r.seminorm = r.gauge.seminorm;
  if (!(r.seminorm >= 1e-8 * a_norm) || a_norm == 0.0)
    throw std::domain_error("degenerate: gradient field");
  r.curl_norm = lp_norm(curl(a), 1.5);
  const double n32 = std::pow(r.curl_norm, 1.5);
  r.quotient = n32 / std::pow(r.seminorm, 1.5);
  r.multiplier = n32 / std::pow(r.seminorm, 3.0);
  r.el_residual = el_residual(r.gauge.a_fixed, r.multiplier, eps_reg);
  return r;
}

QuotientReport quotient(const VectorField& a, const QuotientOptions& opts) {
  return quotient(a, gauge_fix(a, opts.gauge), opts.eps_reg);
}

// ---------------------------------------------------------------------------
// Heat-kernel peaks, recentering and the improved inequality

std::vector<double> heat_times(const Grid& grid, int count) {
  const double lo = std::log(grid.spacing() * grid.spacing());
  const double hi = std::log(4.0 * grid.box_half_width() * grid.box_half_width());
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[std::size_t(i)] = std::exp(lo + (hi - lo) * i / double(count - 1));
  return t;
}

namespace {

template <typename S, int C>
struct PeakEvaluator {
  Spectrum<S, C> base;
  std::vector<double> k2;

  explicit PeakEvaluator(const Field<S, C>& f) : base(spectral::forward(f)) {
    k2.resize(std::size_t(base.coeffs.cols()));
    spectral::for_each_mode<S, C>(f.grid(), [&](Index idx, const Mode& m) { k2[std::size_t(idx)] = m.k.squaredNorm(); });
  }

  Field<S, C> at(double t) const {
    Spectrum<S, C> sp = base;
    for (Index i = 0; i < sp.coeffs.cols(); ++i) sp.coeffs.col(i) *= std::exp(-t * k2[std::size_t(i)]);
    return spectral::backward(std::move(sp));
  }

  // (t max_x |heat(f,t)(x)|, argmax site); the site maximum is corrected by a per-axis
  // parabolic fit so the value varies smoothly with t.
  std::pair<double, Index> value(double t) const {
    const Field<S, C> h = at(t);
    double best = -1.0;
    Index site = 0;
    for (Index s = 0; s < h.size(); ++s) {
      const double v = h.at(s).squaredNorm();
      if (v > best) {
        best = v;
        site = s;
      }
    }
    const double peak = std::sqrt(best);
    double gain = 0.0;
    const Grid& grid = h.grid();
    const int n = grid.n();
    const int idx[3] = {int(site / (Index(n) * n)), int((site / n) % n), int(site % n)};
    for (int axis = 0; axis < 3; ++axis) {
      auto mag = [&](int off) {
        int q[3] = {idx[0], idx[1], idx[2]};
        q[axis] = ((q[axis] + off) % n + n) % n;
        return h.at(grid.site(q[0], q[1], q[2])).norm();
      };
      const double a = mag(-1), c = mag(1), den = a - 2.0 * peak + c;
      if (den < 0.0) gain += std::min(-(a - c) * (a - c) / (8.0 * den), 0.5 * peak);
    }
    return {t * (peak + gain), site};
  }
};

// Vertex of the parabola through (-1, a), (0, b), (1, c), clamped to [-0.5, 0.5].
double parabola_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (den >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

}  // namespace

template <typename S, int C>
HeatPeak heat_peak(const Field<S, C>& f, int count) {
  const PeakEvaluator<S, C> ev(f);
  const auto times = heat_times(f.grid(), count);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = ev.value(times[i]).first;
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement in log t between the neighbouring grid times.
  double lo = std::log(times[best == 0 ? 0 : best - 1]);
  double hi = std::log(times[std::min(best + 1, times.size() - 1)]);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = ev.value(std::exp(x1)).first, f2 = ev.value(std::exp(x2)).first;
  for (int it = 0; it < 30; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = ev.value(std::exp(x1)).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = ev.value(std::exp(x2)).first;
    }
  }
  HeatPeak peak;
  double t = std::exp(0.5 * (lo + hi));
  auto [value, site] = ev.value(t);
  if (best_value > value) {  // refinement never loses to the grid
    t = times[best];
    std::tie(value, site) = ev.value(t);
  }
  peak.t = t;
  peak.value = value;

  // Sub-grid location: per-axis parabolic fit of |heat| around the peak site.
  const Field<S, C> h = ev.at(t);
  const Grid& grid = f.grid();
  const int n = grid.n();
  const int i = int(site / (Index(n) * n)), j = int((site / n) % n), k = int(site % n);
  const int idx[3] = {i, j, k};
  peak.x = grid.position(site);
  for (int axis = 0; axis < 3; ++axis) {
    auto mag = [&](int off) {
      int q[3] = {idx[0], idx[1], idx[2]};
      q[axis] = ((q[axis] + off) % n + n) % n;
      return h.at(grid.site(q[0], q[1], q[2])).norm();
    };
    peak.x(axis) += grid.spacing() * parabola_offset(mag(-1), mag(0), mag(1));
  }
  return peak;
}

template HeatPeak heat_peak(const Field<double, 3>&, int);
template HeatPeak heat_peak(const Field<std::complex<double>, 2>&, int);

namespace {

// Periodic band-limited interpolation weight for offset delta (in grid spacings), even n.
double trig_kernel(double delta, int n) {
  const double r = delta - n * std::round(delta / n);
  if (std::abs(r) < 1e-12) return 1.0;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) < 1e-12) return 0.0;
  return std::sin(std::numbers::pi * r) / (n * std::tan(std::numbers::pi * r / n));
}

Eigen::MatrixXd interpolation_matrix(const Grid& grid, double scale, double shift) {
  const int n = grid.n();
  const double L = grid.box_half_width(), h = grid.spacing();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double p = scale * grid.coordinate(i) + shift;
    if (p < -L || p >= L) continue;  // outside the box the field is taken as zero
    for (int j = 0; j < n; ++j) w(i, j) = trig_kernel((p - grid.coordinate(j)) / h, n);
  }
  return w;
}

}  // namespace

VectorField dilate_translate(const VectorField& a, double scale, const Eigen::Vector3d& shift) {
  if (!(scale > 0.0)) throw std::invalid_argument("dilate_translate: scale must be positive");
  const Grid& grid = a.grid();
  const int n = grid.n();
  const Index n2 = Index(n) * n;
  const Eigen::MatrixXd wx = interpolation_matrix(grid, scale, shift.x());
  const Eigen::MatrixXd wy = interpolation_matrix(grid, scale, shift.y());
  const Eigen::MatrixXd wz = interpolation_matrix(grid, scale, shift.z());
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  VectorField out(grid);
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd comp = a.values().row(c).transpose();
    // Site (i, j, k) sits at (i*n + j)*n + k: view as (i*n + j) x k, contract k, then j, then i.
    RowMat t1 = Eigen::Map<const RowMat>(comp.data(), n2, n) * wz.transpose();
    for (int i = 0; i < n; ++i) t1.middleRows(Index(i) * n, n) = wy * t1.middleRows(Index(i) * n, n);
    const RowMat t2 = wx * Eigen::Map<const RowMat>(t1.data(), n, n2);
    out.values().row(c) = scale * Eigen::Map<const Eigen::RowVectorXd>(t2.data(), n2 * n);
  }
  return out;
}

RecenterResult recenter(const VectorField& a) {
  const VectorField b = curl(a);
  if (lp_norm(b, INFINITY) == 0.0) throw std::domain_error("recenter: curl vanishes");
  const HeatPeak peak = heat_peak(b);
  const double scale = std::sqrt(peak.t);
  return {scale, peak.x, dilate_translate(a, scale, peak.x)};
}

ImprovedReport improved_ratio(const VectorField& a, const GaugeOptions& gauge) {
  const VectorField b = curl(a);
  ImprovedReport r;
  r.b_norm = lp_norm(b, 1.5);
  if (r.b_norm == 0.0) throw std::domain_error("improved_ratio: zero curl");
  const HeatPeak peak = heat_peak(b);
  r.sup_value = peak.value;
  r.t_star = peak.t;
  r.numerator = seminorm3(a, gauge).seminorm;
  if (!(r.numerator >= 1e-8 * lp_norm(a, 3.0))) throw std::domain_error("degenerate: gradient field");
  r.ratio = r.numerator / (std::sqrt(r.b_norm) * std::sqrt(r.sup_value));
  r.holder_ratio = r.sup_value / r.b_norm;
  return r;
}

ImprovedReport improved_ratio_spinor(const SpinorField& psi) {
  const SpinorField d = dirac(psi);
  ImprovedReport r;
  r.b_norm = lp_norm(d, 1.5);
  if (r.b_norm == 0.0) throw std::domain_error("improved_ratio_spinor: dirac(psi) vanishes");
  const HeatPeak peak = heat_peak(d);
  r.sup_value = peak.value;
  r.t_star = peak.t;
  r.numerator = lp_norm(psi, 3.0);
  r.ratio = r.numerator / (std::sqrt(r.b_norm) * std::sqrt(r.sup_value));
  r.holder_ratio = r.sup_value / r.b_norm;
  return r;
}

// ---------------------------------------------------------------------------
// Elementary inequalities

namespace {

Eigen::Vector3d root_scaled(const Eigen::Vector3d& v) {
  const double n = v.norm();
  return n > 0.0 ? Eigen::Vector3d(v / std::sqrt(n)) : Eigen::Vector3d::Zero();
}

struct Sides {
  double big, small, scale;
};

Sides curl_sides(const Eigen::Vector3d& v, const Eigen::Vector3d& w, double c) {
  const double lhs = (root_scaled(v) - root_scaled(w)).dot(v - w);
  const double s = v.squaredNorm() + w.squaredNorm();
  const double rhs = s > 0.0 ? c * (v - w).squaredNorm() / std::pow(s, 0.25) : 0.0;
  return {lhs, rhs, std::abs(lhs) + std::abs(rhs)};
}

Sides flux_sides(const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
  const double lhs = (x.norm() * x - y.norm() * y).norm();
  const double rhs = (x.norm() + y.norm()) * (x - y).norm();
  return {rhs, lhs, lhs + rhs};
}

Sides helm_sides(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const Eigen::Vector3d& a,
                 const Eigen::Vector3d& b) {
  const Eigen::Vector3d u = x - a, v = y - b;
  const double lhs = (u.norm() * u - v.norm() * v).dot(x - y);
  const double d = (x - y).norm();
  const double cube = 0.5 * d * d * d;
  const double pen = (x.norm() + y.norm() + a.norm() + b.norm()) * (a - b).norm() * d;
  return {lhs, cube - pen, std::abs(lhs) + cube + pen};
}

// Random vector: Gaussian direction, magnitude log-uniform over [1e-3, 1e3].
Eigen::Vector3d draw(const CounterRng& rng, std::uint64_t& ctr) {
  // Normals come from a disjoint counter range so they never reuse a uniform draw.
  const std::uint64_t nc = (std::uint64_t(1) << 40) + ctr;
  Eigen::Vector3d g(rng.normal(nc, false), rng.normal(nc, true), rng.normal(nc + 1, false));
  ctr += 2;
  const double mag = std::pow(10.0, -3.0 + 6.0 * rng.uniform(ctr++));
  const double n = g.norm();
  return n > 0.0 ? Eigen::Vector3d(g * (mag / n)) : g;
}

// Partner of v: independent, or a relative perturbation of size 10^{-6..0}.
Eigen::Vector3d partner(const CounterRng& rng, std::uint64_t& ctr, const Eigen::Vector3d& v) {
  if (rng.uniform(ctr++) < 0.5) return draw(rng, ctr);
  const double rel = std::pow(10.0, -6.0 + 6.0 * rng.uniform(ctr++));
  const Eigen::Vector3d d = draw(rng, ctr);
  return v + rel * v.norm() * d / d.norm();
}

}  // namespace

double elementary_curl(const Eigen::Vector3d& v, const Eigen::Vector3d& w, double c) {
  const Sides s = curl_sides(v, w, c);
  return s.big - s.small;
}

double elementary_flux(const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
  const Sides s = flux_sides(x, y);
  return s.big - s.small;
}

double elementary_helm(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const Eigen::Vector3d& a,
                       const Eigen::Vector3d& b) {
  const Sides s = helm_sides(x, y, a, b);
  return s.big - s.small;
}

InequalityReport check_elementary(Elementary which, long samples, std::uint64_t seed, double c) {
  const CounterRng rng(seed);
  InequalityReport r;
  r.samples = samples;
  r.min_margin = INFINITY;
  for (long i = 0; i < samples; ++i) {
    std::uint64_t ctr = std::uint64_t(i) * 64;
    Sides s{};
    if (which == Elementary::kHelm) {
      const Eigen::Vector3d x = draw(rng, ctr), y = partner(rng, ctr, x);
      const Eigen::Vector3d a = draw(rng, ctr);
      // Equality holds at a = b, so a quarter of the draws sit exactly there.
      const Eigen::Vector3d b = rng.uniform(ctr++) < 0.25 ? a : partner(rng, ctr, a);
      s = helm_sides(x, y, a, b);
    } else {
      const Eigen::Vector3d v = draw(rng, ctr), w = partner(rng, ctr, v);
      s = which == Elementary::kCurl ? curl_sides(v, w, c) : flux_sides(v, w);
    }
    if (s.scale == 0.0) continue;
    const double margin = (s.big - s.small) / s.scale;
    r.min_margin = std::min(r.min_margin, margin);
    // Allow for rounding in the two sides; equality cases are legitimately attained.
    if (margin < -1e-12) ++r.violations;
  }
  return r;
}

double elementary_curl_constant(long samples, std::uint64_t seed) {
  const CounterRng rng(seed);
  double best = INFINITY;
  for (long i = 0; i < samples; ++i) {
    std::uint64_t ctr = std::uint64_t(i) * 64;
    const Eigen::Vector3d v = draw(rng, ctr), w = partner(rng, ctr, v);
    const Sides s = curl_sides(v, w, 1.0);
    if (s.small > 0.0) best = std::min(best, s.big / s.small);
  }
  return best;
}

}  // namespace curlsob
