#include "curlsob/gauge.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "curlsob/log.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/spectral.hpp"

namespace curlsob {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

using ScalarSpectrum = Spectrum<double, 1>;
using VectorSpectrum = Spectrum<double, 3>;

ScalarSpectrum zero_scalar_spectrum(const Grid& g) {
  return {g, ScalarSpectrum::Coefficients::Zero(1, ScalarSpectrum::mode_count(g))};
}

// Gradient of a scalar given by its spectrum, using derivative wavenumbers.
VectorField gradient_of(const ScalarSpectrum& phi) {
  VectorSpectrum out{phi.grid, VectorSpectrum::Coefficients(3, phi.coeffs.cols())};
  spectral::for_each_mode<double, 1>(phi.grid, [&](Index idx, const Mode& m) {
    out.coeffs.col(idx) = kI * phi.coeffs(0, idx) * m.d.cast<cd>();
  });
  return spectral::backward(std::move(out));
}

// Pointwise line-search data for f(s) = integral of |u - s v|^3.
struct LineEval {
  double f, df, d2f;
};

LineEval line_eval(const VectorField& u, const VectorField& v, double s) {
  const auto& U = u.values();
  const auto& V = v.values();
  // Fused pairwise sum of (f, f', f'') integrands so one pass serves all three.
  auto sum = [&](auto&& self, Index b, Index e) -> Eigen::Vector3d {
    if (e - b <= 256) {
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (Index i = b; i < e; ++i) {
        const Eigen::Vector3d w = U.col(i) - s * V.col(i);
        const double r = w.norm();
        const double wv = w.dot(V.col(i));
        acc(0) += r * r * r;
        acc(1) -= 3.0 * r * wv;
        if (r > 0.0) acc(2) += 3.0 * (r * V.col(i).squaredNorm() + wv * wv / r);
      }
      return acc;
    }
    const Index mid = b + (e - b) / 2;
    return self(self, b, mid) + self(self, mid, e);
  };
  const Eigen::Vector3d t = sum(sum, 0, u.size()) * u.grid().cell_volume();
  return {t(0), t(1), t(2)};
}

void require_finite(double x, const char* what, int iteration) {
  if (!std::isfinite(x))
    throw std::runtime_error(std::string("gauge solver: non-finite ") + what + " at iteration " +
                             std::to_string(iteration));
}

// Minimizes the convex f(s) along s >= 0 by safeguarded Newton; f'(0) < 0 on entry.
double exact_line_search(const VectorField& u, const VectorField& v, const LineEval& at0,
                         int iteration) {
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  double s = 0.0;
  LineEval e = at0;
  for (int k = 0; k < 60; ++k) {
    double next = e.d2f > 0.0 ? s - e.df / e.d2f : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * std::max(s, 1e-12);
    s = next;
    e = line_eval(u, v, s);
    require_finite(e.f, "line-search objective", iteration);
    if (e.df < 0.0) lo = s; else hi = s;
    if (std::abs(e.df) <= 1e-9 * std::abs(at0.df)) break;
    if (std::isfinite(hi) && hi - lo <= 1e-15 * hi) break;
  }
  return s;
}

struct FluxAnalysis {
  ScalarSpectrum g;      // 3 div(|u| u)
  ScalarSpectrum z;      // preconditioned gradient
  VectorField grad_z;    // equals -3 times the gradient part of |u| u
  double flux_norm = 0;  // || |u| u ||_{3/2} = ||u||_3^2
};

FluxAnalysis analyze_flux(const VectorField& u) {
  const Grid& grid = u.grid();
  const VectorField flux = norm_times(u);
  const auto fh = spectral::forward(flux);
  FluxAnalysis out{zero_scalar_spectrum(grid), zero_scalar_spectrum(grid), VectorField(grid), 0.0};
  VectorSpectrum gz{grid, VectorSpectrum::Coefficients(3, fh.coeffs.cols())};
  spectral::for_each_mode<double, 3>(grid, [&](Index idx, const Mode& m) {
    const double d2 = m.d.squaredNorm();
    const Eigen::Vector3cd dc = m.d.cast<cd>();
    const cd g = 3.0 * kI * dc.dot(fh.coeffs.col(idx));
    const cd z = d2 > 0.0 ? g / d2 : cd(0.0);
    out.g.coeffs(0, idx) = g;
    out.z.coeffs(0, idx) = z;
    gz.coeffs.col(idx) = kI * z * dc;
  });
  out.grad_z = spectral::backward(std::move(gz));
  out.flux_norm = lp_norm(flux, 1.5);
  return out;
}

void fill_constraint(GaugeResult& r) {
  const VectorField flux = norm_times(r.a_fixed);
  r.constraint_residual = lp_norm(gradient_part(flux), 1.5);
  const double scale = r.seminorm * r.seminorm;
  r.relative_residual = scale > 0.0 ? r.constraint_residual / scale : 0.0;
}

}  // namespace

VectorField gradient_part(const VectorField& v) {
  auto sp = spectral::forward(v);
  spectral::for_each_mode<double, 3>(v.grid(), [&](Index idx, const Mode& m) {
    const double d2 = m.d.squaredNorm();
    if (d2 == 0.0) {
      sp.coeffs.col(idx).setZero();
      return;
    }
    const Eigen::Vector3cd dc = m.d.cast<cd>();
    const cd proj = dc.dot(sp.coeffs.col(idx)) / d2;
    sp.coeffs.col(idx) = proj * dc;
  });
  return spectral::backward(std::move(sp));
}

HelmholtzResult helmholtz(const VectorField& a) {
  const auto ah = spectral::forward(a);
  auto phi = zero_scalar_spectrum(a.grid());
  spectral::for_each_mode<double, 3>(a.grid(), [&](Index idx, const Mode& m) {
    const double d2 = m.d.squaredNorm();
    if (d2 > 0.0) phi.coeffs(0, idx) = -kI * m.d.cast<cd>().dot(ah.coeffs.col(idx)) / d2;
  });
  VectorField grad = gradient_of(phi);
  return {a - grad, spectral::backward(std::move(phi))};
}

GaugeResult seminorm3(const VectorField& a, const GaugeOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("gauge: tol must be positive");
  if (opts.max_iter < 0) throw std::invalid_argument("gauge: max_iter must be >= 0");
  const Grid& grid = a.grid();
  const double a_norm = lp_norm(a, 3.0);

  ScalarSpectrum phi = zero_scalar_spectrum(grid);
  if (opts.initial_phi) {
    Field<double, 1>::require_same_grid(grid, opts.initial_phi->grid());
    phi = spectral::forward(*opts.initial_phi);
  } else {
    phi = spectral::forward(helmholtz(a).phi);
  }
  phi.coeffs(0, 0) = 0.0;

  GaugeResult result{ScalarField(grid), VectorField(grid), 0.0, 0.0, 0.0, 0, false, {}, {}};
  VectorField u = a - gradient_of(phi);
  double objective = lp_integral(u, 3.0);
  require_finite(objective, "objective", 0);
  result.objective.push_back(objective);

  ScalarSpectrum p = zero_scalar_spectrum(grid), z_prev = zero_scalar_spectrum(grid);
  VectorField grad_p(grid);
  double gz_prev = 0.0;
  int since_restart = 0;
  int it = 0;
  for (;; ++it) {
    // A pure gradient has nothing left to minimize; the flux ratio is then rounding noise.
    if (std::cbrt(objective) <= 1e-13 * a_norm) {
      result.converged = true;
      break;
    }
    FluxAnalysis fa = analyze_flux(u);
    const double measure = lp_norm(fa.grad_z, 1.5) / (3.0 * fa.flux_norm);
    require_finite(measure, "gradient measure", it);
    result.measure.push_back(measure);
    log::debug("gauge it=", it, " F=", objective, " measure=", measure);
    if (measure < opts.tol) {
      result.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    const double gz = spectral::spectral_inner(fa.g, fa.z);
    double beta = 0.0;
    const bool periodic = opts.restart_every > 0 && since_restart >= opts.restart_every;
    if (since_restart > 0 && !periodic && gz_prev > 0.0) {
      const double cross_term = spectral::spectral_inner(fa.g, z_prev);
      // Powell: restart once successive gradients lose orthogonality.
      if (std::abs(cross_term) < 0.2 * gz) beta = std::max(0.0, (gz - cross_term) / gz_prev);
    }
    p.coeffs = -fa.z.coeffs + beta * p.coeffs;
    grad_p = -fa.grad_z + beta * grad_p;
    double slope = spectral::spectral_inner(fa.g, p);
    if (!(slope < 0.0)) {
      p.coeffs = -fa.z.coeffs;
      grad_p = -fa.grad_z;
      slope = -gz;
      since_restart = 0;
    }

    const LineEval at0 = line_eval(u, grad_p, 0.0);
    double s = exact_line_search(u, grad_p, at0, it);
    // Armijo guard: the exact step on a convex function always passes unless rounding bites.
    double trial = line_eval(u, grad_p, s).f;
    int halvings = 0;
    while (!(trial <= objective + 1e-4 * s * at0.df) && halvings < 40) {
      s *= 0.5;
      trial = line_eval(u, grad_p, s).f;
      ++halvings;
    }
    if (!(trial <= objective)) {
      log::debug("gauge: no decrease along search direction at iteration ", it);
      if (since_restart == 0) break;
      since_restart = 0;
      continue;
    }
    phi.coeffs += s * p.coeffs;
    u -= s * grad_p;
    objective = trial;
    result.objective.push_back(objective);
    z_prev = std::move(fa.z);
    gz_prev = gz;
    ++since_restart;
  }

  result.iterations = it;
  phi.coeffs(0, 0) = 0.0;
  result.a_fixed = a - gradient_of(phi);
  result.phi0 = spectral::backward(std::move(phi));
  result.seminorm = lp_norm(result.a_fixed, 3.0);
  fill_constraint(result);
  if (!result.converged) log::info("gauge: not converged after ", it, " iterations");
  return result;
}

GaugeResult seminorm3(const VectorField& a, double tol, int max_iter) {
  GaugeOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return seminorm3(a, opts);
}

GaugeResult gauge_fix(const VectorField& a, const GaugeOptions& opts) { return seminorm3(a, opts); }

GaugeResult gauge_fix(const VectorField& a, double tol, int max_iter) {
  return seminorm3(a, tol, max_iter);
}

StabilityReport gauge_stability(const VectorField& a1, const VectorField& a2,
                                const GaugeOptions& opts) {
  a1.check_same_grid(a2);
  const GaugeResult g1 = gauge_fix(a1, opts);
  const GaugeResult g2 = gauge_fix(a2, opts);
  StabilityReport r;
  const double num = lp_norm(gradient(g1.phi0) - gradient(g2.phi0), 3.0);
  r.numerator = num * num;
  r.denominator = lp_norm(a1 - a2, 3.0) * (lp_norm(a1, 3.0) + lp_norm(a2, 3.0));
  r.ratio = r.denominator > 0.0 ? r.numerator / r.denominator : 0.0;
  return r;
}

DefectReport mollify_defect(const VectorField& a, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify_defect: eps must be positive");
  DefectReport r;
  r.eps = eps;
  const VectorField diff = a - heat(a, eps * eps / 4.0);
  r.defect = lp_norm(helmholtz(diff).a_tilde, 2.0);
  r.curl_norm = lp_norm(curl(a), 1.5);
  r.ratio = r.curl_norm > 0.0 ? r.defect / (std::sqrt(eps) * r.curl_norm) : 0.0;
  return r;
}

}  // namespace curlsob
