#include "curlsob/conformal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curlsob/norms.hpp"
#include "curlsob/random.hpp"
#include "curlsob/spectral.hpp"

namespace curlsob {

namespace {
constexpr double kSphereVolume = 2.0 * std::numbers::pi * std::numbers::pi;
}

SpherePoint stereographic(const Eigen::Vector3d& x) {
  const double r2 = x.squaredNorm();
  SpherePoint s;
  s.head<3>() = 2.0 * x / (1.0 + r2);
  s(3) = (1.0 - r2) / (1.0 + r2);
  return s;
}

Eigen::Vector3d inverse_stereographic(const SpherePoint& s) {
  if (s(3) >= 0.0) return s.head<3>() / (1.0 + s(3));
  // Near the south pole 1 + s_4 cancels; on the sphere (1 + s_4)(1 - s_4) = |s_123|^2.
  const double r2 = s.head<3>().squaredNorm();
  if (!(r2 > 0.0)) throw std::domain_error("inverse_stereographic: s_4 = -1 is the point at infinity");
  return s.head<3>() * ((1.0 - s(3)) / r2);
}

Eigen::Matrix<double, 4, 3> stereographic_jacobian(const Eigen::Vector3d& x) {
  const double r2 = x.squaredNorm(), d = 1.0 + r2;
  Eigen::Matrix<double, 4, 3> j;
  j.topRows<3>() = (2.0 / d) * Eigen::Matrix3d::Identity() - (4.0 / (d * d)) * x * x.transpose();
  j.row(3) = (-4.0 / (d * d)) * x.transpose();
  return j;
}

namespace {

// DS^+ = (DS^T DS)^{-1} DS^T, the left inverse mapping tangent vectors back to R^3.
Eigen::Matrix<double, 3, 4> left_inverse(const Eigen::Matrix<double, 4, 3>& ds) {
  const Eigen::Matrix3d g = ds.transpose() * ds;
  return g.ldlt().solve(ds.transpose());
}

}  // namespace

Eigen::Vector4d pushforward_1form(const Eigen::Vector3d& x, const Eigen::Vector3d& a) {
  return left_inverse(stereographic_jacobian(x)).transpose() * a;
}

Eigen::Matrix4d pushforward_2form(const Eigen::Vector3d& x, const Eigen::Vector3d& b) {
  Eigen::Matrix3d omega;
  omega << 0.0, b(2), -b(1),
           -b(2), 0.0, b(0),
           b(1), -b(0), 0.0;
  const Eigen::Matrix<double, 3, 4> p = left_inverse(stereographic_jacobian(x));
  return p.transpose() * omega * p;
}

double form_norm(const Eigen::Matrix4d& beta) { return std::sqrt(0.5 * beta.squaredNorm()); }

SphereSampleSet sample_sphere(long count, std::uint64_t seed) {
  if (count <= 0) throw std::invalid_argument("sample_sphere: count must be positive");
  const CounterRng rng(seed);
  SphereSampleSet set;
  set.seed = seed;
  set.points.resize(std::size_t(count));
  set.preimages.resize(std::size_t(count));
  set.weights.assign(std::size_t(count), kSphereVolume / double(count));
  for (long i = 0; i < count; ++i) {
    const std::uint64_t c = 2 * std::uint64_t(i);
    SpherePoint g(rng.normal(c, false), rng.normal(c, true), rng.normal(c + 1, false), rng.normal(c + 1, true));
    const SpherePoint s = g / g.norm();
    set.points[std::size_t(i)] = s;
    // The south pole itself has probability zero; park it far outside any box.
    set.preimages[std::size_t(i)] =
        s.head<3>().squaredNorm() > 0.0 ? inverse_stereographic(s) : Eigen::Vector3d::Constant(INFINITY);
  }
  return set;
}

Eigen::Vector3d interpolate(const VectorField& f, const Eigen::Vector3d& x) {
  const Grid& g = f.grid();
  const double L = g.box_half_width(), h = g.spacing();
  const int n = g.n();
  if ((x.array() < -L).any() || (x.array() >= L).any() || !x.allFinite()) return Eigen::Vector3d::Zero();
  int base[3];
  double w[3][4];
  for (int ax = 0; ax < 3; ++ax) {
    const double u = (x(ax) + L) / h;
    const double fl = std::floor(u);
    const double t = u - fl;
    base[ax] = int(fl) - 1;
    w[ax][0] = -t * (t - 1) * (t - 2) / 6;
    w[ax][1] = (t + 1) * (t - 1) * (t - 2) / 2;
    w[ax][2] = -(t + 1) * t * (t - 2) / 2;
    w[ax][3] = (t + 1) * t * (t - 1) / 6;
  }
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double wab = w[0][a] * w[1][b];
      for (int c = 0; c < 4; ++c)
        out += (wab * w[2][c]) * f.at(g.site(wrap(base[0] + a), wrap(base[1] + b), wrap(base[2] + c)));
    }
  return out;
}

VectorField refine(const VectorField& f, int factor) {
  if (factor < 1) throw std::invalid_argument("refine: factor must be positive");
  if (factor == 1) return f;
  const Grid& g = f.grid();
  const int n = g.n(), fine_n = factor * n;
  const Grid fine = make_grid(fine_n, g.box_half_width());
  const auto coarse = spectral::forward(f);
  Spectrum<double, 3> out{fine, Spectrum<double, 3>::Coefficients::Zero(3, Spectrum<double, 3>::mode_count(fine))};
  const int cnz = n / 2 + 1, fnz = fine_n / 2 + 1;
  const double scale = double(factor) * factor * factor;
  struct Target {
    int index;
    double w;
  };
  // Coarse index -> fine indices; a Nyquist coefficient is split evenly between +-n/2.
  auto targets = [&](int i, bool half, Target t[2]) {
    if (i < n / 2) {
      t[0] = {i, 1.0};
      return 1;
    }
    if (i > n / 2) {
      t[0] = {i + fine_n - n, 1.0};
      return 1;
    }
    t[0] = {n / 2, 0.5};
    if (half) return 1;
    t[1] = {fine_n - n / 2, 0.5};
    return 2;
  };
  Target tx[2], ty[2], tz[2];
  for (int i = 0; i < n; ++i) {
    const int cx = targets(i, false, tx);
    for (int j = 0; j < n; ++j) {
      const int cy = targets(j, false, ty);
      for (int m = 0; m < cnz; ++m) {
        const int cz = targets(m, true, tz);
        const auto c = coarse.coeffs.col((Index(i) * n + j) * cnz + m);
        for (int a = 0; a < cx; ++a)
          for (int b = 0; b < cy; ++b)
            for (int d = 0; d < cz; ++d)
              out.coeffs.col((Index(tx[a].index) * fine_n + ty[b].index) * fnz + tz[d].index) +=
                  (scale * tx[a].w * ty[b].w * tz[d].w) * c;
      }
    }
  }
  return spectral::backward(std::move(out));
}

SphereSampleSet pushforward_field(const VectorField& a, const std::vector<Eigen::Vector3d>& points) {
  const double L = a.grid().box_half_width();
  SphereSampleSet set;
  set.points.reserve(points.size());
  set.forms.reserve(points.size());
  for (const Eigen::Vector3d& x : points) {
    if ((x.array() < -L).any() || (x.array() >= L).any())
      throw std::out_of_range("pushforward_field: sample point outside the box");
    set.points.push_back(stereographic(x));
    set.preimages.push_back(x);
    set.forms.push_back(pushforward_1form(x, interpolate(a, x)));
  }
  set.weights.assign(points.size(), points.empty() ? 0.0 : kSphereVolume / double(points.size()));
  return set;
}

void pushforward_into(const VectorField& a, SphereSampleSet& set) {
  set.forms.resize(set.points.size());
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const Eigen::Vector3d& x = set.preimages[i];
    const Eigen::Vector3d v = interpolate(a, x);
    set.forms[i] = v.isZero(0.0) ? Eigen::Vector4d::Zero() : pushforward_1form(x, v);
  }
}

namespace {

// Monte Carlo integral over S^3 of value(i), i = 0..N-1, with equal weights.
template <typename F>
ConformalReport monte_carlo(double lhs, const SphereSampleSet& set, F&& value) {
  const Index n = Index(set.points.size());
  std::vector<double> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[std::size_t(i)] = kSphereVolume * value(std::size_t(i));
  const double mean = pairwise_sum(0, n, [&](Index i) { return v[std::size_t(i)]; }) / double(n);
  const double var = pairwise_sum(0, n, [&](Index i) {
    const double d = v[std::size_t(i)] - mean;
    return d * d;
  }) / double(std::max<Index>(n - 1, 1));
  ConformalReport r;
  r.lhs = lhs;
  r.rhs = mean;
  r.std_error = std::sqrt(var / double(n));
  r.samples = long(n);
  r.seed = set.seed;
  const double scale = std::max(std::abs(lhs), std::abs(mean));
  r.gap = scale > 0.0 ? std::abs(lhs - mean) / scale : 0.0;
  return r;
}

}  // namespace

ConformalReport conformal_energy_check(const VectorField& a, long samples, std::uint64_t seed) {
  const VectorField b = curl(a);
  const VectorField fine = refine(b, 2);
  const SphereSampleSet set = sample_sphere(samples, seed);
  return monte_carlo(lp_integral(b, 1.5), set, [&](std::size_t i) {
    const Eigen::Vector3d& x = set.preimages[i];
    const Eigen::Vector3d bx = interpolate(fine, x);
    if (bx.isZero(0.0)) return 0.0;
    return std::pow(form_norm(pushforward_2form(x, bx)), 1.5);
  });
}

ConformalReport seminorm_identity_check(const VectorField& a, long samples, std::uint64_t seed) {
  SphereSampleSet set = sample_sphere(samples, seed);
  pushforward_into(a, set);
  return monte_carlo(lp_integral(a, 3.0), set, [&](std::size_t i) { return std::pow(set.forms[i].norm(), 3.0); });
}

ConformalReport weighted_norm_check(const VectorField& a1, const VectorField& a2, double q, long samples,
                                    std::uint64_t seed) {
  if (!(q >= 1.0 && q < 3.0)) throw std::invalid_argument("weighted_norm_check: q must lie in [1, 3)");
  const VectorField diff = a1 - a2;
  const Grid& g = diff.grid();
  const double lhs = g.cell_volume() * pairwise_sum(0, g.size(), [&](Index s) {
    return std::pow(diff.at(s).norm(), q) * conformal_weight(g.position(s), q);
  });
  SphereSampleSet set = sample_sphere(samples, seed);
  pushforward_into(diff, set);
  return monte_carlo(lhs, set, [&](std::size_t i) { return std::pow(set.forms[i].norm(), q); });
}

double conformal_weight(const Eigen::Vector3d& x, double q) {
  return std::pow(2.0 / (1.0 + x.squaredNorm()), 3.0 - q);
}

GrandNormParams GrandNormParams::standard(double theta) {
  GrandNormParams p;
  p.theta = theta;
  const int count = 40;
  const double hi = std::log(2.0), lo = std::log(1e-4);
  for (int i = 0; i < count; ++i) p.deltas.push_back(std::exp(hi + (lo - hi) * i / double(count - 1)));
  p.deltas.front() = 2.0;
  p.deltas.back() = 1e-4;
  return p;
}

double normalized_norm(std::span<const double> values, std::span<const double> weights, double p) {
  if (values.size() != weights.size()) throw std::invalid_argument("normalized_norm: size mismatch");
  const Index n = Index(values.size());
  const double wsum = pairwise_sum(0, n, [&](Index i) { return weights[std::size_t(i)]; });
  if (!(wsum > 0.0)) throw std::invalid_argument("normalized_norm: weights must have positive sum");
  const double s = pairwise_sum(0, n, [&](Index i) {
    return weights[std::size_t(i)] * std::pow(std::abs(values[std::size_t(i)]), p);
  });
  return std::pow(s / wsum, 1.0 / p);
}

double grand_norm(std::span<const double> values, std::span<const double> weights, const GrandNormParams& params) {
  if (!(params.theta > 0.0 && params.theta <= 3.0)) throw std::invalid_argument("grand_norm: theta must lie in (0, 3]");
  if (params.deltas.empty()) throw std::invalid_argument("grand_norm: empty delta grid");
  double best = 0.0;
  for (double d : params.deltas) {
    if (!(d > 0.0 && d <= 2.0)) throw std::invalid_argument("grand_norm: delta must lie in (0, 2]");
    best = std::max(best, std::pow(d, params.theta / 3.0) * normalized_norm(values, weights, 3.0 - d));
  }
  return best;
}

}  // namespace curlsob
