#include "curlsob/families.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "curlsob/closed_forms.hpp"
#include "curlsob/spectral.hpp"

namespace curlsob {
namespace {

struct Bump {
  Eigen::Vector3d center;
  double width;
  Eigen::Vector3d amplitude;
};

std::vector<Bump> draw_bumps(const Grid& grid, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double L = grid.box_half_width();
  std::vector<Bump> bumps;
  for (int b = 0; b < count; ++b) {
    Bump bump;
    bump.center = 0.25 * L * Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    // Widths from 0.8 to 1.6 stay resolved at h = 0.25 and decay well inside the box.
    bump.width = 1.2 + 0.4 * unit(rng);
    bump.amplitude = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    bumps.push_back(bump);
  }
  return bumps;
}

}  // namespace

VectorField random_bump_field(const Grid& grid, std::uint64_t seed, int count) {
  const auto bumps = draw_bumps(grid, seed, count);
  return sample<VectorField>(grid, [&](const Eigen::Vector3d& x) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (const auto& b : bumps)
      v += std::exp(-(x - b.center).squaredNorm() / (b.width * b.width)) * b.amplitude;
    return v;
  });
}

ScalarField random_bump_scalar(const Grid& grid, std::uint64_t seed, int count) {
  const auto bumps = draw_bumps(grid, seed ^ 0x5bd1e995ULL, count);
  return sample<ScalarField>(grid, [&](const Eigen::Vector3d& x) {
    double v = 0.0;
    for (const auto& b : bumps)
      v += std::exp(-(x - b.center).squaredNorm() / (b.width * b.width)) * b.amplitude.x();
    return Eigen::Matrix<double, 1, 1>(v);
  });
}

VectorField random_divfree(const Grid& grid, std::uint64_t seed) {
  return curl(random_bump_field(grid, seed));
}

VectorField gaussian_bump(const Grid& grid, const Eigen::Vector3d& center, double width,
                          const Eigen::Vector3d& direction) {
  return sample<VectorField>(grid, [&](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::exp(-(x - center).squaredNorm() / (width * width)) * direction);
  });
}

VectorField named_family(const std::string& name, const Grid& grid, const Eigen::Vector3d& w,
                         std::uint64_t seed) {
  if (name == "lossyau") return loss_yau_field(w, grid);
  if (name == "gaussian-bump") {
    // A single bump is a near-gradient in no direction; rotate it so its curl is nonzero.
    const VectorField bump = gaussian_bump(grid, Eigen::Vector3d::Zero(), 1.5, w);
    return bump + cross(sample<VectorField>(grid, [](const Eigen::Vector3d& x) { return x; }), bump);
  }
  if (name == "random-divfree") return random_divfree(grid, seed);
  throw std::invalid_argument("unknown field family '" + name +
                              "' (expected lossyau, gaussian-bump, random-divfree)");
}

}  // namespace curlsob
