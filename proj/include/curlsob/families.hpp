#pragma once

#include <cstdint>
#include <string>

#include "curlsob/field.hpp"

namespace curlsob {

/// Sum of `count` Gaussian bumps with random centers, widths and vector amplitudes.
/// Centers lie within half the box so the field is negligible at the boundary.
VectorField random_bump_field(const Grid& grid, std::uint64_t seed, int count = 4);

ScalarField random_bump_scalar(const Grid& grid, std::uint64_t seed, int count = 4);

/// curl of a random bump field: smooth, divergence-free, mean-free.
VectorField random_divfree(const Grid& grid, std::uint64_t seed);

/// Single bump a * exp(-|x - c|^2 / s^2) * direction.
VectorField gaussian_bump(const Grid& grid, const Eigen::Vector3d& center, double width,
                          const Eigen::Vector3d& direction);

/// Built-in families by name: lossyau, gaussian-bump, random-divfree.
VectorField named_family(const std::string& name, const Grid& grid, const Eigen::Vector3d& w,
                         std::uint64_t seed);

}  // namespace curlsob
