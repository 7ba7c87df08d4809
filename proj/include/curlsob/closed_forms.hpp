#pragma once

#include <array>

#include <Eigen/Core>

#include "curlsob/field.hpp"

namespace curlsob {

/// Pauli matrices sigma_1, sigma_2, sigma_3 (j = 0, 1, 2).
const Eigen::Matrix2cd& pauli(int j);

/// sigma . v for a real or complex 3-vector.
Eigen::Matrix2cd sigma_dot(const Eigen::Vector3d& v);
Eigen::Matrix2cd sigma_dot(const Eigen::Vector3cd& v);

/// w_j = <eta, sigma_j eta>. Always real; |w| = |eta|^2.
Eigen::Vector3d pauli_expectation(const Spinor& eta);

/// The w for which loss_yau_spinor(eta) is a zero mode of loss_yau_field(w):
/// pauli_expectation(eta) / |eta|^2. The equation is linear in psi, so only the direction
/// of eta matters and |w| = 1. Throws std::invalid_argument for eta = 0.
Eigen::Vector3d zero_mode_w(const Spinor& eta);

/// A spinor eta with pauli_expectation(eta) = w. Throws std::invalid_argument for w = 0.
Spinor spinor_for_expectation(const Eigen::Vector3d& w);

/// A(x) = 3/(1+|x|^2)^2 [(1-|x|^2) w + 2 (x.w) x + 2 w x x].
Eigen::Vector3d loss_yau_value(const Eigen::Vector3d& w, const Eigen::Vector3d& x);
VectorField loss_yau_field(const Eigen::Vector3d& w, const Grid& grid);

/// psi(x) = (I + i sigma.x) eta / (1+|x|^2)^{3/2}.
Spinor loss_yau_spinor_value(const Spinor& eta, const Eigen::Vector3d& x);
SpinorField loss_yau_spinor(const Spinor& eta, const Grid& grid);

/// sigma.(-i grad) psi, spectrally: multiplier sigma.k.
SpinorField dirac(const SpinorField& psi);

/// Pointwise (sigma.A(x)) psi(x).
SpinorField pauli_mult(const VectorField& a, const SpinorField& psi);

/// Sign of the potential term: kMinus tests sigma.(-i grad - A) psi = 0, kPlus tests
/// sigma.(-i grad + A) psi = 0.
enum class ZeroModeSign { kMinus, kPlus };

struct ZeroModeReport {
  double dirac_residual = 0.0;    // ||sigma.(-i grad) psi -+ sigma.A psi||_{3/2}
  double relative_residual = 0.0; // dirac_residual / ||sigma.(-i grad) psi||_{3/2}
  double b_norm = 0.0;            // ||curl A||_{3/2}
  double spinor_quotient = 0.0;   // ||sigma.(-i grad) psi||_{3/2} / ||psi||_3
  bool degenerate = false;        // dirac(psi) vanishes, e.g. a constant spinor
};

ZeroModeReport zero_mode_residual(const VectorField& a, const SpinorField& psi,
                                  ZeroModeSign sign = ZeroModeSign::kMinus);

/// ||dirac(psi)||_{3/2} / ||psi||_3.
double spinor_quotient(const SpinorField& psi);

}  // namespace curlsob
