#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "curlsob/closed_forms.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/random.hpp"
#include "support.hpp"

using namespace curlsob;
using namespace testsupport;

namespace {

using cd = std::complex<double>;

Spinor random_spinor(const CounterRng& rng, std::uint64_t i) {
  return Spinor(cd(rng.normal(4 * i), rng.normal(4 * i + 1)), cd(rng.normal(4 * i + 2), rng.normal(4 * i + 3)));
}

// sigma.(-i grad) psi by central differences of the closed form.
Spinor dirac_fd(const Spinor& eta, const Eigen::Vector3d& x) {
  const double e = 1e-5;
  Spinor d = Spinor::Zero();
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector3d dx = e * Eigen::Vector3d::Unit(j);
    const Spinor g = (loss_yau_spinor_value(eta, x + dx) - loss_yau_spinor_value(eta, x - dx)) / (2 * e);
    d += pauli(j) * (cd(0, -1) * g);
  }
  return d;
}

}  // namespace

TEST_CASE("pauli expectation") {
  CHECK((pauli_expectation(Spinor(1, 0)) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK((pauli_expectation(Spinor(0, 1)) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-15);
  CHECK((pauli_expectation(Spinor(1, 1)) - Eigen::Vector3d(2, 0, 0)).norm() < 1e-15);
  CHECK((pauli_expectation(Spinor(1, cd(0, 1))) - Eigen::Vector3d(0, 2, 0)).norm() < 1e-15);
  const CounterRng rng(5);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Spinor eta = random_spinor(rng, i);
    CHECK(std::abs(pauli_expectation(eta).norm() - eta.squaredNorm()) < 1e-12 * eta.squaredNorm());
  }
}

TEST_CASE("spinor for a prescribed expectation") {
  const CounterRng rng(6);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Eigen::Vector3d w(rng.normal(3 * i), rng.normal(3 * i + 1), rng.normal(3 * i + 2));
    CHECK((pauli_expectation(spinor_for_expectation(w)) - w).norm() < 1e-12 * w.norm());
  }
  CHECK((pauli_expectation(spinor_for_expectation(Eigen::Vector3d(0, 0, -3))) - Eigen::Vector3d(0, 0, -3)).norm() < 1e-14);
  CHECK_THROWS_AS(spinor_for_expectation(Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("matched w depends only on the direction of eta") {
  const Spinor eta(cd(0.3, -1), cd(2, 0.5));
  CHECK(std::abs(zero_mode_w(eta).norm() - 1.0) < 1e-15);
  CHECK((zero_mode_w(3.0 * eta) - zero_mode_w(eta)).norm() < 1e-15);
  CHECK((zero_mode_w(cd(0, 1) * eta) - zero_mode_w(eta)).norm() < 1e-15);
  CHECK((zero_mode_w(Spinor(1, 0)) - pauli_expectation(Spinor(1, 0))).norm() == 0.0);
  CHECK_THROWS_AS(zero_mode_w(Spinor::Zero()), std::invalid_argument);
}

TEST_CASE("closed forms satisfy the zero mode equation pointwise") {
  const CounterRng rng(7);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Spinor eta = random_spinor(rng, i);
    const Eigen::Vector3d w = zero_mode_w(eta);
    const Eigen::Vector3d x = 1.5 * Eigen::Vector3d(rng.normal(1000 + 3 * i), rng.normal(1001 + 3 * i), rng.normal(1002 + 3 * i));
    const Spinor lhs = dirac_fd(eta, x);
    const Spinor rhs = sigma_dot(loss_yau_value(w, x)) * loss_yau_spinor_value(eta, x);
    CHECK((lhs - rhs).norm() < 1e-8 * std::max(lhs.norm(), 1e-3));
    // The opposite sign does not hold.
    CHECK((lhs + rhs).norm() > 0.1 * lhs.norm());
  }
}

TEST_CASE("loss_yau_value at special points") {
  const Eigen::Vector3d w(0, 0, 1);
  CHECK((loss_yau_value(w, Eigen::Vector3d::Zero()) - 3 * w).norm() < 1e-15);
  // On the axis of w the cross term vanishes: 3/(1+r^2)^2 (1 + r^2) w.
  CHECK((loss_yau_value(w, Eigen::Vector3d(0, 0, 2)) - 3.0 / 5.0 * w).norm() < 1e-15);
  // |A(x)| = 3|w|/(1+r^2) everywhere.
  const CounterRng rng(8);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Eigen::Vector3d x(rng.normal(3 * i), rng.normal(3 * i + 1), rng.normal(3 * i + 2));
    const Eigen::Vector3d v(rng.normal(500 + i), 0.3, -1);
    CHECK(std::abs(loss_yau_value(v, x).norm() - 3 * v.norm() / (1 + x.squaredNorm())) < 1e-13 * v.norm());
  }
}

TEST_CASE("zero mode residual on the grid") {
  const Spinor eta(1, 0);
  const Eigen::Vector3d w = pauli_expectation(eta);
  const Grid g = make_grid(32, 4.0);
  const VectorField a = loss_yau_field(w, g);
  const SpinorField psi = loss_yau_spinor(eta, g);
  const ZeroModeReport minus = zero_mode_residual(a, psi, ZeroModeSign::kMinus);
  const ZeroModeReport plus = zero_mode_residual(a, psi, ZeroModeSign::kPlus);
  CHECK(!minus.degenerate);
  CHECK(minus.relative_residual < plus.relative_residual);
  CHECK(std::abs(minus.spinor_quotient - spinor_quotient(psi)) < 1e-14 * minus.spinor_quotient);
  CHECK(std::abs(minus.b_norm - plus.b_norm) == 0.0);

  // Away from the box faces the spectral derivative matches the closed form.
  const SpinorField d = dirac(psi);
  const SpinorField res = d - pauli_mult(a, psi);
  double worst = 0.0, scale = 0.0;
  for (Index s = 0; s < g.size(); ++s)
    if (g.position(s).norm() < 1.0) {
      worst = std::max(worst, res.at(s).norm());
      scale = std::max(scale, d.at(s).norm());
    }
  CHECK(worst < 0.05 * scale);

  // Constant spinor: dirac vanishes, the relative residual is flagged rather than divided by 0.
  const SpinorField c = constant_field<std::complex<double>, 2>(g, Spinor(1, 0));
  CHECK(zero_mode_residual(VectorField(g), c).degenerate);
  CHECK_THROWS(zero_mode_residual(a, SpinorField(g)));
  CHECK_THROWS(zero_mode_residual(loss_yau_field(w, make_grid(16, 4.0)), psi));
}
