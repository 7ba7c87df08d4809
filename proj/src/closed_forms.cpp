#include "curlsob/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curlsob/norms.hpp"
#include "curlsob/spectral.hpp"

namespace curlsob {
namespace {

using cd = std::complex<double>;

std::array<Eigen::Matrix2cd, 3> make_pauli() {
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 1, 1, 0;
  s[1] << 0, cd(0, -1), cd(0, 1), 0;
  s[2] << 1, 0, 0, -1;
  return s;
}

void require_nonzero(const SpinorField& psi) {
  if (psi.values().cwiseAbs2().sum() == 0.0) throw std::invalid_argument("zero spinor");
}

}  // namespace

const Eigen::Matrix2cd& pauli(int j) {
  static const auto s = make_pauli();
  return s.at(std::size_t(j));
}

Eigen::Matrix2cd sigma_dot(const Eigen::Vector3cd& v) {
  return v(0) * pauli(0) + v(1) * pauli(1) + v(2) * pauli(2);
}

Eigen::Matrix2cd sigma_dot(const Eigen::Vector3d& v) { return sigma_dot(Eigen::Vector3cd(v.cast<cd>())); }

Eigen::Vector3d pauli_expectation(const Spinor& eta) {
  Eigen::Vector3d w;
  for (int j = 0; j < 3; ++j) w(j) = std::real(eta.dot(pauli(j) * eta));
  return w;
}

Eigen::Vector3d zero_mode_w(const Spinor& eta) {
  const double n2 = eta.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("eta must be nonzero");
  return pauli_expectation(eta) / n2;
}

Spinor spinor_for_expectation(const Eigen::Vector3d& w) {
  const double r = w.norm();
  if (!(r > 0.0)) throw std::invalid_argument("w must be nonzero");
  // eta = sqrt|w| (cos(theta/2), e^{i phi} sin(theta/2)) with w/|w| at polar angle theta.
  const double theta = std::acos(std::clamp(w.z() / r, -1.0, 1.0));
  const double phi = std::atan2(w.y(), w.x());
  const double s = std::sqrt(r);
  return Spinor(s * std::cos(0.5 * theta), s * std::sin(0.5 * theta) * std::polar(1.0, phi));
}

Eigen::Vector3d loss_yau_value(const Eigen::Vector3d& w, const Eigen::Vector3d& x) {
  const double r2 = x.squaredNorm();
  const double f = 3.0 / ((1.0 + r2) * (1.0 + r2));
  return f * ((1.0 - r2) * w + 2.0 * x.dot(w) * x + 2.0 * w.cross(x));
}

VectorField loss_yau_field(const Eigen::Vector3d& w, const Grid& grid) {
  return sample<VectorField>(grid, [&](const Eigen::Vector3d& x) { return loss_yau_value(w, x); });
}

Spinor loss_yau_spinor_value(const Spinor& eta, const Eigen::Vector3d& x) {
  const double r2 = x.squaredNorm();
  const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() + cd(0, 1) * sigma_dot(x);
  return m * eta / std::pow(1.0 + r2, 1.5);
}

SpinorField loss_yau_spinor(const Spinor& eta, const Grid& grid) {
  return sample<SpinorField>(grid,
                             [&](const Eigen::Vector3d& x) { return loss_yau_spinor_value(eta, x); });
}

SpinorField dirac(const SpinorField& psi) {
  auto sp = spectral::forward(psi);
  spectral::for_each_mode<cd, 2>(psi.grid(), [&](Index idx, const Mode& m) {
    const Eigen::Vector2cd c = sp.coeffs.col(idx);
    sp.coeffs.col(idx) = sigma_dot(m.d) * c;
  });
  return spectral::backward(std::move(sp));
}

SpinorField pauli_mult(const VectorField& a, const SpinorField& psi) {
  Field<double, 3>::require_same_grid(a.grid(), psi.grid());
  SpinorField out(psi.grid());
  for (Index s = 0; s < psi.size(); ++s)
    out.at(s) = sigma_dot(Eigen::Vector3d(a.at(s))) * Spinor(psi.at(s));
  return out;
}

ZeroModeReport zero_mode_residual(const VectorField& a, const SpinorField& psi, ZeroModeSign sign) {
  Field<double, 3>::require_same_grid(a.grid(), psi.grid());
  require_nonzero(psi);
  const SpinorField d = dirac(psi);
  const SpinorField ap = pauli_mult(a, psi);
  const SpinorField res = sign == ZeroModeSign::kMinus ? d - ap : d + ap;
  ZeroModeReport r;
  r.dirac_residual = lp_norm(res, 1.5);
  const double dn = lp_norm(d, 1.5);
  r.degenerate = dn == 0.0;
  r.relative_residual = r.degenerate ? 0.0 : r.dirac_residual / dn;
  r.b_norm = lp_norm(curl(a), 1.5);
  r.spinor_quotient = dn / lp_norm(psi, 3.0);
  return r;
}

double spinor_quotient(const SpinorField& psi) {
  require_nonzero(psi);
  return lp_norm(dirac(psi), 1.5) / lp_norm(psi, 3.0);
}

}  // namespace curlsob
