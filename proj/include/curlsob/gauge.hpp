#pragma once

#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "curlsob/field.hpp"

namespace curlsob {

struct HelmholtzResult {
  VectorField a_tilde;  // divergence-free part
  ScalarField phi;      // mean-free potential, A = a_tilde + grad phi
};

/// Linear Helmholtz (Coulomb gauge) split. divergence(a_tilde) vanishes to rounding.
HelmholtzResult helmholtz(const VectorField& a);

/// Gradient part grad (-Delta)^{-1} div of a field, consistent with divergence/gradient.
VectorField gradient_part(const VectorField& v);

struct GaugeOptions {
  double tol = 1e-7;
  int max_iter = 2000;
  int restart_every = 0;  // periodic CG restart; 0 relies on PR+ and Powell restarts only
  std::optional<ScalarField> initial_phi;  // defaults to helmholtz(A).phi
};

struct GaugeResult {
  ScalarField phi0;
  VectorField a_fixed;               // A - grad phi0
  double seminorm = 0.0;             // ||a_fixed||_3
  double constraint_residual = 0.0;  // ||grad part of |a_fixed| a_fixed||_{3/2}
  double relative_residual = 0.0;    // constraint_residual / ||a_fixed||_3^2
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective;     // integral of |A - grad phi|^3 at every accepted iterate
  std::vector<double> measure;       // stopping measure at every iterate
};

/// Minimizes the integral of |A - grad phi|^3 over mean-free phi by nonlinear CG
/// preconditioned with the inverse Laplacian. Stops when
/// ||grad part of |u| u||_{3/2} / ||u||_3^2 < tol. Throws std::runtime_error on NaN.
GaugeResult seminorm3(const VectorField& a, const GaugeOptions& opts = {});
GaugeResult seminorm3(const VectorField& a, double tol, int max_iter);

/// Same solve; the representative a_fixed satisfies div(|a_fixed| a_fixed) = 0.
GaugeResult gauge_fix(const VectorField& a, const GaugeOptions& opts = {});
GaugeResult gauge_fix(const VectorField& a, double tol, int max_iter);

struct StabilityReport {
  double ratio = 0.0;        // ||grad phi1 - grad phi2||_3^2 / (||A1 - A2||_3 (||A1||_3 + ||A2||_3))
  double numerator = 0.0;
  double denominator = 0.0;
};

StabilityReport gauge_stability(const VectorField& a1, const VectorField& a2,
                                const GaugeOptions& opts = {});

struct DefectReport {
  double eps = 0.0;
  double defect = 0.0;     // L^2 distance of A - eta_eps * A from gradients
  double curl_norm = 0.0;  // ||curl A||_{3/2}
  double ratio = 0.0;      // defect / (sqrt(eps) curl_norm)
};

/// Gaussian mollifier eta(x) = pi^{-3/2} exp(-|x|^2), so eta_eps * A = heat(A, eps^2/4).
DefectReport mollify_defect(const VectorField& a, double eps);

/// Axis-aligned box of grid nodes [i0, i0+m) x [j0, j0+m) x [k0, k0+m), no wrap-around.
struct SubBox {
  int i0 = 0, j0 = 0, k0 = 0;
  int m = 2;
};

struct LocalSeminormReport {
  double primal = 0.0;     // min over nodal phi of the edge L^2 norm of A - D phi
  double dual = 0.0;       // norm of the projection of A onto discrete divergence-free fluxes
  double edge_norm = 0.0;  // edge L^2 norm of A itself
  double gap = 0.0;        // |primal - dual| / max(edge_norm, tiny)
};

/// L^2 distance from A to gradients on a sub-box, with Neumann boundary behaviour.
/// A is sampled on edges as the spectrally exact mean of its tangential component, so
/// gradients of band-limited potentials map to discrete gradients.
/// Throws std::runtime_error if the primal and dual values differ by more than 1e-8.
LocalSeminormReport local_seminorm2(const VectorField& a, const SubBox& box);

/// The edge samples and node-to-edge difference matrix used by local_seminorm2,
/// exposed so the value can be cross-checked with dense linear algebra.
struct EdgeSystem {
  Eigen::VectorXd a_edges;
  std::vector<Eigen::Triplet<double>> gradient;  // rows: edges, cols: nodes
  int nodes = 0;
  double weight = 0.0;  // quadrature weight per edge
};
EdgeSystem local_edge_system(const VectorField& a, const SubBox& box);

}  // namespace curlsob
