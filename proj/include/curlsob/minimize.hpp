#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "curlsob/field.hpp"

namespace curlsob {

struct MinimizeOptions {
  double step = 0.1;         // initial step, as a fraction of ||A||_3 = 1
  double tol = 1e-3;         // el_residual stop threshold
  int max_iter = 100;
  double eps_reg = 1e-8;
  int recenter_every = 10;   // 0 disables recentering
  std::uint64_t seed = 42;   // recorded; the iteration itself is deterministic
  double gauge_tol = 1e-6;
};

struct TraceRow {
  int iteration = 0;
  double quotient = 0.0;
  double el_residual = 0.0;
  double step = 0.0;
};

struct RecenterEvent {
  int iteration = 0;
  double scale = 1.0;
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();
  double quotient_before = 0.0;
  double quotient_after = 0.0;
  bool accepted = false;
};

struct MinimizeTrace {
  std::vector<TraceRow> rows;         // row 0 is the initial state
  std::vector<RecenterEvent> recenterings;
  VectorField field;                  // final gauge-fixed iterate, ||field||_3 = 1
  double multiplier = 0.0;            // ||curl field||_{3/2}^{3/2}
  bool converged = false;             // el_residual <= tol
  bool line_search_failed = false;    // 40 halvings without decrease
  int iterations = 0;

  double initial_quotient() const { return rows.front().quotient; }
  double final_quotient() const { return rows.back().quotient; }
};

/// Projected gradient descent on the quotient: gauge-fix, normalize ||A||_3 = 1, step along
/// -(-Delta)^{-1} E with E the Euler-Lagrange vector, periodic recentering.
/// Throws std::domain_error when A0 is a gradient field.
MinimizeTrace minimize(const VectorField& a0, const MinimizeOptions& opts = {});

/// iteration,quotient,el_residual,step with round-trip precision.
void write_trace_csv(std::ostream& out, const MinimizeTrace& trace);

}  // namespace curlsob
