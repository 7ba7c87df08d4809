#include "curlsob/minimize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "curlsob/log.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/spectral.hpp"
#include "curlsob/variational.hpp"

namespace curlsob {
namespace {

constexpr int kMaxHalvings = 40;
constexpr double kAcceptSlack = 1e-12;

struct State {
  VectorField a;
  double q = 0.0;
  double el = 0.0;
  double lambda = 0.0;
};

State evaluate(const VectorField& a, const MinimizeOptions& opts) {
  QuotientOptions qo;
  qo.eps_reg = opts.eps_reg;
  qo.gauge.tol = opts.gauge_tol;
  qo.gauge.initial_phi = ScalarField(a.grid());  // iterates are already near their gauge
  const QuotientReport r = quotient(a, qo);
  const double s = r.seminorm;
  VectorField fixed = r.gauge.a_fixed;
  fixed *= 1.0 / s;
  // Normalizing by s scales the multiplier by s^{3/2}; quotient and residual are invariant.
  return {std::move(fixed), r.quotient, r.el_residual, r.multiplier * std::pow(s, 1.5)};
}

}  // namespace

MinimizeTrace minimize(const VectorField& a0, const MinimizeOptions& opts) {
  if (!(opts.step > 0.0) || !(opts.tol > 0.0) || opts.max_iter < 0 || !(opts.eps_reg >= 0.0) ||
      opts.recenter_every < 0 || !(opts.gauge_tol > 0.0))
    throw std::invalid_argument("minimize: invalid options");

  State cur = evaluate(a0, opts);
  MinimizeTrace trace{.field = cur.a};
  double step = opts.step;
  trace.rows.push_back({0, cur.q, cur.el, 0.0});

  for (int it = 1; it <= opts.max_iter; ++it) {
    if (cur.el <= opts.tol) break;
    VectorField dir = inverse_laplacian(el_vector(cur.a, cur.lambda, opts.eps_reg));
    dir *= -1.0 / lp_norm(dir, 3.0);

    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      try {
        State trial = evaluate(cur.a + step * dir, opts);
        if (trial.q <= cur.q * (1.0 + kAcceptSlack)) {
          cur = std::move(trial);
          accepted = true;
          break;
        }
      } catch (const std::domain_error&) {
        // a step landing on a gradient field is treated as a failed trial
      }
      step *= 0.5;
    }
    if (!accepted) {
      trace.line_search_failed = true;
      log::info("minimize: line search failed at iteration ", it);
      break;
    }
    trace.iterations = it;
    trace.rows.push_back({it, cur.q, cur.el, step});
    log::debug("minimize: it ", it, " quotient ", cur.q, " el ", cur.el, " step ", step);
    step = std::min(1.5 * step, 1.0);

    if (opts.recenter_every > 0 && it % opts.recenter_every == 0) {
      RecenterEvent ev{.iteration = it, .quotient_before = cur.q};
      try {
        const RecenterResult rc = recenter(cur.a);
        ev.scale = rc.scale;
        ev.shift = rc.shift;
        State moved = evaluate(rc.field, opts);
        ev.quotient_after = moved.q;
        if (moved.q <= cur.q * (1.0 + kAcceptSlack)) {
          cur = std::move(moved);
          ev.accepted = true;
        }
      } catch (const std::domain_error&) {
        ev.quotient_after = NAN;
      }
      trace.recenterings.push_back(ev);
    }
  }
  trace.converged = cur.el <= opts.tol;
  trace.multiplier = cur.lambda;
  trace.field = std::move(cur.a);
  return trace;
}

void write_trace_csv(std::ostream& out, const MinimizeTrace& trace) {
  out << "iteration,quotient,el_residual,step\n";
  char buf[128];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.iteration, r.quotient, r.el_residual, r.step);
    out << buf;
  }
}

}  // namespace curlsob
