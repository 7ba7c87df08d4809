// Acceptance suite: one PASS/FAIL line per criterion, followed by indented diagnostics.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curlsob/closed_forms.hpp"
#include "curlsob/commands.hpp"
#include "curlsob/conformal.hpp"
#include "curlsob/families.hpp"
#include "curlsob/gauge.hpp"
#include "curlsob/minimize.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/spectral.hpp"
#include "curlsob/variational.hpp"

using namespace curlsob;

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename... Args>
void note(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Zero mode residual at (64, 8), halved at (128, 16), within 2 minutes.
Outcome zero_mode() {
  const auto t0 = Clock::now();
  const Spinor eta(1, 0);
  const Eigen::Vector3d w = zero_mode_w(eta);
  auto residual = [&](int n, double L) {
    const Grid g = make_grid(n, L);
    const ZeroModeReport z = zero_mode_residual(loss_yau_field(w, g), loss_yau_spinor(eta, g));
    // Share of the residual away from the box faces, for the record.
    const SpinorField res = dirac(loss_yau_spinor(eta, g)) - pauli_mult(loss_yau_field(w, g), loss_yau_spinor(eta, g));
    double inner = 0.0, total = 0.0;
    for (Index s = 0; s < g.size(); ++s) {
      const double v = std::pow(res.at(s).norm(), 1.5);
      total += v;
      if (g.position(s).cwiseAbs().maxCoeff() < 0.5 * L) inner += v;
    }
    note("(n=%d, L=%g): relative residual %.4f, inner half-box share of residual %.4f", n, L, z.relative_residual,
         inner / total);
    return z.relative_residual;
  };
  const double r64 = residual(64, 8.0);
  const double r128 = residual(128, 16.0);
  const double t = seconds_since(t0);
  note("ratio %.3f (need >= 2), %.1f s (need <= 120)", r64 / r128, t);
  return {r64 <= 0.05 && r64 / r128 >= 2.0 && t <= 120.0,
          "zero mode residual " + fmt("%.4f", r64) + " at (64,8), " + fmt("%.4f", r128) + " at (128,16)"};
}

// 2. Gauge gradient of the closed-form field at defaults.
Outcome gauge_constraint() {
  const Grid g = make_grid(64, 8.0);
  const VectorField a = loss_yau_field(Eigen::Vector3d(0, 0, 1), g);
  const GaugeResult r = gauge_fix(a);
  const VectorField grad = gradient(r.phi0);
  const double ratio = lp_norm(grad, 3.0) / lp_norm(a, 3.0);
  double shell = 0.0, total = 0.0;
  for (Index s = 0; s < g.size(); ++s) {
    const double v = std::pow(grad.at(s).norm(), 3.0);
    total += v;
    if (g.position(s).cwiseAbs().maxCoeff() > 0.8 * g.box_half_width()) shell += v;
  }
  note("gauge iterations %d, converged %d, relative constraint residual %.3e", r.iterations, int(r.converged),
       r.relative_residual);
  note("share of ||grad phi0||_3^3 in the outer 20%% shell: %.3f", shell / total);
  return {r.converged && ratio <= 0.02, "||grad phi0||_3/||A||_3 = " + fmt("%.4f", ratio) + " (need <= 0.02)"};
}

// 3. Euler-Lagrange residual halves under refinement.
Outcome el_stationarity() {
  auto el = [](int n, double L) {
    const VectorField a = loss_yau_field(Eigen::Vector3d(0, 0, 1), make_grid(n, L));
    const double lambda = multiplier(a);
    const double r = el_residual(a, lambda);
    note("(n=%d, L=%g): multiplier %.5f (closed form %.5f), el_residual %.4f", n, L, lambda, 8.0 / (3.0 * std::sqrt(3.0)),
         r);
    return r;
  };
  const double r64 = el(64, 8.0), r128 = el(128, 16.0);
  return {r64 / r128 >= 2.0, "el_residual " + fmt("%.4f", r64) + " -> " + fmt("%.4f", r128) + ", factor " +
                                 fmt("%.3f", r64 / r128) + " (need >= 2)"};
}

// 4. L3 norms against radial quadrature: int r^2 (1+r^2)^-3 dr = pi/16.
Outcome norm_oracles() {
  const Grid g = make_grid(128, 16.0);
  // |A| = 3/(1+r^2): ||A||_3^3 = 27 * 4 pi * pi/16.
  const double a_ref = std::cbrt(27.0 * 4.0 * kPi * kPi / 16.0);
  // |psi| = 1/(1+r^2): ||psi||_3^3 = 4 pi * pi/16.
  const double psi_ref = std::cbrt(4.0 * kPi * kPi / 16.0);
  const double a = lp_norm(loss_yau_field(Eigen::Vector3d(0, 0, 1), g), 3.0);
  const double psi = lp_norm(loss_yau_spinor(Spinor(1, 0), g), 3.0);
  const double ea = std::abs(a - a_ref) / a_ref, ep = std::abs(psi - psi_ref) / psi_ref;
  note("||A||_3 = %.6f vs %.6f, ||psi||_3 = %.6f vs %.6f", a, a_ref, psi, psi_ref);
  return {ea < 0.01 && ep < 0.01, "relative errors " + fmt("%.2e", ea) + " and " + fmt("%.2e", ep)};
}

// 5. Five random starts at n=32 against the on-grid closed-form quotient; stationarity of the closed form.
Outcome minimizer_consistency() {
  const Grid g = make_grid(32, 8.0);
  MinimizeOptions o;
  o.tol = 1e-3;
  o.max_iter = 50;
  QuotientOptions qo;
  qo.gauge.tol = o.gauge_tol;
  const VectorField ly = loss_yau_field(Eigen::Vector3d(0, 0, 1), g);
  const double q_ly = quotient(ly, qo).quotient;
  double best = INFINITY;
  for (std::uint64_t seed = 42; seed < 47; ++seed) {
    const auto t0 = Clock::now();
    o.seed = seed;
    const MinimizeTrace t = minimize(random_divfree(g, seed), o);
    note("start seed %llu: %.5f -> %.5f in %d iterations (el %.3e, %.1f s)", (unsigned long long)seed,
         t.initial_quotient(), t.final_quotient(), t.iterations, t.rows.back().el_residual, seconds_since(t0));
    best = std::min(best, t.final_quotient());
  }
  const MinimizeTrace from_ly = minimize(ly, o);
  const double change = std::abs(from_ly.final_quotient() - from_ly.initial_quotient()) / from_ly.initial_quotient();
  note("closed-form start: %.5f -> %.5f, relative change %.3e (need < 1e-3)", from_ly.initial_quotient(),
       from_ly.final_quotient(), change);
  note("on-grid closed-form quotient %.5f, best %.5f (need <= %.5f)", q_ly, best, 1.05 * q_ly);
  note("conjecture, reported only: best / 4 pi = %.5f", best / (4.0 * kPi));
  return {best <= 1.05 * q_ly && change < 1e-3,
          "best " + fmt("%.4f", best) + " vs closed form " + fmt("%.4f", q_ly) + ", closed-form change " + fmt("%.2e", change)};
}

// 6. Energy and weighted q=2 identities, 1e6 samples, <= 1 min each.
Outcome conformal_identities() {
  const Grid g = make_grid(64, 8.0);
  const Eigen::Vector3d ez(0, 0, 1);
  struct Named {
    const char* name;
    VectorField field;
  };
  std::vector<Named> fields;
  fields.push_back({"lossyau", named_family("lossyau", g, ez, 42)});
  fields.push_back({"gaussian-bump", named_family("gaussian-bump", g, ez, 42)});
  fields.push_back({"random-divfree 42", random_divfree(g, 42)});
  fields.push_back({"random-divfree 43", random_divfree(g, 43)});
  fields.push_back({"random-bump 42", random_bump_field(g, 42)});
  bool pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto t0 = Clock::now();
    const ConformalReport e = conformal_energy_check(fields[i].field, 1000000, 42);
    const double te = seconds_since(t0);
    t0 = Clock::now();
    const ConformalReport wn = weighted_norm_check(fields[i].field, random_bump_field(g, 1000 + i), 2.0, 1000000, 42);
    const double tw = seconds_since(t0);
    // Error bars relative to the Monte Carlo side.
    note("%-18s energy gap %.4f (std err %.4f, %.1f s), weighted q=2 gap %.4f (std err %.4f, %.1f s)", fields[i].name,
         e.gap, e.std_error / e.rhs, te, wn.gap, wn.std_error / wn.rhs, tw);
    pass = pass && e.gap < 0.01 && wn.gap < 0.01 && te <= 60.0 && tw <= 60.0;
    worst = std::max({worst, e.gap, wn.gap});
  }
  return {pass, "worst gap " + fmt("%.4f", worst) + " over 5 fields (need < 0.01)"};
}

// 7. Elementary inequalities, 1e6 tuples each, zero violations.
Outcome elementary() {
  const InequalityReport c = check_elementary(Elementary::kCurl, 1000000, 42);
  const InequalityReport f = check_elementary(Elementary::kFlux, 1000000, 42);
  const InequalityReport h = check_elementary(Elementary::kHelm, 1000000, 42);
  note("flux form: %ld violations, min margin %.3e", f.violations, f.min_margin);
  note("helmholtz form: %ld violations, min margin %.3e", h.violations, h.min_margin);
  note("curl form (constant 1): %ld violations, min margin %.3e", c.violations, c.min_margin);
  note("empirical sharp constant for the curl form %.6f (2^-3/4 = %.6f)", elementary_curl_constant(1000000, 42),
       std::pow(2.0, -0.75));
  return {c.violations == 0 && f.violations == 0 && h.violations == 0,
          "violations: flux " + std::to_string(f.violations) + ", helmholtz " + std::to_string(h.violations) +
              ", curl " + std::to_string(c.violations)};
}

// 8. Local L2 seminorm primal-dual gap and dense oracle on n=8 sub-boxes.
Outcome local_duality() {
  const Grid g = make_grid(8, 2.0);
  double worst_gap = 0.0, worst_oracle = 0.0;
  int boxes = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const VectorField a = random_bump_field(g, seed) + cross(random_bump_field(g, 100 + seed), random_bump_field(g, 200 + seed));
    for (SubBox box : {SubBox{0, 0, 0, 8}, SubBox{1, 2, 0, 5}, SubBox{3, 3, 3, 3}, SubBox{0, 4, 2, 4}, SubBox{2, 0, 1, 6}}) {
      try {
        const LocalSeminormReport r = local_seminorm2(a, box);
        const EdgeSystem sys = local_edge_system(a, box);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(sys.a_edges.size(), sys.nodes);
        for (const auto& t : sys.gradient) D(t.row(), t.col()) += t.value();
        const Eigen::VectorXd phi = D.completeOrthogonalDecomposition().solve(sys.a_edges);
        const double oracle = std::sqrt(sys.weight * (sys.a_edges - D * phi).squaredNorm());
        worst_gap = std::max(worst_gap, r.gap);
        worst_oracle = std::max(worst_oracle, std::abs(r.primal - oracle) / r.edge_norm);
      } catch (const std::exception& e) {
        note("seed %llu: %s", (unsigned long long)seed, e.what());
        ok = false;
      }
      ++boxes;
    }
  }
  note("%d sub-boxes: max primal-dual gap %.2e, max deviation from dense oracle %.2e", boxes, worst_gap, worst_oracle);
  return {ok && worst_gap < 1e-8 && worst_oracle < 1e-8,
          "gap " + fmt("%.2e", worst_gap) + ", oracle deviation " + fmt("%.2e", worst_oracle) + " (need < 1e-8)"};
}

// 9. Improved-inequality ratio over 50 fields, n=32 vs n=64.
Outcome improved_diagnostics() {
  GaugeOptions go;
  go.tol = 1e-5;
  bool finite = true;
  double max_r[2] = {0, 0}, max_h[2] = {0, 0};
  const int ns[2] = {32, 64};
  for (int k = 0; k < 2; ++k) {
    const auto t0 = Clock::now();
    const Grid g = make_grid(ns[k], 6.0);
    for (std::uint64_t seed = 1000; seed < 1050; ++seed) {
      const ImprovedReport r = improved_ratio(random_bump_field(g, seed), go);
      finite = finite && std::isfinite(r.ratio) && std::isfinite(r.holder_ratio) && r.ratio > 0 && r.holder_ratio > 0;
      max_r[k] = std::max(max_r[k], r.ratio);
      max_h[k] = std::max(max_h[k], r.holder_ratio);
    }
    note("n=%d: max R %.5f, max Hoelder ratio %.5f (%.1f s)", ns[k], max_r[k], max_h[k], seconds_since(t0));
  }
  const double drift = std::abs(max_r[1] / max_r[0] - 1.0);
  return {finite && drift <= 0.10, "max R " + fmt("%.4f", max_r[0]) + " -> " + fmt("%.4f", max_r[1]) + ", drift " +
                                       fmt("%.2e", drift) + " (need <= 0.10)"};
}

// 10. Two runs of the minimize command with the same seed give identical CSV bytes.
Outcome determinism() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "curlsob_acceptance";
  std::filesystem::create_directories(dir);
  std::string bytes[2];
  for (int k = 0; k < 2; ++k) {
    const std::string csv = (dir / ("trace" + std::to_string(k) + ".csv")).string();
    const std::string js = (dir / ("summary" + std::to_string(k) + ".json")).string();
    const char* argv[] = {"curlsob", "minimize", "--n", "32", "--box", "8", "--max-iter", "10", "--seed", "42",
                          "--out", csv.c_str(), "--json", js.c_str()};
    if (cli_main(int(std::size(argv)), argv) != kExitOk) return {false, "minimize command failed"};
    std::ifstream in(csv, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    bytes[k] = os.str();
  }
  const auto rows = std::count(bytes[0].begin(), bytes[0].end(), '\n');
  note("%ld CSV lines, %zu bytes", long(rows), bytes[0].size());
  return {!bytes[0].empty() && bytes[0] == bytes[1], bytes[0] == bytes[1] ? "traces identical" : "traces differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"zero-mode verification", zero_mode},
      {"gauge constraint of the closed-form field", gauge_constraint},
      {"Euler-Lagrange stationarity", el_stationarity},
      {"norm oracles", norm_oracles},
      {"minimizer consistency", minimizer_consistency},
      {"conformal identities", conformal_identities},
      {"elementary inequalities", elementary},
      {"local seminorm duality", local_duality},
      {"improved inequality diagnostics", improved_diagnostics},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    std::printf("criterion %d: %s\n", id, criteria[i].first);
    std::fflush(stdout);
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.summary.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
