#include "curlsob/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curlsob/closed_forms.hpp"
#include "curlsob/conformal.hpp"
#include "curlsob/families.hpp"
#include "curlsob/gauge.hpp"
#include "curlsob/log.hpp"
#include "curlsob/minimize.hpp"
#include "curlsob/norms.hpp"
#include "curlsob/spectral.hpp"
#include "curlsob/variational.hpp"
#include "curlsob/vf3.hpp"

namespace curlsob {

using nlohmann::json;

namespace {

// verify-optimizer thresholds
constexpr double kZeroModeMax = 0.05;
constexpr double kGaugeGradientMax = 0.02;
constexpr double kElResidualMax = 0.05;
constexpr double kConformalGapMax = 0.01;

constexpr double kGaugeTol = 1e-7;
constexpr double kMinimizeTol = 1e-3;
constexpr int kGaugeMaxIter = 2000;
constexpr int kMinimizeMaxIter = 50;

using Clock = std::chrono::steady_clock;

json vec(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

json spinor_json(const Spinor& s) { return {s(0).real(), s(0).imag(), s(1).real(), s(1).imag()}; }

Spinor eta_of(const RunConfig& cfg) {
  if (cfg.eta) return *cfg.eta;
  if (cfg.w) return spinor_for_expectation(*cfg.w);
  return Spinor(1.0, 0.0);
}

Eigen::Vector3d w_of(const RunConfig& cfg) { return cfg.w ? *cfg.w : zero_mode_w(eta_of(cfg)); }

json config_json(const RunConfig& cfg) {
  json c = {{"command", cfg.command}, {"n", cfg.n},         {"L", cfg.L},
            {"seed", cfg.seed},       {"eps_reg", cfg.eps_reg}, {"in", cfg.in},
            {"out", cfg.out},         {"init", cfg.init},   {"json", cfg.json},
            {"starts", cfg.starts},   {"recenter_every", cfg.recenter_every},
            {"samples", cfg.samples}, {"sign", cfg.sign}};
  c["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
  c["max_iter"] = cfg.max_iter ? json(*cfg.max_iter) : json(nullptr);
  c["w"] = cfg.w ? vec(*cfg.w) : json(nullptr);
  c["eta"] = cfg.eta ? spinor_json(*cfg.eta) : json(nullptr);
  return c;
}

json grid_json(const Grid& g) { return {{"n", g.n()}, {"L", g.box_half_width()}, {"h", g.spacing()}}; }

json gauge_json(const GaugeResult& r) {
  return {{"seminorm", r.seminorm},
          {"constraint_residual", r.constraint_residual},
          {"relative_residual", r.relative_residual},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

json conformal_json(const ConformalReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"gap", r.gap}, {"std_error", r.std_error},
          {"samples", r.samples}, {"seed", r.seed}};
}

json improved_json(const ImprovedReport& r) {
  return {{"ratio", r.ratio},       {"holder_ratio", r.holder_ratio}, {"sup_value", r.sup_value},
          {"t_star", r.t_star},     {"numerator", r.numerator},       {"b_norm", r.b_norm}};
}

json report_base(const RunConfig& cfg, const Grid& grid) {
  return {{"tool", "curlsob"}, {"version", kVersion}, {"config", config_json(cfg)}, {"grid", grid_json(grid)}};
}

void emit(const RunConfig& cfg, json& report, Clock::time_point start) {
  report["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  const std::string text = report.dump(2);
  if (cfg.json.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(cfg.json);
  if (!out) throw std::runtime_error("cannot write " + cfg.json);
  out << text << '\n';
}

VectorField input_field(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.in.empty()) return load_vf3<VectorField>(cfg.in);
  return named_family(cfg.init.empty() ? fallback : cfg.init, make_grid(cfg.n, cfg.L), w_of(cfg), cfg.seed);
}

GaugeOptions gauge_options(const RunConfig& cfg) {
  GaugeOptions o;
  o.tol = cfg.tol.value_or(kGaugeTol);
  o.max_iter = cfg.max_iter.value_or(kGaugeMaxIter);
  return o;
}

ZeroModeSign sign_of(const RunConfig& cfg) { return cfg.sign == "plus" ? ZeroModeSign::kPlus : ZeroModeSign::kMinus; }

json zero_mode_json(const ZeroModeReport& z) {
  return {{"dirac_residual", z.dirac_residual}, {"relative_residual", z.relative_residual},
          {"b_norm", z.b_norm}, {"spinor_quotient", z.spinor_quotient}, {"degenerate", z.degenerate}};
}

Eigen::VectorXd parse_list(const std::string& text, int count, const char* flag) {
  Eigen::VectorXd v(count);
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= count) throw std::invalid_argument(std::string(flag) + " expects " + std::to_string(count) + " values");
    std::size_t used = 0;
    try {
      v(i) = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v(i)))
      throw std::invalid_argument(std::string(flag) + ": cannot parse '" + item + "'");
    ++i;
  }
  if (i != count) throw std::invalid_argument(std::string(flag) + " expects " + std::to_string(count) + " values");
  return v;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.n < 8 || cfg.n % 2 != 0) throw std::invalid_argument("n must be even and >= 8");
  if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) throw std::invalid_argument("box half-width must be positive");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (cfg.max_iter && *cfg.max_iter < 0) throw std::invalid_argument("max-iter must be nonnegative");
  if (!(cfg.eps_reg >= 0.0)) throw std::invalid_argument("eps-reg must be nonnegative");
  if (cfg.w && !(cfg.w->norm() > 0.0)) throw std::invalid_argument("w must be nonzero");
  if (cfg.eta && !(cfg.eta->norm() > 0.0)) throw std::invalid_argument("eta must be nonzero");
  if (cfg.starts < 1) throw std::invalid_argument("starts must be >= 1");
  if (cfg.recenter_every < 0) throw std::invalid_argument("recenter-every must be nonnegative");
  if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
  if (cfg.sign != "minus" && cfg.sign != "plus") throw std::invalid_argument("sign must be minus or plus");
}

int cmd_verify_optimizer(const RunConfig& cfg) {
  const auto start = Clock::now();
  const Grid grid = make_grid(cfg.n, cfg.L);
  const Spinor eta = eta_of(cfg);
  const Eigen::Vector3d w = w_of(cfg);
  const VectorField a = loss_yau_field(w, grid);
  const SpinorField psi = loss_yau_spinor(eta, grid);

  const GaugeResult g = gauge_fix(a, gauge_options(cfg));
  const double a_norm = lp_norm(a, 3.0);
  const double gauge_gradient = lp_norm(gradient(g.phi0), 3.0) / a_norm;
  const QuotientReport q = quotient(a, g, cfg.eps_reg);
  const double lambda = multiplier(a);
  const double el = el_residual(a, lambda, cfg.eps_reg);
  const ZeroModeReport z = zero_mode_residual(a, psi, sign_of(cfg));

  const bool pass_zero = z.relative_residual <= kZeroModeMax && !z.degenerate;
  const bool pass_gauge = g.converged && gauge_gradient <= kGaugeGradientMax;
  const bool pass_el = el <= kElResidualMax;

  json report = report_base(cfg, grid);
  report["w"] = vec(w);
  report["eta"] = spinor_json(eta);
  report["norms"] = {{"a_l3", a_norm},
                     {"psi_l3", lp_norm(psi, 3.0)},
                     {"curl_l32", q.curl_norm},
                     {"seminorm", q.seminorm}};
  report["quotient"] = q.quotient;
  report["quotient_reference"] = 4.0 * std::numbers::pi;
  report["multiplier"] = lambda;
  report["gauge"] = gauge_json(g);
  report["gauge"]["gradient_ratio"] = gauge_gradient;
  report["residuals"] = {{"zero_mode_relative", z.relative_residual},
                         {"el_residual", el},
                         {"el_residual_gauge_fixed", q.el_residual},
                         {"gauge_gradient_ratio", gauge_gradient}};
  report["zero_mode"] = zero_mode_json(z);
  report["thresholds"] = {{"zero_mode_relative", kZeroModeMax},
                          {"gauge_gradient_ratio", kGaugeGradientMax},
                          {"el_residual", kElResidualMax}};
  report["checks"] = {{"zero_mode", pass_zero}, {"gauge", pass_gauge}, {"el_residual", pass_el}};
  const bool pass = pass_zero && pass_gauge && pass_el;
  report["passed"] = pass;
  emit(cfg, report, start);
  return pass ? kExitOk : kExitThreshold;
}

int cmd_minimize(const RunConfig& cfg) {
  const auto start = Clock::now();
  const Grid grid = make_grid(cfg.n, cfg.L);
  MinimizeOptions opts;
  opts.tol = cfg.tol.value_or(kMinimizeTol);
  opts.max_iter = cfg.max_iter.value_or(kMinimizeMaxIter);
  opts.eps_reg = cfg.eps_reg;
  opts.recenter_every = cfg.recenter_every;

  json runs = json::array();
  std::optional<MinimizeTrace> best;
  for (int k = 0; k < cfg.starts; ++k) {
    RunConfig start_cfg = cfg;
    start_cfg.seed = cfg.seed + std::uint64_t(k);
    opts.seed = start_cfg.seed;
    const VectorField a0 = k == 0 || cfg.in.empty() ? input_field(start_cfg, "random-divfree")
                                                    : named_family("random-divfree", grid, w_of(cfg), start_cfg.seed);
    MinimizeTrace t = minimize(a0, opts);
    if (!std::isfinite(t.final_quotient())) throw std::runtime_error("minimize: solver collapse (non-finite quotient)");
    int accepted = 0;
    for (const RecenterEvent& e : t.recenterings) accepted += e.accepted;
    runs.push_back({{"seed", start_cfg.seed},
                    {"initial_quotient", t.initial_quotient()},
                    {"final_quotient", t.final_quotient()},
                    {"final_el_residual", t.rows.back().el_residual},
                    {"multiplier", t.multiplier},
                    {"iterations", t.iterations},
                    {"converged", t.converged},
                    {"line_search_failed", t.line_search_failed},
                    {"recenterings", t.recenterings.size()},
                    {"recenterings_accepted", accepted}});
    if (!best || t.final_quotient() < best->final_quotient()) best = std::move(t);
  }

  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out);
    if (!out) throw std::runtime_error("cannot write " + cfg.out);
    write_trace_csv(out, *best);
  }

  QuotientOptions qo;
  qo.eps_reg = cfg.eps_reg;
  qo.gauge.tol = opts.gauge_tol;
  const double ly_grid = quotient(loss_yau_field(Eigen::Vector3d(0, 0, 1), grid), qo).quotient;
  const double golden = 4.0 * std::numbers::pi;

  json report = report_base(cfg, grid);
  report["options"] = {{"step", opts.step}, {"tol", opts.tol}, {"max_iter", opts.max_iter},
                       {"eps_reg", opts.eps_reg}, {"recenter_every", opts.recenter_every},
                       {"gauge_tol", opts.gauge_tol}};
  report["runs"] = runs;
  report["best_quotient"] = best->final_quotient();
  report["closed_form_quotient"] = golden;
  report["closed_form_quotient_on_grid"] = ly_grid;
  report["best_over_closed_form"] = best->final_quotient() / golden;
  report["best_over_closed_form_on_grid"] = best->final_quotient() / ly_grid;
  report["note"] = "comparison with the closed-form optimizer is reported, not asserted";
  emit(cfg, report, start);
  return kExitOk;
}

int cmd_gauge_fix(const RunConfig& cfg) {
  const auto start = Clock::now();
  const VectorField a = input_field(cfg, "lossyau");
  const GaugeResult g = gauge_fix(a, gauge_options(cfg));
  if (!cfg.out.empty()) save_vf3(cfg.out, g.a_fixed);
  const double a_norm = lp_norm(a, 3.0);
  json report = report_base(cfg, a.grid());
  report["norms"] = {{"a_l3", a_norm}, {"a_fixed_l3", g.seminorm}};
  report["gauge"] = gauge_json(g);
  report["gauge"]["gradient_ratio"] = a_norm > 0.0 ? lp_norm(gradient(g.phi0), 3.0) / a_norm : 0.0;
  report["passed"] = g.converged;
  emit(cfg, report, start);
  return g.converged ? kExitOk : kExitThreshold;
}

int cmd_conformal_check(const RunConfig& cfg) {
  const auto start = Clock::now();
  const VectorField a = input_field(cfg, "lossyau");
  const ConformalReport energy = conformal_energy_check(a, cfg.samples, cfg.seed);
  const GaugeResult g = gauge_fix(a, gauge_options(cfg));
  const ConformalReport semi = seminorm_identity_check(g.a_fixed, cfg.samples, cfg.seed + 1);
  const VectorField partner = random_bump_field(a.grid(), cfg.seed);
  const ConformalReport weighted = weighted_norm_check(a, partner, 2.0, cfg.samples, cfg.seed + 2);

  json report = report_base(cfg, a.grid());
  report["energy"] = conformal_json(energy);
  report["seminorm"] = conformal_json(semi);
  report["weighted_q2"] = conformal_json(weighted);
  report["gauge"] = gauge_json(g);
  report["threshold"] = kConformalGapMax;
  const bool pass = energy.gap < kConformalGapMax && semi.gap < kConformalGapMax && weighted.gap < kConformalGapMax;
  report["passed"] = pass;
  emit(cfg, report, start);
  return pass ? kExitOk : kExitThreshold;
}

int cmd_improved(const RunConfig& cfg) {
  const auto start = Clock::now();
  const VectorField a = input_field(cfg, "random-divfree");
  const ImprovedReport r = improved_ratio(a, gauge_options(cfg));
  const ImprovedReport s = improved_ratio_spinor(loss_yau_spinor(eta_of(cfg), a.grid()));
  json report = report_base(cfg, a.grid());
  report["vector"] = improved_json(r);
  report["spinor"] = improved_json(s);
  const bool pass = std::isfinite(r.ratio) && std::isfinite(s.ratio) && std::isfinite(r.holder_ratio);
  report["passed"] = pass;
  emit(cfg, report, start);
  return pass ? kExitOk : kExitThreshold;
}

int cmd_zero_mode(const RunConfig& cfg) {
  const auto start = Clock::now();
  const Grid grid = make_grid(cfg.n, cfg.L);
  const Spinor eta = eta_of(cfg);
  const Eigen::Vector3d w = w_of(cfg);
  const VectorField a = loss_yau_field(w, grid);
  const SpinorField psi = loss_yau_spinor(eta, grid);
  const ZeroModeReport z = zero_mode_residual(a, psi, sign_of(cfg));
  const ZeroModeReport other =
      zero_mode_residual(a, psi, sign_of(cfg) == ZeroModeSign::kMinus ? ZeroModeSign::kPlus : ZeroModeSign::kMinus);
  json report = report_base(cfg, grid);
  report["w"] = vec(w);
  report["eta"] = spinor_json(eta);
  report["matched"] = (zero_mode_w(eta) - w).norm() <= 1e-12 * w.norm();
  report["zero_mode"] = zero_mode_json(z);
  report["opposite_sign"] = zero_mode_json(other);
  report["passed"] = std::isfinite(z.relative_residual);
  emit(cfg, report, start);
  return std::isfinite(z.relative_residual) ? kExitOk : kExitThreshold;
}

int run_command(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (cfg.command == "verify-optimizer") return cmd_verify_optimizer(cfg);
    if (cfg.command == "minimize") return cmd_minimize(cfg);
    if (cfg.command == "gauge-fix") return cmd_gauge_fix(cfg);
    if (cfg.command == "conformal-check") return cmd_conformal_check(cfg);
    if (cfg.command == "improved") return cmd_improved(cfg);
    if (cfg.command == "zero-mode") return cmd_zero_mode(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  } catch (const Vf3Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"curl-Sobolev quotient toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string w_text, eta_text;
  double tol = 0.0;
  int max_iter = 0;
  bool verbose = false;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"verify-optimizer", "check the closed-form optimizer and its zero mode"},
      {"minimize", "multi-start quotient minimization"},
      {"gauge-fix", "nonlinear gauge fixing of a field"},
      {"conformal-check", "stereographic transport identities"},
      {"improved", "improved-inequality ratios"},
      {"zero-mode", "zero-mode residual of the closed-form pair"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--n", cfg.n, "grid points per axis (even, >= 8)")->capture_default_str();
    sub->add_option("--box", cfg.L, "box half-width L")->capture_default_str();
    sub->add_option("--tol", tol, "tolerance (gauge solver, or EL residual for minimize)");
    sub->add_option("--max-iter", max_iter, "iteration cap");
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--eps-reg", cfg.eps_reg, "curl regularization relative to max |curl A|")->capture_default_str();
    sub->add_option("--w", w_text, "field parameter w as x,y,z");
    sub->add_option("--eta", eta_text, "spinor eta as re1,im1,re2,im2");
    sub->add_option("--in", cfg.in, "input vector field (vf3)");
    sub->add_option("--out", cfg.out, "output path (CSV trace for minimize, vf3 otherwise)");
    sub->add_option("--init", cfg.init, "built-in field: lossyau, gaussian-bump, random-divfree");
    sub->add_option("--json", cfg.json, "write the JSON report here instead of stdout");
    sub->add_option("--starts", cfg.starts, "minimize: number of seeded starts")->capture_default_str();
    sub->add_option("--recenter-every", cfg.recenter_every, "minimize: recentering period (0 = off)")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "conformal-check: Monte Carlo samples")->capture_default_str();
    sub->add_option("--sign", cfg.sign, "zero-mode potential sign: minus or plus")->capture_default_str();
    sub->add_flag("--verbose", verbose, "progress on stderr");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    cfg.command = sub->get_name();
    if (sub->count("--tol")) cfg.tol = tol;
    if (sub->count("--max-iter")) cfg.max_iter = max_iter;
  }
  if (verbose) log::set_level(log::Level::kInfo);
  try {
    if (!w_text.empty()) cfg.w = parse_list(w_text, 3, "--w");
    if (!eta_text.empty()) {
      const Eigen::VectorXd e = parse_list(eta_text, 4, "--eta");
      cfg.eta = Spinor(std::complex<double>(e(0), e(1)), std::complex<double>(e(2), e(3)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return run_command(cfg);
}

}  // namespace curlsob
