#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curlsob/closed_forms.hpp"
#include "curlsob/commands.hpp"
#include "curlsob/families.hpp"
#include "curlsob/vf3.hpp"
#include "support.hpp"

using namespace curlsob;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "curlsob_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "curlsob");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::size_t error_offset(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_vf3<VectorField>(in);
  } catch (const Vf3Error& e) {
    return e.offset();
  }
  FAIL("no Vf3Error");
  return 0;
}

std::string encode(const VectorField& f) {
  std::ostringstream os;
  write_vf3(os, f);
  return os.str();
}

}  // namespace

TEST_CASE("vf3 round trip for all field kinds") {
  const Grid g = make_grid(8, 2.5);
  const VectorField v = random_bump_field(g, 1);
  ScalarField s = random_bump_scalar(g, 2);
  const SpinorField psi = loss_yau_spinor(Spinor(std::complex<double>(0.5, 1), std::complex<double>(-2, 0.25)), g);

  std::stringstream sv, ss, sp;
  write_vf3(sv, v);
  write_vf3(ss, s);
  write_vf3(sp, psi);
  const VectorField v2 = read_vf3<VectorField>(sv);
  const ScalarField s2 = read_vf3<ScalarField>(ss);
  const SpinorField psi2 = read_vf3<SpinorField>(sp);
  CHECK(v2.grid().n() == 8);
  CHECK(v2.grid().box_half_width() == 2.5);
  CHECK((v2.values() - v.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s2.values() - s.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((psi2.values() - psi.values()).cwiseAbs().maxCoeff() == 0.0);

  // Header line, then exactly n^3 * components * 8 bytes.
  const std::string bytes = encode(v);
  const std::size_t nl = bytes.find('\n');
  CHECK(bytes.size() - nl - 1 == std::size_t(8 * 8 * 8 * 3 * 8));
  const auto header = nlohmann::json::parse(bytes.substr(0, nl));
  CHECK(header["kind"] == "vector");
  CHECK(header["n"] == 8);
  CHECK(header["version"] == 1);
  // Little-endian float64: first sample of the first site.
  double first = 0;
  std::memcpy(&first, bytes.data() + nl + 1, 8);
  CHECK(first == v.values()(0));

  const fs::path p = scratch("rt.vf3");
  save_vf3(p, v);
  CHECK((load_vf3<VectorField>(p).values() - v.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(load_vf3<VectorField>(scratch("missing.vf3")), std::runtime_error);
}

TEST_CASE("vf3 rejects malformed input at the first bad byte") {
  const Grid g = make_grid(8, 2.0);
  const std::string good = encode(random_bump_field(g, 3));
  const std::size_t header_bytes = good.find('\n') + 1;
  const std::string data = good.substr(header_bytes);

  // Truncated and trailing data.
  CHECK(error_offset(good.substr(0, good.size() - 5)) == good.size() - 5);
  CHECK(error_offset(good + "x") == good.size());
  CHECK(error_offset(good.substr(0, header_bytes)) == header_bytes);

  // A NaN in the 37th sample.
  std::string bad = good;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(bad.data() + header_bytes + 8 * 37, &nan, 8);
  CHECK(error_offset(bad) == header_bytes + 8 * 37);

  // Header problems point into the header line.
  const std::string h1 = R"({"kind":"vector","n":8,"L":2.0,"version":1)";  // missing brace
  CHECK(error_offset(h1 + "\n" + data) == h1.size());
  const std::string h2 = R"({"kind":"tensor","n":8,"L":2.0,"version":1})";
  CHECK(error_offset(h2 + "\n" + data) == h2.find("\"kind\""));
  const std::string h3 = R"({"kind":"vector","n":7,"L":2.0,"version":1})";
  CHECK(error_offset(h3 + "\n" + data) == h3.find("\"n\""));
  const std::string h4 = R"({"kind":"vector","n":8,"L":-2.0,"version":1})";
  CHECK(error_offset(h4 + "\n" + data) == h4.find("\"L\""));
  const std::string h5 = R"({"kind":"vector","n":8,"L":2.0,"version":9})";
  CHECK(error_offset(h5 + "\n" + data) == h5.find("\"version\""));
  const std::string h6 = R"({"kind":"vector","n":8,"L":2.0})";
  CHECK(error_offset(h6 + "\n" + data) == h6.size() - 1);
  const std::string h7 = R"({"kind":"vector",x"n":8})";
  CHECK(error_offset(h7 + "\n" + data) == h7.find('x'));
  CHECK(error_offset(R"({"kind":"vector"})") == 17);  // no newline: end of input

  // Kind mismatch.
  std::istringstream in(good);
  CHECK_THROWS_AS(read_vf3<ScalarField>(in), Vf3Error);
  try {
    std::istringstream again(good);
    read_vf3<SpinorField>(again);
  } catch (const Vf3Error& e) {
    CHECK(std::string(e.what()).find("at byte 0") != std::string::npos);
  }
}

TEST_CASE("command validation and operational errors exit 1") {
  CHECK(run({"verify-optimizer", "--w", "0,0,0"}) == kExitError);
  CHECK(run({"zero-mode", "--eta", "0,0,0,0"}) == kExitError);
  CHECK(run({"zero-mode", "--n", "7"}) == kExitError);
  CHECK(run({"zero-mode", "--box", "-1"}) == kExitError);
  CHECK(run({"zero-mode", "--w", "1,2"}) == kExitError);
  CHECK(run({"zero-mode", "--sign", "sideways"}) == kExitError);
  CHECK(run({"minimize", "--init", "nosuchfield", "--n", "8"}) == kExitError);
  CHECK(run({"no-such-command"}) == kExitError);
  CHECK(run({"gauge-fix", "--no-such-flag"}) == kExitError);

  const fs::path bad = scratch("bad.vf3");
  {
    std::ofstream out(bad, std::ios::binary);
    out << R"({"kind":"vector","n":8,"L":2.0,"version":1})" << '\n' << "short";
  }
  CHECK(run({"gauge-fix", "--in", bad.string()}) == kExitError);
  CHECK(run({"gauge-fix", "--in", scratch("absent.vf3").string()}) == kExitError);
  CHECK(run({"--version"}) == kExitOk);
}

TEST_CASE("verify-optimizer at toy resolution fails thresholds but still reports") {
  const fs::path js = scratch("verify.json");
  fs::remove(js);
  CHECK(run({"verify-optimizer", "--n", "16", "--box", "2", "--json", js.string()}) == kExitThreshold);
  const auto r = read_json(js);
  CHECK(r["tool"] == "curlsob");
  CHECK(r["version"] == kVersion);
  CHECK(r["config"]["n"] == 16);
  CHECK(r["grid"]["L"] == 2.0);
  CHECK(r["passed"] == false);
  CHECK(r["quotient"].get<double>() > 0.0);
  CHECK(r["residuals"].contains("zero_mode_relative"));
  CHECK(r["residuals"].contains("el_residual"));
  CHECK(r.contains("wall_time_s"));
}

TEST_CASE("zero-mode with a matched pair") {
  const fs::path js = scratch("zero.json");
  CHECK(run({"zero-mode", "--n", "16", "--box", "4", "--eta", "1,0,0,0", "--json", js.string()}) == kExitOk);
  const auto r = read_json(js);
  CHECK(r["matched"] == true);
  // Scaling eta keeps the pair matched.
  CHECK(run({"zero-mode", "--n", "16", "--box", "4", "--eta", "0,2,1,0", "--json", js.string()}) == kExitOk);
  CHECK(read_json(js)["matched"] == true);
}

TEST_CASE("gauge-fix writes the fixed field") {
  const fs::path js = scratch("gauge.json"), out = scratch("fixed.vf3");
  CHECK(run({"gauge-fix", "--n", "16", "--box", "4", "--tol", "1e-6", "--init", "lossyau", "--out", out.string(),
             "--json", js.string()}) == kExitOk);
  const auto r = read_json(js);
  CHECK(r["gauge"]["converged"] == true);
  const VectorField a = load_vf3<VectorField>(out);
  CHECK(a.grid().n() == 16);

  // Feeding the output back in converges immediately to the same field.
  const fs::path out2 = scratch("fixed2.vf3");
  CHECK(run({"gauge-fix", "--in", out.string(), "--tol", "1e-6", "--out", out2.string(), "--json", js.string()}) == kExitOk);
  CHECK(max_abs(load_vf3<VectorField>(out2) - a) < 1e-4 * max_abs(a));
}

TEST_CASE("minimize: deterministic trace and max-iter 0") {
  const fs::path c1 = scratch("t1.csv"), c2 = scratch("t2.csv"), js = scratch("min.json");
  const std::vector<std::string> args = {"minimize", "--n", "16", "--box", "4", "--max-iter", "4", "--seed", "42",
                                         "--starts", "2", "--json", js.string(), "--out"};
  auto a1 = args, a2 = args;
  a1.push_back(c1.string());
  a2.push_back(c2.string());
  CHECK(run(a1) == kExitOk);
  CHECK(run(a2) == kExitOk);
  const std::string t1 = slurp(c1);
  CHECK(t1.rfind("iteration,quotient,el_residual,step\n", 0) == 0);
  CHECK(t1 == slurp(c2));
  CHECK(read_json(js)["runs"].size() == 2);

  CHECK(run({"minimize", "--n", "16", "--box", "4", "--max-iter", "0", "--out", c1.string(), "--json", js.string()}) == kExitOk);
  std::istringstream lines(slurp(c1));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 2);  // header + initial state
}
