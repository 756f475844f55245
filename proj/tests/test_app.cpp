#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rbe/app/config.hpp"
#include "rbe/app/field_io.hpp"
#include "rbe/app/run.hpp"

using namespace rbe;
using namespace rbe::app;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rbe_test_app_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kSmall = {"n_x=9",          "pmax=8",          "n_radial=8",
                                         "n_polar=4",      "n_azimuth=8",     "sphere_polar=6",
                                         "sphere_azimuth=12", "n_normals=16", "A_L=0.02",
                                         "T_R=1.25",       "balance_A_R=true", "c1=4"};

RunConfig small(const std::string& mode, const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> o = kSmall;
  o.push_back("plane_radial=16");
  o.push_back("plane_angular=24");
  o.insert(o.end(), extra.begin(), extra.end());
  RunConfig c = parse_config_text("", o);
  c.mode = mode;
  c.out = out.string();
  return c;
}

std::string error_key(const std::string& yaml, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config_text(yaml, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "ok";
}

}  // namespace

TEST_CASE("configuration") {
  const RunConfig d = parse_config(std::nullopt);
  CHECK(d.mode == "solve");
  CHECK(d.solver.k == 0.1);
  CHECK(d.solver.tol == 1e-6);
  CHECK(d.solver.n_x == 33u);
  CHECK(d.boundary.kind == "juttner");
  CHECK(d.seed == 20240611u);
  CHECK(d.norms.k_list == std::vector<double>{0.05, 0.1, 0.2});

  const RunConfig k = parse_config_text("", {"k=0.25"});
  CHECK(k.solver.k == 0.25);
  RunConfig back = k;
  back.solver.k = d.solver.k;
  CHECK(Json(back.solver.tol) == Json(d.solver.tol));
  CHECK(back.solver.n_x == d.solver.n_x);
  CHECK(back.boundary.A_L == d.boundary.A_L);

  CHECK(parse_config_text("tol: 1e-8\nn_x: 17\n", {"n_x=21"}).solver.n_x == 21u);
  CHECK(parse_config_text("norm_k_list: [0.1, 0.3]\n").norms.k_list == std::vector<double>{0.1, 0.3});
  CHECK(error_key("", {"tol=-1"}) == "tol");
  CHECK(error_key("tol: -1\n") == "tol");
  CHECK(error_key("no_such_key: 1\n") == "no_such_key");
  CHECK(error_key("", {"n_x=abc"}) == "n_x");
  CHECK(error_key("", {"n_x"}) != "ok");
  CHECK(error_key("", {"boundary=maxwell"}) == "boundary");
  CHECK(error_key("- 1\n- 2\n") != "ok");
  CHECK_THROWS_AS(parse_config(std::string("/nonexistent/rbe.yaml")), ConfigError);
  for (const char* m : kModes) CHECK(valid_mode(m));
  CHECK_FALSE(valid_mode("plot"));

  // every key in the echo is accepted back
  const auto& keys = config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "c_kernel") != keys.end());
  CHECK(std::find(keys.begin(), keys.end(), "interp_theta") != keys.end());
}

TEST_CASE("field files") {
  const fs::path dir = scratch("field");
  fs::create_directories(dir);
  const auto g = std::make_shared<const PhaseGrid>(5, MomentumQuadrature(6.0, 3, 2, 4));
  DistField f(g);
  double v = 0.1;
  for (double& x : f.values()) {
    v *= 1.37;
    x = v - std::floor(v);
  }
  write_field((dir / "f.bin").string(), f);
  const DistField r = read_field((dir / "f.bin").string());
  CHECK(r.values() == f.values());
  CHECK(r.n_x() == 5u);
  CHECK(r.grid().momentum().nodes().size() == g->momentum().nodes().size());
  for (std::size_t i = 0; i < r.n_p(); ++i) CHECK(r.grid().momentum().node(i) == g->momentum().node(i));

  write_field_csv((dir / "f.csv").string(), f);
  std::ifstream csv(dir / "f.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines >= f.values().size());

  // truncation and bad magic are rejected
  const std::string bytes = slurp(dir / "f.bin");
  std::ofstream(dir / "short.bin", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(read_field((dir / "short.bin").string()), Error);
  std::ofstream(dir / "magic.bin", std::ios::binary) << "X" << bytes.substr(1);
  CHECK_THROWS_AS(read_field((dir / "magic.bin").string()), Error);
  CHECK_THROWS_AS(read_field((dir / "missing.bin").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("oracle mode") {
  const fs::path dir = scratch("oracle");
  RunConfig c = small("oracle", dir, {"oracle_samples=2000"});
  const RunResult r = run(c);
  CHECK(r.exit_code == kExitOk);
  const Json rep = Json::parse(r.report);
  CHECK(rep["all_pass"] == true);
  CHECK(rep["oracles"].size() > 10u);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "timings.json"));
  fs::remove_all(dir);
}

TEST_CASE("zero inflow") {
  const fs::path dir = scratch("zero");
  const RunResult r = run(small("solve", dir, {"boundary=zero"}));
  REQUIRE(r.exit_code == kExitOk);
  const Json rep = Json::parse(r.report);
  CHECK(rep["trace"]["iterations"] == 1);
  CHECK(rep["trace"]["converged"] == true);
  const DistField f = read_field((dir / "field.bin").string());
  CHECK(f.is_zero());
  // ratios are undefined for a zero field
  CHECK(rep["norms"]["r1"].is_null());
  fs::remove_all(dir);
}

TEST_CASE("solve, norms and determinism") {
  const fs::path a = scratch("solve_a"), b = scratch("solve_b");
  const RunResult ra = run(small("solve", a, {"csv=true"}));
  REQUIRE(ra.exit_code == kExitOk);
  const RunResult rb = run(small("solve", b));
  REQUIRE(rb.exit_code == kExitOk);
  CHECK(fs::exists(a / "field.csv"));
  CHECK_FALSE(fs::exists(b / "field.csv"));

  Json ja = Json::parse(ra.report), jb = Json::parse(rb.report);
  CHECK(ja["config"]["csv"] == true);
  ja["config"].erase("csv");
  jb["config"].erase("csv");
  CHECK(ja == jb);
  CHECK(slurp(a / "report.json") == ra.report);
  CHECK(slurp(a / "field.bin") == slurp(b / "field.bin"));
  CHECK(ja["trace"]["fixed_point_residual"].get<double>() < 2e-6);
  CHECK(ja["boundary"]["compatibility_max_abs"].get<double>() < 1e-12);

  // the norms mode on the saved field reproduces the in-run values
  RunConfig nc = small("norms", a);
  const RunResult rn = run(nc);
  REQUIRE(rn.exit_code == kExitOk);
  const Json jn = Json::parse(rn.report);
  CHECK(jn["norms"] == ja["norms"]);

  // a missing field file is an I/O error, not a crash
  RunConfig miss = small("norms", scratch("missing"));
  miss.field = (scratch("missing") / "nope.bin").string();
  CHECK(run(miss).exit_code == kExitError);

  // an iteration budget that is too small reports non-convergence
  const fs::path c = scratch("budget");
  const RunResult rc = run(small("solve", c, {"max_iter=2", "tol=1e-12"}));
  CHECK(rc.exit_code == kExitNotConverged);
  CHECK(fs::exists(c / "report.json"));
  CHECK(fs::exists(c / "field.bin"));
  CHECK(Json::parse(rc.report)["trace"]["converged"] == false);

  // invalid configuration never throws out of run()
  RunConfig bad = small("solve", scratch("bad"));
  bad.solver.tol = -1;
  CHECK(run(bad).exit_code == kExitConfig);
  bad = small("plot", scratch("bad"));
  CHECK(run(bad).exit_code == kExitConfig);

  for (const auto& p : {a, b, c, scratch("bad"), scratch("missing")}) fs::remove_all(p);
}

TEST_CASE("check-boundary mode") {
  const fs::path dir = scratch("boundary");
  const RunResult r = run(small("check-boundary", dir));
  const Json rep = Json::parse(r.report);
  CHECK(rep["boundary"]["nonnegative"] == true);
  CHECK(r.exit_code == (rep["boundary"]["hypotheses_hold"] == true ? kExitOk : kExitOracle));
  fs::remove_all(dir);
}
