#include "rbe/app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "internal.hpp"

namespace rbe::app {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what, key);
}

double get_double(const YAML::Node& n, const std::string& key) {
  double v = 0;
  if (!n.IsScalar() || !YAML::convert<double>::decode(n, v)) bad(key, "expected a number");
  if (!std::isfinite(v)) bad(key, "must be finite");
  return v;
}

long long get_int(const YAML::Node& n, const std::string& key) {
  long long v = 0;
  if (!n.IsScalar() || !YAML::convert<long long>::decode(n, v)) bad(key, "expected an integer");
  return v;
}

std::size_t get_count(const YAML::Node& n, const std::string& key) {
  const long long v = get_int(n, key);
  if (v < 0) bad(key, "must be >= 0");
  return static_cast<std::size_t>(v);
}

bool get_bool(const YAML::Node& n, const std::string& key) {
  bool v = false;
  if (!n.IsScalar() || !YAML::convert<bool>::decode(n, v)) bad(key, "expected true or false");
  return v;
}

std::string get_string(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) bad(key, "expected a string");
  return n.Scalar();
}

template <class T, class Get>
std::vector<T> get_list(const YAML::Node& n, const std::string& key, Get get) {
  std::vector<T> out;
  if (n.IsScalar()) {
    out.push_back(get(n, key));
    return out;
  }
  if (!n.IsSequence()) bad(key, "expected a list");
  for (const auto& e : n) out.push_back(get(e, key));
  return out;
}

struct Key {
  std::string name;
  std::function<void(const YAML::Node&, RunConfig&)> set;
  std::function<Json(const RunConfig&)> get;
};

// Order here is the order of the report's config echo.
const std::vector<Key>& table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
#define RBE_DOUBLE(NAME, FIELD)                                                            \
  k.push_back({NAME, [](const YAML::Node& n, RunConfig& c) { c.FIELD = get_double(n, NAME); }, \
               [](const RunConfig& c) { return Json(c.FIELD); }})
#define RBE_COUNT(NAME, FIELD)                                                            \
  k.push_back({NAME, [](const YAML::Node& n, RunConfig& c) { c.FIELD = get_count(n, NAME); }, \
               [](const RunConfig& c) { return Json(c.FIELD); }})
    RBE_DOUBLE("k", solver.k);
    RBE_DOUBLE("c1", solver.c1);
    RBE_DOUBLE("damping", solver.damping);
    RBE_DOUBLE("tol", solver.tol);
    k.push_back({"max_iter",
                 [](const YAML::Node& n, RunConfig& c) {
                   const long long v = get_int(n, "max_iter");
                   if (v < 1 || v > std::numeric_limits<int>::max()) bad("max_iter", "must be >= 1");
                   c.solver.max_iter = static_cast<int>(v);
                 },
                 [](const RunConfig& c) { return Json(c.solver.max_iter); }});
    RBE_COUNT("n_x", solver.n_x);
    RBE_DOUBLE("pmax", solver.pmax);
    RBE_COUNT("n_radial", solver.n_radial);
    RBE_COUNT("n_polar", solver.n_polar);
    RBE_COUNT("n_azimuth", solver.n_azimuth);
    RBE_COUNT("sphere_polar", solver.sphere_polar);
    RBE_COUNT("sphere_azimuth", solver.sphere_azimuth);
    RBE_DOUBLE("interp_theta", solver.interp_theta);
    RBE_DOUBLE("c_kernel", solver.kernel.c_kernel);
    RBE_DOUBLE("gamma_ang", solver.kernel.gamma_ang);
    k.push_back({"boundary",
                 [](const YAML::Node& n, RunConfig& c) { c.boundary.kind = get_string(n, "boundary"); },
                 [](const RunConfig& c) { return Json(c.boundary.kind); }});
    RBE_DOUBLE("T_L", boundary.T_L);
    RBE_DOUBLE("T_R", boundary.T_R);
    RBE_DOUBLE("A_L", boundary.A_L);
    RBE_DOUBLE("A_R", boundary.A_R);
    k.push_back({"balance_A_R",
                 [](const YAML::Node& n, RunConfig& c) {
                   c.boundary.balance_A_R = get_bool(n, "balance_A_R");
                 },
                 [](const RunConfig& c) { return Json(c.boundary.balance_A_R); }});
    k.push_back({"norm_k_list",
                 [](const YAML::Node& n, RunConfig& c) {
                   c.norms.k_list = get_list<double>(n, "norm_k_list", get_double);
                 },
                 [](const RunConfig& c) { return Json(c.norms.k_list); }});
    RBE_COUNT("n_normals", norms.n_normals);
    RBE_COUNT("plane_radial", norms.plane.n_radial);
    RBE_COUNT("plane_angular", norms.plane.n_angular);
    k.push_back({"csv", [](const YAML::Node& n, RunConfig& c) { c.csv = get_bool(n, "csv"); },
                 [](const RunConfig& c) { return Json(c.csv); }});
    k.push_back({"seed",
                 [](const YAML::Node& n, RunConfig& c) {
                   c.seed = static_cast<std::uint64_t>(get_count(n, "seed"));
                 },
                 [](const RunConfig& c) { return Json(c.seed); }});
    RBE_COUNT("oracle_samples", oracle_samples);
    k.push_back({"bench_radial",
                 [](const YAML::Node& n, RunConfig& c) {
                   c.bench_radial = get_list<std::size_t>(n, "bench_radial", get_count);
                 },
                 [](const RunConfig& c) { return Json(c.bench_radial); }});
    k.push_back({"bench_repeats",
                 [](const YAML::Node& n, RunConfig& c) {
                   const long long v = get_int(n, "bench_repeats");
                   if (v < 1 || v > 1000) bad("bench_repeats", "must lie in [1, 1000]");
                   c.bench_repeats = static_cast<int>(v);
                 },
                 [](const RunConfig& c) { return Json(c.bench_repeats); }});
    // Run plumbing: accepted in files, not echoed (they do not change results).
    k.push_back({"threads",
                 [](const YAML::Node& n, RunConfig& c) {
                   const long long v = get_int(n, "threads");
                   if (v < 0 || v > 4096) bad("threads", "must lie in [0, 4096]");
                   c.threads = static_cast<int>(v);
                 },
                 nullptr});
    k.push_back({"out", [](const YAML::Node& n, RunConfig& c) { c.out = get_string(n, "out"); },
                 nullptr});
    k.push_back({"field", [](const YAML::Node& n, RunConfig& c) { c.field = get_string(n, "field"); },
                 nullptr});
#undef RBE_DOUBLE
#undef RBE_COUNT
    return k;
  }();
  return keys;
}

const Key* find_key(const std::string& name) {
  for (const auto& k : table())
    if (k.name == name) return &k;
  return nullptr;
}

RunConfig build(const YAML::Node& root, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (root && !root.IsNull()) {
    if (!root.IsMap()) throw ConfigError("config file must be a mapping of key: value");
    for (const auto& kv : root) {
      const std::string name = kv.first.as<std::string>();
      const Key* key = find_key(name);
      if (!key) bad(name, "unknown key");
      key->set(kv.second, cfg);
    }
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + ov + "' is not key=value");
    const std::string name = ov.substr(0, eq);
    const Key* key = find_key(name);
    if (!key) bad(name, "unknown key");
    YAML::Node value;
    try {
      value = YAML::Load(ov.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      bad(name, std::string("unparsable value: ") + e.what());
    }
    if (!value || value.IsNull()) bad(name, "missing value");
    key->set(value, cfg);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

bool valid_mode(const std::string& mode) {
  for (const char* m : kModes)
    if (mode == m) return true;
  return false;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : table()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void RunConfig::validate() const {
  if (!valid_mode(mode)) throw ConfigError("unknown mode '" + mode + "'", "mode");
  solver.validate();
  if (boundary.kind != "juttner" && boundary.kind != "zero")
    bad("boundary", "must be juttner or zero");
  if (!(boundary.T_L > 0.0)) bad("T_L", "must be > 0");
  if (!(boundary.T_R > 0.0)) bad("T_R", "must be > 0");
  if (!(boundary.A_L >= 0.0)) bad("A_L", "must be >= 0");
  if (!(boundary.A_R >= 0.0)) bad("A_R", "must be >= 0");
  if (norms.k_list.empty()) bad("norm_k_list", "must not be empty");
  for (double kk : norms.k_list)
    if (!(kk > 0.0)) bad("norm_k_list", "entries must be > 0");
  if (norms.n_normals < 3) bad("n_normals", "must be >= 3");
  if (norms.plane.n_radial < 1) bad("plane_radial", "must be >= 1");
  if (norms.plane.n_angular < 3) bad("plane_angular", "must be >= 3");
  if (oracle_samples < 1) bad("oracle_samples", "must be >= 1");
  if (bench_radial.empty()) bad("bench_radial", "must not be empty");
  for (std::size_t n : bench_radial)
    if (n < 1 || n > 64) bad("bench_radial", "entries must lie in [1, 64]");
  if (out.empty()) bad("out", "must not be empty");
}

BoundaryProfile RunConfig::boundary_profile() const {
  if (boundary.kind == "zero") return BoundaryProfile::zero();
  double a_r = boundary.A_R;
  if (boundary.balance_A_R) {
    const MomentumQuadrature quad(solver.pmax, solver.n_radial, solver.n_polar, solver.n_azimuth);
    a_r = balanced_right_amplitude(boundary.A_L, boundary.T_L, boundary.T_R, quad);
  }
  return BoundaryProfile::juttner(boundary.A_L, boundary.T_L, a_r, boundary.T_R);
}

std::string RunConfig::field_path() const { return field.empty() ? out + "/field.bin" : field; }

RunConfig parse_config_text(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  return build(root, overrides);
}

RunConfig parse_config(const std::optional<std::string>& path,
                       const std::vector<std::string>& overrides) {
  if (!path) return build(YAML::Node(), overrides);
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot read config file " + *path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

nlohmann::ordered_json config_echo(const RunConfig& cfg) {
  Json j;
  j["mode"] = cfg.mode;
  for (const auto& k : table())
    if (k.get) j[k.name] = k.get(cfg);
  if (cfg.boundary.kind == "juttner")
    j["A_R_effective"] = cfg.boundary_profile().A_R;
  return j;
}

}  // namespace rbe::app
