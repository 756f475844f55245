#include <cmath>
#include <fstream>

#include "internal.hpp"
#include "rbe/errors.hpp"

namespace rbe::app {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vec_json(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(num(x));
  return j;
}

Json vec3_json(const Vec3& v) { return Json::array({num(v.x), num(v.y), num(v.z)}); }

Json trace_json(const ConvergenceTrace& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["iteration"] = r.iteration;
    row["residual"] = num(r.residual);
    row["norm"] = num(r.norm);
    row["ratio"] = r.ratio ? num(*r.ratio) : Json(nullptr);
    row["min_L_over_sqrt_p0"] = num(r.min_L_over_sqrt_p0);
    row["min_L"] = num(r.min_L);
    row["max_L"] = num(r.max_L);
    row["norm_LinfL1"] = num(r.norm_LinfL1);
    row["norm_L1Linf"] = num(r.norm_L1Linf);
    row["envelope_gap"] = num(r.envelope_gap);
    row["envelope_guaranteed"] = r.envelope_guaranteed;
    rows.push_back(std::move(row));
  }
  Json j;
  j["converged"] = t.converged;
  j["iterations"] = t.iterations;
  j["fixed_point_residual"] = num(t.fixed_point_residual);
  j["rows"] = std::move(rows);
  return j;
}

Json norms_json(const NormReport& r) {
  Json j;
  j["sup_label"] = r.sup_label;
  j["k"] = num(r.k);
  j["norm_LinfL1"] = num(r.norm_LinfL1);
  j["norm_L1Linf"] = num(r.norm_L1Linf);
  j["norm_main"] = num(r.norm_main);
  j["norm_inv"] = {{"value", num(r.norm_inv.value)}, {"argmax", vec3_json(r.norm_inv.argmax)}};
  j["norm_hyp"] = {{"value", num(r.norm_hyp.value)}, {"normal", vec3_json(r.norm_hyp.normal)}};
  // The ratios are defined only for a nonzero field; norm_report leaves them
  // at 0 otherwise.
  if (r.norm_main > 0.0) {
    j["r1"] = num(r.r1);
    Json r2 = Json::array();
    for (const auto& [k, v] : r.r2) r2.push_back({{"k", num(k)}, {"value", num(v)}});
    j["r2"] = std::move(r2);
    j["r_hyp"] = num(r.r_hyp);
  } else {
    j["r1"] = nullptr;
    j["r2"] = nullptr;
    j["r_hyp"] = nullptr;
  }
  return j;
}

void PhaseTimer::start(std::string name) {
  if (!current_.empty()) stop();
  current_ = std::move(name);
  t0_ = Clock::now();
}

void PhaseTimer::stop() {
  if (current_.empty()) return;
  done_.emplace_back(current_, std::chrono::duration<double>(Clock::now() - t0_).count());
  current_.clear();
}

Json PhaseTimer::json() const {
  Json j;
  double total = 0.0;
  for (const auto& [name, s] : done_) {
    j[name] = s;
    total += s;
  }
  j["total"] = total;
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace rbe::app
