#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rbe/app/config.hpp"
#include "rbe/app/run.hpp"

namespace rbe::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "rbe-slab-report/1";

Json config_echo(const RunConfig& cfg);

// Non-finite values become null so that every number in a report is finite.
Json num(double v);
Json vec_json(const std::vector<double>& v);
template <std::size_t N>
Json arr_json(const std::array<double, N>& a) {
  return vec_json(std::vector<double>(a.begin(), a.end()));
}
Json vec3_json(const Vec3& v);
Json trace_json(const ConvergenceTrace& t);
Json norms_json(const NormReport& r);

/// Wall-clock phases, written to timings.json next to the report.
class PhaseTimer {
 public:
  void start(std::string name);
  void stop();
  Json json() const;

 private:
  using Clock = std::chrono::steady_clock;
  std::vector<std::pair<std::string, double>> done_;
  std::string current_;
  Clock::time_point t0_;
};

void write_json(const std::string& path, const Json& j);

Json oracle_table(const RunConfig& cfg, bool& all_pass);
Json bench_table(const RunConfig& cfg, const LogFn& log);

}  // namespace rbe::app
