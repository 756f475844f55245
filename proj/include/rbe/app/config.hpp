#pragma once

// Run configuration: a flat YAML mapping of keys plus `--set key=value`
// overrides. Every tolerance and grid size is a key; unknown keys are errors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbe/norms.hpp"
#include "rbe/steady.hpp"

namespace rbe::app {

inline constexpr const char* kModes[] = {"solve", "check-boundary", "norms", "oracle", "bench"};

bool valid_mode(const std::string& mode);

struct BoundaryConfig {
  std::string kind{"juttner"};  // juttner | zero
  double T_L{1}, T_R{1};
  double A_L{1}, A_R{1};
  /// Replace A_R by the amplitude that makes the p₁-flux of both sides equal
  /// on the grid.
  bool balance_A_R{false};
};

struct RunConfig {
  std::string mode{"solve"};
  SolverConfig solver;
  BoundaryConfig boundary;
  /// norm_k_list, n_normals and the plane rule; the weight k is solver.k.
  NormOptions norms;

  std::string out{"rbe-out"};
  /// Field file read by the norms mode; empty means <out>/field.bin.
  std::string field;
  bool csv{false};
  /// 0: keep the OpenMP default.
  int threads{0};
  std::uint64_t seed{20240611};
  /// Random pairs per sampled oracle row.
  std::size_t oracle_samples{10000};
  std::vector<std::size_t> bench_radial{8, 12, 16};
  int bench_repeats{3};

  /// ConfigError naming the first offending key.
  void validate() const;
  /// The boundary profile described by `boundary`, with A_R balanced if asked.
  BoundaryProfile boundary_profile() const;
  std::string field_path() const;
};

/// Every accepted key, in the order used by the report's config echo.
const std::vector<std::string>& config_keys();

/// Defaults, then the YAML file (if any), then the overrides in order.
/// Overrides are "key=value" with the value parsed as a YAML scalar or flow
/// sequence. ConfigError (with key()) on unknown keys, type mismatches and
/// constraint violations; ConfigError with an empty key for unreadable files.
RunConfig parse_config(const std::optional<std::string>& path,
                       const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& yaml_text,
                            const std::vector<std::string>& overrides = {});

}  // namespace rbe::app
