// rbe-slab <mode> [--config PATH] [--set key=value ...] [--out DIR] [--threads N] [--seed S]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbe/app/config.hpp"
#include "rbe/app/run.hpp"
#include "rbe/errors.hpp"

int main(int argc, char** argv) {
  using namespace rbe::app;

  CLI::App cli{"Steady relativistic Boltzmann solver on the slab [0, 1]"};
  std::string mode;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  int threads = 0;
  std::uint64_t seed = 0;
  bool quiet = false;

  cli.add_option("mode", mode, "solve | check-boundary | norms | oracle | bench")->required();
  cli.add_option("--config", config_path, "YAML file of key: value settings");
  cli.add_option("--set", sets, "override one key, e.g. --set k=0.2 (repeatable)");
  auto* out_opt = cli.add_option("--out", out, "output directory");
  auto* threads_opt =
      cli.add_option("--threads", threads, "worker threads (default: $RBE_SLAB_THREADS)")
          ->check(CLI::Range(1, 4096));
  auto* seed_opt = cli.add_option("--seed", seed, "seed for sampled checks");
  cli.add_flag("-q,--quiet", quiet, "no progress output");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!valid_mode(mode)) throw rbe::ConfigError("unknown mode '" + mode + "'", "mode");
    cfg = parse_config(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path),
                       sets);
    cfg.mode = mode;
    if (*out_opt) cfg.out = out;
    if (*seed_opt) cfg.seed = seed;
    // --threads, then the config file, then the environment
    if (*threads_opt) cfg.threads = threads;
    else if (cfg.threads == 0) cfg.threads = threads_from_env();
    cfg.validate();
  } catch (const rbe::ConfigError& e) {
    std::cerr << "rbe-slab: " << e.what() << '\n';
    return kExitConfig;
  }

  LogFn log;
  if (!quiet) log = [](const std::string& s) { std::cerr << s << '\n'; };
  const RunResult res = run(cfg, log);
  if (!res.message.empty()) std::cerr << "rbe-slab: " << res.message << '\n';
  if (res.exit_code == kExitOk && !quiet) std::cerr << "wrote " << cfg.out << "/report.json\n";
  return res.exit_code;
}
