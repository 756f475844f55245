#include <chrono>

#include <omp.h>

#include "internal.hpp"

namespace rbe::app {

namespace {

template <class F>
double seconds(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// Per momentum size n: grid n × n_polar × n, the configured x grid and sphere.
// Times the first loss call (which builds the ring tables), then the mean
// over bench_repeats of loss, gain, sweep and one full application of A.
Json bench_table(const RunConfig& cfg, const LogFn& log) {
  Json rows = Json::array();
  const BoundaryProfile bp = cfg.boundary_profile();
  for (std::size_t n : cfg.bench_radial) {
    SolverConfig sc = cfg.solver;
    sc.n_radial = n;
    sc.n_azimuth = n;
    double t_setup = 0;
    std::unique_ptr<SlabOperator> A;
    t_setup = seconds([&] { A = std::make_unique<SlabOperator>(sc, bp); });
    const DistField f = initial_field(A->grid(), A->samples(), sc.c1);

    DistField loss(A->grid()), gain(A->grid());
    const double t_first = seconds([&] { loss = A->collision().loss(f); });
    double t_loss = 0, t_gain = 0, t_sweep = 0, t_apply = 0;
    for (int r = 0; r < cfg.bench_repeats; ++r) {
      t_loss += seconds([&] { loss = A->collision().loss(f); });
      t_gain += seconds([&] { gain = A->collision().gain(f, f); });
      t_sweep += seconds([&] { (void)A->sweep(loss, gain); });
      t_apply += seconds([&] { (void)A->apply(f); });
    }
    const double reps = cfg.bench_repeats;
    Json row;
    row["n_radial"] = n;
    row["n_polar"] = sc.n_polar;
    row["n_azimuth"] = n;
    row["momentum_nodes"] = A->grid()->n_p();
    row["n_x"] = sc.n_x;
    row["sphere_nodes"] = sc.sphere_polar * sc.sphere_azimuth;
    row["ring_tables"] = A->collision().ring_tables_available();
    row["setup_s"] = t_setup;
    row["first_loss_s"] = t_first;
    row["loss_s"] = t_loss / reps;
    row["gain_s"] = t_gain / reps;
    row["sweep_s"] = t_sweep / reps;
    row["apply_s"] = t_apply / reps;
    if (log)
      log("bench n_radial=" + std::to_string(n) + " apply " + std::to_string(t_apply / reps) + " s");
    rows.push_back(std::move(row));
  }
  Json j;
  j["threads"] = omp_get_max_threads();
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace rbe::app
