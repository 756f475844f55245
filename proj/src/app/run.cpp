#include "rbe/app/run.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "internal.hpp"
#include "rbe/app/field_io.hpp"

namespace rbe::app {

namespace {

namespace fs = std::filesystem;

Json header(const RunConfig& cfg) {
  Json j;
  j["schema"] = kReportSchema;
  j["mode"] = cfg.mode;
  j["threads"] = omp_get_max_threads();
  j["config"] = config_echo(cfg);
  return j;
}

Json coercivity_json(const DistField& f, const DistField& loss) {
  try {
    const CoercivityScan c = coercivity_scan(f, loss);
    return {{"c_l_hat", num(c.c_l_hat)}, {"c_u_hat", num(c.c_u_hat)},
            {"c_u_over_c_l", num(c.c_u_hat / c.c_l_hat)}};
  } catch (const DomainError& e) {
    return {{"undefined", e.what()}};
  }
}

// max over x of |Σ w φ(p) (Q⁺ − f Lf)| per moment φ ∈ (1, p₁, p₂, p₃, p⁰),
// and the same relative to max over x of Σ w |φ| Q⁺.
Json moments_json(const DistField& f, const DistField& loss, const DistField& gain) {
  const auto& q = f.grid().momentum();
  std::array<double, 5> max_abs{}, scale{};
  for (std::size_t j = 0; j < f.n_x(); ++j) {
    std::array<double, 5> m{}, s{};
    for (std::size_t i = 0; i < f.n_p(); ++i) {
      const Vec3& p = q.node(i);
      const double phi[5] = {1.0, p.x, p.y, p.z, q.energies()[i]};
      const double w = q.weights()[i];
      const double qp = gain(i, j);
      const double net = qp - f(i, j) * loss(i, j);
      for (int c = 0; c < 5; ++c) {
        m[c] += w * phi[c] * net;
        s[c] += w * std::abs(phi[c]) * qp;
      }
    }
    for (int c = 0; c < 5; ++c) {
      max_abs[c] = std::max(max_abs[c], std::abs(m[c]));
      scale[c] = std::max(scale[c], s[c]);
    }
  }
  std::array<double, 5> rel{};
  for (int c = 0; c < 5; ++c) rel[c] = scale[c] > 0.0 ? max_abs[c] / scale[c] : 0.0;
  return {{"max_abs", arr_json(max_abs)}, {"relative", arr_json(rel)}};
}

NormOptions norm_options(const RunConfig& cfg) {
  NormOptions o = cfg.norms;
  o.k = cfg.solver.k;
  return o;
}

// f_LR as a field constant in x₁, for the norms that take a DistField.
DistField boundary_field(const std::shared_ptr<const PhaseGrid>& grid, const BoundarySamples& bs) {
  DistField f(grid);
  const auto& v1 = grid->momentum().velocity1();
  for (std::size_t i = 0; i < f.n_p(); ++i) {
    const double val = v1[i] > 0.0 ? bs.left[i] : bs.right[i];
    std::fill(f.profile(i), f.profile(i) + f.n_x(), val);
  }
  return f;
}

double min_over_sqrt_p0(const std::vector<double>& l, const MomentumQuadrature& q) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < l.size(); ++i) m = std::min(m, l[i] / std::sqrt(q.energies()[i]));
  return m;
}

Json boundary_json(const RunConfig& cfg, const BoundaryProfile& bp, const SlabOperator& A,
                   bool& hypotheses_hold) {
  const auto& quad = A.grid()->momentum();
  const auto& bs = A.samples();
  const NormOptions opt = norm_options(cfg);

  const auto compat = compatibility_check(bp, quad);
  double compat_max = 0;
  for (double c : compat) compat_max = std::max(compat_max, std::abs(c));

  const auto lf_l = A.collision().loss(bs.left, 1);
  const auto lf_r = A.collision().loss(bs.right, 1);
  const double m_l = *std::min_element(lf_l.begin(), lf_l.end());
  const double m_r = *std::min_element(lf_r.begin(), lf_r.end());
  const DistField f_lr = boundary_field(A.grid(), bs);
  const double n_main = norm_main(f_lr, opt.k);
  const RieszSup n_inv = norm_inv(f_lr, opt.k);
  const PlaneSup n_hyp = norm_hyp([&bp](const Vec3& p) { return bp.f_LR(p); }, opt.k,
                                  quad.pmax(), opt.n_normals, opt.plane);

  const bool nonneg = f_lr.all_finite_nonnegative();
  const bool coercive = m_l > 0.0 && m_r > 0.0;
  const bool bounded = std::isfinite(n_main) && std::isfinite(n_inv.value);
  hypotheses_hold = nonneg && coercive && bounded;

  Json j;
  j["A_R_effective"] = num(bp.A_R);
  j["compatibility"] = arr_json(compat);
  j["compatibility_max_abs"] = num(compat_max);
  j["nonnegative"] = nonneg;
  j["m_hat_left"] = num(m_l);
  j["m_hat_right"] = num(m_r);
  j["m_hat_left_over_sqrt_p0"] = num(min_over_sqrt_p0(lf_l, quad));
  j["m_hat_right_over_sqrt_p0"] = num(min_over_sqrt_p0(lf_r, quad));
  j["norm_main"] = num(n_main);
  j["norm_inv"] = num(n_inv.value);
  j["norm_hyp"] = num(n_hyp.value);
  j["hypotheses_hold"] = hypotheses_hold;
  return j;
}

struct Outcome {
  Json report;
  int code{kExitOk};
  std::string message;
};

Outcome run_solve(const RunConfig& cfg, PhaseTimer& timer, const LogFn& log) {
  Outcome o;
  o.report = header(cfg);
  timer.start("setup");
  const BoundaryProfile bp = cfg.boundary_profile();
  const SlabOperator A(cfg.solver, bp);
  bool hyp = false;
  const Json boundary = boundary_json(cfg, bp, A, hyp);

  timer.start("solve");
  ConvergenceTrace trace;
  std::optional<DistField> field;
  std::string status = "converged";
  const IterationHook hook = [&](const TraceRow& r) {
    trace.rows.push_back(r);
    if (log)
      log("iteration " + std::to_string(r.iteration) + " residual " + std::to_string(r.residual));
  };
  try {
    SolveResult res = solve(A, hook);
    trace = std::move(res.trace);
    field.emplace(std::move(res.field));
  } catch (const ConvergenceError& e) {
    trace = e.trace();
    field.emplace(e.field());
    status = "not_converged";
    o.code = kExitNotConverged;
    o.message = e.what();
  } catch (const StateCorruption& e) {
    trace.iterations = e.iteration();
    status = "state_corruption";
    o.code = kExitNotConverged;
    o.message = e.what();
  }

  o.report["status"] = status;
  o.report["boundary"] = boundary;
  o.report["trace"] = trace_json(trace);

  timer.start("io");
  if (field) {
    write_field(cfg.out + "/field.bin", *field);
    if (cfg.csv) write_field_csv(cfg.out + "/field.csv", *field);
    const auto [lo, hi] = std::minmax_element(field->values().begin(), field->values().end());
    o.report["field"] = {{"file", "field.bin"}, {"n_x", field->n_x()}, {"n_p", field->n_p()},
                         {"min", num(*lo)}, {"max", num(*hi)}};
  }
  if (o.code != kExitOk) return o;

  timer.start("diagnostics");
  const DistField& f = *field;
  const auto& op = A.collision();
  const DistField loss = op.loss(f);
  const DistField gain = op.gain(f, f);
  Json coerc = coercivity_json(f, loss);
  const DistField env = initial_field(A.grid(), A.samples(), cfg.solver.c1);
  coerc["initial_envelope"] = coercivity_json(env, op.loss(env));
  o.report["coercivity"] = std::move(coerc);

  const NormOptions opt = norm_options(cfg);
  const NormReport nr = norm_report(f, op, opt);
  o.report["norms"] = norms_json(nr);
  const double hyp_lr = boundary["norm_hyp"].is_number() ? boundary["norm_hyp"].get<double>() : 0.0;
  const double denom = hyp_lr + nr.norm_main * nr.norm_main;
  o.report["hyp_propagation"] = {{"norm_hyp", num(nr.norm_hyp.value)},
                                 {"norm_hyp_f_LR", num(hyp_lr)},
                                 {"ratio", denom > 0.0 ? num(nr.norm_hyp.value / denom) : Json(nullptr)}};
  o.report["moment_residuals"] = moments_json(f, loss, gain);
  return o;
}

Outcome run_check_boundary(const RunConfig& cfg, PhaseTimer& timer) {
  Outcome o;
  o.report = header(cfg);
  timer.start("setup");
  const BoundaryProfile bp = cfg.boundary_profile();
  const SlabOperator A(cfg.solver, bp);
  timer.start("checks");
  bool hyp = false;
  o.report["boundary"] = boundary_json(cfg, bp, A, hyp);
  if (!hyp) {
    o.code = kExitOracle;
    o.message = "boundary hypotheses do not hold on the grid";
  }
  return o;
}

Outcome run_norms(const RunConfig& cfg, PhaseTimer& timer) {
  Outcome o;
  o.report = header(cfg);
  timer.start("io");
  const DistField f = read_field(cfg.field_path());
  timer.start("setup");
  const auto& quad = f.grid().momentum();
  const CollisionOperator op(quad, SphereQuadrature(cfg.solver.sphere_polar, cfg.solver.sphere_azimuth),
                             cfg.solver.kernel, cfg.solver.interp_theta);
  timer.start("norms");
  o.report["field"] = {{"n_x", f.n_x()},
                       {"n_radial", quad.n_radial()},
                       {"n_polar", quad.n_polar()},
                       {"n_azimuth", quad.n_azimuth()},
                       {"pmax", quad.pmax()}};
  o.report["norms"] = norms_json(norm_report(f, op, norm_options(cfg)));
  o.report["coercivity"] = coercivity_json(f, op.loss(f));
  return o;
}

Outcome run_oracle(const RunConfig& cfg, PhaseTimer& timer) {
  Outcome o;
  o.report = header(cfg);
  timer.start("oracles");
  bool pass = false;
  o.report["oracles"] = oracle_table(cfg, pass);
  o.report["all_pass"] = pass;
  if (!pass) {
    o.code = kExitOracle;
    o.message = "oracle failure";
  }
  return o;
}

Outcome run_bench(const RunConfig& cfg, PhaseTimer& timer, const LogFn& log) {
  Outcome o;
  o.report = header(cfg);
  timer.start("bench");
  o.report["bench"] = bench_table(cfg, log);
  return o;
}

}  // namespace

int threads_from_env() {
  const char* v = std::getenv("RBE_SLAB_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) return 0;
  return static_cast<int>(n);
}

RunResult run(const RunConfig& cfg, const LogFn& log) {
  RunResult res;
  try {
    cfg.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    fs::create_directories(cfg.out);

    PhaseTimer timer;
    Outcome o;
    if (cfg.mode == "solve") o = run_solve(cfg, timer, log);
    else if (cfg.mode == "check-boundary") o = run_check_boundary(cfg, timer);
    else if (cfg.mode == "norms") o = run_norms(cfg, timer);
    else if (cfg.mode == "oracle") o = run_oracle(cfg, timer);
    else o = run_bench(cfg, timer, log);
    timer.stop();

    write_json(cfg.out + "/report.json", o.report);
    write_json(cfg.out + "/timings.json", {{"schema", kReportSchema}, {"mode", cfg.mode},
                                           {"seconds", timer.json()}});
    res.exit_code = o.code;
    res.message = o.message;
    res.report = o.report.dump(2) + "\n";
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = kExitError;
    res.message = e.what();
  }
  return res;
}

}  // namespace rbe::app
