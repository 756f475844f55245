#include "rbe/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbe/norms.hpp"

namespace rbe {

BoundaryProfile BoundaryProfile::juttner(double A_L, double T_L, double A_R, double T_R) {
  if (!(T_L > 0.0)) throw ConfigError("T_L must be positive", "T_L");
  if (!(T_R > 0.0)) throw ConfigError("T_R must be positive", "T_R");
  if (!(A_L >= 0.0)) throw ConfigError("A_L must be >= 0", "A_L");
  if (!(A_R >= 0.0)) throw ConfigError("A_R must be >= 0", "A_R");
  BoundaryProfile bp;
  bp.kind = "juttner";
  bp.axisymmetric = true;
  bp.T_L = T_L;
  bp.T_R = T_R;
  bp.A_L = A_L;
  bp.A_R = A_R;
  bp.f_L = [A_L, T_L](const Vec3& p) { return A_L * std::exp(-std::sqrt(1.0 + norm2(p)) / T_L); };
  bp.f_R = [A_R, T_R](const Vec3& p) { return A_R * std::exp(-std::sqrt(1.0 + norm2(p)) / T_R); };
  return bp;
}

BoundaryProfile BoundaryProfile::zero() {
  BoundaryProfile bp;
  bp.kind = "zero";
  bp.axisymmetric = true;
  bp.f_L = [](const Vec3&) { return 0.0; };
  bp.f_R = [](const Vec3&) { return 0.0; };
  return bp;
}

BoundaryProfile BoundaryProfile::scaled(double eps) const {
  if (kind == "juttner") return juttner(eps * A_L, T_L, eps * A_R, T_R);
  BoundaryProfile bp = *this;
  bp.A_L *= eps;
  bp.A_R *= eps;
  bp.f_L = [fn = f_L, eps](const Vec3& p) { return eps * fn(p); };
  bp.f_R = [fn = f_R, eps](const Vec3& p) { return eps * fn(p); };
  return bp;
}

double BoundaryProfile::f_LR(const Vec3& p) const {
  if (p.x > 0.0) return f_L(p);
  if (p.x < 0.0) return f_R(p);
  return 0.0;
}

BoundarySamples sample_boundary(const BoundaryProfile& bp, const MomentumQuadrature& quad) {
  if (!bp.f_L || !bp.f_R) throw ConfigError("boundary profile has no functions");
  BoundarySamples bs;
  bs.left.resize(quad.size());
  bs.right.resize(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) {
    if (bp.axisymmetric && quad.azimuth_index_of(i) != 0) {
      const std::size_t rep = i - quad.azimuth_index_of(i);
      bs.left[i] = bs.left[rep];
      bs.right[i] = bs.right[rep];
      continue;
    }
    bs.left[i] = bp.f_L(quad.node(i));
    bs.right[i] = bp.f_R(quad.node(i));
    if (!(bs.left[i] >= 0.0) || !std::isfinite(bs.left[i]) || !(bs.right[i] >= 0.0) ||
        !std::isfinite(bs.right[i]))
      throw DomainError("boundary data must be finite and >= 0");
  }
  return bs;
}

std::array<double, 5> compatibility_check(const BoundaryProfile& bp,
                                          const MomentumQuadrature& quad) {
  const BoundarySamples bs = sample_boundary(bp, quad);
  std::array<double, 5> left{}, right{};
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Vec3& p = quad.node(i);
    const double base = quad.weights()[i] * quad.velocity1()[i];
    const std::array<double, 5> m{1.0, p.x, p.y, p.z, quad.energies()[i]};
    for (int c = 0; c < 5; ++c) {
      left[c] += m[c] * base * bs.left[i];
      right[c] += m[c] * base * bs.right[i];
    }
  }
  std::array<double, 5> out{};
  for (int c = 0; c < 5; ++c) out[c] = left[c] - right[c];
  return out;
}

double balanced_right_amplitude(double A_L, double T_L, double T_R,
                                const MomentumQuadrature& quad) {
  double pl = 0.0, pr = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double w = quad.weights()[i] * quad.node(i).x * quad.velocity1()[i];
    pl += w * std::exp(-quad.energies()[i] / T_L);
    pr += w * std::exp(-quad.energies()[i] / T_R);
  }
  return A_L * pl / pr;
}

//---------------------------------------------------------------------------//

void SolverConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + " must be > 0", key);
  };
  positive(k, "k");
  positive(c1, "c1");
  positive(tol, "tol");
  positive(pmax, "pmax");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]", "damping");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1", "max_iter");
  if (n_x < 2) throw ConfigError("n_x must be >= 2", "n_x");
  if (n_radial < 1) throw ConfigError("n_radial must be >= 1", "n_radial");
  if (n_polar < 2 || n_polar % 2 != 0) throw ConfigError("n_polar must be even and >= 2", "n_polar");
  if (n_azimuth < 1) throw ConfigError("n_azimuth must be >= 1", "n_azimuth");
  if (sphere_polar < 2) throw ConfigError("sphere_polar must be >= 2", "sphere_polar");
  if (sphere_azimuth < 4) throw ConfigError("sphere_azimuth must be >= 4", "sphere_azimuth");
  if (!(interp_theta >= 0.0) || !std::isfinite(interp_theta))
    throw ConfigError("interp_theta must be >= 0", "interp_theta");
  kernel.validate();
}

std::shared_ptr<const PhaseGrid> make_phase_grid(const SolverConfig& cfg) {
  return std::make_shared<const PhaseGrid>(
      cfg.n_x, MomentumQuadrature(cfg.pmax, cfg.n_radial, cfg.n_polar, cfg.n_azimuth));
}

DistField lower_envelope(const std::shared_ptr<const PhaseGrid>& grid, const BoundarySamples& bs,
                         double c1) {
  DistField f(grid);
  const auto& quad = grid->momentum();
  const auto& x = grid->x();
  for (std::size_t i = 0; i < f.n_p(); ++i) {
    const double v = quad.velocity1()[i];
    double* row = f.profile(i);
    if (v > 0.0) {
      if (bs.left[i] == 0.0) continue;
      for (std::size_t j = 0; j < f.n_x(); ++j) row[j] = bs.left[i] * std::exp(-c1 * x[j] / v);
    } else if (v < 0.0) {
      if (bs.right[i] == 0.0) continue;
      for (std::size_t j = 0; j < f.n_x(); ++j)
        row[j] = bs.right[i] * std::exp(c1 * (1.0 - x[j]) / v);
    }
  }
  return f;
}

DistField initial_field(const std::shared_ptr<const PhaseGrid>& grid, const BoundarySamples& bs,
                        double c1) {
  if (!(c1 > 0.0)) throw ConfigError("c1 must be > 0", "c1");
  return lower_envelope(grid, bs, c1);
}

double envelope_gap(const DistField& f, const BoundarySamples& bs, double c1) {
  const DistField env = lower_envelope(f.grid_ptr(), bs, c1);
  double gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.values().size(); ++i)
    gap = std::max(gap, env.values()[i] - f.values()[i]);
  return gap;
}

//---------------------------------------------------------------------------//

SlabOperator::SlabOperator(const SolverConfig& cfg, const BoundaryProfile& bp)
    : cfg_(cfg),
      grid_((cfg.validate(), make_phase_grid(cfg))),
      op_(grid_->momentum(), SphereQuadrature(cfg.sphere_polar, cfg.sphere_azimuth), cfg.kernel,
          cfg.interp_theta),
      samples_(sample_boundary(bp, grid_->momentum())) {
  for (double v : grid_->momentum().velocity1())
    if (v == 0.0) throw ConfigError("momentum grid has a node with p1 = 0", "n_polar");
}

DistField SlabOperator::sweep(const DistField& loss, const DistField& gain) const {
  const std::size_t nx = grid_->n_x();
  const std::size_t np = grid_->n_p();
  if (loss.values().size() != nx * np || gain.values().size() != nx * np)
    throw ConfigError("sweep: field does not match the grid");
  const double h2 = 0.5 * grid_->dx();
  const auto& v1 = grid_->momentum().velocity1();
  DistField out(loss.grid_ptr());

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < np; ++i) {
    const double* l = loss.profile(i);
    const double* q = gain.profile(i);
    double* o = out.profile(i);
    const double v = v1[i];
    if (v > 0.0) {
      const double fb = samples_.left[i];
      double integral = 0.0, source = 0.0;
      o[0] = fb;
      for (std::size_t j = 1; j < nx; ++j) {
        const double di = h2 * (l[j - 1] + l[j]);
        integral += di;
        source = std::exp(-di / v) * (source + h2 * q[j - 1]) + h2 * q[j];
        o[j] = fb * std::exp(-integral / v) + source / v;
      }
    } else {
      const double av = -v;
      const double fb = samples_.right[i];
      double integral = 0.0, source = 0.0;
      o[nx - 1] = fb;
      for (std::size_t j = nx - 1; j-- > 0;) {
        const double di = h2 * (l[j] + l[j + 1]);
        integral += di;
        source = std::exp(-di / av) * (source + h2 * q[j + 1]) + h2 * q[j];
        o[j] = fb * std::exp(-integral / av) + source / av;
      }
    }
  }
  return out;
}

DistField SlabOperator::apply(const DistField& f) const {
  if (f.n_x() != grid_->n_x() || f.n_p() != grid_->n_p())
    throw ConfigError("apply: field does not match the grid");
  return sweep(op_.loss(f), op_.gain(f, f));
}

DistField apply_A(const DistField& f, const BoundaryProfile& bp, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.n_x = f.n_x();
  const SlabOperator A(c, bp);
  return A.apply(f);
}

//---------------------------------------------------------------------------//

namespace {

void check_state(const DistField& f, int iteration) {
  for (double v : f.values()) {
    if (!std::isfinite(v))
      throw StateCorruption("state corruption: non-finite value at iteration " +
                                std::to_string(iteration),
                            iteration);
    if (v < 0.0)
      throw StateCorruption("state corruption: negative value at iteration " +
                                std::to_string(iteration),
                            iteration);
  }
}

}  // namespace

SolveResult solve(const SlabOperator& A, const IterationHook& hook) {
  const SolverConfig& cfg = A.config();
  const auto& grid = A.grid();
  const auto& quad = grid->momentum();
  const double lambda = cfg.damping;

  DistField f = initial_field(grid, A.samples(), cfg.c1);
  ConvergenceTrace trace;
  double prev_step = -1.0;
  bool guaranteed = true;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const DistField loss = A.collision().loss(f);
    const DistField gain = A.collision().gain(f, f);
    DistField af = A.sweep(loss, gain);

    TraceRow row;
    row.iteration = it;
    row.min_L = std::numeric_limits<double>::infinity();
    row.max_L = 0.0;
    row.min_L_over_sqrt_p0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.n_p(); ++i) {
      const double* l = loss.profile(i);
      const double inv = 1.0 / std::sqrt(quad.energies()[i]);
      for (std::size_t j = 0; j < f.n_x(); ++j) {
        row.min_L = std::min(row.min_L, l[j]);
        row.max_L = std::max(row.max_L, l[j]);
        row.min_L_over_sqrt_p0 = std::min(row.min_L_over_sqrt_p0, l[j] * inv);
      }
    }
    // e^{−∫Lf/p̂₁} ≥ e^{−c₁x₁/p̂₁} needs Lf ≤ c₁ along every characteristic
    guaranteed = guaranteed && row.max_L <= cfg.c1;

    DistField next = af;
    if (lambda != 1.0) {
      auto& nv = next.values();
      const auto& fv = f.values();
      for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = (1.0 - lambda) * fv[i] + lambda * nv[i];
    }
    check_state(next, it);

    const double fnorm = norm_main(f, cfg.k);
    const double step = norm_main(next - f, cfg.k);
    row.residual = fnorm > 0.0 ? step / fnorm : (step == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (prev_step > 0.0) row.ratio = step / prev_step;
    else if (prev_step == 0.0) row.ratio = 0.0;
    prev_step = step;
    row.norm = norm_main(next, cfg.k);
    row.norm_LinfL1 = norm_LinfL1(next);
    row.norm_L1Linf = norm_L1Linf(next);
    row.envelope_gap = envelope_gap(next, A.samples(), cfg.c1);
    row.envelope_guaranteed = guaranteed;

    f = std::move(next);
    trace.rows.push_back(row);
    trace.iterations = it;
    if (hook) hook(row);
    if (row.residual < cfg.tol) {
      trace.converged = true;
      break;
    }
  }

  if (!trace.converged) {
    const std::string msg = "no convergence within " + std::to_string(cfg.max_iter) +
                            " iterations (last residual " +
                            std::to_string(trace.rows.back().residual) + ")";
    throw ConvergenceError(msg, std::move(trace), std::move(f));
  }

  const double fnorm = norm_main(f, cfg.k);
  const double defect = norm_main(A.apply(f) - f, cfg.k);
  trace.fixed_point_residual = fnorm > 0.0 ? defect / fnorm : defect;
  return {std::move(f), std::move(trace)};
}

SolveResult solve(const SolverConfig& cfg, const BoundaryProfile& bp, const IterationHook& hook) {
  const SlabOperator A(cfg, bp);
  return solve(A, hook);
}

}  // namespace rbe
