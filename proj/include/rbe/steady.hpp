#pragma once

// Inflow boundary data, the mild-formulation solution operator A and the
// damped fixed-point iteration on the slab x₁ ∈ [0, 1].

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbe/collision.hpp"
#include "rbe/errors.hpp"
#include "rbe/field.hpp"

namespace rbe {

/// f_L is prescribed on p₁ > 0 at x₁ = 0, f_R on p₁ < 0 at x₁ = 1.
struct BoundaryProfile {
  std::string kind{"custom"};
  std::function<double(const Vec3&)> f_L;
  std::function<double(const Vec3&)> f_R;
  /// Both functions depend on p only through (|p|, p₁). Samples are then
  /// taken once per ring and copied around it.
  bool axisymmetric{false};
  double T_L{1}, T_R{1}, A_L{0}, A_R{0};

  /// A e^{−p⁰/T} on each side.
  static BoundaryProfile juttner(double A_L, double T_L, double A_R, double T_R);
  static BoundaryProfile zero();

  /// The same profile with both sides multiplied by eps.
  BoundaryProfile scaled(double eps) const;
  /// f_L 1_{p₁>0} + f_R 1_{p₁<0}
  double f_LR(const Vec3& p) const;
};

struct BoundarySamples {
  std::vector<double> left;   // f_L at every node
  std::vector<double> right;  // f_R at every node
};

/// DomainError if a sample is negative or not finite.
BoundarySamples sample_boundary(const BoundaryProfile& bp, const MomentumQuadrature& quad);

/// ∫(1, p, p⁰) p̂₁ f_L dp − ∫(1, p, p⁰) p̂₁ f_R dp on the grid.
std::array<double, 5> compatibility_check(const BoundaryProfile& bp, const MomentumQuadrature& quad);

/// Right amplitude for which the Jüttner pair (A_L, T_L), (A_R, T_R) carries
/// equal p₁-momentum flux on the grid. With isotropic data this is the only
/// nonzero compatibility component, so the whole vector vanishes.
double balanced_right_amplitude(double A_L, double T_L, double T_R, const MomentumQuadrature& quad);

struct SolverConfig {
  double k{0.1};
  double c1{1.0};
  double damping{1.0};
  double tol{1e-6};
  int max_iter{200};
  std::size_t n_x{33};
  double pmax{12.0};
  std::size_t n_radial{16}, n_polar{8}, n_azimuth{16};
  std::size_t sphere_polar{12}, sphere_azimuth{24};
  /// Off-grid interpolation temperature θ (0: plain trilinear).
  double interp_theta{1.0};
  Kernel kernel;

  /// ConfigError naming the first offending key.
  void validate() const;
};

std::shared_ptr<const PhaseGrid> make_phase_grid(const SolverConfig& cfg);

/// 1_{p₁>0} f_L e^{−c₁x₁/p̂₁} + 1_{p₁<0} f_R e^{c₁(1−x₁)/p̂₁}
DistField lower_envelope(const std::shared_ptr<const PhaseGrid>& grid, const BoundarySamples& bs,
                         double c1);
/// The lower envelope, used as the first iterate.
DistField initial_field(const std::shared_ptr<const PhaseGrid>& grid, const BoundarySamples& bs,
                        double c1);
/// max over the grid of (envelope − f); ≤ 0 when f dominates the envelope.
double envelope_gap(const DistField& f, const BoundarySamples& bs, double c1);

struct TraceRow {
  int iteration{0};
  double residual{0};              // ‖f_{n+1} − f_n‖ / ‖f_n‖
  double norm{0};                  // ‖f_{n+1}‖
  std::optional<double> ratio;     // ‖f_{n+1} − f_n‖ / ‖f_n − f_{n−1}‖
  double min_L_over_sqrt_p0{0};    // of the input f_n
  double min_L{0}, max_L{0};
  double norm_LinfL1{0}, norm_L1Linf{0};
  double envelope_gap{0};          // of f_{n+1}
  bool envelope_guaranteed{false};
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  bool converged{false};
  int iterations{0};
  /// ‖A f* − f*‖ / ‖f*‖ for the returned field.
  double fixed_point_residual{0};
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, ConvergenceTrace trace, DistField field)
      : Error(msg), trace_(std::move(trace)), field_(std::move(field)) {}
  const ConvergenceTrace& trace() const { return trace_; }
  const DistField& field() const { return field_; }

 private:
  ConvergenceTrace trace_;
  DistField field_;
};

class StateCorruption : public Error {
 public:
  StateCorruption(const std::string& msg, int iteration) : Error(msg), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// A for one configuration: grid, collision operator and boundary samples
/// are built once and reused across applications.
class SlabOperator {
 public:
  SlabOperator(const SolverConfig& cfg, const BoundaryProfile& bp);

  const SolverConfig& config() const { return cfg_; }
  const std::shared_ptr<const PhaseGrid>& grid() const { return grid_; }
  const CollisionOperator& collision() const { return op_; }
  const BoundarySamples& samples() const { return samples_; }

  /// Af given Lf and Q⁺(f, f) on the grid: x₁-sweeps along characteristics
  /// with trapezoid integrals, from x₁ = 0 for p₁ > 0 and from x₁ = 1 for p₁ < 0.
  DistField sweep(const DistField& loss, const DistField& gain) const;
  DistField apply(const DistField& f) const;

 private:
  SolverConfig cfg_;
  std::shared_ptr<const PhaseGrid> grid_;
  CollisionOperator op_;
  BoundarySamples samples_;
};

DistField apply_A(const DistField& f, const BoundaryProfile& bp, const SolverConfig& cfg);

struct SolveResult {
  DistField field;
  ConvergenceTrace trace;
};

/// f_{n+1} = (1−λ) f_n + λ A f_n from the lower envelope until the relative
/// step drops below tol. Throws ConvergenceError after max_iter steps and
/// StateCorruption on a NaN or negative value.
using IterationHook = std::function<void(const TraceRow&)>;
SolveResult solve(const SlabOperator& A, const IterationHook& hook = {});
SolveResult solve(const SolverConfig& cfg, const BoundaryProfile& bp,
                  const IterationHook& hook = {});

}  // namespace rbe
