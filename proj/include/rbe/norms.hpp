#pragma once

// Weighted norms of a slab field and the gain-term ratio diagnostics.
//
// Every sup over centers a or planes E is taken over a finite candidate set
// plus a local pattern search, so the reported values are discrete sups:
// lower bounds for the true ones.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rbe/collision.hpp"
#include "rbe/field.hpp"
#include "rbe/quad.hpp"

namespace rbe {

inline constexpr const char* kDiscreteSupLabel = "discrete sup (lower bound)";

/// e^{k p⁰}
inline double weight_phi(double k, double p0) { return std::exp(k * p0); }

/// ess sup_x ∫ |f|(p⁰)^{1/2} dp
double norm_LinfL1(const DistField& f);
/// ∫ ess sup_x |f| (p⁰)^{1/2} dp
double norm_L1Linf(const DistField& f);
/// ∫ ess sup_x |f| (p⁰)^{1/2} e^{kp⁰} dp
double norm_main(const DistField& f, double k);

struct RieszSup {
  double value{0};
  Vec3 argmax;
};

/// sup_a Σ_p w_p ρ_p / |p − a| for a nodal density ρ. Candidates: every node,
/// the origin and a 5³ lattice on [−pmax, pmax]³, then a pattern search from
/// the best one (kept inside the cube). When |p − a| < h_p, with
/// h_p = (3w_p/(4π))^{1/3} the radius of a ball of the node's volume, 1/|p − a|
/// is replaced by its ball average 3/(2h_p).
RieszSup riesz_sup(const MomentumQuadrature& quad, const std::vector<double>& density);
/// Value of the same desingularized sum at one center.
double riesz_potential(const MomentumQuadrature& quad, const std::vector<double>& density,
                       const Vec3& a);

/// ‖f‖₋₁ = sup_a ∫ (p⁰)^{1/2} e^{kp⁰} ‖f(·,p)‖_{L∞ₓ} / |p − a| dp
RieszSup norm_inv(const DistField& f, double k);

/// Polar Gauss rule on the disk |u| ≤ radius in {p₃ = 0}.
struct PlaneRule {
  std::size_t n_radial{48};
  std::size_t n_angular{64};
};

struct PlaneSup {
  double value{0};
  Vec3 normal{0, 0, 1};
};

/// ∫_E density dσ over the plane through the origin with unit normal n,
/// truncated at radius pmax. The rule on {p₃ = 0} is carried onto E by the
/// transpose of rotation_taking(n).
double plane_integral(const std::function<double(const Vec3&)>& density, const Vec3& normal,
                      double pmax, const PlaneRule& rule);
/// Max of plane_integral over a Fibonacci half-sphere of n_normals normals,
/// followed by a local pattern search around the best one.
PlaneSup plane_sup(const std::function<double(const Vec3&)>& density, double pmax,
                   std::size_t n_normals, const PlaneRule& rule);
/// Unit normals z_i = 1 − (i + ½)/n on the upper half-sphere, golden-angle azimuths.
std::vector<Vec3> fibonacci_half_sphere(std::size_t n);

/// ‖f‖_hyp with ‖f(·,p)‖_{L∞ₓ} interpolated onto plane nodes. ConfigError for
/// n_normals < 3.
PlaneSup norm_hyp(const DistField& f, double k, std::size_t n_normals, const PlaneRule& rule = {});
/// ‖·‖_hyp of a momentum-only function (e.g. the inflow data f_LR), evaluated exactly.
PlaneSup norm_hyp(const std::function<double(const Vec3&)>& fn, double k, double pmax,
                  std::size_t n_normals, const PlaneRule& rule = {});

/// max over x of Q⁺(f,f)(x, p) per momentum node.
std::vector<double> gain_sup(const DistField& f, const CollisionOperator& op);

/// R₁ = sup_a ∫ e^{kp⁰}/|p−a| ‖Q⁺(f,f)(·,p)‖ dp / ‖f‖². DomainError("ratio
/// undefined") for ‖f‖ = 0. `gain` is gain_sup(f, op).
double gain_ratio_inv(const DistField& f, double k, const std::vector<double>& gain);
double gain_ratio_inv(const DistField& f, double k, const CollisionOperator& op);

/// R₂(k) = k ∫ e^{kp⁰}‖Q⁺(f,f)(·,p)‖ dp / (‖f‖₋₁ ‖f‖), one entry per k.
std::vector<double> gain_ratio_pointwise(const DistField& f, const std::vector<double>& k_list,
                                         const std::vector<double>& gain);
std::vector<double> gain_ratio_pointwise(const DistField& f, const std::vector<double>& k_list,
                                         const CollisionOperator& op);

/// R_hyp = sup_E ∫_E (p⁰)^{1/2} e^{kp⁰}‖Q⁺(f,f)(·,p)‖ dσ / ‖f‖².
double gain_ratio_hyp(const DistField& f, double k, const std::vector<double>& gain,
                      std::size_t n_normals, const PlaneRule& rule = {});
double gain_ratio_hyp(const DistField& f, double k, const CollisionOperator& op,
                      std::size_t n_normals, const PlaneRule& rule = {});

struct NormOptions {
  double k{0.1};
  std::vector<double> k_list{0.05, 0.1, 0.2};
  std::size_t n_normals{64};
  PlaneRule plane;
};

struct NormReport {
  std::string sup_label{kDiscreteSupLabel};
  double k{0};
  double norm_LinfL1{0};
  double norm_L1Linf{0};
  double norm_main{0};
  RieszSup norm_inv;
  PlaneSup norm_hyp;
  double r1{0};
  std::vector<std::pair<double, double>> r2;  // (k, R₂(k))
  double r_hyp{0};
};

/// All norms and, for a nonzero field, all gain ratios.
NormReport norm_report(const DistField& f, const CollisionOperator& op, const NormOptions& opt);

}  // namespace rbe
