#pragma once

// Hard-sphere collision operator: loss frequency L, gain term Q⁺ and the
// coercivity / continuity / conservation diagnostics built on them.

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "rbe/field.hpp"
#include "rbe/quad.hpp"
#include "rbe/relkin.hpp"

namespace rbe {

/// σ(g, θ) = c_kernel · g · σ₀(θ) with σ₀(θ) = sinᵞθ / (4π).
struct Kernel {
  double c_kernel{1.0};
  double gamma_ang{0.0};

  bool isotropic() const { return gamma_ang == 0.0; }
  double sigma0(double cos_theta) const;
  /// ∫_{S²} σ₀ dω = (√π/2) Γ(γ/2+1)/Γ(γ/2+3/2); 1 for γ = 0.
  double c0() const;
  /// ConfigError unless c_kernel > 0 and gamma_ang ≥ 0.
  void validate() const;
};

/// f(x₁ fixed, ·) on the nodes of a MomentumQuadrature. The quadrature must
/// outlive the slice.
class MomentumSlice {
 public:
  MomentumSlice(const MomentumQuadrature& quad, std::vector<double> values);

  template <class F>
  static MomentumSlice sample(const MomentumQuadrature& quad, F&& fn) {
    std::vector<double> v(quad.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(quad.node(i));
    return MomentumSlice(quad, std::move(v));
  }

  const MomentumQuadrature& quad() const { return *quad_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Trilinear in (r, cos θ, φ) index space, 0 beyond pmax. For theta > 0
  /// the interpolated quantity is f e^{p⁰/θ} (see MomentumQuadrature::node_stencil).
  double interpolate(const Vec3& p, double theta = 0.0) const;

 private:
  const MomentumQuadrature* quad_;
  std::vector<double> values_;
};

namespace detail {

// Rotation about the p₁ axis that carries e₂ to the azimuth of p, composed
// with the relabeling e₃ → e₁. Sphere nodes pass through it so that the rule
// is laid out the same way relative to every p on a ring.
struct SphereFrame {
  double c{1.0}, s{0.0};
  explicit SphereFrame(const Vec3& p) {
    const double rho = std::hypot(p.y, p.z);
    if (rho > 0.0) {
      c = p.y / rho;
      s = p.z / rho;
    }
  }
  Vec3 apply(const Vec3& w) const { return {w.z, w.x * c - w.y * s, w.x * s + w.y * c}; }
};

inline double cos_scatter(double dt, const Vec3& dx, double dt_post, const Vec3& dx_post,
                          double g2) {
  const double c = (-dt * dt_post + dot(dx, dx_post)) / g2;
  return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

}  // namespace detail

/// Calls visit(weight, p′, q′) for every quadrature pair (q, ω) with
/// weight = w_q w_ω c_kernel v_M g σ₀(θ). With `mirror_half` and p₃ = 0 the
/// q sum runs over azimuth indices k ≤ n_azimuth/2 only, doubling interior
/// ones; this is exact for integrands even under p₃ → −p₃.
template <class Visit>
void for_each_collision(const Vec3& p, double p0, const MomentumQuadrature& quad,
                        const SphereQuadrature& squad, const Kernel& kernel, bool mirror_half,
                        Visit&& visit) {
  const detail::SphereFrame frame_rot(p);
  std::vector<Vec3> omegas(squad.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) omegas[j] = frame_rot.apply(squad.nodes()[j]);
  const auto& w_omega = squad.weights();

  const bool mirror = mirror_half && p.z == 0.0;
  const std::size_t naz = quad.n_azimuth();
  const Vec3 vp = p / p0;
  const bool iso = kernel.isotropic();
  const double iso_sigma = 1.0 / (4.0 * std::numbers::pi);

  for (std::size_t iq = 0; iq < quad.size(); ++iq) {
    double mult = 1.0;
    if (mirror) {
      const std::size_t k = iq % naz;
      if (2 * k > naz) continue;
      if (k != 0 && 2 * k != naz) mult = 2.0;
    }
    const Vec3& q = quad.node(iq);
    const double q0 = quad.energies()[iq];
    const CmFrame cm(p, p0, q, q0);
    const double g = cm.g();
    if (g == 0.0) continue;
    const double vm = moller_velocity(vp, q / q0);
    const double base = mult * quad.weights()[iq] * kernel.c_kernel * vm * g;
    if (base == 0.0) continue;

    if (iso) {
      const double b = base * iso_sigma;
      for (std::size_t j = 0; j < omegas.size(); ++j) {
        Vec3 pp, qq;
        cm.post(omegas[j], pp, qq);
        visit(b * w_omega[j], pp, qq);
      }
    } else {
      const double dt = p0 - q0;
      const Vec3 dx = p - q;
      const double g2 = g * g;
      for (std::size_t j = 0; j < omegas.size(); ++j) {
        Vec3 pp, qq;
        cm.post(omegas[j], pp, qq);
        const double pp0 = cm.post_energy(omegas[j]);
        const double qq0 = cm.total_energy() - pp0;
        const double ct = detail::cos_scatter(dt, dx, pp0 - qq0, pp - qq, g2);
        visit(base * w_omega[j] * kernel.sigma0(ct), pp, qq);
      }
    }
  }
}

/// c₀ c_kernel Σ_q w_q v_M(p,q) g(p,q) f(q).
double eval_L(const MomentumSlice& slice, const Momentum3& p, const MomentumQuadrature& quad,
              const Kernel& kernel);

/// Q⁺(f, h)(p) for callables f, h evaluated at the post-collision momenta.
template <class F, class H>
  requires std::invocable<F&, const Vec3&> && std::invocable<H&, const Vec3&>
double eval_Qplus(F&& f, H&& h, const Momentum3& p, const MomentumQuadrature& quad,
                  const SphereQuadrature& squad, const Kernel& kernel) {
  double acc = 0.0;
  for_each_collision(p.p, energy(p), quad, squad, kernel, false,
                     [&](double w, const Vec3& pp, const Vec3& qq) {
                       const double a = f(pp);
                       if (a == 0.0) return;
                       acc += w * a * h(qq);
                     });
  return acc;
}

/// Q⁺ with f̃, h̃ interpolated from the slices.
double eval_Qplus(const MomentumSlice& slice_f, const MomentumSlice& slice_h, const Momentum3& p,
                  const MomentumQuadrature& quad, const SphereQuadrature& squad,
                  const Kernel& kernel, double interp_theta = 0.0);

/// f̃(p) · L h(p).
double eval_Qminus(const MomentumSlice& slice_f, const MomentumSlice& slice_h, const Momentum3& p,
                   const MomentumQuadrature& quad, const Kernel& kernel,
                   double interp_theta = 0.0);

/// L and Q⁺ on every node of a momentum grid, applied to `stride` slices at
/// once (a field stored node-major, as DistField does).
///
/// When the inputs are identical around every ring about the p₁ axis the work
/// is done once per ring through precomputed ring-to-ring tables and the result
/// is replicated, so it is ring-invariant bit for bit. Other inputs go through
/// the direct node-by-node sum with trilinear interpolation. Either way the
/// summation order per output is fixed, so results do not depend on the
/// thread count.
///
/// `interp_theta` selects the off-grid interpolation: 0 is plain trilinear,
/// θ > 0 interpolates f e^{p⁰/θ}. Plain trilinear interpolation of a profile
/// decaying like e^{−p⁰} overshoots between radial nodes, which makes the
/// discrete gain exceed the loss at equilibrium.
class CollisionOperator {
 public:
  /// Ring tables above this many bytes are not built; the direct path is used.
  static constexpr std::size_t kRingTableBudget = std::size_t{1} << 30;

  CollisionOperator(const MomentumQuadrature& quad, const SphereQuadrature& squad,
                    const Kernel& kernel, double interp_theta = 0.0);
  ~CollisionOperator();
  CollisionOperator(CollisionOperator&&) noexcept;
  CollisionOperator& operator=(CollisionOperator&&) noexcept;

  const MomentumQuadrature& quad() const { return quad_; }
  const SphereQuadrature& sphere() const { return squad_; }
  const Kernel& kernel() const { return kernel_; }
  double interp_theta() const { return theta_; }

  std::vector<double> loss(const std::vector<double>& f, std::size_t stride) const;
  std::vector<double> gain(const std::vector<double>& f, const std::vector<double>& h,
                           std::size_t stride) const;
  DistField loss(const DistField& f) const;
  DistField gain(const DistField& f, const DistField& h) const;

  /// Whether the ring tables fit the budget (they are built on first use).
  bool ring_tables_available() const;

 private:
  struct RingTables;
  const RingTables& ring_tables() const;
  bool use_rings(const std::vector<double>& a, const std::vector<double>* b,
                 std::size_t stride) const;

  MomentumQuadrature quad_;
  SphereQuadrature squad_;
  Kernel kernel_;
  double theta_{0};
  double inv_theta_{0};
  std::unique_ptr<RingTables> rings_;
};

struct CoercivityScan {
  double c_l_hat{0};
  double c_u_hat{0};
};

/// min and max over the grid of Lf/(p⁰)^{1/2}. DomainError("coercivity
/// undefined for vacuum") for f ≡ 0.
CoercivityScan coercivity_scan(const DistField& field, const CollisionOperator& op);
/// Same scan from an already computed Lf.
CoercivityScan coercivity_scan(const DistField& field, const DistField& loss);

struct ContinuityReport {
  /// max |Lf − Lh| / ((p⁰)^{1/2} ‖f − h‖)
  double ratio{0};
  /// the same against the bound e^{−k/√2}(p⁰)^{1/2}‖f − h‖
  double ratio_weighted{0};
  double diff_norm{0};
};

ContinuityReport continuity_check(const DistField& f, const DistField& h,
                                  const CollisionOperator& op, double k);

/// (∫Q, ∫p₁Q, ∫p₂Q, ∫p₃Q, ∫p⁰Q) with Q = Q⁺(f,f) − f Lf on the grid.
std::array<double, 5> moment_residuals(const MomentumSlice& slice_f, const MomentumQuadrature& quad,
                                       const SphereQuadrature& squad, const Kernel& kernel,
                                       double interp_theta = 0.0);
std::array<double, 5> moment_residuals(const MomentumSlice& slice_f, const CollisionOperator& op);

}  // namespace rbe
