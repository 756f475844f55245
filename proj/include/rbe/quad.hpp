#pragma once

// Quadrature rules on the unit sphere and on a truncated momentum ball.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rbe/relkin.hpp"

namespace rbe {

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(std::size_t n);

/// Product rule: Gauss–Legendre in cos θ times the uniform trapezoid in φ,
/// polar axis e₃, φ_j = 2πj/n_azimuth. Weights carry the steradian measure.
class SphereQuadrature {
 public:
  SphereQuadrature() = default;
  SphereQuadrature(std::size_t n_polar, std::size_t n_azimuth);

  std::size_t size() const { return nodes_.size(); }
  std::size_t n_polar() const { return n_polar_; }
  std::size_t n_azimuth() const { return n_azimuth_; }
  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  double integrate(F&& fn) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) acc += weights_[k] * fn(nodes_[k]);
    return acc;
  }

 private:
  std::size_t n_polar_{0}, n_azimuth_{0};
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

SphereQuadrature make_sphere_quadrature(std::size_t n_polar, std::size_t n_azimuth);

/// Bilinear weights over the (radius, cos θ) rings around the p₁ axis.
struct RingStencil {
  std::array<std::uint32_t, 4> ring{};
  std::array<double, 4> weight{};
};

/// Trilinear weights over (radius, cos θ, φ) nodes.
struct NodeStencil {
  std::array<std::uint32_t, 8> node{};
  std::array<double, 8> weight{};
};

/// Spherical-polar product rule on the ball |p| ≤ pmax. The polar axis is the
/// p₁ axis: p = r (cos θ, sin θ cos φ, sin θ sin φ). Radial nodes are
/// Gauss–Legendre on (0, pmax) with the r² Jacobian folded into the weights;
/// cos θ nodes are Gauss–Legendre with an even count so that p₁ ≠ 0 on every
/// node; φ_k = 2πk/n_azimuth.
///
/// Node index = ring * n_azimuth + k with ring = i_r * n_polar + i_θ. A "ring"
/// is the set of nodes sharing (r, cos θ).
class MomentumQuadrature {
 public:
  MomentumQuadrature() = default;
  MomentumQuadrature(double pmax, std::size_t n_radial, std::size_t n_polar, std::size_t n_azimuth);

  double pmax() const { return pmax_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t n_radial() const { return radii_.size(); }
  std::size_t n_polar() const { return cos_polar_.size(); }
  std::size_t n_azimuth() const { return n_azimuth_; }
  std::size_t ring_count() const { return radii_.size() * cos_polar_.size(); }

  std::size_t ring_of(std::size_t node) const { return node / n_azimuth_; }
  std::size_t azimuth_index_of(std::size_t node) const { return node % n_azimuth_; }
  std::size_t node_index(std::size_t ring, std::size_t k) const { return ring * n_azimuth_ + k; }

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const Vec3& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  /// p⁰ per node, computed from the radius so it is identical around a ring.
  const std::vector<double>& energies() const { return energies_; }
  /// p̂₁ = r cos θ / p⁰ per node.
  const std::vector<double>& velocity1() const { return velocity1_; }
  /// |p| per node.
  double radius_of(std::size_t node) const { return radii_[ring_of(node) / n_polar()]; }

  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& cos_polar() const { return cos_polar_; }

  /// Σ w f(p) over the nodes.
  template <class F>
  double integrate(F&& fn) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * fn(nodes_[i]);
    return acc;
  }

  /// Interpolation stencils. Outside the ball they return false (the value is
  /// taken as 0). Inside, coordinates beyond the outermost nodes are clamped to
  /// them (constant extension). With inv_theta = 0 the weights are the plain
  /// multilinear ones, in [0, 1]. With inv_theta > 0 the stencil interpolates
  /// f e^{p⁰/θ} and multiplies back by e^{−p⁰/θ}, which reproduces e^{−p⁰/θ}
  /// exactly in the radial direction; weights stay nonnegative.
  bool ring_stencil(const Vec3& p, RingStencil& out, double inv_theta = 0.0) const;
  bool node_stencil(const Vec3& p, NodeStencil& out, double inv_theta = 0.0) const;

  /// True when `values` (size() × stride) are identical around every ring.
  bool ring_invariant(const std::vector<double>& values, std::size_t stride) const;

 private:
  struct AxisLocator {
    std::vector<double> nodes;
    std::vector<std::uint32_t> table;  // cell -> largest node index with node <= cell start
    double lo{0}, inv_cell{0};
    // i0 <= i1, t in [0,1]: value ~ (1-t) f[i0] + t f[i1]
    void locate(double v, std::uint32_t& i0, std::uint32_t& i1, double& t) const;
    void build(std::vector<double> ns, double lo, double hi);
  };

  double pmax_{0};
  std::size_t n_azimuth_{0};
  std::vector<double> radii_, radial_weights_, radial_energies_;
  std::vector<double> cos_polar_, polar_weights_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_, energies_, velocity1_;
  AxisLocator radial_axis_, polar_axis_;
};

MomentumQuadrature make_momentum_quadrature(double pmax, std::size_t n_radial, std::size_t n_polar,
                                            std::size_t n_azimuth);

/// ∫_{S²} dω / |ω − a| = 4π for |a| ≤ 1 and 4π/|a| otherwise.
double sphere_inv_distance(const Vec3& a);
/// ∫_{S²} e^{c ω·v} dω = 4π sinh(c|v|)/(c|v|); series below c|v| = 1e-6.
double sphere_exp(double c, const Vec3& v);

}  // namespace rbe
