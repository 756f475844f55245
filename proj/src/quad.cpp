#include "rbe/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rbe/errors.hpp"

namespace rbe {

GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw ConfigError("gauss_legendre: need at least one node");
  GaussLegendre gl;
  gl.nodes.assign(n, 0.0);
  gl.weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // descending x from the initial guess; store ascending and mirrored
    gl.nodes[n - 1 - i] = x;
    gl.nodes[i] = -x;
    gl.weights[n - 1 - i] = w;
    gl.weights[i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

//---------------------------------------------------------------------------//

SphereQuadrature::SphereQuadrature(std::size_t n_polar, std::size_t n_azimuth)
    : n_polar_(n_polar), n_azimuth_(n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4) {
    throw ConfigError("sphere quadrature needs n_polar >= 2 and n_azimuth >= 4, got " +
                      std::to_string(n_polar) + "x" + std::to_string(n_azimuth));
  }
  const auto gl = gauss_legendre(n_polar);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_azimuth);
  nodes_.reserve(n_polar * n_azimuth);
  weights_.reserve(n_polar * n_azimuth);
  for (std::size_t i = 0; i < n_polar; ++i) {
    const double mu = gl.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (std::size_t j = 0; j < n_azimuth; ++j) {
      const double phi = dphi * static_cast<double>(j);
      nodes_.push_back({st * std::cos(phi), st * std::sin(phi), mu});
      weights_.push_back(gl.weights[i] * dphi);
    }
  }
}

SphereQuadrature make_sphere_quadrature(std::size_t n_polar, std::size_t n_azimuth) {
  return SphereQuadrature(n_polar, n_azimuth);
}

//---------------------------------------------------------------------------//

void MomentumQuadrature::AxisLocator::build(std::vector<double> ns, double lo_in, double hi_in) {
  nodes = std::move(ns);
  lo = lo_in;
  const std::size_t cells = 2048;
  inv_cell = static_cast<double>(cells) / (hi_in - lo_in);
  table.assign(cells, 0);
  std::uint32_t i = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double start = lo + static_cast<double>(c) / inv_cell;
    while (i + 1 < nodes.size() && nodes[i + 1] <= start) ++i;
    table[c] = i;
  }
}

void MomentumQuadrature::AxisLocator::locate(double v, std::uint32_t& i0, std::uint32_t& i1,
                                             double& t) const {
  const auto last = static_cast<std::uint32_t>(nodes.size() - 1);
  if (!(v > nodes.front())) {
    i0 = i1 = 0;
    t = 0.0;
    return;
  }
  if (v >= nodes.back()) {
    i0 = i1 = last;
    t = 0.0;
    return;
  }
  auto c = static_cast<std::size_t>((v - lo) * inv_cell);
  if (c >= table.size()) c = table.size() - 1;
  std::uint32_t i = table[c];
  while (i + 1 < last && nodes[i + 1] <= v) ++i;
  i0 = i;
  i1 = i + 1;
  t = (v - nodes[i]) / (nodes[i + 1] - nodes[i]);
}

MomentumQuadrature::MomentumQuadrature(double pmax, std::size_t n_radial, std::size_t n_polar,
                                       std::size_t n_azimuth)
    : pmax_(pmax), n_azimuth_(n_azimuth) {
  if (!(pmax > 0.0)) throw ConfigError("momentum quadrature needs pmax > 0", "pmax");
  if (n_radial < 1) throw ConfigError("momentum quadrature needs n_radial >= 1", "n_radial");
  if (n_polar < 2 || n_polar % 2 != 0) {
    throw ConfigError("momentum quadrature needs an even n_polar >= 2 (keeps p1 != 0 on nodes)",
                      "n_polar");
  }
  if (n_azimuth < 1) throw ConfigError("momentum quadrature needs n_azimuth >= 1", "n_azimuth");

  const auto gr = gauss_legendre(n_radial);
  for (std::size_t i = 0; i < n_radial; ++i) {
    const double r = 0.5 * pmax * (gr.nodes[i] + 1.0);
    radii_.push_back(r);
    radial_energies_.push_back(std::sqrt(1.0 + r * r));
    radial_weights_.push_back(0.5 * pmax * gr.weights[i] * r * r);
  }
  const auto gp = gauss_legendre(n_polar);
  cos_polar_ = gp.nodes;
  polar_weights_ = gp.weights;

  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_azimuth);
  std::vector<double> cphi(n_azimuth), sphi(n_azimuth);
  for (std::size_t k = 0; k < n_azimuth; ++k) {
    cphi[k] = std::cos(dphi * static_cast<double>(k));
    sphi[k] = std::sin(dphi * static_cast<double>(k));
  }

  const std::size_t total = n_radial * n_polar * n_azimuth;
  nodes_.reserve(total);
  weights_.reserve(total);
  energies_.reserve(total);
  velocity1_.reserve(total);
  for (std::size_t ir = 0; ir < n_radial; ++ir) {
    const double r = radii_[ir];
    const double e = std::sqrt(1.0 + r * r);
    for (std::size_t ip = 0; ip < n_polar; ++ip) {
      const double mu = cos_polar_[ip];
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      const double p1 = r * mu;
      for (std::size_t k = 0; k < n_azimuth; ++k) {
        nodes_.push_back({p1, r * st * cphi[k], r * st * sphi[k]});
        weights_.push_back(radial_weights_[ir] * polar_weights_[ip] * dphi);
        energies_.push_back(e);
        velocity1_.push_back(p1 / e);
      }
    }
  }

  radial_axis_.build(radii_, 0.0, pmax);
  polar_axis_.build(cos_polar_, -1.0, 1.0);
}

MomentumQuadrature make_momentum_quadrature(double pmax, std::size_t n_radial, std::size_t n_polar,
                                            std::size_t n_azimuth) {
  return MomentumQuadrature(pmax, n_radial, n_polar, n_azimuth);
}

bool MomentumQuadrature::ring_stencil(const Vec3& p, RingStencil& out, double inv_theta) const {
  const double r2 = norm2(p);
  const double r = std::sqrt(r2);
  if (r > pmax_) return false;
  std::uint32_t r0, r1, m0, m1;
  double tr, tm;
  radial_axis_.locate(r, r0, r1, tr);
  const double mu = r > 0.0 ? std::clamp(p.x / r, -1.0, 1.0) : 0.0;
  polar_axis_.locate(mu, m0, m1, tm);
  const auto np = static_cast<std::uint32_t>(cos_polar_.size());
  out.ring = {r0 * np + m0, r0 * np + m1, r1 * np + m0, r1 * np + m1};
  double a0 = 1.0 - tr, a1 = tr;
  if (inv_theta > 0.0) {
    const double e = std::sqrt(1.0 + r2);
    a0 *= std::exp((radial_energies_[r0] - e) * inv_theta);
    a1 *= std::exp((radial_energies_[r1] - e) * inv_theta);
  }
  out.weight = {a0 * (1.0 - tm), a0 * tm, a1 * (1.0 - tm), a1 * tm};
  return true;
}

bool MomentumQuadrature::node_stencil(const Vec3& p, NodeStencil& out, double inv_theta) const {
  RingStencil rs;
  if (!ring_stencil(p, rs, inv_theta)) return false;
  double phi = std::atan2(p.z, p.y);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  const double u = phi * static_cast<double>(n_azimuth_) / (2.0 * std::numbers::pi);
  const double fl = std::floor(u);
  const double t = u - fl;
  const auto n = static_cast<std::uint32_t>(n_azimuth_);
  const std::uint32_t k0 = static_cast<std::uint32_t>(fl) % n;
  const std::uint32_t k1 = (k0 + 1) % n;
  for (int j = 0; j < 4; ++j) {
    out.node[2 * j] = rs.ring[j] * n + k0;
    out.node[2 * j + 1] = rs.ring[j] * n + k1;
    out.weight[2 * j] = rs.weight[j] * (1.0 - t);
    out.weight[2 * j + 1] = rs.weight[j] * t;
  }
  return true;
}

bool MomentumQuadrature::ring_invariant(const std::vector<double>& values,
                                        std::size_t stride) const {
  if (values.size() != size() * stride) return false;
  const std::size_t ring_len = n_azimuth_ * stride;
  for (std::size_t ring = 0; ring < ring_count(); ++ring) {
    const double* base = values.data() + ring * ring_len;
    for (std::size_t k = 1; k < n_azimuth_; ++k) {
      const double* other = base + k * stride;
      for (std::size_t j = 0; j < stride; ++j)
        if (!(other[j] == base[j])) return false;
    }
  }
  return true;
}

//---------------------------------------------------------------------------//

double sphere_inv_distance(const Vec3& a) {
  const double r = norm(a);
  if (r == 0.0) return 4.0 * std::numbers::pi;
  return 2.0 * std::numbers::pi / r * (1.0 + r - std::abs(1.0 - r));
}

double sphere_exp(double c, const Vec3& v) {
  const double x = std::abs(c) * norm(v);
  if (x < 1e-6) return 4.0 * std::numbers::pi * (1.0 + x * x / 6.0);
  return 4.0 * std::numbers::pi * std::sinh(x) / x;
}

}  // namespace rbe
