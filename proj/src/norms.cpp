#include "rbe/norms.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "rbe/errors.hpp"

namespace rbe {

namespace {

// Searches compare with a relative margin so that rounding-level ties (from
// symmetric data, or a field scaled by a non-power of two) resolve the same
// way and the search follows the same path.
constexpr double kTieRel = 1e-12;

std::size_t first_near_max(const std::vector<double>& val) {
  const double m = *std::max_element(val.begin(), val.end());
  std::size_t i = 0;
  while (val[i] < m - kTieRel * std::abs(m)) ++i;
  return i;
}

bool improves(double v, double cur) { return v > cur + kTieRel * std::abs(cur); }

}  // namespace

double norm_LinfL1(const DistField& f) {
  const auto& quad = f.grid().momentum();
  double best = 0.0;
  for (std::size_t j = 0; j < f.n_x(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.n_p(); ++i)
      acc += quad.weights()[i] * std::sqrt(quad.energies()[i]) * std::abs(f(i, j));
    best = std::max(best, acc);
  }
  return best;
}

double norm_L1Linf(const DistField& f) { return norm_main(f, 0.0); }

double norm_main(const DistField& f, double k) {
  const auto& quad = f.grid().momentum();
  const auto sup = f.sup_over_x();
  double acc = 0.0;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    if (sup[i] == 0.0) continue;
    const double p0 = quad.energies()[i];
    acc += quad.weights()[i] * std::sqrt(p0) * weight_phi(k, p0) * sup[i];
  }
  return acc;
}

//---------------------------------------------------------------------------//

namespace {

struct RieszData {
  std::vector<Vec3> nodes;
  std::vector<double> mass;   // w_p ρ_p
  std::vector<double> h;      // desingularization radius
};

RieszData riesz_data(const MomentumQuadrature& quad, const std::vector<double>& density) {
  if (density.size() != quad.size()) throw ConfigError("density does not match the quadrature");
  RieszData d;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    if (density[i] == 0.0) continue;
    const double w = quad.weights()[i];
    d.nodes.push_back(quad.node(i));
    d.mass.push_back(w * density[i]);
    d.h.push_back(std::cbrt(3.0 * w / (4.0 * std::numbers::pi)));
  }
  return d;
}

double riesz_eval(const RieszData& d, const Vec3& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const double r = norm(d.nodes[i] - a);
    acc += d.mass[i] * (r < d.h[i] ? 1.5 / d.h[i] : 1.0 / r);
  }
  return acc;
}

Vec3 clamp_cube(const Vec3& a, double l) {
  return {std::clamp(a.x, -l, l), std::clamp(a.y, -l, l), std::clamp(a.z, -l, l)};
}

}  // namespace

double riesz_potential(const MomentumQuadrature& quad, const std::vector<double>& density,
                       const Vec3& a) {
  return riesz_eval(riesz_data(quad, density), a);
}

RieszSup riesz_sup(const MomentumQuadrature& quad, const std::vector<double>& density) {
  const RieszData d = riesz_data(quad, density);
  RieszSup out;
  if (d.nodes.empty()) return out;

  const double l = quad.pmax();
  std::vector<Vec3> cand(quad.nodes());
  cand.push_back({0.0, 0.0, 0.0});
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        cand.push_back({l * (0.5 * i - 1.0), l * (0.5 * j - 1.0), l * (0.5 * k - 1.0)});

  std::vector<double> val(cand.size());
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < cand.size(); ++c) val[c] = riesz_eval(d, cand[c]);
  const std::size_t best = first_near_max(val);
  out.value = val[best];
  out.argmax = cand[best];

  // compass search on the six axis directions
  double step = l / static_cast<double>(2 * quad.n_radial());
  const double stop = 1e-3 * step;
  static constexpr std::array<Vec3, 6> dirs{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                             {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (int evals = 0; step > stop && evals < 600;) {
    bool moved = false;
    for (const auto& dir : dirs) {
      const Vec3 a = clamp_cube(out.argmax + dir * step, l);
      const double v = riesz_eval(d, a);
      ++evals;
      if (improves(v, out.value)) {
        out.value = v;
        out.argmax = a;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return out;
}

RieszSup norm_inv(const DistField& f, double k) {
  const auto& quad = f.grid().momentum();
  auto dens = f.sup_over_x();
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const double p0 = quad.energies()[i];
    dens[i] *= std::sqrt(p0) * weight_phi(k, p0);
  }
  return riesz_sup(quad, dens);
}

//---------------------------------------------------------------------------//

namespace {

struct DiskNodes {
  std::vector<Vec3> u;
  std::vector<double> w;
};

DiskNodes disk_nodes(double radius, const PlaneRule& rule) {
  if (rule.n_radial < 1 || rule.n_angular < 3)
    throw ConfigError("plane rule needs n_radial >= 1 and n_angular >= 3");
  const auto gl = gauss_legendre(rule.n_radial);
  const double dth = 2.0 * std::numbers::pi / static_cast<double>(rule.n_angular);
  DiskNodes d;
  for (std::size_t i = 0; i < rule.n_radial; ++i) {
    const double r = 0.5 * radius * (gl.nodes[i] + 1.0);
    const double wr = 0.5 * radius * gl.weights[i] * r * dth;
    for (std::size_t j = 0; j < rule.n_angular; ++j) {
      const double th = dth * static_cast<double>(j);
      d.u.push_back({r * std::cos(th), r * std::sin(th), 0.0});
      d.w.push_back(wr);
    }
  }
  return d;
}

double plane_eval(const std::function<double(const Vec3&)>& density, const Vec3& normal,
                  const DiskNodes& disk) {
  const LorentzTransform back = rotation_taking(normal).transpose();
  double acc = 0.0;
  for (std::size_t i = 0; i < disk.u.size(); ++i) acc += disk.w[i] * density(back.apply_spatial(disk.u[i]));
  return acc;
}

Vec3 canonical(Vec3 n) {
  n = n / norm(n);
  if (n.z < 0.0 || (n.z == 0.0 && (n.y < 0.0 || (n.y == 0.0 && n.x < 0.0)))) n = -n;
  return n;
}

}  // namespace

double plane_integral(const std::function<double(const Vec3&)>& density, const Vec3& normal,
                      double pmax, const PlaneRule& rule) {
  return plane_eval(density, normal, disk_nodes(pmax, rule));
}

std::vector<Vec3> fibonacci_half_sphere(std::size_t n) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ph = golden * static_cast<double>(i);
    out[i] = {rho * std::cos(ph), rho * std::sin(ph), z};
  }
  return out;
}

PlaneSup plane_sup(const std::function<double(const Vec3&)>& density, double pmax,
                   std::size_t n_normals, const PlaneRule& rule) {
  if (n_normals < 3) throw ConfigError("n_normals must be >= 3", "n_normals");
  const DiskNodes disk = disk_nodes(pmax, rule);
  const auto normals = fibonacci_half_sphere(n_normals);
  std::vector<double> val(normals.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < normals.size(); ++i) val[i] = plane_eval(density, normals[i], disk);
  const std::size_t best = first_near_max(val);
  PlaneSup out{val[best], normals[best]};

  // compass search in the tangent plane of the current normal
  double step = 0.5 * std::sqrt(2.0 * std::numbers::pi / static_cast<double>(n_normals));
  for (int evals = 0; step > 1e-3 && evals < 200;) {
    const Vec3 n = out.normal;
    const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 t1 = cross(n, helper);
    t1 = t1 / norm(t1);
    const Vec3 t2 = cross(n, t1);
    const std::array<Vec3, 4> dirs{t1, -t1, t2, -t2};
    bool moved = false;
    for (const auto& dir : dirs) {
      const Vec3 cand = canonical(n + dir * step);
      const double v = plane_eval(density, cand, disk);
      ++evals;
      if (improves(v, out.value)) {
        out = {v, cand};
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return out;
}

namespace {

// Interpolated nodal values times (p⁰)^{1/2} e^{kp⁰} at arbitrary p.
std::function<double(const Vec3&)> weighted_interpolant(const MomentumQuadrature& quad,
                                                        const std::vector<double>& nodal,
                                                        double k) {
  return [&quad, &nodal, k](const Vec3& p) {
    NodeStencil st;
    if (!quad.node_stencil(p, st)) return 0.0;
    double v = 0.0;
    for (int i = 0; i < 8; ++i) v += st.weight[i] * nodal[st.node[i]];
    if (v == 0.0) return 0.0;
    const double p0 = std::sqrt(1.0 + norm2(p));
    return std::sqrt(p0) * weight_phi(k, p0) * v;
  };
}

}  // namespace

PlaneSup norm_hyp(const DistField& f, double k, std::size_t n_normals, const PlaneRule& rule) {
  if (n_normals < 3) throw ConfigError("n_normals must be >= 3", "n_normals");
  const auto& quad = f.grid().momentum();
  const auto sup = f.sup_over_x();
  return plane_sup(weighted_interpolant(quad, sup, k), quad.pmax(), n_normals, rule);
}

PlaneSup norm_hyp(const std::function<double(const Vec3&)>& fn, double k, double pmax,
                  std::size_t n_normals, const PlaneRule& rule) {
  auto dens = [&fn, k](const Vec3& p) {
    const double v = std::abs(fn(p));
    if (v == 0.0) return 0.0;
    const double p0 = std::sqrt(1.0 + norm2(p));
    return std::sqrt(p0) * weight_phi(k, p0) * v;
  };
  return plane_sup(dens, pmax, n_normals, rule);
}

//---------------------------------------------------------------------------//

std::vector<double> gain_sup(const DistField& f, const CollisionOperator& op) {
  return op.gain(f, f).sup_over_x();
}

namespace {

double checked_norm(const DistField& f, double k) {
  const double n = norm_main(f, k);
  if (!(n > 0.0)) throw DomainError("ratio undefined");
  return n;
}

}  // namespace

double gain_ratio_inv(const DistField& f, double k, const std::vector<double>& gain) {
  const double nf = checked_norm(f, k);
  const auto& quad = f.grid().momentum();
  std::vector<double> dens(gain.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = weight_phi(k, quad.energies()[i]) * gain[i];
  return riesz_sup(quad, dens).value / (nf * nf);
}

double gain_ratio_inv(const DistField& f, double k, const CollisionOperator& op) {
  checked_norm(f, k);
  return gain_ratio_inv(f, k, gain_sup(f, op));
}

std::vector<double> gain_ratio_pointwise(const DistField& f, const std::vector<double>& k_list,
                                         const std::vector<double>& gain) {
  const auto& quad = f.grid().momentum();
  std::vector<double> out;
  for (double k : k_list) {
    const double nf = checked_norm(f, k);
    const double ninv = norm_inv(f, k).value;
    if (!(ninv > 0.0)) throw DomainError("ratio undefined");
    double num = 0.0;
    for (std::size_t i = 0; i < gain.size(); ++i)
      num += quad.weights()[i] * weight_phi(k, quad.energies()[i]) * gain[i];
    out.push_back(k * num / (ninv * nf));
  }
  return out;
}

std::vector<double> gain_ratio_pointwise(const DistField& f, const std::vector<double>& k_list,
                                         const CollisionOperator& op) {
  if (f.is_zero()) throw DomainError("ratio undefined");
  return gain_ratio_pointwise(f, k_list, gain_sup(f, op));
}

double gain_ratio_hyp(const DistField& f, double k, const std::vector<double>& gain,
                      std::size_t n_normals, const PlaneRule& rule) {
  const double nf = checked_norm(f, k);
  const auto& quad = f.grid().momentum();
  return plane_sup(weighted_interpolant(quad, gain, k), quad.pmax(), n_normals, rule).value /
         (nf * nf);
}

double gain_ratio_hyp(const DistField& f, double k, const CollisionOperator& op,
                      std::size_t n_normals, const PlaneRule& rule) {
  checked_norm(f, k);
  return gain_ratio_hyp(f, k, gain_sup(f, op), n_normals, rule);
}

NormReport norm_report(const DistField& f, const CollisionOperator& op, const NormOptions& opt) {
  NormReport r;
  r.k = opt.k;
  r.norm_LinfL1 = norm_LinfL1(f);
  r.norm_L1Linf = norm_L1Linf(f);
  r.norm_main = norm_main(f, opt.k);
  r.norm_inv = norm_inv(f, opt.k);
  r.norm_hyp = norm_hyp(f, opt.k, opt.n_normals, opt.plane);
  if (r.norm_main > 0.0) {
    const auto gain = gain_sup(f, op);
    r.r1 = gain_ratio_inv(f, opt.k, gain);
    const auto r2 = gain_ratio_pointwise(f, opt.k_list, gain);
    for (std::size_t i = 0; i < r2.size(); ++i) r.r2.emplace_back(opt.k_list[i], r2[i]);
    r.r_hyp = gain_ratio_hyp(f, opt.k, gain, opt.n_normals, opt.plane);
  }
  return r;
}

}  // namespace rbe
