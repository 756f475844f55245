#include "rbe/relkin.hpp"

#include <algorithm>
#include <utility>

#include "rbe/errors.hpp"

namespace rbe {

namespace {

// 2(|p−q|² + |p×q|²)/(p⁰q⁰ + 1 + p·q). The denominator is ≥ 2 because
// p⁰q⁰ ≥ |p||q| + 1.
double g_squared(const Vec3& p, double p0, const Vec3& q, double q0) {
  const double num = norm2(p - q) + norm2(cross(p, q));
  return 2.0 * num / (p0 * q0 + 1.0 + dot(p, q));
}

}  // namespace

Invariants invariants(const Momentum3& p, const Momentum3& q) {
  const double p0 = energy(p);
  const double q0 = energy(q);
  const double minus_pq = p0 * q0 - dot(p.p, q.p);
  Invariants out;
  out.s = 2.0 * (minus_pq + 1.0);
  // contracted multiply-adds leave |p×p| at rounding level, not 0
  if (p.p == q.p) return out;
  out.g = std::sqrt(std::max(0.0, g_squared(p.p, p0, q.p, q0)));
  return out;
}

double moller_velocity(const Momentum3& p, const Momentum3& q) {
  return moller_velocity(hat(p), hat(q));
}

double moller_velocity_product(const Momentum3& p, const Momentum3& q) {
  const auto inv = invariants(p, q);
  return inv.g * std::sqrt(inv.s) / (2.0 * energy(p) * energy(q));
}

CmFrame::CmFrame(const Momentum3& p, const Momentum3& q) { init(p.p, energy(p), q.p, energy(q)); }

CmFrame::CmFrame(const Vec3& p, double p0, const Vec3& q, double q0) { init(p, p0, q, q0); }

void CmFrame::init(const Vec3& p, double p0, const Vec3& q, double q0) {
  total_ = p + q;
  total_energy_ = p0 + q0;
  const double g2 = std::max(0.0, g_squared(p, p0, q, q0));
  g_ = std::sqrt(g2);
  s_ = g2 + 4.0;
  sqrt_s_ = std::sqrt(s_);
  coef_ = 1.0 / (sqrt_s_ * (total_energy_ + sqrt_s_));
  small_total_ = norm(total_) < kSmallTotalMomentum;
}

CollisionOutcome post_collision(const Momentum3& p, const Momentum3& q, const Vec3& omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) {
    throw DomainError("post_collision: scattering direction is not a unit vector");
  }
  const CmFrame frame(p, q);
  Vec3 pp, qq;
  frame.post(omega, pp, qq);
  return {Momentum3(pp), Momentum3(qq)};
}

double scattering_cos(const Momentum3& p, const Momentum3& q, const CollisionOutcome& post) {
  const double g = invariants(p, q).g;
  if (g == 0.0) throw DomainError("degenerate pair");
  const FourVector a = on_shell(p), b = on_shell(q);
  const FourVector c = on_shell(post.p), d = on_shell(post.q);
  const FourVector diff{a.t - b.t, a.x - b.x};
  const FourVector diff_post{c.t - d.t, c.x - d.x};
  return std::clamp(minkowski_dot(diff, diff_post) / (g * g), -1.0, 1.0);
}

double scattering_cos(const Momentum3& p, const Momentum3& q, const Vec3& omega) {
  if (invariants(p, q).g == 0.0) throw DomainError("degenerate pair");
  return scattering_cos(p, q, post_collision(p, q, omega));
}

CollisionPair::CollisionPair(const Momentum3& p_in, const Momentum3& q_in) : p(p_in), q(q_in) {
  const auto inv = invariants(p, q);
  s = inv.s;
  g = inv.g;
  v_moller = moller_velocity(p, q);
}

//---------------------------------------------------------------------------//

LorentzTransform::LorentzTransform() {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m_[i][j] = (i == j) ? 1.0 : 0.0;
}

FourVector LorentzTransform::apply(const FourVector& v) const {
  const std::array<double, 4> in{v.t, v.x.x, v.x.y, v.x.z};
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += m_[i][j] * in[j];
  return {out[0], {out[1], out[2], out[3]}};
}

Vec3 LorentzTransform::apply_spatial(const Vec3& v) const { return apply({0.0, v}).x; }

LorentzTransform LorentzTransform::compose(const LorentzTransform& inner) const {
  Matrix r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += m_[i][k] * inner.m_[k][j];
  return LorentzTransform(r);
}

LorentzTransform LorentzTransform::transpose() const {
  Matrix r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m_[j][i];
  return LorentzTransform(r);
}

double LorentzTransform::determinant() const {
  Matrix a = m_;
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

double LorentzTransform::metric_defect() const {
  static constexpr std::array<double, 4> eta{-1.0, 1.0, 1.0, 1.0};
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += m_[k][mu] * eta[k] * m_[k][nu];
      const double target = (mu == nu) ? eta[mu] : 0.0;
      worst = std::max(worst, std::abs(v - target));
    }
  }
  return worst;
}

LorentzTransform boost_to(const Vec3& u) {
  const double u2 = norm2(u);
  if (!(u2 < 1.0)) throw DomainError("boost_to: |u| must be below 1");
  if (u2 == 0.0) return {};
  const double gamma = 1.0 / std::sqrt(1.0 - u2);
  const std::array<double, 3> v{u.x, u.y, u.z};
  LorentzTransform::Matrix m{};
  m[0][0] = gamma;
  for (int i = 0; i < 3; ++i) {
    m[0][i + 1] = -gamma * v[i];
    m[i + 1][0] = -gamma * v[i];
    for (int j = 0; j < 3; ++j) {
      m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + (gamma - 1.0) * v[i] * v[j] / u2;
    }
  }
  return LorentzTransform(m);
}

LorentzTransform rotation_taking(const Vec3& a) {
  const double len = norm(a);
  if (len == 0.0) throw DomainError("undefined rotation target");
  const double rho = std::hypot(a.x, a.y);

  // about z: (a1, a2, a3) -> (rho, 0, a3)
  LorentzTransform::Matrix g1{};
  g1[0][0] = 1.0;
  g1[3][3] = 1.0;
  if (rho > 0.0) {
    g1[1][1] = a.x / rho;
    g1[1][2] = a.y / rho;
    g1[2][1] = -a.y / rho;
    g1[2][2] = a.x / rho;
  } else {
    g1[1][1] = 1.0;
    g1[2][2] = 1.0;
  }
  // about y: (rho, 0, a3) -> (0, 0, |a|)
  LorentzTransform::Matrix g2{};
  g2[0][0] = 1.0;
  g2[2][2] = 1.0;
  g2[1][1] = a.z / len;
  g2[1][3] = -rho / len;
  g2[3][1] = rho / len;
  g2[3][3] = a.z / len;

  return LorentzTransform(g2).compose(LorentzTransform(g1));
}

}  // namespace rbe
