// Oracle mode: kinematics identities on seeded random pairs and the
// quadrature rules against closed forms.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "internal.hpp"
#include "rbe/quad.hpp"
#include "rbe/relkin.hpp"

namespace rbe::app {

namespace {

constexpr double kPi = std::numbers::pi;

class Table {
 public:
  // value is a max error (or a violation count), passing when value <= tol
  void add(const std::string& name, double value, double tol) {
    const bool pass = std::isfinite(value) && value <= tol;
    all_ = all_ && pass;
    rows_.push_back({{"name", name}, {"value", num(value)}, {"tol", tol}, {"pass", pass}});
  }
  bool all_pass() const { return all_; }
  Json json() const { return rows_; }

 private:
  Json rows_ = Json::array();
  bool all_{true};
};

// |p| log-uniform on [1e-3, 1e2], direction uniform
Vec3 random_momentum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::pow(10.0, -3.0 + 5.0 * u(rng));
  const double z = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * kPi * u(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * z};
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  return v / norm(v);
}

void kinematics(Table& t, std::mt19937_64& rng, std::size_t n) {
  double s_err = 0, moller_err = 0;
  double lower_viol = 0, upper_viol = 0, gap_viol = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Momentum3 p(random_momentum(rng)), q(random_momentum(rng));
    const Invariants inv = invariants(p, q);
    s_err = std::max(s_err, std::abs(inv.s - inv.g * inv.g - 4.0) / inv.s);
    const double p0 = energy(p), q0 = energy(q);
    const double d = norm(p.p - q.p);
    const double lower = std::sqrt(norm2(p.p - q.p) + norm2(cross(p.p, q.p))) / std::sqrt(p0 * q0);
    const double upper = std::min(d, 2.0 * std::sqrt(p0 * q0));
    // a few ulps of slack: both bounds are attained in the limit q → p
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, upper);
    if (lower > inv.g + slack) lower_viol += 1;
    if (inv.g > upper + slack) upper_viol += 1;
    if (std::abs(p0 - q0) > d + slack) gap_viol += 1;
    const double vm = moller_velocity(p, q);
    const double vp = moller_velocity_product(p, q);
    moller_err = std::max(moller_err, std::abs(vm - vp) / std::max(vp, 1e-300));
  }
  t.add("kinematics: max |s - g^2 - 4| / s", s_err, 1e-12);
  t.add("kinematics: g lower-bound violations", lower_viol, 0);
  t.add("kinematics: g upper-bound violations", upper_viol, 0);
  t.add("kinematics: |p0 - q0| <= |p - q| violations", gap_viol, 0);
  t.add("kinematics: Moller root vs product form, rel", moller_err, 1e-8);
}

void collision_map(Table& t, std::mt19937_64& rng, std::size_t n) {
  double mom = 0, en = 0, inv_err = 0, epq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Momentum3 p(random_momentum(rng)), q(random_momentum(rng));
    const Vec3 omega = random_unit(rng);
    const CollisionOutcome out = post_collision(p, q, omega);
    const Vec3 tot = p.p + q.p;
    const double scale = 1.0 + norm(tot);
    mom = std::max(mom, norm(out.p.p + out.q.p - tot) / scale);
    const double e_in = energy(p) + energy(q);
    en = std::max(en, std::abs(energy(out.p) + energy(out.q) - e_in) / e_in);
    const Invariants a = invariants(p, q), b = invariants(out.p, out.q);
    inv_err = std::max({inv_err, std::abs(a.s - b.s) / a.s, std::abs(a.g - b.g) / std::max(1.0, a.g)});
    const double closed = 0.5 * e_in + 0.5 * a.g / std::sqrt(a.s) * dot(omega, tot);
    epq = std::max(epq, std::abs(energy(out.p) - closed) / e_in);
  }
  t.add("collision map: 3-momentum conservation, rel", mom, 1e-12);
  t.add("collision map: energy conservation, rel", en, 1e-10);
  t.add("collision map: s and g invariance, rel", inv_err, 1e-10);
  t.add("collision map: closed-form post energy, rel", epq, 1e-10);
}

void lorentz(Table& t, std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double metric = 0, det = 0, rot = 0, invariance = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 dir = random_unit(rng);
    const LorentzTransform boost = boost_to(dir * (0.95 * u(rng)));
    const Vec3 a = random_momentum(rng);
    const LorentzTransform rot_a = rotation_taking(a);
    const LorentzTransform lam = rot_a.compose(boost);
    metric = std::max({metric, boost.metric_defect(), rot_a.metric_defect(), lam.metric_defect()});
    det = std::max({det, std::abs(boost.determinant() - 1.0), std::abs(rot_a.determinant() - 1.0),
                    std::abs(lam.determinant() - 1.0)});
    const FourVector ra = rot_a.apply({0.0, a});
    const double na = norm(a);
    rot = std::max(rot, std::max({std::abs(ra.t), std::abs(ra.x.x), std::abs(ra.x.y),
                                  std::abs(ra.x.z - na)}) / na);
    const FourVector p = on_shell(Momentum3(random_momentum(rng)));
    const FourVector q = on_shell(Momentum3(random_momentum(rng)));
    const double before = minkowski_dot(p, q);
    const double after = minkowski_dot(lam.apply(p), lam.apply(q));
    invariance = std::max(invariance, std::abs(after - before) / std::abs(before));
  }
  t.add("lorentz: max |L^T eta L - eta|", metric, 1e-12);
  t.add("lorentz: max |det L - 1|", det, 1e-12);
  t.add("lorentz: rotation_taking hits (0,0,0,|a|), rel", rot, 1e-12);
  t.add("lorentz: Minkowski product invariance, rel", invariance, 1e-12);
}

void quadrature(Table& t) {
  {
    const SphereQuadrature sq(16, 32);
    double err = 0;
    for (double cv : {0.0, 0.5, 1.0, 2.0, 3.5, 5.0}) {
      const Vec3 v = Vec3{0.3, -0.5, 0.8} / norm(Vec3{0.3, -0.5, 0.8}) * cv;
      const double num_v = sq.integrate([&](const Vec3& w) { return std::exp(dot(w, v)); });
      const double ref = sphere_exp(1.0, v);
      err = std::max(err, std::abs(num_v - ref) / ref);
    }
    t.add("sphere rule (16,32) vs exp closed form, rel", err, 1e-8);
  }
  {
    const SphereQuadrature sq(64, 128);
    double err = 0;
    for (double r : {0.0, 0.5, 2.0, 10.0}) {
      const Vec3 a = Vec3{0.48, 0.6, 0.64} * r;
      const double num_v = sq.integrate([&](const Vec3& w) { return 1.0 / norm(w - a); });
      const double ref = sphere_inv_distance(a);
      err = std::max(err, std::abs(num_v - ref) / ref);
    }
    t.add("sphere rule (64,128) vs inverse-distance closed form, rel", err, 1e-6);
  }
  {
    // ∫_{|p|<R} e^{-|p|} dp = 4π (2 − e^{−R}(R² + 2R + 2))
    const double R = 30.0;
    const MomentumQuadrature mq(R, 32, 8, 16);
    const double num_v = mq.integrate([](const Vec3& p) { return std::exp(-norm(p)); });
    const double ref = 4.0 * kPi * (2.0 - std::exp(-R) * (R * R + 2.0 * R + 2.0));
    t.add("momentum rule: ball integral of e^-|p|, rel", std::abs(num_v - ref) / ref, 1e-10);
  }
  {
    // ∫ p₁² over the ball = 4π R⁵/15, exercises the polar rule
    const double R = 2.0;
    const MomentumQuadrature mq(R, 4, 4, 8);
    const double num_v = mq.integrate([](const Vec3& p) { return p.x * p.x; });
    const double ref = 4.0 * kPi * std::pow(R, 5) / 15.0;
    t.add("momentum rule: ball integral of p1^2, rel", std::abs(num_v - ref) / ref, 1e-12);
  }
}

}  // namespace

Json oracle_table(const RunConfig& cfg, bool& all_pass) {
  std::mt19937_64 rng(cfg.seed);
  Table t;
  kinematics(t, rng, cfg.oracle_samples);
  collision_map(t, rng, cfg.oracle_samples);
  lorentz(t, rng, std::max<std::size_t>(1, cfg.oracle_samples / 10));
  quadrature(t);
  all_pass = t.all_pass();
  return t.json();
}

}  // namespace rbe::app
