#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mc_oracle.hpp"
#include "rbe/collision.hpp"
#include "rbe/errors.hpp"
#include "support.hpp"

using namespace rbe;

namespace {

constexpr double kPi = std::numbers::pi;

double juttner(const Vec3& p, double T = 1.0) { return std::exp(-std::sqrt(1.0 + norm2(p)) / T); }

// ½ ∫₀^π sin^{γ+1}θ dθ = ∫_{S²} sin^γθ/(4π) dω
double c0_oracle(double gamma) {
  return 0.5 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                   [gamma](double t) { return std::pow(std::sin(t), gamma + 1.0); }, 0.0, kPi, 15,
                   1e-15);
}

// sampled from the ring-identical node energies, so the slice is exactly
// ring-invariant and the operator takes its ring-table path
MomentumSlice juttner_slice(const MomentumQuadrature& q, double T) {
  std::vector<double> v(q.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-q.energies()[i] / T);
  return MomentumSlice(q, std::move(v));
}

std::vector<double> jitter(const std::vector<double>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> out(v);
  for (double& x : out) x *= u(rng);
  return out;
}

}  // namespace

TEST_CASE("kernel normalization") {
  Kernel k;
  CHECK(k.isotropic());
  CHECK(k.c0() == 1.0);
  for (double g : {0.5, 1.0, 2.0, 3.5}) {
    k.gamma_ang = g;
    CHECK(k.c0() == doctest::Approx(c0_oracle(g)).epsilon(1e-12));
    CHECK(k.sigma0(0.0) == doctest::Approx(1.0 / (4 * kPi)));
  }
  CHECK_THROWS_AS((Kernel{0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((Kernel{1.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("eval_L") {
  const MomentumQuadrature quad(8.0, 10, 6, 10);
  const Kernel kernel;
  const Momentum3 p(0.7, -0.4, 1.1);

  CHECK(eval_L(MomentumSlice(quad, std::vector<double>(quad.size(), 0.0)), p, quad, kernel) == 0.0);

  SUBCASE("a single node") {
    const std::size_t i0 = 123;
    std::vector<double> v(quad.size(), 0.0);
    v[i0] = 1.0;
    const Momentum3 q(quad.node(i0));
    const double p0 = energy(p), q0 = energy(q);
    const double s = (p0 + q0) * (p0 + q0) - norm2(p.p + q.p);
    const double g = std::sqrt(s - 4.0);
    const double ref = quad.weights()[i0] * g * std::sqrt(s) / (2 * p0 * q0) * g;
    CHECK(eval_L(MomentumSlice(quad, v), p, quad, kernel) == doctest::Approx(ref).epsilon(1e-12));
  }
  SUBCASE("linear, monotone, homogeneous in c_kernel") {
    const auto a = MomentumSlice::sample(quad, [](const Vec3& q) { return juttner(q); });
    const auto b = MomentumSlice::sample(quad, [](const Vec3& q) { return juttner(q, 2.0); });
    std::vector<double> sum(quad.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = 2.0 * a[i] + b[i];
    const double la = eval_L(a, p, quad, kernel), lb = eval_L(b, p, quad, kernel);
    CHECK(eval_L(MomentumSlice(quad, sum), p, quad, kernel) == doctest::Approx(2 * la + lb).epsilon(1e-13));
    CHECK(la <= lb);  // e^{−p⁰} ≤ e^{−p⁰/2}
    const Kernel doubled{2.0, 0.0};
    CHECK(eval_L(a, p, quad, doubled) == doctest::Approx(2 * la).epsilon(1e-15));
  }
  SUBCASE("negative slices are rejected") {
    std::vector<double> v(quad.size(), 1.0);
    v[3] = -1.0;
    CHECK_THROWS((void)MomentumSlice(quad, v));
  }
}

TEST_CASE("eval_Qplus and eval_Qminus") {
  const MomentumQuadrature quad(8.0, 10, 6, 10);
  const SphereQuadrature squad(8, 16);
  const Kernel kernel;
  const Momentum3 p(0.7, -0.4, 1.1);
  const auto zero = MomentumSlice(quad, std::vector<double>(quad.size(), 0.0));
  const auto J = MomentumSlice::sample(quad, [](const Vec3& q) { return juttner(q); });
  const auto J2 = MomentumSlice::sample(quad, [](const Vec3& q) { return juttner(q, 2.0); });

  CHECK(eval_Qplus(zero, J, p, quad, squad, kernel) == 0.0);
  CHECK(eval_Qminus(J, zero, p, quad, kernel) == 0.0);

  SUBCASE("nonnegative and bilinear") {
    const double a = eval_Qplus(J, J2, p, quad, squad, kernel);
    const double b = eval_Qplus(J2, J2, p, quad, squad, kernel);
    CHECK(a > 0.0);
    std::vector<double> mix(quad.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 3.0 * J[i] + J2[i];
    CHECK(eval_Qplus(MomentumSlice(quad, mix), J2, p, quad, squad, kernel) ==
          doctest::Approx(3 * a + b).epsilon(1e-13));
    CHECK(eval_Qplus(J, J2, p, quad, squad, kernel) <= eval_Qplus(J2, J2, p, quad, squad, kernel));
  }
  SUBCASE("constant slices count the pairs that stay in the ball") {
    const double C = 0.37;
    const auto cs = MomentumSlice(quad, std::vector<double>(quad.size(), C));
    const double pmax = quad.pmax();
    const double ref = eval_Qplus(
        [&](const Vec3& v) { return norm(v) <= pmax ? C : 0.0; },
        [&](const Vec3& v) { return norm(v) <= pmax ? C : 0.0; }, p, quad, squad, kernel);
    CHECK(eval_Qplus(cs, cs, p, quad, squad, kernel) == doctest::Approx(ref).epsilon(1e-13));
  }
  SUBCASE("loss term factorizes") {
    for (std::size_t i = 0; i < quad.size(); i += 97) {
      const Momentum3 pi(quad.node(i));
      const double ref = juttner(pi.p) * eval_L(J2, pi, quad, kernel);
      CHECK(eval_Qminus(J, J2, pi, quad, kernel) == doctest::Approx(ref).epsilon(1e-14));
    }
  }
}

TEST_CASE("Monte Carlo oracles on a Juttner slice") {
  // fine enough that the discrete sums sit well inside the sampling error
  const MomentumQuadrature quad(12.0, 32, 16, 32);
  const SphereQuadrature squad(12, 24);
  const auto J = MomentumSlice::sample(quad, [](const Vec3& q) { return juttner(q); });
  const auto fn = [](const Vec3& q) { return juttner(q); };
  const long n = 1'000'000;
  for (double gamma : {0.0, 2.0}) {
    const Kernel kernel{1.0, gamma};
    const test::McKernel mk{1.0, gamma, c0_oracle(gamma)};
    const Momentum3 p(1.0, 0.0, 0.0);
    const auto l = test::mc_loss(fn, p.p, mk, quad.pmax(), n, 31);
    CHECK(std::abs(eval_L(J, p, quad, kernel) - l.mean) <= 3 * l.se);
    const auto g = test::mc_gain(fn, fn, p.p, mk, quad.pmax(), n, 32);
    CHECK(std::abs(eval_Qplus(J, J, p, quad, squad, kernel, 1.0) - g.mean) <= 3 * g.se);
  }
}

TEST_CASE("collision operator paths agree with the pointwise evaluators") {
  const MomentumQuadrature quad(8.0, 8, 4, 8);
  const SphereQuadrature squad(8, 16);
  const Kernel kernel{1.0, 1.0};
  for (double theta : {0.0, 1.0}) {
    const CollisionOperator op(quad, squad, kernel, theta);
    const auto J = juttner_slice(quad, 1.3);
    const auto Jp = MomentumSlice(quad, jitter(J.values(), 41));  // breaks ring invariance
    REQUIRE(quad.ring_invariant(J.values(), 1));
    REQUIRE_FALSE(quad.ring_invariant(Jp.values(), 1));
    for (const MomentumSlice* s : {&J, &Jp}) {
      const auto loss = op.loss(s->values(), 1);
      const auto gain = op.gain(s->values(), s->values(), 1);
      for (std::size_t i = 0; i < quad.size(); i += 7) {
        const Momentum3 p(quad.node(i));
        CHECK(loss[i] == doctest::Approx(eval_L(*s, p, quad, kernel)).epsilon(1e-12));
        CHECK(gain[i] == doctest::Approx(eval_Qplus(*s, *s, p, quad, squad, kernel, theta)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("collision operator results do not depend on the thread count") {
  const MomentumQuadrature quad(8.0, 8, 4, 8);
  const SphereQuadrature squad(6, 12);
  const CollisionOperator op(quad, squad, Kernel{}, 1.0);
  std::vector<double> ring(quad.size() * 3), plain;
  for (std::size_t i = 0; i < quad.size(); ++i)
    for (int j = 0; j < 3; ++j) ring[3 * i + j] = std::exp(-quad.energies()[i] / (1.0 + 0.2 * j));
  plain = jitter(ring, 42);
  const int saved = omp_get_max_threads();
  std::vector<std::vector<double>> runs;
  for (int t : {1, 3}) {
    omp_set_num_threads(t);
    runs.push_back(op.gain(ring, ring, 3));
    runs.push_back(op.gain(plain, ring, 3));
    runs.push_back(op.loss(plain, 3));
  }
  omp_set_num_threads(saved);
  for (int k = 0; k < 3; ++k) CHECK(runs[k] == runs[k + 3]);
}

TEST_CASE("coercivity scan") {
  const MomentumQuadrature quad(8.0, 8, 4, 8);
  const CollisionOperator op(quad, SphereQuadrature(6, 12), Kernel{}, 1.0);
  auto grid = std::make_shared<const PhaseGrid>(5, quad);
  DistField f(grid);
  CHECK_THROWS_AS(coercivity_scan(f, op), DomainError);
  for (std::size_t i = 0; i < f.n_p(); ++i)
    for (std::size_t j = 0; j < f.n_x(); ++j) f(i, j) = std::exp(-quad.energies()[i]) * (1.0 + 0.1 * j);
  const CoercivityScan c = coercivity_scan(f, op);
  CHECK(c.c_l_hat > 0.0);
  CHECK(c.c_l_hat <= c.c_u_hat);
  const CoercivityScan c2 = coercivity_scan(2.0 * f, op);
  CHECK(c2.c_l_hat == 2.0 * c.c_l_hat);
  CHECK(c2.c_u_hat == 2.0 * c.c_u_hat);
  // every node lies inside the band
  const DistField loss = op.loss(f);
  for (std::size_t i = 0; i < f.n_p(); ++i)
    for (std::size_t j = 0; j < f.n_x(); ++j) {
      const double r = loss(i, j) / std::sqrt(quad.energies()[i]);
      CHECK(r >= c.c_l_hat);
      CHECK(r <= c.c_u_hat);
    }
}

TEST_CASE("continuity of L") {
  const MomentumQuadrature quad(8.0, 8, 4, 8);
  const CollisionOperator op(quad, SphereQuadrature(6, 12), Kernel{}, 1.0);
  auto grid = std::make_shared<const PhaseGrid>(5, quad);
  DistField f(grid), zero(grid);
  for (std::size_t i = 0; i < f.n_p(); ++i)
    for (std::size_t j = 0; j < f.n_x(); ++j) f(i, j) = std::exp(-quad.energies()[i]);
  CHECK(continuity_check(f, f, op, 0.1).ratio == 0.0);
  const auto a = continuity_check(f, 2.0 * f, op, 0.1);
  const auto b = continuity_check(f, zero, op, 0.1);
  CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-14));
  CHECK(a.ratio_weighted == doctest::Approx(a.ratio * std::exp(0.1 / std::sqrt(2.0))));
  DistField h = f;
  h.values() = jitter(f.values(), 43);
  const auto c = continuity_check(f, h, op, 0.1);
  CHECK(std::isfinite(c.ratio));
  CHECK(c.ratio > 0.0);
}

TEST_CASE("moment residuals") {
  const SphereQuadrature squad(8, 16);
  const Kernel kernel;
  const MomentumQuadrature q(10.0, 8, 4, 8);
  const auto zero = moment_residuals(MomentumSlice(q, std::vector<double>(q.size(), 0.0)), q, squad, kernel);
  for (double m : zero) CHECK(m == 0.0);

  const auto m = moment_residuals(juttner_slice(q, 1.2), q, squad, kernel);
  // odd integrands on a grid symmetric under p → −p
  for (int c = 1; c <= 3; ++c) CHECK(std::abs(m[c]) <= 1e-10);

  // plain interpolation: the discrete collision term is not conservative and
  // its moments shrink as every resolution doubles
  const MomentumQuadrature q2(10.0, 16, 8, 16);
  const SphereQuadrature squad2(16, 32);
  const auto m2 = moment_residuals(juttner_slice(q2, 1.2), q2, squad2, kernel);
  CHECK(std::abs(m2[0]) < std::abs(m[0]));
  CHECK(std::abs(m2[4]) < std::abs(m[4]));
}
