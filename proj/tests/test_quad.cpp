#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "rbe/errors.hpp"
#include "rbe/quad.hpp"
#include "support.hpp"

using namespace rbe;
using boost::math::quadrature::gauss_kronrod;

namespace {
constexpr double kPi = std::numbers::pi;

double radial_oracle(double (*fn)(double), double pmax) {
  return 4.0 * kPi * gauss_kronrod<double, 61>::integrate(fn, 0.0, pmax, 15, 1e-14);
}
}  // namespace

TEST_CASE("Gauss-Legendre nodes") {
  CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
  for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
    const auto gl = gauss_legendre(n);
    REQUIRE(gl.nodes.size() == n);
    double sum = 0;
    for (double w : gl.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::is_sorted(gl.nodes.begin(), gl.nodes.end()));
    // exact for degree 2n − 1: ∫ x^{2n−2} = 2/(2n−1)
    double mono = 0;
    for (std::size_t i = 0; i < n; ++i) mono += gl.weights[i] * std::pow(gl.nodes[i], 2.0 * n - 2.0);
    CHECK(mono == doctest::Approx(2.0 / (2.0 * n - 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("sphere rule basics") {
  CHECK_THROWS_AS(SphereQuadrature(1, 8), ConfigError);
  CHECK_THROWS_AS(SphereQuadrature(4, 3), ConfigError);
  const SphereQuadrature s24(2, 4);
  CHECK(s24.integrate([](const Vec3&) { return 1.0; }) == doctest::Approx(4 * kPi).epsilon(1e-12));
  const SphereQuadrature s(16, 32);
  CHECK(s.integrate([](const Vec3& w) { return w.z * w.z; }) ==
        doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  CHECK(s.integrate([](const Vec3& w) { return w.x * w.x * w.y * w.y; }) ==
        doctest::Approx(4 * kPi / 15).epsilon(1e-12));
  for (const Vec3& w : s.nodes()) CHECK(norm(w) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form sphere integrals") {
  CHECK(sphere_inv_distance(Vec3{0, 0, 0}) == doctest::Approx(4 * kPi));
  CHECK(sphere_inv_distance(Vec3{0.5, 0, 0}) == doctest::Approx(4 * kPi));
  CHECK(sphere_inv_distance(Vec3{0, 2, 0}) == doctest::Approx(2 * kPi));
  CHECK(sphere_exp(1.0, Vec3{0, 0, 0}) == doctest::Approx(4 * kPi));
  CHECK(sphere_exp(1.0, Vec3{1, 0, 0}) == doctest::Approx(4 * kPi * std::sinh(1.0)).epsilon(1e-15));
  CHECK(sphere_exp(1e-8, Vec3{0, 1, 0}) == doctest::Approx(4 * kPi).epsilon(1e-12));
  // continuity across the series threshold
  CHECK(sphere_exp(1.0, Vec3{0, 0, 0.999999e-6}) ==
        doctest::Approx(sphere_exp(1.0, Vec3{0, 0, 1.000001e-6})).epsilon(1e-13));
}

TEST_CASE("sphere rule converges to the closed forms") {
  const SphereQuadrature s(16, 32);
  std::mt19937_64 rng(21);
  for (double cv : {0.0, 0.25, 1.0, 2.5, 5.0}) {
    const Vec3 v = test::random_unit(rng) * cv;
    // oracle: ∫ e^{ω·v} dω = 4π sinh|v|/|v|, written out independently
    const double ref = cv == 0.0 ? 4 * kPi : 4 * kPi * std::sinh(cv) / cv;
    const double got = s.integrate([&](const Vec3& w) { return std::exp(dot(w, v)); });
    CHECK(std::abs(got - ref) <= 1e-8 * ref);
  }
  const SphereQuadrature fine(64, 128);
  for (double r : {0.0, 0.5, 2.0, 10.0}) {
    const Vec3 a = test::random_unit(rng) * r;
    const double ref = r <= 1.0 ? 4 * kPi : 4 * kPi / r;
    const double got = fine.integrate([&](const Vec3& w) { return 1.0 / norm(w - a); });
    CHECK(std::abs(got - ref) <= 1e-6 * ref);
  }
}

TEST_CASE("momentum rule layout") {
  CHECK_THROWS_AS(MomentumQuadrature(0.0, 4, 4, 4), ConfigError);
  CHECK_THROWS_AS(MomentumQuadrature(1.0, 4, 3, 4), ConfigError);
  const MomentumQuadrature q(12.0, 16, 8, 16);
  CHECK(q.size() == 16u * 8u * 16u);
  CHECK(q.ring_count() == 128u);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q.node(i).x != 0.0);
    CHECK(q.weights()[i] > 0.0);
    CHECK(q.energies()[i] == doctest::Approx(std::sqrt(1.0 + norm2(q.node(i)))).epsilon(1e-15));
    CHECK(q.velocity1()[i] == doctest::Approx(q.node(i).x / q.energies()[i]).epsilon(1e-14));
    // energies are bit-identical around a ring
    CHECK(q.energies()[i] == q.energies()[q.node_index(q.ring_of(i), 0)]);
  }
}

TEST_CASE("momentum rule integrals") {
  const MomentumQuadrature unit_ball(1.0, 8, 4, 8);
  CHECK(unit_ball.integrate([](const Vec3&) { return 1.0; }) ==
        doctest::Approx(4 * kPi / 3).epsilon(1e-10));
  const MomentumQuadrature big(30.0, 40, 4, 8);
  CHECK(big.integrate([](const Vec3& p) { return std::exp(-norm(p)); }) ==
        doctest::Approx(8 * kPi).epsilon(1e-8));

  // 16 radial nodes leave ~2e-7 here; 32 reach the 1e-8 target
  const MomentumQuadrature radial32(12.0, 32, 4, 4);
  const double got = radial32.integrate([](const Vec3& p) {
    const double p0 = std::sqrt(1.0 + norm2(p));
    return std::sqrt(p0) * std::exp(-2.0 * p0);
  });
  const double ref = radial_oracle(
      [](double r) { return r * r * std::pow(1.0 + r * r, 0.25) * std::exp(-2.0 * std::sqrt(1.0 + r * r)); },
      12.0);
  CHECK(std::abs(got - ref) <= 1e-8 * ref);
}

TEST_CASE("refining the momentum rule changes smooth integrals less than its error estimate") {
  auto integrand = [](const Vec3& p) {
    const double p0 = std::sqrt(1.0 + norm2(p));
    return std::sqrt(p0) * std::exp(-p0) * (1.0 + 0.3 * p.x * p.x / (1.0 + norm2(p)));
  };
  const MomentumQuadrature c(12.0, 8, 4, 8), m(12.0, 16, 8, 16), f(12.0, 32, 16, 32);
  const double ic = c.integrate(integrand), im = m.integrate(integrand), iff = f.integrate(integrand);
  // estimated error of the coarse rule: its distance to the middle one
  CHECK(std::abs(im - iff) < std::abs(ic - im));
}

TEST_CASE("interpolation stencils") {
  const MomentumQuadrature q(12.0, 16, 8, 16);
  NodeStencil ns;
  RingStencil rs;
  SUBCASE("nodes reproduce themselves") {
    for (std::size_t i = 0; i < q.size(); i += 37) {
      REQUIRE(q.node_stencil(q.node(i), ns));
      double at_i = 0;
      for (int s = 0; s < 8; ++s)
        if (ns.node[s] == i) at_i += ns.weight[s];
      CHECK(at_i == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("outside the ball") {
    CHECK_FALSE(q.node_stencil(Vec3{13, 0, 0}, ns));
    CHECK_FALSE(q.ring_stencil(Vec3{0, 0, -12.5}, rs));
  }
  SUBCASE("plain weights form a partition of unity") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 11.0);
    for (int t = 0; t < 500; ++t) {
      const Vec3 p = test::random_unit(rng) * u(rng);
      REQUIRE(q.node_stencil(p, ns));
      double sum = 0;
      for (double w : ns.weight) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      REQUIRE(q.ring_stencil(p, rs));
      sum = 0;
      for (double w : rs.weight) sum += w;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("weighted stencils are exact for e^{-p0/theta} between radial nodes") {
    const double theta = 1.0;
    std::vector<double> vals(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) vals[i] = std::exp(-q.energies()[i] / theta);
    std::mt19937_64 rng(23);
    // between the innermost and outermost radial nodes (no clamping)
    std::uniform_real_distribution<double> u(q.radii().front(), q.radii().back());
    for (int t = 0; t < 500; ++t) {
      const Vec3 p = test::random_unit(rng) * u(rng);
      REQUIRE(q.node_stencil(p, ns, 1.0 / theta));
      double v = 0;
      for (int s = 0; s < 8; ++s) {
        CHECK(ns.weight[s] >= 0.0);
        v += ns.weight[s] * vals[ns.node[s]];
      }
      const double ref = std::exp(-std::sqrt(1.0 + norm2(p)) / theta);
      CHECK(v == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("ring invariance test") {
  const MomentumQuadrature q(4.0, 3, 2, 6);
  std::vector<double> v(q.size() * 2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    v[2 * i] = q.energies()[i];
    v[2 * i + 1] = q.node(i).x;
  }
  CHECK(q.ring_invariant(v, 2));
  v[2 * 5 + 1] += 1e-16 + 1e-9;
  CHECK_FALSE(q.ring_invariant(v, 2));
}
