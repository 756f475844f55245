#pragma once

// Special-relativistic kinematics in natural units (m = c = 1).

#include <array>
#include <cmath>

namespace rbe {

struct Vec3 {
  double x{0}, y{0}, z{0};

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
constexpr bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

/// Off-shell spatial momentum; the energy is always the on-shell value.
struct Momentum3 {
  Vec3 p;

  constexpr Momentum3() = default;
  constexpr Momentum3(double p1, double p2, double p3) : p{p1, p2, p3} {}
  constexpr explicit Momentum3(const Vec3& v) : p(v) {}

  constexpr const Vec3& vec() const { return p; }
};

/// p⁰ = √(1+|p|²)
inline double energy(const Momentum3& m) { return std::sqrt(1.0 + norm2(m.p)); }
/// p̂ = p/p⁰, |p̂| < 1.
inline Vec3 hat(const Momentum3& m) { return m.p / energy(m); }

struct FourVector {
  double t{0};
  Vec3 x;
};

/// On-shell lift (p⁰, p).
inline FourVector on_shell(const Momentum3& m) { return {energy(m), m.p}; }

/// p^μ q_μ with η = diag(−1, 1, 1, 1).
constexpr double minkowski_dot(const FourVector& a, const FourVector& b) {
  return -a.t * b.t + dot(a.x, b.x);
}

struct Invariants {
  double s{4};  ///< −(p+q)^μ(p+q)_μ
  double g{0};  ///< √((p−q)^μ(p−q)_μ)
};

/// s and g for an on-shell pair. s is evaluated from its definition, g² from
/// the cancellation-free form 2(|p−q|² + |p×q|²)/(p⁰q⁰ + 1 + p·q).
Invariants invariants(const Momentum3& p, const Momentum3& q);

/// Root expression √(|p̂−q̂|² − |p̂×q̂|²), radicand clamped at 0.
double moller_velocity(const Momentum3& p, const Momentum3& q);
/// Root expression from the velocities p̂, q̂ directly.
inline double moller_velocity(const Vec3& vp, const Vec3& vq) {
  const double radicand = norm2(vp - vq) - norm2(cross(vp, vq));
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}
/// The product form g√s/(2p⁰q⁰); equal to moller_velocity() algebraically.
double moller_velocity_product(const Momentum3& p, const Momentum3& q);

/// Center-of-momentum data for a fixed pair (p, q). Evaluating `post(ω)` gives
/// the post-collision pair for any unit direction ω without redoing the
/// pair-dependent work.
class CmFrame {
 public:
  /// Below this |p+q| the (γ−1)(p+q)(p+q)·ω/|p+q|² term is dropped.
  static constexpr double kSmallTotalMomentum = 1e-10;

  CmFrame(const Momentum3& p, const Momentum3& q);
  CmFrame(const Vec3& p, double p0, const Vec3& q, double q0);

  double s() const { return s_; }
  double g() const { return g_; }
  const Vec3& total() const { return total_; }
  double total_energy() const { return total_energy_; }

  /// Spatial displacement (g/2)(ω + (γ−1)(p+q)((p+q)·ω)/|p+q|²).
  Vec3 displacement(const Vec3& omega) const {
    Vec3 d = omega;
    if (!small_total_) d += total_ * (coef_ * dot(total_, omega));
    return d * (0.5 * g_);
  }
  /// p′ = (p+q)/2 + displacement; q′ = (p+q)/2 − displacement.
  void post(const Vec3& omega, Vec3& p_out, Vec3& q_out) const {
    const Vec3 d = displacement(omega);
    const Vec3 half = total_ * 0.5;
    p_out = half + d;
    q_out = half - d;
  }
  /// Post-collision energy of p′ in the closed form (p⁰+q⁰)/2 + (g/(2√s)) ω·(p+q).
  double post_energy(const Vec3& omega) const {
    return 0.5 * total_energy_ + 0.5 * g_ / sqrt_s_ * dot(omega, total_);
  }

 private:
  void init(const Vec3& p, double p0, const Vec3& q, double q0);

  Vec3 total_;
  double total_energy_{0};
  double s_{4}, g_{0}, sqrt_s_{2};
  double coef_{0};  // (γ−1)/|p+q|² = 1/(√s(p⁰+q⁰+√s))
  bool small_total_{false};
};

struct CollisionOutcome {
  Momentum3 p;
  Momentum3 q;
};

/// Post-collision momenta in the center-of-momentum parametrization.
/// Throws DomainError when |ω| deviates from 1 by more than 1e-12.
CollisionOutcome post_collision(const Momentum3& p, const Momentum3& q, const Vec3& omega);

/// (p^μ−q^μ)(p′_μ−q′_μ)/g², clamped to [−1, 1]; DomainError("degenerate pair")
/// when g = 0.
double scattering_cos(const Momentum3& p, const Momentum3& q, const Vec3& omega);
/// Same quantity for an already computed outcome.
double scattering_cos(const Momentum3& p, const Momentum3& q, const CollisionOutcome& post);

/// Pre-computed pair (p, q) with its invariants and Møller velocity.
struct CollisionPair {
  Momentum3 p, q;
  double s{4}, g{0}, v_moller{0};

  CollisionPair(const Momentum3& p_in, const Momentum3& q_in);
};

/// 4×4 real matrix acting on (t, x, y, z).
class LorentzTransform {
 public:
  using Matrix = std::array<std::array<double, 4>, 4>;

  LorentzTransform();  // identity
  explicit LorentzTransform(const Matrix& m) : m_(m) {}

  const Matrix& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[row][col]; }

  FourVector apply(const FourVector& v) const;
  Vec3 apply_spatial(const Vec3& v) const;  ///< spatial part of Λ(0, v)
  LorentzTransform compose(const LorentzTransform& inner) const;  ///< this ∘ inner
  LorentzTransform transpose() const;
  double determinant() const;
  /// max |ΛᵀηΛ − η| componentwise
  double metric_defect() const;

 private:
  Matrix m_;
};

/// Pure boost into the frame moving with velocity u, |u| < 1.
LorentzTransform boost_to(const Vec3& u);
/// Spatial rotation (two Givens rotations) with Λ(0, a) = (0, 0, 0, |a|).
LorentzTransform rotation_taking(const Vec3& a);

}  // namespace rbe
