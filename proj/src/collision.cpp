#include "rbe/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "rbe/errors.hpp"
#include "rbe/norms.hpp"

namespace rbe {

double Kernel::sigma0(double cos_theta) const {
  constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  if (isotropic()) return inv4pi;
  const double s2 = std::max(0.0, 1.0 - cos_theta * cos_theta);
  return std::pow(s2, 0.5 * gamma_ang) * inv4pi;
}

double Kernel::c0() const {
  if (isotropic()) return 1.0;
  const double a = 0.5 * gamma_ang;
  return 0.5 * std::sqrt(std::numbers::pi) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
}

void Kernel::validate() const {
  if (!(c_kernel > 0.0) || !std::isfinite(c_kernel))
    throw ConfigError("c_kernel must be positive and finite", "c_kernel");
  if (!(gamma_ang >= 0.0) || !std::isfinite(gamma_ang))
    throw ConfigError("gamma_ang must be >= 0", "gamma_ang");
}

//---------------------------------------------------------------------------//

MomentumSlice::MomentumSlice(const MomentumQuadrature& quad, std::vector<double> values)
    : quad_(&quad), values_(std::move(values)) {
  if (values_.size() != quad.size()) {
    throw ConfigError("slice has " + std::to_string(values_.size()) + " values, quadrature has " +
                      std::to_string(quad.size()) + " nodes");
  }
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("slice values must be finite and >= 0");
}

double MomentumSlice::interpolate(const Vec3& p, double theta) const {
  NodeStencil st;
  if (!quad_->node_stencil(p, st, theta > 0.0 ? 1.0 / theta : 0.0)) return 0.0;
  double v = 0.0;
  for (int i = 0; i < 8; ++i) v += st.weight[i] * values_[st.node[i]];
  return v;
}

//---------------------------------------------------------------------------//

namespace {

void check_slice(const MomentumSlice& s, const MomentumQuadrature& quad) {
  if (s.values().size() != quad.size()) throw ConfigError("slice does not match the quadrature");
}

// c₀ c_kernel w_q v_M g for every q, at one p.
void loss_row(const Vec3& p, double p0, const MomentumQuadrature& quad, const Kernel& kernel,
              double* row) {
  const double pref = kernel.c0() * kernel.c_kernel;
  const Vec3 vp = p / p0;
  for (std::size_t iq = 0; iq < quad.size(); ++iq) {
    const Vec3& q = quad.node(iq);
    const double q0 = quad.energies()[iq];
    const CmFrame cm(p, p0, q, q0);
    row[iq] = pref * quad.weights()[iq] * moller_velocity(vp, q / q0) * cm.g();
  }
}

}  // namespace

double eval_L(const MomentumSlice& slice, const Momentum3& p, const MomentumQuadrature& quad,
              const Kernel& kernel) {
  check_slice(slice, quad);
  std::vector<double> row(quad.size());
  loss_row(p.p, energy(p), quad, kernel, row.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * slice[i];
  return acc;
}

double eval_Qplus(const MomentumSlice& slice_f, const MomentumSlice& slice_h, const Momentum3& p,
                  const MomentumQuadrature& quad, const SphereQuadrature& squad,
                  const Kernel& kernel, double interp_theta) {
  check_slice(slice_f, quad);
  check_slice(slice_h, quad);
  return eval_Qplus([&](const Vec3& v) { return slice_f.interpolate(v, interp_theta); },
                    [&](const Vec3& v) { return slice_h.interpolate(v, interp_theta); }, p, quad,
                    squad, kernel);
}

double eval_Qminus(const MomentumSlice& slice_f, const MomentumSlice& slice_h, const Momentum3& p,
                   const MomentumQuadrature& quad, const Kernel& kernel, double interp_theta) {
  const double fp = slice_f.interpolate(p.p, interp_theta);
  if (fp == 0.0) return 0.0;
  return fp * eval_L(slice_h, p, quad, kernel);
}

//---------------------------------------------------------------------------//

// For ring-invariant inputs: loss[r][r′] sums the loss row of the ring-r
// representative over the azimuths of ring r′; gain[r][a][b] collects
// w · (stencil weight of a at p′) · (stencil weight of b at q′).
struct CollisionOperator::RingTables {
  std::once_flag once;
  bool available{false};
  std::size_t n_rings{0};
  std::vector<double> loss;
  std::vector<double> gain;
};

CollisionOperator::CollisionOperator(const MomentumQuadrature& quad, const SphereQuadrature& squad,
                                     const Kernel& kernel, double interp_theta)
    : quad_(quad),
      squad_(squad),
      kernel_(kernel),
      theta_(interp_theta),
      inv_theta_(interp_theta > 0.0 ? 1.0 / interp_theta : 0.0),
      rings_(std::make_unique<RingTables>()) {
  kernel_.validate();
  if (!(interp_theta >= 0.0) || !std::isfinite(interp_theta))
    throw ConfigError("interpolation temperature must be >= 0", "interp_theta");
  if (squad_.size() == 0) throw ConfigError("collision operator needs a sphere quadrature");
  const std::size_t nr = quad_.ring_count();
  rings_->n_rings = nr;
  rings_->available = nr * nr * nr * sizeof(double) <= kRingTableBudget;
}

CollisionOperator::~CollisionOperator() = default;
CollisionOperator::CollisionOperator(CollisionOperator&&) noexcept = default;
CollisionOperator& CollisionOperator::operator=(CollisionOperator&&) noexcept = default;

bool CollisionOperator::ring_tables_available() const { return rings_->available; }

const CollisionOperator::RingTables& CollisionOperator::ring_tables() const {
  RingTables& t = *rings_;
  std::call_once(t.once, [&] {
    const std::size_t nr = t.n_rings;
    const std::size_t nq = quad_.size();
    t.loss.assign(nr * nr, 0.0);
    t.gain.assign(nr * nr * nr, 0.0);
#pragma omp parallel
    {
      std::vector<double> row(nq);
#pragma omp for schedule(dynamic, 1)
      for (std::size_t r = 0; r < nr; ++r) {
        const std::size_t rep = quad_.node_index(r, 0);
        const Vec3& p = quad_.node(rep);
        const double p0 = quad_.energies()[rep];

        loss_row(p, p0, quad_, kernel_, row.data());
        double* lr = t.loss.data() + r * nr;
        for (std::size_t iq = 0; iq < nq; ++iq) lr[quad_.ring_of(iq)] += row[iq];

        double* gr = t.gain.data() + r * nr * nr;
        for_each_collision(p, p0, quad_, squad_, kernel_, true,
                           [&](double w, const Vec3& pp, const Vec3& qq) {
                             RingStencil a, b;
                             if (!quad_.ring_stencil(pp, a, inv_theta_) || !quad_.ring_stencil(qq, b, inv_theta_))
                               return;
                             for (int i = 0; i < 4; ++i) {
                               const double wa = w * a.weight[i];
                               if (wa == 0.0) continue;
                               double* ga = gr + a.ring[i] * nr;
                               for (int j = 0; j < 4; ++j) ga[b.ring[j]] += wa * b.weight[j];
                             }
                           });
      }
    }
  });
  return t;
}

bool CollisionOperator::use_rings(const std::vector<double>& a, const std::vector<double>* b,
                                  std::size_t stride) const {
  if (!rings_->available) return false;
  if (!quad_.ring_invariant(a, stride)) return false;
  return b == nullptr || b == &a || quad_.ring_invariant(*b, stride);
}

std::vector<double> CollisionOperator::loss(const std::vector<double>& f,
                                            std::size_t stride) const {
  const std::size_t np = quad_.size();
  if (stride == 0 || f.size() != np * stride) throw ConfigError("loss: input size mismatch");
  std::vector<double> out(f.size(), 0.0);
  const std::size_t naz = quad_.n_azimuth();

  if (use_rings(f, nullptr, stride)) {
    const RingTables& t = ring_tables();
    const std::size_t nr = t.n_rings;
#pragma omp parallel
    {
      std::vector<double> acc(stride);
#pragma omp for schedule(static)
      for (std::size_t r = 0; r < nr; ++r) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const double* kr = t.loss.data() + r * nr;
        for (std::size_t s = 0; s < nr; ++s) {
          const double k = kr[s];
          const double* fs = f.data() + quad_.node_index(s, 0) * stride;
          for (std::size_t x = 0; x < stride; ++x) acc[x] += k * fs[x];
        }
        for (std::size_t j = 0; j < naz; ++j)
          std::copy(acc.begin(), acc.end(), out.begin() + quad_.node_index(r, j) * stride);
      }
    }
    return out;
  }

#pragma omp parallel
  {
    std::vector<double> row(np);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < np; ++i) {
      loss_row(quad_.node(i), quad_.energies()[i], quad_, kernel_, row.data());
      double* o = out.data() + i * stride;
      for (std::size_t iq = 0; iq < np; ++iq) {
        const double k = row[iq];
        const double* fq = f.data() + iq * stride;
        for (std::size_t x = 0; x < stride; ++x) o[x] += k * fq[x];
      }
    }
  }
  return out;
}

std::vector<double> CollisionOperator::gain(const std::vector<double>& f,
                                            const std::vector<double>& h,
                                            std::size_t stride) const {
  const std::size_t np = quad_.size();
  if (stride == 0 || f.size() != np * stride || h.size() != np * stride)
    throw ConfigError("gain: input size mismatch");
  std::vector<double> out(f.size(), 0.0);
  const std::size_t naz = quad_.n_azimuth();

  if (use_rings(f, &h, stride)) {
    const RingTables& t = ring_tables();
    const std::size_t nr = t.n_rings;
#pragma omp parallel
    {
      std::vector<double> acc(stride), hb(stride);
#pragma omp for schedule(static)
      for (std::size_t r = 0; r < nr; ++r) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const double* gr = t.gain.data() + r * nr * nr;
        for (std::size_t a = 0; a < nr; ++a) {
          const double* ga = gr + a * nr;
          std::fill(hb.begin(), hb.end(), 0.0);
          bool any = false;
          for (std::size_t b = 0; b < nr; ++b) {
            const double w = ga[b];
            if (w == 0.0) continue;
            any = true;
            const double* hs = h.data() + quad_.node_index(b, 0) * stride;
            for (std::size_t x = 0; x < stride; ++x) hb[x] += w * hs[x];
          }
          if (!any) continue;
          const double* fa = f.data() + quad_.node_index(a, 0) * stride;
          for (std::size_t x = 0; x < stride; ++x) acc[x] += fa[x] * hb[x];
        }
        for (std::size_t j = 0; j < naz; ++j)
          std::copy(acc.begin(), acc.end(), out.begin() + quad_.node_index(r, j) * stride);
      }
    }
    return out;
  }

#pragma omp parallel
  {
    std::vector<double> fa(stride), hb(stride);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t i = 0; i < np; ++i) {
      double* o = out.data() + i * stride;
      for_each_collision(quad_.node(i), quad_.energies()[i], quad_, squad_, kernel_, false,
                         [&](double w, const Vec3& pp, const Vec3& qq) {
                           NodeStencil a, b;
                           if (!quad_.node_stencil(pp, a, inv_theta_) || !quad_.node_stencil(qq, b, inv_theta_))
                             return;
                           std::fill(fa.begin(), fa.end(), 0.0);
                           std::fill(hb.begin(), hb.end(), 0.0);
                           for (int k = 0; k < 8; ++k) {
                             const double* fk = f.data() + a.node[k] * stride;
                             const double* hk = h.data() + b.node[k] * stride;
                             const double wa = a.weight[k], wb = b.weight[k];
                             for (std::size_t x = 0; x < stride; ++x) {
                               fa[x] += wa * fk[x];
                               hb[x] += wb * hk[x];
                             }
                           }
                           for (std::size_t x = 0; x < stride; ++x) o[x] += w * fa[x] * hb[x];
                         });
    }
  }
  return out;
}

DistField CollisionOperator::loss(const DistField& f) const {
  return DistField(f.grid_ptr(), loss(f.values(), f.n_x()));
}

DistField CollisionOperator::gain(const DistField& f, const DistField& h) const {
  return DistField(f.grid_ptr(), gain(f.values(), h.values(), f.n_x()));
}

//---------------------------------------------------------------------------//

CoercivityScan coercivity_scan(const DistField& field, const DistField& loss) {
  if (field.is_zero()) throw DomainError("coercivity undefined for vacuum");
  const auto& quad = field.grid().momentum();
  CoercivityScan out;
  out.c_l_hat = std::numeric_limits<double>::infinity();
  out.c_u_hat = 0.0;
  for (std::size_t i = 0; i < field.n_p(); ++i) {
    const double inv = 1.0 / std::sqrt(quad.energies()[i]);
    const double* l = loss.profile(i);
    for (std::size_t j = 0; j < field.n_x(); ++j) {
      const double v = l[j] * inv;
      out.c_l_hat = std::min(out.c_l_hat, v);
      out.c_u_hat = std::max(out.c_u_hat, v);
    }
  }
  return out;
}

CoercivityScan coercivity_scan(const DistField& field, const CollisionOperator& op) {
  if (field.is_zero()) throw DomainError("coercivity undefined for vacuum");
  return coercivity_scan(field, op.loss(field));
}

ContinuityReport continuity_check(const DistField& f, const DistField& h,
                                  const CollisionOperator& op, double k) {
  ContinuityReport out;
  const DistField diff = f - h;
  out.diff_norm = norm_main(diff, k);
  if (out.diff_norm == 0.0) return out;
  // L is linear, so Lf − Lh = L(f − h); the signed difference is fine here
  const auto ld = op.loss(diff.values(), diff.n_x());
  const auto& quad = f.grid().momentum();
  double worst = 0.0;
  for (std::size_t i = 0; i < f.n_p(); ++i) {
    const double inv = 1.0 / std::sqrt(quad.energies()[i]);
    for (std::size_t j = 0; j < f.n_x(); ++j)
      worst = std::max(worst, std::abs(ld[i * f.n_x() + j]) * inv);
  }
  out.ratio = worst / out.diff_norm;
  out.ratio_weighted = out.ratio * std::exp(k / std::sqrt(2.0));
  return out;
}

std::array<double, 5> moment_residuals(const MomentumSlice& slice_f, const CollisionOperator& op) {
  const auto& quad = op.quad();
  check_slice(slice_f, quad);
  const auto& f = slice_f.values();
  const auto gain = op.gain(f, f, 1);
  const auto loss = op.loss(f, 1);
  std::array<double, 5> m{};
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double q = quad.weights()[i] * (gain[i] - f[i] * loss[i]);
    const Vec3& p = quad.node(i);
    m[0] += q;
    m[1] += q * p.x;
    m[2] += q * p.y;
    m[3] += q * p.z;
    m[4] += q * quad.energies()[i];
  }
  return m;
}

std::array<double, 5> moment_residuals(const MomentumSlice& slice_f, const MomentumQuadrature& quad,
                                       const SphereQuadrature& squad, const Kernel& kernel,
                                       double interp_theta) {
  check_slice(slice_f, quad);
  const CollisionOperator op(quad, squad, kernel, interp_theta);
  return moment_residuals(slice_f, op);
}

}  // namespace rbe
