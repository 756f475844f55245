#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "rbe/quad.hpp"

namespace rbe {

/// Uniform x₁ grid on [0, 1] times a momentum quadrature.
class PhaseGrid {
 public:
  PhaseGrid(std::size_t n_x, MomentumQuadrature quad);

  std::size_t n_x() const { return x_.size(); }
  std::size_t n_p() const { return quad_.size(); }
  std::size_t size() const { return n_x() * n_p(); }
  double dx() const { return 1.0 / static_cast<double>(n_x() - 1); }
  const std::vector<double>& x() const { return x_; }
  const MomentumQuadrature& momentum() const { return quad_; }

 private:
  std::vector<double> x_;
  MomentumQuadrature quad_;
};

/// f(x₁, p) sampled on a PhaseGrid. Storage is momentum-major: the value at
/// (momentum node i, x index j) lives at i * n_x + j, so each momentum node owns
/// a contiguous x₁ profile.
class DistField {
 public:
  explicit DistField(std::shared_ptr<const PhaseGrid> grid);
  DistField(std::shared_ptr<const PhaseGrid> grid, std::vector<double> values);

  const PhaseGrid& grid() const { return *grid_; }
  const std::shared_ptr<const PhaseGrid>& grid_ptr() const { return grid_; }
  std::size_t n_x() const { return grid_->n_x(); }
  std::size_t n_p() const { return grid_->n_p(); }

  double operator()(std::size_t node, std::size_t ix) const { return values_[node * n_x() + ix]; }
  double& operator()(std::size_t node, std::size_t ix) { return values_[node * n_x() + ix]; }
  const double* profile(std::size_t node) const { return values_.data() + node * n_x(); }
  double* profile(std::size_t node) { return values_.data() + node * n_x(); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  DistField& operator*=(double s);
  bool all_finite_nonnegative() const;
  bool is_zero() const;
  /// Values identical around every (r, cos θ) ring, for every x₁.
  bool ring_invariant() const { return grid_->momentum().ring_invariant(values_, n_x()); }

  /// ‖f(·, p)‖_{L∞ₓ} per momentum node.
  std::vector<double> sup_over_x() const;

 private:
  std::shared_ptr<const PhaseGrid> grid_;
  std::vector<double> values_;
};

DistField operator*(double s, DistField f);
DistField operator-(const DistField& a, const DistField& b);

}  // namespace rbe
