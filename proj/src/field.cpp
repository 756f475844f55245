#include "rbe/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbe/errors.hpp"

namespace rbe {

PhaseGrid::PhaseGrid(std::size_t n_x, MomentumQuadrature quad) : quad_(std::move(quad)) {
  if (n_x < 2) throw ConfigError("phase grid needs n_x >= 2", "n_x");
  x_.resize(n_x);
  for (std::size_t i = 0; i < n_x; ++i) x_[i] = static_cast<double>(i) / static_cast<double>(n_x - 1);
}

DistField::DistField(std::shared_ptr<const PhaseGrid> grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

DistField::DistField(std::shared_ptr<const PhaseGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw ConfigError("field has " + std::to_string(values_.size()) + " values, grid expects " +
                      std::to_string(grid_->size()));
  }
}

DistField& DistField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

bool DistField::all_finite_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0; });
}

bool DistField::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::vector<double> DistField::sup_over_x() const {
  std::vector<double> out(n_p(), 0.0);
  for (std::size_t i = 0; i < n_p(); ++i) {
    const double* row = profile(i);
    double m = 0.0;
    for (std::size_t j = 0; j < n_x(); ++j) m = std::max(m, std::abs(row[j]));
    out[i] = m;
  }
  return out;
}

DistField operator*(double s, DistField f) { return f *= s; }

DistField operator-(const DistField& a, const DistField& b) {
  if (a.grid_ptr() != b.grid_ptr() && a.values().size() != b.values().size()) {
    throw ConfigError("field difference on mismatched grids");
  }
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  return DistField(a.grid_ptr(), std::move(v));
}

}  // namespace rbe
