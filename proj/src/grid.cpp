#include "nlheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlheat/error.hpp"

namespace nlheat {

namespace {

void check_axis(std::size_t n, double length) {
  if (n < 4) {
    throw Error(ErrorKind::Domain, "torus axis needs at least 4 nodes, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::Domain, "torus period must be positive and finite");
  }
}

}  // namespace

TorusGrid::TorusGrid(std::size_t n, double length) : dim_(1) {
  check_axis(n, length);
  n_ = {n, 1};
  period_ = {length, 1.0};
  spacing_ = {length / static_cast<double>(n), 1.0};
  cell_volume_ = spacing_[0];
}

TorusGrid::TorusGrid(std::size_t n0, std::size_t n1, double length0, double length1) : dim_(2) {
  check_axis(n0, length0);
  check_axis(n1, length1);
  n_ = {n0, n1};
  period_ = {length0, length1};
  spacing_ = {length0 / static_cast<double>(n0), length1 / static_cast<double>(n1)};
  cell_volume_ = spacing_[0] * spacing_[1];
}

double TorusGrid::volume() const noexcept {
  return dim_ == 1 ? period_[0] : period_[0] * period_[1];
}

std::size_t TorusGrid::size() const noexcept { return n_[0] * n_[1]; }

double TorusGrid::coordinate(std::size_t index, int axis) const {
  if (dim_ == 1) {
    return axis == 0 ? static_cast<double>(index) * spacing_[0] : 0.0;
  }
  const std::size_t i = index / n_[1];
  const std::size_t j = index % n_[1];
  return axis == 0 ? static_cast<double>(i) * spacing_[0] : static_cast<double>(j) * spacing_[1];
}

ScalarField::ScalarField(TorusGrid grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::Structural, "field has " + std::to_string(values_.size()) +
                                           " values but the grid has " +
                                           std::to_string(grid_.size()) + " nodes");
  }
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* op) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorKind::Structural, std::string(op) + ": fields live on different grids");
  }
}

}  // namespace nlheat
