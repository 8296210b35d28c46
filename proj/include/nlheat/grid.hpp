#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace nlheat {

/// Periodic uniform grid on the flat torus T^1 or T^2.
///
/// Nodes sit at x_a = i_a * h_a, i_a = 0..n_a-1. In 2-D the storage order is
/// row-major with axis 0 slow and axis 1 fast.
class TorusGrid {
 public:
  /// 1-D torus with `n` nodes and period `length`.
  TorusGrid(std::size_t n, double length = 1.0);
  /// 2-D torus.
  TorusGrid(std::size_t n0, std::size_t n1, double length0 = 1.0, double length1 = 1.0);
  /// 2-D torus from any two integer node counts; keeps TorusGrid(16, 16) from
  /// resolving to the 1-D constructor. Negative counts are rejected as too small.
  template <std::integral I, std::integral J>
  TorusGrid(I n0, J n1, double length0 = 1.0, double length1 = 1.0)
      : TorusGrid(count(n0), count(n1), length0, length1) {}

  int dim() const noexcept { return dim_; }
  std::size_t n(int axis) const { return n_.at(static_cast<std::size_t>(axis)); }
  double period(int axis) const { return period_.at(static_cast<std::size_t>(axis)); }
  double spacing(int axis) const { return spacing_.at(static_cast<std::size_t>(axis)); }
  double cell_volume() const noexcept { return cell_volume_; }
  double volume() const noexcept;
  std::size_t size() const noexcept;

  /// Coordinate of node `index` along `axis`.
  double coordinate(std::size_t index, int axis) const;

  bool operator==(const TorusGrid&) const = default;

 private:
  template <std::integral I>
  static std::size_t count(I n) {
    return n < 0 ? 0 : static_cast<std::size_t>(n);
  }

  int dim_;
  std::array<std::size_t, 2> n_{1, 1};
  std::array<double, 2> period_{1.0, 1.0};
  std::array<double, 2> spacing_{1.0, 1.0};
  double cell_volume_;
};

/// Real-valued samples on a TorusGrid. Values are never NaN/Inf after
/// any library operation.
class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid, double fill = 0.0);
  ScalarField(TorusGrid grid, std::vector<double> values);

  /// Samples `f(x0)` (1-D) or `f(x0, x1)` (2-D) at the nodes.
  template <class F>
  static ScalarField sample(const TorusGrid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid.dim() == 1) {
        out.values_[k] = f(grid.coordinate(k, 0), 0.0);
      } else {
        out.values_[k] = f(grid.coordinate(k, 0), grid.coordinate(k, 1));
      }
    }
    return out;
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double min() const;
  double max() const;
  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// Throws ErrorKind::Structural unless both fields live on the same grid.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* op);

}  // namespace nlheat
