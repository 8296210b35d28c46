#include <cmath>
#include <vector>

#include <doctest.h>

#include "nlheat/manifold.hpp"
#include "support.hpp"

using namespace nlheat;
using nlheat::testing::random_field;

// The parallel kernels must reproduce the serial reference: stencils bit for
// bit, reductions to a few ulps of the total.

namespace {

void compare(const TorusGrid& g, std::uint64_t seed) {
  const ScalarField u = random_field(g, seed);
  const ScalarField v = random_field(g, seed + 1);
  const auto shape = stencil_shape(g);
  std::vector<double> a(g.size()), b(g.size());

  kernels::serial::laplacian(shape, u.values(), a);
  kernels::parallel::laplacian(shape, u.values(), b);
  CHECK(a == b);
  kernels::serial::grad_sq(shape, u.values(), a);
  kernels::parallel::grad_sq(shape, u.values(), b);
  CHECK(a == b);

  const double s_ser = kernels::serial::sum(u.values());
  const double s_par = kernels::parallel::sum(u.values());
  CHECK(std::abs(s_ser - s_par) <= 1e-12 * std::sqrt(static_cast<double>(g.size())));
  const double d_ser = kernels::serial::dot(u.values(), v.values());
  const double d_par = kernels::parallel::dot(u.values(), v.values());
  CHECK(std::abs(d_ser - d_par) <= 1e-12 * std::sqrt(static_cast<double>(g.size())));
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference on small grids") {
  compare(TorusGrid(64), 1);
  compare(TorusGrid(16, 16), 2);
  compare(TorusGrid(5, 9, 0.3, 2.0), 3);
}

TEST_CASE("parallel kernels match the serial reference above the threshold") {
  compare(TorusGrid(1 << 15), 4);
  compare(TorusGrid(256, 300), 5);
}

TEST_CASE("parallel reductions are reproducible run to run") {
  const TorusGrid g(200, 200);
  const ScalarField u = random_field(g, 9);
  const double first = kernels::parallel::dot(u.values(), u.values());
  for (int k = 0; k < 5; ++k) CHECK(kernels::parallel::dot(u.values(), u.values()) == first);
}
