#pragma once

// Stencil and reduction kernels on raw node arrays.
//
// Two implementations share one signature: `serial` is the straightforward
// reference kept for testing, `parallel` is the OpenMP version the library
// uses. Stencil outputs are bitwise identical between the two. Reductions in
// `parallel` sum fixed-size blocks and then combine the block sums in order,
// so their result does not depend on the thread count.

#include <array>
#include <cstddef>
#include <span>

namespace nlheat::kernels {

struct StencilShape {
  int dim = 1;
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> inv_h{1.0, 1.0};

  std::size_t size() const noexcept { return n[0] * n[1]; }
};

/// Block length of the deterministic parallel reductions.
inline constexpr std::size_t kReductionBlock = 1024;
/// Below this node count the OpenMP kernels run single-threaded.
inline constexpr std::size_t kParallelThreshold = 8192;

namespace serial {
void laplacian(const StencilShape& s, std::span<const double> u, std::span<double> out);
void grad_sq(const StencilShape& s, std::span<const double> u, std::span<double> out);
double sum(std::span<const double> u);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace serial

namespace parallel {
void laplacian(const StencilShape& s, std::span<const double> u, std::span<double> out);
void grad_sq(const StencilShape& s, std::span<const double> u, std::span<double> out);
double sum(std::span<const double> u);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace parallel

}  // namespace nlheat::kernels
