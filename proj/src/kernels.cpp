#include "nlheat/kernels.hpp"

#include <algorithm>
#include <vector>

namespace nlheat::kernels {

namespace {

inline std::size_t prev(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }
inline std::size_t next(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }

// Per-node bodies shared by both implementations so their outputs agree bitwise.

inline double laplacian_1d(const StencilShape& s, const double* u, std::size_t i) {
  const std::size_t n = s.n[0];
  const double c = s.inv_h[0] * s.inv_h[0];
  return (u[prev(i, n)] - 2.0 * u[i] + u[next(i, n)]) * c;
}

inline double laplacian_2d(const StencilShape& s, const double* u, std::size_t i,
                           std::size_t j) {
  const std::size_t n0 = s.n[0];
  const std::size_t n1 = s.n[1];
  const double c0 = s.inv_h[0] * s.inv_h[0];
  const double c1 = s.inv_h[1] * s.inv_h[1];
  const double centre = u[i * n1 + j];
  const double d0 = u[prev(i, n0) * n1 + j] - 2.0 * centre + u[next(i, n0) * n1 + j];
  const double d1 = u[i * n1 + prev(j, n1)] - 2.0 * centre + u[i * n1 + next(j, n1)];
  return d0 * c0 + d1 * c1;
}

inline double grad_sq_1d(const StencilShape& s, const double* u, std::size_t i) {
  const double d = (u[next(i, s.n[0])] - u[i]) * s.inv_h[0];
  return d * d;
}

inline double grad_sq_2d(const StencilShape& s, const double* u, std::size_t i, std::size_t j) {
  const std::size_t n1 = s.n[1];
  const double centre = u[i * n1 + j];
  const double d0 = (u[next(i, s.n[0]) * n1 + j] - centre) * s.inv_h[0];
  const double d1 = (u[i * n1 + next(j, n1)] - centre) * s.inv_h[1];
  return d0 * d0 + d1 * d1;
}

}  // namespace

namespace serial {

void laplacian(const StencilShape& s, std::span<const double> u, std::span<double> out) {
  if (s.dim == 1) {
    for (std::size_t i = 0; i < s.n[0]; ++i) out[i] = laplacian_1d(s, u.data(), i);
    return;
  }
  for (std::size_t i = 0; i < s.n[0]; ++i)
    for (std::size_t j = 0; j < s.n[1]; ++j) out[i * s.n[1] + j] = laplacian_2d(s, u.data(), i, j);
}

void grad_sq(const StencilShape& s, std::span<const double> u, std::span<double> out) {
  if (s.dim == 1) {
    for (std::size_t i = 0; i < s.n[0]; ++i) out[i] = grad_sq_1d(s, u.data(), i);
    return;
  }
  for (std::size_t i = 0; i < s.n[0]; ++i)
    for (std::size_t j = 0; j < s.n[1]; ++j) out[i * s.n[1] + j] = grad_sq_2d(s, u.data(), i, j);
}

double sum(std::span<const double> u) {
  double acc = 0.0;
  for (double v : u) acc += v;
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace serial

namespace parallel {

void laplacian(const StencilShape& s, std::span<const double> u, std::span<double> out) {
  const bool par = s.size() >= kParallelThreshold;
  if (s.dim == 1) {
    const auto n = static_cast<std::ptrdiff_t>(s.n[0]);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = laplacian_1d(s, u.data(), static_cast<std::size_t>(i));
    }
    return;
  }
  const auto n0 = static_cast<std::ptrdiff_t>(s.n[0]);
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < n0; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < s.n[1]; ++j) out[ii * s.n[1] + j] = laplacian_2d(s, u.data(), ii, j);
  }
}

void grad_sq(const StencilShape& s, std::span<const double> u, std::span<double> out) {
  const bool par = s.size() >= kParallelThreshold;
  if (s.dim == 1) {
    const auto n = static_cast<std::ptrdiff_t>(s.n[0]);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = grad_sq_1d(s, u.data(), static_cast<std::size_t>(i));
    }
    return;
  }
  const auto n0 = static_cast<std::ptrdiff_t>(s.n[0]);
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < n0; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < s.n[1]; ++j) out[ii * s.n[1] + j] = grad_sq_2d(s, u.data(), ii, j);
  }
}

namespace {

template <class Body>
double blocked_reduce(std::size_t n, Body body) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += body(i);
    return acc;
  }
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += body(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double sum(std::span<const double> u) {
  return blocked_reduce(u.size(), [&](std::size_t i) { return u[i]; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_reduce(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace parallel

}  // namespace nlheat::kernels
