#include "nlheat/linear_solvers.hpp"

#include <cmath>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/kernels.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

namespace {

// Thomas algorithm on the non-periodic part, two right-hand sides at once.
void thomas2(std::span<const double> sub, std::span<const double> diag,
             std::span<const double> super, std::vector<double>& r1, std::vector<double>& r2) {
  const std::size_t n = diag.size();
  std::vector<double> c_star(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw Error(ErrorKind::Solver, "cyclic tridiagonal: zero pivot at row 0");
  c_star[0] = super[0] / pivot;
  r1[0] /= pivot;
  r2[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i] * c_star[i - 1];
    if (pivot == 0.0) {
      throw Error(ErrorKind::Solver, "cyclic tridiagonal: zero pivot at row " + std::to_string(i));
    }
    c_star[i] = (i + 1 < n) ? super[i] / pivot : 0.0;
    r1[i] = (r1[i] - sub[i] * r1[i - 1]) / pivot;
    r2[i] = (r2[i] - sub[i] * r2[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    r1[i] -= c_star[i] * r1[i + 1];
    r2[i] -= c_star[i] * r2[i + 1];
  }
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::parallel::dot(v, v)); }

}  // namespace

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> super,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3 || sub.size() != n || super.size() != n || rhs.size() != n) {
    throw Error(ErrorKind::Structural, "cyclic tridiagonal: need n >= 3 and matching sizes");
  }
  // Corners: row 0 couples to x[n-1] through sub[0], row n-1 to x[0] through super[n-1].
  const double top_right = sub[0];
  const double bottom_left = super[n - 1];
  const double gamma = -diag[0];

  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= bottom_left * top_right / gamma;

  std::vector<double> x(rhs.begin(), rhs.end());
  std::vector<double> z(n, 0.0);
  z[0] = gamma;
  z[n - 1] = bottom_left;
  thomas2(sub, d, super, x, z);

  const double denom = 1.0 + z[0] + top_right * z[n - 1] / gamma;
  if (denom == 0.0) throw Error(ErrorKind::Solver, "cyclic tridiagonal: singular correction");
  const double factor = (x[0] + top_right * x[n - 1] / gamma) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z[i];
  return x;
}

std::vector<double> ShiftedLaplacian::apply(std::span<const double> x) const {
  std::vector<double> lap(x.size());
  kernels::parallel::laplacian(stencil_shape(grid), x, lap);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = shift * x[i] - diffusion * lap[i] + (reaction.empty() ? 0.0 : reaction[i] * x[i]);
  }
  return out;
}

CgResult conjugate_gradient(const ShiftedLaplacian& op, std::span<const double> rhs,
                            std::span<double> x, double rel_tol, std::size_t max_iter) {
  const std::size_t n = rhs.size();
  double diag_base = op.shift;
  for (int a = 0; a < op.grid.dim(); ++a) {
    const double h = op.grid.spacing(a);
    diag_base += 2.0 * op.diffusion / (h * h);
  }
  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_diag[i] = 1.0 / (diag_base + (op.reaction.empty() ? 0.0 : op.reaction[i]));
  }

  const double rhs_norm = norm2(rhs);
  CgResult result;
  if (rhs_norm == 0.0) {
    for (double& v : x) v = 0.0;
    return result;
  }

  std::vector<double> r = op.apply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
  std::vector<double> z(n), p(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kernels::parallel::dot(r, z);
  double res = norm2(r);

  while (res > rel_tol * rhs_norm && result.iterations < max_iter) {
    const std::vector<double> q = op.apply(p);
    const double alpha = rz / kernels::parallel::dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = kernels::parallel::dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    res = norm2(r);
    ++result.iterations;
  }
  // Recompute the true residual; the recurrence can drift.
  std::vector<double> check = op.apply(x);
  for (std::size_t i = 0; i < n; ++i) check[i] -= rhs[i];
  result.relative_residual = norm2(check) / rhs_norm;
  return result;
}

namespace {

double relative_residual(const ShiftedLaplacian& op, std::span<const double> x,
                         std::span<const double> rhs, std::vector<double>* residual = nullptr) {
  std::vector<double> r = op.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
  const double rn = norm2(r);
  const double bn = norm2(rhs);
  if (residual != nullptr) *residual = std::move(r);
  return bn == 0.0 ? rn : rn / bn;
}

std::vector<double> tridiagonal_solve(const ShiftedLaplacian& op, std::span<const double> rhs) {
  const std::size_t n = rhs.size();
  const double h = op.grid.spacing(0);
  const double off = -op.diffusion / (h * h);
  std::vector<double> sub(n, off), super(n, off), diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = op.shift + 2.0 * op.diffusion / (h * h) + (op.reaction.empty() ? 0.0 : op.reaction[i]);
  }
  return solve_cyclic_tridiagonal(sub, diag, super, rhs);
}

}  // namespace

std::vector<double> solve_shifted(const ShiftedLaplacian& op, std::span<const double> rhs,
                                  double max_rel_residual) {
  if (rhs.size() != op.grid.size() || (!op.reaction.empty() && op.reaction.size() != rhs.size())) {
    throw Error(ErrorKind::Structural, "shifted Laplacian solve: size mismatch");
  }
  std::vector<double> x;
  if (op.grid.dim() == 1) {
    x = tridiagonal_solve(op, rhs);
    std::vector<double> r;
    if (relative_residual(op, x, rhs, &r) > max_rel_residual) {
      // One step of iterative refinement.
      const std::vector<double> dx = tridiagonal_solve(op, r);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
    }
  } else {
    x.assign(rhs.size(), 0.0);
    const CgResult cg = conjugate_gradient(op, rhs, x, 1e-12, 10 * rhs.size() + 100);
    if (!(cg.relative_residual <= max_rel_residual)) {
      throw Error(ErrorKind::Solver, "conjugate gradient stalled after " +
                                         std::to_string(cg.iterations) +
                                         " iterations, relative residual " +
                                         format_double(cg.relative_residual));
    }
    return x;
  }
  const double rel = relative_residual(op, x, rhs);
  if (!(rel <= max_rel_residual)) {
    throw Error(ErrorKind::Solver,
                "periodic tridiagonal solve: relative residual " + format_double(rel));
  }
  return x;
}

}  // namespace nlheat
