#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlheat/grid.hpp"

namespace nlheat {

/// Solves the periodic tridiagonal system
///   sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i]   (indices mod n)
/// with the Sherman-Morrison correction of the Thomas algorithm. n >= 3.
/// Throws ErrorKind::Solver on a zero pivot.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> super,
                                             std::span<const double> rhs);

/// The operator  shift*I - diffusion*laplacian + diag(reaction)  on a torus.
/// With shift > 0, diffusion >= 0 and reaction >= 0 it is symmetric positive
/// definite and an M-matrix.
struct ShiftedLaplacian {
  TorusGrid grid;
  double shift = 1.0;
  double diffusion = 0.0;
  std::vector<double> reaction;  // empty means zero

  std::vector<double> apply(std::span<const double> x) const;
};

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient. Starts from the incoming `x`.
CgResult conjugate_gradient(const ShiftedLaplacian& op, std::span<const double> rhs,
                            std::span<double> x, double rel_tol, std::size_t max_iter);

/// Direct periodic tridiagonal solve in 1-D, CG (rel. tolerance 1e-12) in 2-D.
/// Throws ErrorKind::Solver unless ||op x - rhs|| <= max_rel_residual ||rhs||.
std::vector<double> solve_shifted(const ShiftedLaplacian& op, std::span<const double> rhs,
                                  double max_rel_residual = 1e-10);

}  // namespace nlheat
