#pragma once

// Difference operators and quadrature on the discrete flat torus.
//
// The gradient is the forward difference D and the Laplacian is -D^T D, so
//   integrate(u * laplacian(u)) == -integrate(grad_sq(u))
// holds as an algebraic identity (up to rounding), not just to O(h^2).

#include <iosfwd>
#include <string>

#include "nlheat/grid.hpp"
#include "nlheat/kernels.hpp"

namespace nlheat {

kernels::StencilShape stencil_shape(const TorusGrid& grid);

/// 3-point (1-D) / 5-point (2-D) periodic Laplacian.
ScalarField laplacian(const ScalarField& u);

/// Nodewise squared forward-difference gradient.
ScalarField grad_sq(const ScalarField& u);

/// Rectangle rule: sum of values times the cell volume.
double integrate(const ScalarField& u);

/// integrate(a * b) without forming the product field.
double inner(const ScalarField& a, const ScalarField& b);

double l2_norm(const ScalarField& u);

/// Dirichlet energy integrate(grad_sq(u)).
double dirichlet(const ScalarField& u);

/// Smallest nonzero eigenvalue of -laplacian on this grid,
/// min over axes of (2/h^2)(1 - cos(2 pi h / L)).
double discrete_spectral_gap(const TorusGrid& grid);

/// Nodewise arithmetic helpers.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField hadamard(const ScalarField& a, const ScalarField& b);
double max_abs(const ScalarField& u);

/// Snapshot format:
///   torus dim=<d> n=<n1>[,<n2>] L=<L1>[,<L2>]
/// followed by one value per line, row-major, 17 significant digits.
void write_snapshot(std::ostream& out, const ScalarField& u);
ScalarField read_snapshot(std::istream& in);
void write_snapshot_file(const std::string& path, const ScalarField& u);
ScalarField read_snapshot_file(const std::string& path);

/// Formats a double with 17 significant digits (shared by all text outputs).
std::string format_double(double v);

}  // namespace nlheat
