#include "nlheat/manifold.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "nlheat/error.hpp"

namespace nlheat {

kernels::StencilShape stencil_shape(const TorusGrid& grid) {
  kernels::StencilShape s;
  s.dim = grid.dim();
  s.n = {grid.n(0), grid.dim() == 2 ? grid.n(1) : 1};
  s.inv_h = {1.0 / grid.spacing(0), grid.dim() == 2 ? 1.0 / grid.spacing(1) : 1.0};
  return s;
}

ScalarField laplacian(const ScalarField& u) {
  ScalarField out(u.grid());
  kernels::parallel::laplacian(stencil_shape(u.grid()), u.values(), out.values());
  return out;
}

ScalarField grad_sq(const ScalarField& u) {
  ScalarField out(u.grid());
  kernels::parallel::grad_sq(stencil_shape(u.grid()), u.values(), out.values());
  return out;
}

double integrate(const ScalarField& u) {
  return kernels::parallel::sum(u.values()) * u.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b, "inner");
  return kernels::parallel::dot(a.values(), b.values()) * a.grid().cell_volume();
}

double l2_norm(const ScalarField& u) { return std::sqrt(inner(u, u)); }

double dirichlet(const ScalarField& u) { return integrate(grad_sq(u)); }

double discrete_spectral_gap(const TorusGrid& grid) {
  double gap = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const double h = grid.spacing(a);
    const double mu = 2.0 / (h * h) * (1.0 - std::cos(2.0 * std::numbers::pi * h / grid.period(a)));
    gap = (a == 0) ? mu : std::min(gap, mu);
  }
  return gap;
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* name) {
  require_same_grid(a, b, name);
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "operator+");
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "operator-");
}

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; }, "hadamard");
}

ScalarField operator*(double c, const ScalarField& a) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

double max_abs(const ScalarField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(std::ostream& out, const ScalarField& u) {
  const TorusGrid& g = u.grid();
  out << "torus dim=" << g.dim() << " n=" << g.n(0);
  if (g.dim() == 2) out << ',' << g.n(1);
  out << " L=" << format_double(g.period(0));
  if (g.dim() == 2) out << ',' << format_double(g.period(1));
  out << '\n';
  for (double v : u.values()) out << format_double(v) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::string after_prefix(const std::string& token, const std::string& prefix) {
  if (token.rfind(prefix, 0) != 0) {
    throw Error(ErrorKind::Io, "snapshot header: expected '" + prefix + "...', got '" + token + "'");
  }
  return token.substr(prefix.size());
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Io, "snapshot: cannot parse number '" + s + "'");
  }
}

}  // namespace

ScalarField read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::Io, "snapshot: missing header");
  std::istringstream hs(header);
  std::string magic, dim_tok, n_tok, l_tok;
  hs >> magic >> dim_tok >> n_tok >> l_tok;
  if (magic != "torus") throw Error(ErrorKind::Io, "snapshot: header must start with 'torus'");
  const int dim = static_cast<int>(to_double(after_prefix(dim_tok, "dim=")));
  const auto ns = split(after_prefix(n_tok, "n="), ',');
  const auto ls = split(after_prefix(l_tok, "L="), ',');
  if ((dim != 1 && dim != 2) || ns.size() != static_cast<std::size_t>(dim) ||
      ls.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::Io, "snapshot: inconsistent header '" + header + "'");
  }
  const auto n0 = static_cast<std::size_t>(to_double(ns[0]));
  TorusGrid grid = dim == 1 ? TorusGrid(n0, to_double(ls[0]))
                            : TorusGrid(n0, static_cast<std::size_t>(to_double(ns[1])),
                                        to_double(ls[0]), to_double(ls[1]));
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(to_double(line));
  }
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::Io, "snapshot: expected " + std::to_string(grid.size()) +
                                   " values, found " + std::to_string(values.size()));
  }
  return ScalarField(grid, std::move(values));
}

void write_snapshot_file(const std::string& path, const ScalarField& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write_snapshot(out, u);
}

ScalarField read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_snapshot(in);
}

}  // namespace nlheat
