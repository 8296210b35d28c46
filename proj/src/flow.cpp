#include "nlheat/flow.hpp"

#include <cmath>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

ForcingSpec::ForcingSpec(ScalarField spatial, TemporalProfile profile, double rate)
    : spatial_(std::move(spatial)), profile_(profile), rate_(rate) {
  if (!spatial_.all_finite() || spatial_.min() < 0.0) {
    throw Error(ErrorKind::Domain, "forcing a(x) must be finite and non-negative");
  }
  if (profile_ == TemporalProfile::ExpDecay && !(rate_ >= 0.0 && std::isfinite(rate_))) {
    throw Error(ErrorKind::Domain, "forcing decay rate must be >= 0");
  }
}

double ForcingSpec::alpha(double t) const {
  return profile_ == TemporalProfile::Constant ? 1.0 : std::exp(-rate_ * t);
}

ScalarField ForcingSpec::at(double t) const {
  if (profile_ == TemporalProfile::Constant) return spatial_;
  return alpha(t) * spatial_;
}

bool ForcingSpec::is_zero() const { return max_abs(spatial_) == 0.0; }

FlowSpec::FlowSpec(FlowVariant v, ScalarField g, std::optional<ForcingSpec> f, double p)
    : variant_(v), g_(std::move(g)), forcing_(std::move(f)), p_(p) {}

FlowSpec FlowSpec::linear_forced(ScalarField g, ForcingSpec forcing) {
  require_same_grid(g, forcing.spatial(), "FlowSpec::linear_forced");
  if (!g.all_finite() || g.min() < 0.0) {
    throw Error(ErrorKind::Domain, "linear flow needs finite initial data g >= 0");
  }
  return FlowSpec(FlowVariant::LinearForced, renormalize(g), std::move(forcing), 0.0);
}

FlowSpec FlowSpec::nonlinear_power(ScalarField g, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::Domain, "nonlinear flow needs p > 1, got " + format_double(p));
  }
  if (!g.all_finite() || g.min() <= 0.0) {
    throw Error(ErrorKind::Domain, "nonlinear flow needs finite initial data g > 0");
  }
  return FlowSpec(FlowVariant::NonlinearPower, renormalize(g), std::nullopt, p);
}

const ForcingSpec& FlowSpec::forcing() const {
  if (!forcing_) throw Error(ErrorKind::Domain, "nonlinear flow has no forcing");
  return *forcing_;
}

ScalarField FlowSpec::forcing_at(double t) const {
  if (!forcing_) return ScalarField(grid());
  return forcing_->at(t);
}

double positive_power(double x, double e) {
  if (e == std::floor(e) && e >= 0.0 && e <= 64.0) {
    double r = 1.0;
    for (int k = 0; k < static_cast<int>(e); ++k) r *= x;
    return r;
  }
  return std::exp(e * std::log(x));
}

ScalarField field_power(const ScalarField& u, double e) {
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0)) {
      throw Error(ErrorKind::Domain, "power of a non-positive value " + format_double(u[i]) +
                                         " at node " + std::to_string(i));
    }
    out[i] = positive_power(u[i], e);
  }
  return out;
}

double lambda_linear(const ScalarField& u, const ScalarField& forcing) {
  require_same_grid(u, forcing, "lambda_linear");
  return dirichlet(u) - inner(u, forcing);
}

double lambda_nonlinear(const ScalarField& u, double p) {
  return dirichlet(u) + integrate(field_power(u, p + 1.0));
}

double lambda_of(const ScalarField& u, double t, const FlowSpec& spec) {
  if (spec.variant() == FlowVariant::LinearForced) {
    return lambda_linear(u, spec.forcing().at(t));
  }
  return lambda_nonlinear(u, spec.p());
}

ScalarField rhs(const ScalarField& u, double t, const FlowSpec& spec) {
  require_same_grid(u, spec.initial(), "rhs");
  ScalarField out = laplacian(u);
  if (spec.variant() == FlowVariant::LinearForced) {
    const ScalarField a = spec.forcing().at(t);
    const double lambda = lambda_linear(u, a);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += lambda * u[i] + a[i];
  } else {
    const ScalarField up = field_power(u, spec.p());
    const double lambda = lambda_nonlinear(u, spec.p());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += lambda * u[i] - up[i];
  }
  return out;
}

ScalarField renormalize(const ScalarField& u) {
  const double norm = l2_norm(u);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::Degenerate, "cannot renormalize a field with L2 norm " + format_double(norm));
  }
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] / norm;
  return out;
}

}  // namespace nlheat
