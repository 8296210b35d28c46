#pragma once

// The two L2-norm preserving non-local heat flows:
//   linear forced:    u_t = lap u + lambda(t) u + A(x,t),  lambda = int(|grad u|^2 - u A)
//   nonlinear power:  u_t = lap u + lambda(t) u - u^p,     lambda = int(|grad u|^2 + u^(p+1))

#include <optional>

#include "nlheat/grid.hpp"

namespace nlheat {

enum class FlowVariant { LinearForced, NonlinearPower };
enum class TemporalProfile { Constant, ExpDecay };

/// Separable forcing A(x,t) = alpha(t) a(x) with a >= 0 and alpha >= 0.
class ForcingSpec {
 public:
  ForcingSpec(ScalarField spatial, TemporalProfile profile = TemporalProfile::Constant,
              double rate = 0.0);

  const ScalarField& spatial() const noexcept { return spatial_; }
  TemporalProfile profile() const noexcept { return profile_; }
  double rate() const noexcept { return rate_; }

  double alpha(double t) const;
  ScalarField at(double t) const;
  bool is_zero() const;

 private:
  ScalarField spatial_;
  TemporalProfile profile_;
  double rate_;
};

/// A flow problem with initial data rescaled to unit L2 norm.
class FlowSpec {
 public:
  static FlowSpec linear_forced(ScalarField g, ForcingSpec forcing);
  static FlowSpec nonlinear_power(ScalarField g, double p);

  FlowVariant variant() const noexcept { return variant_; }
  const ScalarField& initial() const noexcept { return g_; }
  const TorusGrid& grid() const noexcept { return g_.grid(); }
  /// Only meaningful for NonlinearPower.
  double p() const noexcept { return p_; }
  /// Throws ErrorKind::Domain for NonlinearPower.
  const ForcingSpec& forcing() const;

  /// A(., t) for LinearForced; the zero field for NonlinearPower.
  ScalarField forcing_at(double t) const;

 private:
  FlowSpec(FlowVariant v, ScalarField g, std::optional<ForcingSpec> f, double p);

  FlowVariant variant_;
  ScalarField g_;
  std::optional<ForcingSpec> forcing_;
  double p_;
};

/// x^e for x > 0. Integer exponents in [0, 64] use repeated multiplication,
/// everything else exp(e log x).
double positive_power(double x, double e);

/// Nodewise u^e; throws ErrorKind::Domain if any u <= 0.
ScalarField field_power(const ScalarField& u, double e);

double lambda_linear(const ScalarField& u, const ScalarField& forcing);
double lambda_nonlinear(const ScalarField& u, double p);

/// lambda of the flow at state u and time t.
double lambda_of(const ScalarField& u, double t, const FlowSpec& spec);

/// Right-hand side of the flow at (u, t).
ScalarField rhs(const ScalarField& u, double t, const FlowSpec& spec);

/// u / l2_norm(u); throws ErrorKind::Degenerate for a zero field.
ScalarField renormalize(const ScalarField& u);

}  // namespace nlheat
