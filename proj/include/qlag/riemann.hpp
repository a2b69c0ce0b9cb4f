#pragma once

#include <functional>
#include <vector>

#include "qlag/algebroid.hpp"

namespace qlag {

// Element (y, x) : x -> y of the pair groupoid of a chart.
struct PairElement {
  Vec y;
  Vec x;
};

struct ShootingOptions {
  double step = 1e-3;         // RK4 step of each geodesic
  double tolerance = 1e-10;   // endpoint mismatch, chart coordinates
  int newton_iterations = 50;
  int descent_iterations = 500;
  // Smallest allowed ratio of singular values of d(Exp_x); below it the target
  // sits on (or next to) a conjugate point and the inverse is not defined.
  double conjugate_ratio = 1e-4;
};

/// (exp_x(v), x), the unit-time Levi-Civita geodesic of the tangent algebroid.
PairElement riemann_exp(const RiemannianChart& chart, const Vec& x, const Vec& v,
                        double step = 1e-3);

/// Velocity v with riemann_exp(x, v) = (y, x), by Newton shooting from the
/// chart difference y - x with a damped gradient-descent fallback.
/// Throws LogNotConverged outside the solvable neighborhood.
Vec riemann_log(const RiemannianChart& chart, const Vec& y, const Vec& x,
                const ShootingOptions& options = {});

/// Canonical two-point function 1/2 |log_x y|^2 = 1/2 d(x, y)^2.
double q_lagrangian(const RiemannianChart& chart, const Vec& y, const Vec& x,
                    const ShootingOptions& options = {});

using TwoPointFunction = std::function<double(const Vec& y, const Vec& x)>;

/// q-Lagrangian on the pair groupoid of a chart with its physical scales.
struct TwoPointLagrangian {
  RiemannianChart chart;
  TwoPointFunction ell;
  double mass = 1.0;
  double c_k = 1.0;
  double exp_step = 1e-3;

  static TwoPointLagrangian canonical(const RiemannianChart& chart, double mass, double c_k,
                                      const ShootingOptions& options = {});
};

/// m c_K^2 ell(Exp(x, v / c_K)).
double c_lagrangian(const TwoPointLagrangian& tpl, const Vec& x, const Vec& v);

struct ExpansionOptions {
  double gradient_step = 1e-5;  // relative to c_K
  double hessian_step = 1e-3;   // relative to c_K
  bool richardson = false;
};

/// Quadratic truncation 1/2 eta_ab xi^a xi^b + A_a xi^a - V of the c-Lagrangian.
struct ExpansionData {
  Vec x;
  Mat eta;
  Vec linear;       // A
  double potential; // V
  bool regular = false;  // eta positive definite
  double gradient_step = 0.0;
  double hessian_step = 0.0;
  double min_eigenvalue = 0.0;

  double evaluate(const Vec& xi) const { return 0.5 * xi.dot(eta * xi) + linear.dot(xi) - potential; }
};

ExpansionData quadratic_expansion(const TwoPointLagrangian& tpl, const Vec& x,
                                  const ExpansionOptions& options = {});

struct RemainderSample {
  double radius;  // |v| / c_K
  double exact;
  double quadratic;
  double remainder;
};

// |L(x, v) - q(v)| along v = radius * c_K * direction for each radius.
std::vector<RemainderSample> remainder_sweep(const TwoPointLagrangian& tpl, const Vec& x,
                                             const Vec& direction,
                                             const std::function<double(const Vec&)>& quadratic,
                                             const std::vector<double>& radii);

// Least-squares slope of log(remainder) against log(radius).
double loglog_slope(const std::vector<RemainderSample>& samples);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace qlag
