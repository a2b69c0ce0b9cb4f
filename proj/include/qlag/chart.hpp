#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qlag/core.hpp"

namespace qlag {

using ScalarField = std::function<double(const Vec&)>;
using VecField = std::function<Vec(const Vec&)>;
using MatField = std::function<Mat(const Vec&)>;
using TensorField = std::function<Tensor3(const Vec&)>;

/// Coordinate chart of a Riemannian manifold.
struct RiemannianChart {
  std::string name;
  int dim = 0;
  MatField metric;
  // Optional analytic overrides; finite differences are used otherwise.
  // metric_derivative(x)[k](i, j) = d eta_ij / d x^k.
  std::optional<TensorField> metric_derivative;
  // christoffel(x)[k](i, j) = Gamma^k_ij.
  std::optional<TensorField> christoffel;
  Box domain;
};

RiemannianChart euclidean_chart(int n);
// Unit sphere in (theta, phi), theta polar angle; the poles are excluded.
RiemannianChart sphere_chart();
// Upper half-plane (u, w), w > 0, metric (du^2 + dw^2) / w^2.
RiemannianChart hyperbolic_chart();

// "euclidean<n>" / "euclidean" (n = 2), "sphere", "hyperbolic".
RiemannianChart chart_by_name(const std::string& name);

// Relative central-difference step used for user-supplied fields.
inline double fd_step_for(double xk, double rel = 1e-5) {
  return rel * std::max(1.0, std::abs(xk));
}

// d eta / d x^k for all k, analytic when available.
Tensor3 metric_derivative(const RiemannianChart& chart, const Vec& x);

// 1/2 eta^{kd} (d_i eta_dj + d_j eta_di - d_d eta_ij) from metric derivatives.
Tensor3 christoffel_from_metric(const Mat& eta, const Tensor3& d_eta);

// Max deviation between the analytic Christoffel symbols and the
// finite-difference ones over the given points (0 when none is supplied).
double christoffel_defect(const RiemannianChart& chart, const std::vector<Vec>& points);

}  // namespace qlag
