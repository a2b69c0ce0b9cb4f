#include "qlag/chart.hpp"

#include <cmath>
#include <numbers>

namespace qlag {

RiemannianChart euclidean_chart(int n) {
  if (n < 1) throw InvalidArgument("euclidean chart needs positive dimension");
  RiemannianChart c;
  c.name = "euclidean" + std::to_string(n);
  c.dim = n;
  c.metric = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
  c.metric_derivative = [n](const Vec&) { return zero_tensor(n, n, n); };
  c.christoffel = [n](const Vec&) { return zero_tensor(n, n, n); };
  c.domain = {Vec::Constant(n, -1e6), Vec::Constant(n, 1e6)};
  return c;
}

RiemannianChart sphere_chart() {
  using std::numbers::pi;
  RiemannianChart c;
  c.name = "sphere";
  c.dim = 2;
  c.metric = [](const Vec& x) -> Mat {
    const double s = std::sin(x[0]);
    return Eigen::Vector2d(1.0, s * s).asDiagonal();
  };
  c.metric_derivative = [](const Vec& x) {
    Tensor3 d = zero_tensor(2, 2, 2);
    d[0](1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]);
    return d;
  };
  c.christoffel = [](const Vec& x) {
    Tensor3 g = zero_tensor(2, 2, 2);
    const double s = std::sin(x[0]), co = std::cos(x[0]);
    g[0](1, 1) = -s * co;
    g[1](0, 1) = g[1](1, 0) = co / s;
    return g;
  };
  c.domain = {Eigen::Vector2d(0.01, -4.0 * pi), Eigen::Vector2d(pi - 0.01, 4.0 * pi)};
  return c;
}

RiemannianChart hyperbolic_chart() {
  RiemannianChart c;
  c.name = "hyperbolic";
  c.dim = 2;
  c.metric = [](const Vec& x) -> Mat { return Mat::Identity(2, 2) / (x[1] * x[1]); };
  c.metric_derivative = [](const Vec& x) {
    Tensor3 d = zero_tensor(2, 2, 2);
    d[1] = Mat::Identity(2, 2) * (-2.0 / (x[1] * x[1] * x[1]));
    return d;
  };
  c.christoffel = [](const Vec& x) {
    Tensor3 g = zero_tensor(2, 2, 2);
    const double iw = 1.0 / x[1];
    g[0](0, 1) = g[0](1, 0) = -iw;
    g[1](0, 0) = iw;
    g[1](1, 1) = -iw;
    return g;
  };
  c.domain = {Eigen::Vector2d(-1e3, 1e-6), Eigen::Vector2d(1e3, 1e6)};
  return c;
}

RiemannianChart chart_by_name(const std::string& name) {
  if (name == "sphere") return sphere_chart();
  if (name == "hyperbolic") return hyperbolic_chart();
  if (name == "euclidean") return euclidean_chart(2);
  if (name.rfind("euclidean", 0) == 0) {
    const std::string digits = name.substr(9);
    if (digits.size() == 1 && digits[0] >= '1' && digits[0] <= '3')
      return euclidean_chart(digits[0] - '0');
  }
  throw InvalidArgument("unknown chart '" + name + "'");
}

Tensor3 metric_derivative(const RiemannianChart& chart, const Vec& x) {
  if (chart.metric_derivative) return (*chart.metric_derivative)(x);
  Tensor3 d(static_cast<std::size_t>(chart.dim));
  Vec xp = x, xm = x;
  for (int k = 0; k < chart.dim; ++k) {
    const double h = fd_step_for(x[k]);
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    d[k] = (chart.metric(xp) - chart.metric(xm)) / (2.0 * h);
    xp[k] = xm[k] = x[k];
  }
  return d;
}

Tensor3 christoffel_from_metric(const Mat& eta, const Tensor3& d_eta) {
  const auto n = eta.rows();
  const Mat inv = eta.inverse();
  Tensor3 lower = zero_tensor(n, n, n);  // lower[d](i, j) = Gamma_{d i j}
  for (Eigen::Index d = 0; d < n; ++d)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        lower[d](i, j) = 0.5 * (d_eta[i](d, j) + d_eta[j](d, i) - d_eta[d](i, j));
  Tensor3 g = zero_tensor(n, n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index d = 0; d < n; ++d) g[k] += inv(k, d) * lower[d];
  return g;
}

double christoffel_defect(const RiemannianChart& chart, const std::vector<Vec>& points) {
  if (!chart.christoffel) return 0.0;
  RiemannianChart fd = chart;
  fd.metric_derivative.reset();
  double worst = 0.0;
  for (const auto& x : points) {
    const Tensor3 analytic = (*chart.christoffel)(x);
    const Tensor3 numeric = christoffel_from_metric(chart.metric(x), metric_derivative(fd, x));
    for (int k = 0; k < chart.dim; ++k)
      worst = std::max(worst, (analytic[k] - numeric[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qlag
