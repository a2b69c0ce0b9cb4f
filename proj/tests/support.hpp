#pragma once

// Helpers shared by the algebroid unit tests and the acceptance suite.

#include <numbers>

#include "qlag/algebroid.hpp"

namespace support {

using namespace qlag;

inline double max_abs(const Tensor3& t) {
  double m = 0.0;
  for (const auto& s : t) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}

inline Tensor3 diff(const Tensor3& a, const Tensor3& b) {
  Tensor3 out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

// Classical Christoffel symbols from central differences of the metric.
inline Tensor3 fd_christoffel(const RiemannianChart& chart, const Vec& x) {
  const int n = chart.dim;
  const double h = 1e-5;
  std::vector<Mat> d(n);
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    d[k] = (chart.metric(xp) - chart.metric(xm)) / (2 * h);
  }
  const Mat inv = chart.metric(x).inverse();
  Tensor3 g(n, Mat::Zero(n, n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e)
          g[c](a, b) += 0.5 * inv(c, e) * (d[a](e, b) + d[b](e, a) - d[e](a, b));
  return g;
}

inline Vec random_point(const RiemannianChart& chart, CounterRng& rng) {
  if (chart.name == "sphere") return Eigen::Vector2d(rng.uniform(0.3, std::numbers::pi - 0.3), rng.uniform(-3, 3));
  if (chart.name == "hyperbolic") return Eigen::Vector2d(rng.uniform(-2, 2), rng.uniform(0.3, 3));
  return rng.uniform_vec(chart.dim, -5, 5);
}

inline std::vector<RiemannianChart> charts() {
  return {euclidean_chart(1), euclidean_chart(2), euclidean_chart(3), sphere_chart(),
          hyperbolic_chart()};
}

// Koszul coefficients of a model, skipping any analytic override.
inline Tensor3 koszul_at(const AlgebroidModel& m, const Vec& x) {
  return koszul_coefficients((*m.metric)(x), fiber_metric_derivative(m, x), m.anchor(x),
                             m.structure(x));
}

struct IdentityDefects {
  double torsion = 0.0;
  double metricity = 0.0;
};

// Torsion: Gamma^c_ab - Gamma^c_ba - C^c_ab.
// Metricity: mu_a(eta_bc) - Gamma^d_ab eta_dc - Gamma^d_ac eta_bd, left side by central differences.
inline IdentityDefects identities(const AlgebroidModel& m, const Tensor3& gamma, const Vec& x) {
  const int r = m.rank, n = m.base_dim;
  const Tensor3 c = m.structure(x);
  const Mat eta = (*m.metric)(x), mu = m.anchor(x);
  IdentityDefects out;
  for (int e = 0; e < r; ++e)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        out.torsion = std::max(out.torsion, std::abs(gamma[e](a, b) - gamma[e](b, a) - c[e](a, b)));
  std::vector<Mat> d(n);
  for (int k = 0; k < n; ++k) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    d[k] = ((*m.metric)(xp) - (*m.metric)(xm)) / (2 * h);
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int cc = 0; cc < r; ++cc) {
        double lhs = 0.0;
        for (int k = 0; k < n; ++k) lhs += mu(k, a) * d[k](b, cc);
        double rhs = 0.0;
        for (int dd = 0; dd < r; ++dd) rhs += gamma[dd](a, b) * eta(dd, cc) + gamma[dd](a, cc) * eta(b, dd);
        out.metricity = std::max(out.metricity, std::abs(lhs - rhs));
      }
  return out;
}

// Max over e, a, b, c of |sum_cyclic sum_d C^e_ad C^d_bc| by plain loops.
inline double jacobi_oracle(const Tensor3& c) {
  const int r = static_cast<int>(c.size());
  double worst = 0.0;
  for (int e = 0; e < r; ++e)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int k = 0; k < r; ++k) {
          double s = 0.0;
          for (int d = 0; d < r; ++d)
            s += c[e](a, d) * c[d](b, k) + c[e](b, d) * c[d](k, a) + c[e](k, d) * c[d](a, b);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

inline AlgebroidModel raw_lie_algebra(const Tensor3& c) {
  AlgebroidModel m;
  m.name = "raw";
  m.rank = static_cast<int>(c.size());
  m.structure = [c](const Vec&) { return c; };
  m.anchor = [r = m.rank](const Vec&) -> Mat { return Mat::Zero(0, r); };
  return m;
}

inline QuadraticLagrangian free_lagrangian(const Mat& eta) {
  QuadraticLagrangian l;
  l.eta = [eta](const Vec&) { return eta; };
  l.linear = [r = eta.rows()](const Vec&) -> Vec { return Vec::Zero(r); };
  l.potential = [](const Vec&) { return 0.0; };
  return l;
}

}  // namespace support
