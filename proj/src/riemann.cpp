#include "qlag/riemann.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace qlag {

namespace {

AConnection tangent_levi_civita(const RiemannianChart& chart) {
  return levi_civita_connection(build_tangent_algebroid(chart));
}

}  // namespace

PairElement riemann_exp(const RiemannianChart& chart, const Vec& x, const Vec& v, double step) {
  const AlgebroidState end = exp_map(tangent_levi_civita(chart), x, v, step);
  return {end.x, x};
}

namespace {

class Shooter {
 public:
  Shooter(const RiemannianChart& chart, const Vec& y, const Vec& x, const ShootingOptions& opt)
      : conn_(tangent_levi_civita(chart)), y_(y), x_(x), opt_(opt) {}

  // Endpoint mismatch exp_x(v) - y, or nothing when the geodesic fails.
  std::optional<Vec> residual(const Vec& v) const {
    try {
      return Vec(exp_map(conn_, x_, v, opt_.step).x - y_);
    } catch (const ExpUndefined&) {
      return std::nullopt;
    }
  }

  std::optional<Mat> jacobian(const Vec& v) const {
    const auto n = v.size();
    Mat j(n, n);
    const double h = 1e-6 * std::max(1.0, v.lpNorm<Eigen::Infinity>());
    Vec vp = v, vm = v;
    for (Eigen::Index k = 0; k < n; ++k) {
      vp[k] = v[k] + h;
      vm[k] = v[k] - h;
      const auto rp = residual(vp), rm = residual(vm);
      if (!rp || !rm) return std::nullopt;
      j.col(k) = (*rp - *rm) / (2.0 * h);
      vp[k] = vm[k] = v[k];
    }
    return j;
  }

  // One-sided differences from a known residual; only used to size singular values.
  std::optional<Mat> forward_jacobian(const Vec& v, const Vec& r) const {
    const auto n = v.size();
    Mat j(n, n);
    const double h = 1e-6 * std::max(1.0, v.lpNorm<Eigen::Infinity>());
    Vec vp = v;
    for (Eigen::Index k = 0; k < n; ++k) {
      vp[k] = v[k] + h;
      const auto rp = residual(vp);
      if (!rp) return std::nullopt;
      j.col(k) = (*rp - r) / h;
      vp[k] = v[k];
    }
    return j;
  }

 private:
  AConnection conn_;
  Vec y_, x_;
  ShootingOptions opt_;
};

double size(const Vec& r) { return r.lpNorm<Eigen::Infinity>(); }

}  // namespace

Vec riemann_log(const RiemannianChart& chart, const Vec& y, const Vec& x,
                const ShootingOptions& options) {
  if (x.size() != chart.dim || y.size() != chart.dim)
    throw InvalidArgument("points have wrong dimension for chart " + chart.name);
  if (!chart.domain.contains(x) || !chart.domain.contains(y))
    throw InvalidArgument("points lie outside the chart domain");
  const Shooter shoot(chart, y, x, options);
  const double tol = options.tolerance;

  Vec v = y - x;
  std::optional<Vec> r = shoot.residual(v);
  for (int i = 0; i < 30 && !r; ++i) {
    v *= 0.5;
    r = shoot.residual(v);
  }
  if (!r) throw LogNotConverged("outside solvable neighborhood: no initial geodesic stays in chart");

  std::optional<Mat> jac;
  bool converged = size(*r) < tol;

  // Newton on v with backtracking.
  for (int it = 0; it < options.newton_iterations && !converged; ++it) {
    jac = shoot.jacobian(v);
    if (!jac) break;
    const Vec dv = jac->fullPivLu().solve(-*r);
    if (!dv.allFinite()) break;
    bool accepted = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const Vec cand = v + t * dv;
      const auto rc = shoot.residual(cand);
      if (rc && size(*rc) < size(*r)) {
        v = cand;
        r = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    converged = size(*r) < tol;
  }

  // Damped gradient descent on 1/2 |r|^2.
  for (int it = 0; it < options.descent_iterations && !converged; ++it) {
    jac = shoot.jacobian(v);
    if (!jac) break;
    const Vec grad = jac->transpose() * *r;
    const double g2 = grad.squaredNorm();
    if (!(g2 > 0.0)) break;
    const double f0 = 0.5 * r->squaredNorm();
    bool accepted = false;
    for (double t = f0 / g2; t > 1e-14; t *= 0.5) {
      const Vec cand = v - t * grad;
      const auto rc = shoot.residual(cand);
      if (rc && 0.5 * rc->squaredNorm() <= f0 - 1e-4 * t * g2) {
        v = cand;
        r = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    converged = size(*r) < tol;
  }

  if (!converged)
    throw LogNotConverged("outside solvable neighborhood: shooting did not converge (mismatch " +
                          std::to_string(size(*r)) + ")");

  if (!jac) jac = shoot.forward_jacobian(v, *r);
  if (!jac) throw LogNotConverged("outside solvable neighborhood: Jacobian unavailable");
  Eigen::JacobiSVD<Mat> svd(*jac);
  const Vec sv = svd.singularValues();
  if (sv.size() > 0 && !(sv.minCoeff() > options.conjugate_ratio * sv.maxCoeff()))
    throw LogNotConverged("outside solvable neighborhood: target is conjugate to the base point");
  return v;
}

double q_lagrangian(const RiemannianChart& chart, const Vec& y, const Vec& x,
                    const ShootingOptions& options) {
  const Vec v = riemann_log(chart, y, x, options);
  return 0.5 * v.dot(chart.metric(x) * v);
}

TwoPointLagrangian TwoPointLagrangian::canonical(const RiemannianChart& chart, double mass,
                                                 double c_k, const ShootingOptions& options) {
  if (!(mass > 0.0) || !(c_k > 0.0)) throw InvalidArgument("mass and c_K must be positive");
  TwoPointLagrangian tpl;
  tpl.chart = chart;
  tpl.ell = [chart, options](const Vec& y, const Vec& x) {
    return q_lagrangian(chart, y, x, options);
  };
  tpl.mass = mass;
  tpl.c_k = c_k;
  tpl.exp_step = options.step;
  return tpl;
}

double c_lagrangian(const TwoPointLagrangian& tpl, const Vec& x, const Vec& v) {
  const PairElement g = riemann_exp(tpl.chart, x, v / tpl.c_k, tpl.exp_step);
  return tpl.mass * tpl.c_k * tpl.c_k * tpl.ell(g.y, g.x);
}

namespace {

Mat fd_hessian(const std::function<double(const Vec&)>& f, Eigen::Index n, double h, double f0) {
  Mat hess(n, n);
  Vec e = Vec::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    e.setZero();
    e[a] = h;
    hess(a, a) = (f(e) - 2.0 * f0 + f(-e)) / (h * h);
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      Vec ea = Vec::Zero(n), eb = Vec::Zero(n);
      ea[a] = h;
      eb[b] = h;
      const double v = (f(ea + eb) - f(ea - eb) - f(eb - ea) + f(-ea - eb)) / (4.0 * h * h);
      hess(a, b) = hess(b, a) = v;
    }
  return hess;
}

}  // namespace

ExpansionData quadratic_expansion(const TwoPointLagrangian& tpl, const Vec& x,
                                  const ExpansionOptions& options) {
  const Eigen::Index n = tpl.chart.dim;
  if (x.size() != n) throw InvalidArgument("point has wrong dimension");
  auto lag = [&](const Vec& xi) { return c_lagrangian(tpl, x, xi); };

  ExpansionData out;
  out.x = x;
  out.gradient_step = options.gradient_step * tpl.c_k;
  out.hessian_step = options.hessian_step * tpl.c_k;

  const double l0 = lag(Vec::Zero(n));
  out.potential = -l0;

  out.linear.resize(n);
  const double h1 = out.gradient_step;
  for (Eigen::Index a = 0; a < n; ++a) {
    Vec e = Vec::Zero(n);
    e[a] = h1;
    out.linear[a] = (lag(e) - lag(-e)) / (2.0 * h1);
  }

  const double h2 = out.hessian_step;
  out.eta = fd_hessian(lag, n, h2, l0);
  if (options.richardson) {
    const Mat fine = fd_hessian(lag, n, 0.5 * h2, l0);
    out.eta = (4.0 * fine - out.eta) / 3.0;
  }

  Eigen::SelfAdjointEigenSolver<Mat> es(out.eta, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.regular = out.min_eigenvalue > 0.0;
  return out;
}

std::vector<RemainderSample> remainder_sweep(const TwoPointLagrangian& tpl, const Vec& x,
                                             const Vec& direction,
                                             const std::function<double(const Vec&)>& quadratic,
                                             const std::vector<double>& radii) {
  if (direction.size() != tpl.chart.dim || !(direction.norm() > 0.0))
    throw InvalidArgument("sweep direction must be a nonzero chart vector");
  const Vec unit = direction.normalized();
  std::vector<RemainderSample> out;
  out.reserve(radii.size());
  for (double rho : radii) {
    const Vec v = rho * tpl.c_k * unit;
    RemainderSample s;
    s.radius = rho;
    s.exact = c_lagrangian(tpl, x, v);
    s.quadratic = quadratic(v);
    s.remainder = std::abs(s.exact - s.quadratic);
    out.push_back(s);
  }
  return out;
}

double loglog_slope(const std::vector<RemainderSample>& samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& s : samples) {
    if (!(s.remainder > 0.0) || !(s.radius > 0.0)) continue;
    const double lx = std::log(s.radius), ly = std::log(s.remainder);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidArgument("bad log-spaced range");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  return out;
}

}  // namespace qlag
