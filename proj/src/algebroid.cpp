#include "qlag/algebroid.hpp"

#include <array>
#include <cmath>

#include "qlag/rk4.hpp"

namespace qlag {

const char* to_string(FlowStatus status) {
  switch (status) {
    case FlowStatus::kCompleted: return "completed";
    case FlowStatus::kChartExit: return "chart-exit";
    case FlowStatus::kBlowup: return "blowup";
    case FlowStatus::kSingularMetric: return "singular-metric";
  }
  return "unknown";
}

AlgebroidModel build_tangent_algebroid(const RiemannianChart& chart) {
  const int n = chart.dim;
  AlgebroidModel m;
  m.name = "tangent(" + chart.name + ")";
  m.base_dim = n;
  m.rank = n;
  m.structure = [n](const Vec&) { return zero_tensor(n, n, n); };
  m.anchor = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
  m.metric = chart.metric;
  if (chart.metric_derivative) {
    m.metric_derivative = chart.metric_derivative;
  } else {
    m.metric_derivative = [chart](const Vec& x) { return metric_derivative(chart, x); };
  }
  m.levi_civita = chart.christoffel;
  m.domain = chart.domain;
  return m;
}

StructureConstantsCheck check_structure_constants(const Tensor3& c) {
  const auto r = static_cast<Eigen::Index>(c.size());
  StructureConstantsCheck out;
  for (Eigen::Index e = 0; e < r; ++e)
    out.antisymmetry_defect =
        std::max(out.antisymmetry_defect, (c[e] + c[e].transpose()).cwiseAbs().maxCoeff());
  auto term = [&](Eigen::Index e, Eigen::Index a, Eigen::Index b, Eigen::Index cc) {
    double s = 0.0;
    for (Eigen::Index d = 0; d < r; ++d) s += c[e](a, d) * c[d](b, cc);
    return s;
  };
  for (Eigen::Index e = 0; e < r; ++e)
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = 0; b < r; ++b)
        for (Eigen::Index cc = 0; cc < r; ++cc) {
          const double j = term(e, a, b, cc) + term(e, b, cc, a) + term(e, cc, a, b);
          out.jacobi_defect = std::max(out.jacobi_defect, std::abs(j));
        }
  return out;
}

AlgebroidModel build_lie_algebra_algebroid(const Tensor3& constants, std::optional<Mat> metric,
                                           double tol) {
  const int r = static_cast<int>(constants.size());
  for (const auto& m : constants)
    if (m.rows() != r || m.cols() != r)
      throw InvalidArgument("structure constants must form an r x r x r array");
  const auto check = check_structure_constants(constants);
  if (check.antisymmetry_defect > tol)
    throw InvalidArgument("structure constants are not antisymmetric (defect " +
                          std::to_string(check.antisymmetry_defect) + ")");
  if (check.jacobi_defect > tol)
    throw InvalidArgument("structure constants violate the Jacobi identity (defect " +
                          std::to_string(check.jacobi_defect) + ")");
  AlgebroidModel m;
  m.name = "lie-algebra";
  m.base_dim = 0;
  m.rank = r;
  m.structure = [constants](const Vec&) { return constants; };
  m.anchor = [r](const Vec&) -> Mat { return Mat::Zero(0, r); };
  if (metric) {
    if (metric->rows() != r || metric->cols() != r)
      throw InvalidArgument("fiber metric has wrong shape");
    m.metric = [eta = *metric](const Vec&) { return eta; };
    m.metric_derivative = [](const Vec&) { return Tensor3{}; };
  }
  m.domain = {Vec(0), Vec(0)};
  return m;
}

Tensor3 so3_structure_constants() {
  Tensor3 c = zero_tensor(3, 3, 3);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, e = (a + 2) % 3;
    c[e](a, b) = 1.0;
    c[e](b, a) = -1.0;
  }
  return c;
}

namespace {

void require_in_domain(const AlgebroidModel& model, const Vec& x) {
  if (x.size() != model.base_dim) throw InvalidArgument("chart point has wrong dimension");
  if (!model.domain.contains(x)) throw InvalidArgument("point lies outside the chart domain");
}

}  // namespace

CompatibilityReport verify_compatibility(const AlgebroidModel& model,
                                         const std::vector<Vec>& samples, double fd_step) {
  const int n = model.base_dim, r = model.rank;
  std::vector<Vec> points = samples;
  if (points.empty() && n == 0) points.emplace_back(0);
  CompatibilityReport rep;
  for (const auto& x : points) {
    require_in_domain(model, x);
    const Tensor3 c = model.structure(x);
    const Mat mu = model.anchor(x);
    std::vector<Tensor3> dc(n);
    std::vector<Mat> dmu(n);
    for (int k = 0; k < n; ++k) {
      const double h = fd_step * std::max(1.0, std::abs(x[k]));
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const Tensor3 cp = model.structure(xp), cm = model.structure(xm);
      dc[k].resize(r);
      for (int e = 0; e < r; ++e) dc[k][e] = (cp[e] - cm[e]) / (2.0 * h);
      dmu[k] = (model.anchor(xp) - model.anchor(xm)) / (2.0 * h);
    }
    auto term = [&](int e, int a, int b, int cc) {
      double s = 0.0;
      for (int d = 0; d < r; ++d) s += c[e](a, d) * c[d](b, cc);
      for (int k = 0; k < n; ++k) s += mu(k, a) * dc[k][e](b, cc);
      return s;
    };
    for (int e = 0; e < r; ++e)
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          for (int cc = 0; cc < r; ++cc) {
            const double j = term(e, a, b, cc) + term(e, b, cc, a) + term(e, cc, a, b);
            rep.structure_residual = std::max(rep.structure_residual, std::abs(j));
          }
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += mu(k, a) * dmu[k](j, b) - mu(k, b) * dmu[k](j, a);
          for (int cc = 0; cc < r; ++cc) s -= c[cc](a, b) * mu(j, cc);
          rep.anchor_residual = std::max(rep.anchor_residual, std::abs(s));
        }
  }
  return rep;
}

Tensor3 fiber_metric_derivative(const AlgebroidModel& model, const Vec& x) {
  if (!model.metric) throw InvalidArgument("model has no fiber metric");
  if (model.metric_derivative) return (*model.metric_derivative)(x);
  Tensor3 d(static_cast<std::size_t>(model.base_dim));
  Vec xp = x, xm = x;
  for (int k = 0; k < model.base_dim; ++k) {
    const double h = fd_step_for(x[k]);
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    d[k] = ((*model.metric)(xp) - (*model.metric)(xm)) / (2.0 * h);
    xp[k] = xm[k] = x[k];
  }
  return d;
}

namespace {

template <typename M, typename Buffer>
Tensor3 koszul_impl(const Mat& eta_in, const Tensor3& d_eta, const Mat& anchor,
                    const Tensor3& structure, Buffer& dir, Buffer& br) {
  const auto r = eta_in.rows();
  const auto n = anchor.rows();
  const M eta = eta_in;
  Eigen::LLT<M> llt(eta);
  if (llt.info() != Eigen::Success) throw InvalidArgument("fiber metric is not positive definite");
  using V = Eigen::Matrix<double, M::RowsAtCompileTime, 1, 0, M::MaxRowsAtCompileTime, 1>;
  M inv(r, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    V e = V::Zero(r);
    e[j] = 1.0;
    llt.solveInPlace(e);
    inv.col(j) = e;
  }

  auto at = [r](Eigen::Index i, Eigen::Index j, Eigen::Index k) { return (i * r + j) * r + k; };
  // dir(a, b, c) = mu_a(eta_bc),  br(c, a, b) = eta([sigma_a, sigma_b], sigma_c)
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b)
      for (Eigen::Index c = 0; c < r; ++c) {
        double sd = 0.0, sb = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) sd += anchor(k, a) * d_eta[k](b, c);
        for (Eigen::Index d = 0; d < r; ++d) sb += eta(d, a) * structure[d](b, c);
        dir[at(a, b, c)] = sd;
        br[at(a, b, c)] = sb;
      }

  Tensor3 gamma = zero_tensor(r, r, r);
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b)
      for (Eigen::Index c = 0; c < r; ++c) {
        const double rhs = 0.5 * (dir[at(a, b, c)] + dir[at(b, a, c)] - dir[at(c, a, b)] +
                                  br[at(c, a, b)] - br[at(b, a, c)] - br[at(a, b, c)]);
        for (Eigen::Index d = 0; d < r; ++d) gamma[d](a, b) += inv(d, c) * rhs;
      }
  return gamma;
}

}  // namespace

Tensor3 koszul_coefficients(const Mat& eta, const Tensor3& d_eta, const Mat& anchor,
                            const Tensor3& structure) {
  // Small ranks stay on the stack.
  constexpr Eigen::Index kSmall = 6;
  if (eta.rows() <= kSmall) {
    std::array<double, kSmall * kSmall * kSmall> dir, br;
    return koszul_impl<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kSmall, kSmall>>(
        eta, d_eta, anchor, structure, dir, br);
  }
  const std::size_t size = static_cast<std::size_t>(eta.rows() * eta.rows() * eta.rows());
  std::vector<double> dir(size), br(size);
  return koszul_impl<Mat>(eta, d_eta, anchor, structure, dir, br);
}

AConnection levi_civita_connection(const AlgebroidModel& model) {
  if (!model.metric) throw InvalidArgument("Levi-Civita connection needs a fiber metric");
  AConnection conn;
  conn.model = model;
  if (model.levi_civita) {
    conn.coefficients = *model.levi_civita;
    return conn;
  }
  conn.coefficients = [model](const Vec& x) {
    return koszul_coefficients((*model.metric)(x), fiber_metric_derivative(model, x),
                               model.anchor(x), model.structure(x));
  };
  return conn;
}

namespace {

int step_count(double span, double step) {
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  if (!(span >= 0.0) || !std::isfinite(span)) throw InvalidArgument("integration span must be finite and nonnegative");
  return std::max(1, static_cast<int>(std::ceil(span / step - 1e-9)));
}

bool finite(const Vec& v) { return v.allFinite(); }

}  // namespace

namespace {

// RK4 geodesic integration. Without keep_all only the start and the last
// accepted state are stored, which is all exp_map needs.
AlgebroidPath integrate_geodesic(const AConnection& conn, const AlgebroidState& init, double s_max,
                                 double step, bool keep_all) {
  const AlgebroidModel& model = conn.model;
  const int n = model.base_dim, r = model.rank;
  require_in_domain(model, init.x);
  if (init.xi.size() != r) throw InvalidArgument("fiber vector has wrong dimension");

  Vec x(n);
  auto rhs = [&](double, const Vec& y) -> Vec {
    x = y.head(n);
    const Tensor3 g = conn.coefficients(x);
    const Mat mu = model.anchor(x);
    Vec dy = Vec::Zero(n + r);
    for (int a = 0; a < r; ++a) {
      const double xa = y[n + a];
      for (int k = 0; k < n; ++k) dy[k] += mu(k, a) * xa;
      double acc = 0.0;
      for (int c = 0; c < r; ++c)
        for (int b = 0; b < r; ++b) acc += g[a](b, c) * y[n + b] * y[n + c];
      dy[n + a] = -acc;
    }
    return dy;
  };

  const int steps = step_count(s_max, step);
  const double h = s_max / steps;
  AlgebroidPath path;
  path.step = h;
  path.samples.reserve(keep_all ? steps + 1 : 2);
  path.samples.push_back({0.0, init.x, init.xi});
  Vec y(n + r);
  y << init.x, init.xi;
  double s = 0.0;
  auto stop = [&](FlowStatus status) {
    path.status = status;
    if (!keep_all && s > 0.0) path.samples.push_back({s, y.head(n), y.tail(r)});
    return path;
  };
  for (int i = 1; i <= steps; ++i) {
    Vec next = rk4_step(rhs, (i - 1) * h, y, h);
    if (!finite(next)) return stop(FlowStatus::kBlowup);
    if (!model.domain.contains(next.head(n))) return stop(FlowStatus::kChartExit);
    y.swap(next);
    s = i == steps ? s_max : i * h;
    if (keep_all) path.samples.push_back({s, y.head(n), y.tail(r)});
  }
  if (!keep_all) path.samples.push_back({s_max, y.head(n), y.tail(r)});
  return path;
}

}  // namespace

AlgebroidPath geodesic_flow(const AConnection& conn, const AlgebroidState& init, double s_max,
                            double step) {
  return integrate_geodesic(conn, init, s_max, step, true);
}

AlgebroidState exp_map(const AConnection& conn, const Vec& x, const Vec& xi, double step) {
  if (xi.size() == conn.model.rank && (xi.array() == 0.0).all()) {
    require_in_domain(conn.model, x);
    return {x, xi};
  }
  const AlgebroidPath path = integrate_geodesic(conn, {x, xi}, 1.0, step, false);
  if (path.status != FlowStatus::kCompleted)
    throw ExpUndefined(std::string("exponential undefined at this radius: geodesic ") +
                       to_string(path.status) + " at s = " + std::to_string(path.back().s));
  return {path.back().x, path.back().xi};
}

namespace {

struct BaseDerivatives {
  Tensor3 d_eta;  // [k](a, b)
  Mat d_linear;   // (k, b)
  Vec grad_v;
};

BaseDerivatives base_derivatives(const QuadraticLagrangian& l, const Vec& x, int r) {
  const int n = static_cast<int>(x.size());
  BaseDerivatives d;
  const bool need_fd = !l.eta_derivative || !l.linear_derivative || !l.potential_gradient;
  if (need_fd) {
    d.d_eta.assign(n, Mat::Zero(r, r));
    d.d_linear = Mat::Zero(n, r);
    d.grad_v = Vec::Zero(n);
    Vec xp = x, xm = x;
    for (int k = 0; k < n; ++k) {
      const double h = fd_step_for(x[k]);
      xp[k] = x[k] + h;
      xm[k] = x[k] - h;
      if (!l.eta_derivative) d.d_eta[k] = (l.eta(xp) - l.eta(xm)) / (2.0 * h);
      if (!l.linear_derivative) d.d_linear.row(k) = (l.linear(xp) - l.linear(xm)).transpose() / (2.0 * h);
      if (!l.potential_gradient) d.grad_v[k] = (l.potential(xp) - l.potential(xm)) / (2.0 * h);
      xp[k] = xm[k] = x[k];
    }
  }
  if (l.eta_derivative) d.d_eta = (*l.eta_derivative)(x);
  if (l.linear_derivative) d.d_linear = (*l.linear_derivative)(x);
  if (l.potential_gradient) d.grad_v = (*l.potential_gradient)(x);
  return d;
}

}  // namespace

Vec momentum(const QuadraticLagrangian& lagrangian, const AlgebroidState& state) {
  return lagrangian.eta(state.x) * state.xi + lagrangian.linear(state.x);
}

double legendre_energy(const QuadraticLagrangian& lagrangian, const AlgebroidState& state) {
  return 0.5 * state.xi.dot(lagrangian.eta(state.x) * state.xi) + lagrangian.potential(state.x);
}

AlgebroidPath el_flow(const QuadraticLagrangian& lagrangian, const AlgebroidModel& model,
                      const AlgebroidState& init, double t_max, double step) {
  const int n = model.base_dim, r = model.rank;
  require_in_domain(model, init.x);
  if (init.xi.size() != r) throw InvalidArgument("fiber vector has wrong dimension");
  {
    Eigen::LLT<Mat> llt(lagrangian.eta(init.x));
    if (llt.info() != Eigen::Success)
      throw InvalidArgument("Lagrangian is not regular at the initial point");
  }

  bool singular = false;
  // Fiber velocity from momentum; flags a singular eta instead of throwing.
  auto velocity = [&](const Vec& x, const Vec& p) -> Vec {
    Eigen::LLT<Mat> llt(lagrangian.eta(x));
    if (llt.info() != Eigen::Success) {
      singular = true;
      return Vec::Constant(r, std::numeric_limits<double>::quiet_NaN());
    }
    return llt.solve(p - lagrangian.linear(x));
  };

  auto rhs = [&](double, const Vec& y) -> Vec {
    const Vec x = y.head(n);
    const Vec p = y.tail(r);
    const Vec xi = velocity(x, p);
    const Tensor3 c = model.structure(x);
    const Mat mu = model.anchor(x);
    Vec dy(n + r);
    dy.head(n) = mu * xi;
    Vec dp = Vec::Zero(r);
    // -p_c C^c_ab xi^b
    for (int cc = 0; cc < r; ++cc) dp -= p[cc] * (c[cc] * xi);
    if (n > 0) {
      const BaseDerivatives d = base_derivatives(lagrangian, x, r);
      Vec dl(n);  // dL/dx^k
      for (int k = 0; k < n; ++k)
        dl[k] = 0.5 * xi.dot(d.d_eta[k] * xi) + d.d_linear.row(k).dot(xi) - d.grad_v[k];
      dp += mu.transpose() * dl;
    }
    dy.tail(r) = dp;
    return dy;
  };

  const int steps = step_count(t_max, step);
  const double h = t_max / steps;
  AlgebroidPath path;
  path.step = h;
  path.samples.reserve(steps + 1);
  path.samples.push_back({0.0, init.x, init.xi});
  Vec y(n + r);
  y << init.x, momentum(lagrangian, init);
  for (int i = 1; i <= steps; ++i) {
    const Vec next = rk4_step(rhs, (i - 1) * h, y, h);
    if (singular) {
      path.status = FlowStatus::kSingularMetric;
      return path;
    }
    if (!finite(next)) {
      path.status = FlowStatus::kBlowup;
      return path;
    }
    if (!model.domain.contains(next.head(n))) {
      path.status = FlowStatus::kChartExit;
      return path;
    }
    y = next;
    const Vec xi = velocity(y.head(n), y.tail(r));
    if (singular) {
      path.status = FlowStatus::kSingularMetric;
      return path;
    }
    path.samples.push_back({i * h, y.head(n), xi});
  }
  path.samples.back().s = t_max;
  return path;
}

}  // namespace qlag
