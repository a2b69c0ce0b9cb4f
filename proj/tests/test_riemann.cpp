#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qlag/riemann.hpp"

using namespace qlag;
using std::numbers::pi;

namespace {

Vec sphere_point(CounterRng& rng) { return Eigen::Vector2d(rng.uniform(0.5, pi - 0.5), rng.uniform(-3, 3)); }

}  // namespace

TEST(RiemannExp, EuclideanAndUnit) {
  const RiemannianChart c = euclidean_chart(3);
  const Vec x = Eigen::Vector3d(1, 2, 3), v = Eigen::Vector3d(-0.5, 0.25, 4);
  const PairElement g = riemann_exp(c, x, v);
  EXPECT_LT((g.y - (x + v)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(g.x, x);
  EXPECT_EQ(riemann_exp(c, x, Vec::Zero(3)).y, x);
}

TEST(RiemannExp, SphereDistanceAlongGreatCircle) {
  CounterRng rng(301);
  const RiemannianChart c = sphere_chart();
  for (int i = 0; i < 10; ++i) {
    const Vec x = sphere_point(rng);
    const Vec v = Eigen::Vector2d(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    const PairElement g = riemann_exp(c, x, v);
    const double speed = std::sqrt(v.dot(c.metric(x) * v));
    EXPECT_NEAR(oracle::sphere_distance(x[0], x[1], g.y[0], g.y[1]), speed, 1e-6);
  }
}

TEST(RiemannExp, SameCodePathAsAlgebroidExp) {
  const RiemannianChart c = hyperbolic_chart();
  const Vec x = Eigen::Vector2d(0.3, 1.5), v = Eigen::Vector2d(0.7, -0.4);
  const AlgebroidState e = exp_map(levi_civita_connection(build_tangent_algebroid(c)), x, v);
  EXPECT_EQ(riemann_exp(c, x, v).y, e.x);
}

TEST(RiemannLog, EuclideanIsDifference) {
  CounterRng rng(303);
  const RiemannianChart c = euclidean_chart(2);
  for (int i = 0; i < 10; ++i) {
    const Vec x = rng.uniform_vec(2, -3, 3), y = rng.uniform_vec(2, -3, 3);
    EXPECT_LT((riemann_log(c, y, x) - (y - x)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(q_lagrangian(c, y, x), 0.5 * (y - x).squaredNorm(), 1e-12);
  }
  const Vec x = Eigen::Vector2d(0.4, 0.1);
  EXPECT_EQ(q_lagrangian(c, x, x), 0.0);
}

TEST(RiemannLog, RoundTripsOnSphereAndHyperbolic) {
  CounterRng rng(307);
  for (const auto& c : {sphere_chart(), hyperbolic_chart()}) {
    for (int i = 0; i < 20; ++i) {
      const Vec x = c.name == "sphere" ? sphere_point(rng)
                                       : Vec(Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(0.5, 2)));
      const Vec v = Eigen::Vector2d(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)) *
                    (c.name == "sphere" ? 1.0 : x[1]);
      const Vec y = riemann_exp(c, x, v).y;
      EXPECT_LT((riemann_log(c, y, x) - v).cwiseAbs().maxCoeff(), 1e-8) << c.name;
      const Vec back = riemann_exp(c, x, riemann_log(c, y, x)).y;
      EXPECT_LT((back - y).cwiseAbs().maxCoeff(), 1e-8) << c.name;
    }
  }
}

TEST(RiemannLog, AntipodalPointIsOutsideSolvableNeighborhood) {
  const RiemannianChart c = sphere_chart();
  const Vec x = Eigen::Vector2d(1.0, 0.3);
  const Vec y = Eigen::Vector2d(pi - 1.0, 0.3 + pi);
  try {
    riemann_log(c, y, x);
    FAIL() << "expected LogNotConverged";
  } catch (const LogNotConverged& e) {
    EXPECT_NE(std::string(e.what()).find("outside solvable neighborhood"), std::string::npos);
  }
}

TEST(QLagrangian, ClosedFormDistances) {
  CounterRng rng(311);
  const RiemannianChart s = sphere_chart(), h = hyperbolic_chart();
  for (int i = 0; i < 10; ++i) {
    const Vec x = sphere_point(rng);
    const Vec y = x + Vec(Eigen::Vector2d(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)));
    const double d = oracle::sphere_distance(x[0], x[1], y[0], y[1]);
    EXPECT_NEAR(q_lagrangian(s, y, x), 0.5 * d * d, 1e-6);

    const Vec p = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(0.5, 2));
    const Vec q = p + Vec(Eigen::Vector2d(rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3)));
    const double dh = oracle::hyperbolic_distance(p[0], p[1], q[0], q[1]);
    EXPECT_NEAR(q_lagrangian(h, q, p), 0.5 * dh * dh, 1e-6);
  }
}

TEST(QLagrangian, TauInvariance) {
  CounterRng rng(313);
  const RiemannianChart c = sphere_chart();
  for (int i = 0; i < 100; ++i) {
    const Vec x = sphere_point(rng);
    const Vec y = x + Vec(Eigen::Vector2d(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)));
    EXPECT_NEAR(q_lagrangian(c, y, x), q_lagrangian(c, x, y), 1e-9);
  }
}

TEST(CLagrangian, EuclideanAndUnit) {
  CounterRng rng(317);
  const auto tpl = TwoPointLagrangian::canonical(euclidean_chart(2), 2.5, 3.0);
  for (int i = 0; i < 5; ++i) {
    const Vec x = rng.uniform_vec(2, -2, 2), v = rng.uniform_vec(2, -4, 4);
    EXPECT_NEAR(c_lagrangian(tpl, x, v), 0.5 * 2.5 * v.squaredNorm(), 1e-10);
  }
  EXPECT_EQ(c_lagrangian(tpl, Vec::Zero(2), Vec::Zero(2)), 0.0);
  EXPECT_THROW(TwoPointLagrangian::canonical(euclidean_chart(2), 0.0, 1.0), InvalidArgument);
}

TEST(CLagrangian, SphereSmallRadiusIsQuadratic) {
  const RiemannianChart c = sphere_chart();
  const double m = 1.5, ck = 2.0;
  const auto tpl = TwoPointLagrangian::canonical(c, m, ck);
  const Vec x = Eigen::Vector2d(1.0, 0.3);
  const Vec v = Eigen::Vector2d(0.6, 0.8) * (0.1 * ck);
  const double q = 0.5 * m * v.dot(c.metric(x) * v);
  EXPECT_LT(std::abs(c_lagrangian(tpl, x, v) - q), 1e-3 * q);
}

TEST(Expansion, EuclideanRecovery) {
  const double m = 1.7;
  const auto tpl = TwoPointLagrangian::canonical(euclidean_chart(2), m, 1.0);
  const ExpansionData e = quadratic_expansion(tpl, Eigen::Vector2d(0.5, -1.5));
  EXPECT_LT((e.eta - m * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(e.linear.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(std::abs(e.potential), 1e-10);
  EXPECT_TRUE(e.regular);
  EXPECT_DOUBLE_EQ(e.hessian_step, 1e-3);
  EXPECT_DOUBLE_EQ(e.gradient_step, 1e-5);
}

TEST(Expansion, SphereEquatorIsRound) {
  const auto tpl = TwoPointLagrangian::canonical(sphere_chart(), 2.0, 1.0);
  const ExpansionData e = quadratic_expansion(tpl, Eigen::Vector2d(pi / 2, 0.0));
  EXPECT_LT((e.eta - 2.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 2.0 * 1e-4);
}

TEST(Expansion, CurvedChartsMatchMetric) {
  for (const auto& c : {sphere_chart(), hyperbolic_chart()}) {
    const Vec x = c.name == "sphere" ? Vec(Eigen::Vector2d(0.8, 1.0)) : Vec(Eigen::Vector2d(0.2, 0.7));
    const double m = 0.9;
    const ExpansionData e = quadratic_expansion(TwoPointLagrangian::canonical(c, m, 1.0), x);
    const Mat ref = m * c.metric(x);
    EXPECT_LT((e.eta - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff(), 1e-4) << c.name;
  }
}

TEST(Expansion, ShiftedTwoPointFunction) {
  // l'(y, x) = l(y, x) + h(x) + h(y) with h(x) = x_1 is tau-invariant; by hand
  // V = -2 m c^2 x_1, A_a = m c delta_a1, eta = m delta_ab in R^2.
  const double m = 1.3, ck = 2.0;
  TwoPointLagrangian tpl = TwoPointLagrangian::canonical(euclidean_chart(2), m, ck);
  const TwoPointFunction base = tpl.ell;
  tpl.ell = [base](const Vec& y, const Vec& x) { return base(y, x) + x[0] + y[0]; };
  const Vec x = Eigen::Vector2d(0.4, -0.8);
  EXPECT_NEAR(tpl.ell(x, Eigen::Vector2d(1, 2)), tpl.ell(Eigen::Vector2d(1, 2), x), 1e-12);
  const ExpansionData e = quadratic_expansion(tpl, x);
  EXPECT_NEAR(e.potential, -2.0 * m * ck * ck * x[0], 1e-10);
  EXPECT_NEAR(e.linear[0], m * ck, 1e-6);
  EXPECT_NEAR(e.linear[1], 0.0, 1e-6);
  EXPECT_LT((e.eta - m * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(Expansion, RichardsonOnNonQuadraticFunction) {
  // l'(y, x) = l(y, x) + cos(x_1) + cos(y_1): a quartic term makes the plain
  // central Hessian O(h^2) off, Richardson removes that term.
  TwoPointLagrangian tpl = TwoPointLagrangian::canonical(euclidean_chart(1), 1.0, 1.0);
  const TwoPointFunction base = tpl.ell;
  tpl.ell = [base](const Vec& y, const Vec& x) { return base(y, x) + std::cos(x[0]) + std::cos(y[0]); };
  const Vec x = Vec::Constant(1, 0.3);
  const double exact = 1.0 - std::cos(0.3);  // second derivative of 1/2 v^2 + cos(x + v)
  ExpansionOptions coarse;
  coarse.hessian_step = 1e-2;
  const double plain = quadratic_expansion(tpl, x, coarse).eta(0, 0);
  coarse.richardson = true;
  const double rich = quadratic_expansion(tpl, x, coarse).eta(0, 0);
  EXPECT_LT(std::abs(rich - exact), 0.1 * std::abs(plain - exact));
}

TEST(Remainder, SlopeOfSyntheticPowerLaw) {
  std::vector<RemainderSample> samples;
  for (double r : log_spaced(1e-3, 1e-1, 9)) samples.push_back({r, 0.0, 0.0, 5.0 * r * r * r});
  EXPECT_NEAR(loglog_slope(samples), 3.0, 1e-12);
  EXPECT_TRUE(std::isnan(loglog_slope({samples[0]})));
  const auto radii = log_spaced(1e-3, 1e-1, 5);
  EXPECT_NEAR(radii.front(), 1e-3, 1e-18);
  EXPECT_NEAR(radii.back(), 1e-1, 1e-15);
  EXPECT_NEAR(radii[2], 1e-2, 1e-16);
}

TEST(Remainder, NonlinearShiftHasCubicRemainder) {
  // With h(x) = sin(x_1) the c-Lagrangian keeps the cubic term of sin(y_1),
  // so the sweep must see slope 3.
  TwoPointLagrangian tpl = TwoPointLagrangian::canonical(euclidean_chart(2), 1.0, 1.0);
  const TwoPointFunction base = tpl.ell;
  tpl.ell = [base](const Vec& y, const Vec& x) { return base(y, x) + std::sin(x[0]) + std::sin(y[0]); };
  const Vec x = Eigen::Vector2d(0.3, 0.0);
  const ExpansionData e = quadratic_expansion(tpl, x, {1e-5, 1e-3, true});
  const auto sweep = remainder_sweep(tpl, x, Eigen::Vector2d(1.0, 0.0),
                                     [&](const Vec& v) { return e.evaluate(v); },
                                     log_spaced(1e-2, 1e-1, 7));
  EXPECT_NEAR(loglog_slope(sweep), 3.0, 0.1);
}
