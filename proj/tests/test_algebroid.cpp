#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "support.hpp"
#include "qlag/algebroid.hpp"

using namespace qlag;
using std::numbers::pi;

using namespace support;


TEST(TangentAlgebroid, EuclideanAndSphereData) {
  const AlgebroidModel e = build_tangent_algebroid(euclidean_chart(2));
  const Vec x = Eigen::Vector2d(0.3, -1.2);
  EXPECT_EQ(max_abs(e.structure(x)), 0.0);
  EXPECT_EQ(e.anchor(x), Mat(Mat::Identity(2, 2)));
  EXPECT_EQ((*e.metric)(x), Mat(Mat::Identity(2, 2)));
  const AlgebroidModel s = build_tangent_algebroid(sphere_chart());
  const Vec p = Eigen::Vector2d(0.7, 2.0);
  const Mat expect = Eigen::Vector2d(1.0, std::sin(0.7) * std::sin(0.7)).asDiagonal();
  EXPECT_LT(((*s.metric)(p) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Compatibility, ShippedModelsHaveZeroResidual) {
  CounterRng rng(201);
  for (const auto& chart : charts()) {
    std::vector<Vec> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(random_point(chart, rng));
    const CompatibilityReport rep = verify_compatibility(build_tangent_algebroid(chart), pts);
    EXPECT_LT(rep.structure_residual, 1e-6) << chart.name;
    EXPECT_LT(rep.anchor_residual, 1e-6) << chart.name;
  }
  const CompatibilityReport so3 = verify_compatibility(build_lie_algebra_algebroid(so3_structure_constants()), {});
  EXPECT_EQ(so3.structure_residual, 0.0);
  EXPECT_EQ(so3.anchor_residual, 0.0);
}

TEST(Compatibility, PerturbedConstantsDetected) {
  Tensor3 c = so3_structure_constants();
  c[0](1, 2) *= 1.1;
  const double expect = jacobi_oracle(c);
  const CompatibilityReport rep = verify_compatibility(raw_lie_algebra(c), {});
  EXPECT_GT(rep.structure_residual, 1e-2);
  EXPECT_NEAR(rep.structure_residual, expect, 1e-14);
}

TEST(Compatibility, SamplesOutsideDomainRejected) {
  const AlgebroidModel s = build_tangent_algebroid(sphere_chart());
  EXPECT_THROW(verify_compatibility(s, {Eigen::Vector2d(0.0, 0.0)}), InvalidArgument);
}

TEST(LieAlgebra, AcceptsSo3AndAbelian) {
  EXPECT_NO_THROW(build_lie_algebra_algebroid(so3_structure_constants()));
  EXPECT_NO_THROW(build_lie_algebra_algebroid(zero_tensor(2, 2, 2)));
  const Tensor3 c = so3_structure_constants();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int e = 0; e < 3; ++e) EXPECT_EQ(c[e](a, b), oracle::epsilon(a, b, e));
}

TEST(LieAlgebra, LoneEntryRejected) {
  Tensor3 c = zero_tensor(2, 2, 2);
  c[1](0, 1) = 1.0;
  const StructureConstantsCheck chk = check_structure_constants(c);
  EXPECT_NEAR(chk.jacobi_defect, jacobi_oracle(c), 1e-15);
  EXPECT_NEAR(chk.jacobi_defect, 1.0, 1e-15);
  EXPECT_THROW(build_lie_algebra_algebroid(c), InvalidArgument);
  // With its antisymmetric partner the same bracket is the 2-d non-abelian algebra.
  c[1](1, 0) = -1.0;
  EXPECT_NO_THROW(build_lie_algebra_algebroid(c));
}

TEST(LieAlgebra, JacobiViolationRejected) {
  // Antisymmetric but not Lie: [s0, s1] = s2, [s1, s2] = s2, [s2, s0] = s0.
  Tensor3 c = zero_tensor(3, 3, 3);
  auto set = [&](int e, int a, int b, double v) {
    c[e](a, b) = v;
    c[e](b, a) = -v;
  };
  set(2, 0, 1, 1.0);
  set(2, 1, 2, 1.0);
  set(0, 2, 0, 1.0);
  ASSERT_GT(jacobi_oracle(c), 0.5);
  EXPECT_EQ(check_structure_constants(c).antisymmetry_defect, 0.0);
  EXPECT_THROW(build_lie_algebra_algebroid(c), InvalidArgument);
}

TEST(LeviCivita, EuclideanVanishes) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(euclidean_chart(3)));
  EXPECT_EQ(max_abs(conn.coefficients(Vec::Constant(3, 0.4))), 0.0);
  const AlgebroidModel m = build_tangent_algebroid(euclidean_chart(3));
  EXPECT_EQ(max_abs(koszul_at(m, Vec::Constant(3, 0.4))), 0.0);
}

TEST(LeviCivita, KoszulMatchesClassicalChristoffel) {
  CounterRng rng(211);
  for (const auto& chart : charts()) {
    const AlgebroidModel m = build_tangent_algebroid(chart);
    const AConnection conn = levi_civita_connection(m);
    for (int i = 0; i < 20; ++i) {
      const Vec x = random_point(chart, rng);
      const Tensor3 classical = fd_christoffel(chart, x);
      EXPECT_LT(max_abs(diff(koszul_at(m, x), classical)), 1e-6) << chart.name;
      EXPECT_LT(max_abs(diff(conn.coefficients(x), classical)), 1e-6) << chart.name;
    }
  }
}

TEST(LeviCivita, AnalyticChristoffelAgreesWithFiniteDifferences) {
  CounterRng rng(213);
  for (const auto& chart : charts()) {
    std::vector<Vec> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(random_point(chart, rng));
    EXPECT_LT(christoffel_defect(chart, pts), 1e-6) << chart.name;
  }
}

TEST(LeviCivita, So3BiInvariantIsHalfEpsilon) {
  const AlgebroidModel m = build_lie_algebra_algebroid(so3_structure_constants(), Mat::Identity(3, 3));
  const Tensor3 g = levi_civita_connection(m).coefficients(Vec(0));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(g[c](a, b), 0.5 * oracle::epsilon(a, b, c), 1e-15);
  const IdentityDefects d = identities(m, g, Vec(0));
  EXPECT_LT(d.torsion, 1e-15);
  EXPECT_LT(d.metricity, 1e-15);
}

TEST(LeviCivita, TorsionAndMetricityIdentities) {
  CounterRng rng(217);
  for (const auto& chart : charts()) {
    const AlgebroidModel m = build_tangent_algebroid(chart);
    const AConnection conn = levi_civita_connection(m);
    for (int i = 0; i < 100; ++i) {
      const Vec x = random_point(chart, rng);
      for (const Tensor3& g : {koszul_at(m, x), conn.coefficients(x)}) {
        const IdentityDefects d = identities(m, g, x);
        EXPECT_LT(d.torsion, 1e-9) << chart.name;
        EXPECT_LT(d.metricity, 1e-6) << chart.name;
      }
    }
  }
  const Mat eta = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const AlgebroidModel so3 = build_lie_algebra_algebroid(so3_structure_constants(), eta);
  const IdentityDefects d = identities(so3, levi_civita_connection(so3).coefficients(Vec(0)), Vec(0));
  EXPECT_LT(d.torsion, 1e-12);
  EXPECT_LT(d.metricity, 1e-12);
}

TEST(LeviCivita, DegenerateMetricRejected) {
  const AlgebroidModel m = build_lie_algebra_algebroid(so3_structure_constants(), Mat::Zero(3, 3));
  EXPECT_THROW(levi_civita_connection(m).coefficients(Vec(0)), InvalidArgument);
}

TEST(Geodesic, EuclideanIsStraight) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(euclidean_chart(2)));
  const Vec x0 = Eigen::Vector2d(1.0, -2.0), v = Eigen::Vector2d(0.3, 0.7);
  const AlgebroidPath p = geodesic_flow(conn, {x0, v}, 1.0);
  EXPECT_EQ(p.status, FlowStatus::kCompleted);
  for (const auto& s : p.samples) EXPECT_LT((s.x - (x0 + s.s * v)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geodesic, So3BiInvariantKeepsXi) {
  const AConnection conn =
      levi_civita_connection(build_lie_algebra_algebroid(so3_structure_constants(), Mat::Identity(3, 3)));
  const Vec xi = Eigen::Vector3d(0.3, -1.0, 2.0);
  const AlgebroidPath p = geodesic_flow(conn, {Vec(0), xi}, 2.0);
  EXPECT_LT((p.back().xi - xi).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Geodesic, SphereGreatCircles) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(sphere_chart()));
  CounterRng rng(223);
  // Equator along phi, then random starts.
  std::vector<AlgebroidState> inits{{Eigen::Vector2d(pi / 2, 0.0), Eigen::Vector2d(0.0, 1.0)}};
  for (int i = 0; i < 10; ++i)
    inits.push_back({Eigen::Vector2d(rng.uniform(1.0, 2.1), rng.uniform(-1, 1)),
                     Eigen::Vector2d(rng.uniform(-0.5, 0.5), rng.uniform(-0.8, 0.8))});
  for (const auto& init : inits) {
    const AlgebroidPath p = geodesic_flow(conn, init, 1.0, 1e-3);
    ASSERT_EQ(p.status, FlowStatus::kCompleted);
    const Eigen::Vector3d q = oracle::embed(init.x[0], init.x[1]);
    const Eigen::Vector3d w = oracle::embed_velocity(init.x[0], init.x[1], init.xi[0], init.xi[1]);
    double err = 0.0, norm_drift = 0.0;
    const double n0 = std::sqrt(init.xi.dot(sphere_chart().metric(init.x) * init.xi));
    for (const auto& s : p.samples) {
      err = std::max(err, (oracle::embed(s.x[0], s.x[1]) - oracle::great_circle(q, w, s.s)).norm());
      const double ns = std::sqrt(s.xi.dot(sphere_chart().metric(s.x) * s.xi));
      norm_drift = std::max(norm_drift, std::abs(ns - n0));
    }
    EXPECT_LT(err, 1e-6);
    EXPECT_LT(norm_drift, 1e-7);
  }
}

TEST(Geodesic, Rk4OrderUnderHalving) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(sphere_chart()));
  const Vec x0 = Eigen::Vector2d(1.1, 0.2), v = Eigen::Vector2d(0.9, 1.2);
  const Eigen::Vector3d q = oracle::embed(x0[0], x0[1]);
  const Eigen::Vector3d w = oracle::embed_velocity(x0[0], x0[1], v[0], v[1]);
  auto terminal_error = [&](double h) {
    const AlgebroidPath p = geodesic_flow(conn, {x0, v}, 1.0, h);
    return (oracle::embed(p.back().x[0], p.back().x[1]) - oracle::great_circle(q, w, 1.0)).norm();
  };
  const double ratio = terminal_error(0.1) / terminal_error(0.05);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Geodesic, LeavingChartStopsEarly) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(sphere_chart()));
  const AlgebroidPath p = geodesic_flow(conn, {Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(-1.0, 0.0)}, 1.0);
  EXPECT_EQ(p.status, FlowStatus::kChartExit);
  EXPECT_LT(p.back().s, 0.5);
}

TEST(ExpMap, UnitAndEuclidean) {
  const AConnection e = levi_civita_connection(build_tangent_algebroid(euclidean_chart(2)));
  const Vec x = Eigen::Vector2d(0.1, 0.2);
  const AlgebroidState u = exp_map(e, x, Vec::Zero(2));
  EXPECT_EQ(u.x, x);
  EXPECT_EQ(u.xi, Vec(Vec::Zero(2)));
  const Vec v = Eigen::Vector2d(-3.0, 4.0);
  EXPECT_LT((exp_map(e, x, v).x - (x + v)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ExpMap, HomogeneityAgainstFlowSample) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(sphere_chart()));
  const Vec x = Eigen::Vector2d(1.2, 0.4), xi = Eigen::Vector2d(0.6, -0.9);
  const AlgebroidPath p = geodesic_flow(conn, {x, xi}, 1.0, 1e-3);
  const PathSample& half = p.samples[500];
  ASSERT_NEAR(half.s, 0.5, 1e-12);
  const AlgebroidState e = exp_map(conn, x, 0.5 * xi, 1e-3);
  EXPECT_LT((e.x - half.x).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ExpMap, UndefinedBeyondChart) {
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(sphere_chart()));
  try {
    exp_map(conn, Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(-1.0, 0.0));
    FAIL() << "expected ExpUndefined";
  } catch (const ExpUndefined& e) {
    EXPECT_NE(std::string(e.what()).find("exponential undefined at this radius"), std::string::npos);
  }
}

TEST(ElFlow, RigidBodyMatchesEulerEquations) {
  const Eigen::Vector3d inertia(1, 2, 3);
  const Mat eta = inertia.asDiagonal();
  const AlgebroidModel m = build_lie_algebra_algebroid(so3_structure_constants(), eta);
  const QuadraticLagrangian l = free_lagrangian(eta);
  const Eigen::Vector3d w0(1.0, 0.1, 0.5);
  const AlgebroidPath p = el_flow(l, m, {Vec(0), Vec(w0)}, 10.0, 1e-3);
  ASSERT_EQ(p.status, FlowStatus::kCompleted);
  const auto ref = oracle::rigid_body(inertia, w0, 10.0, 1e-3);
  ASSERT_EQ(ref.size(), p.samples.size());
  double err = 0.0, scale = 0.0, e_drift = 0.0, c_drift = 0.0;
  const double e0 = legendre_energy(l, {Vec(0), Vec(w0)});
  const double c0 = momentum(l, {Vec(0), Vec(w0)}).squaredNorm();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    err = std::max(err, (p.samples[i].xi - ref[i]).norm());
    scale = std::max(scale, ref[i].norm());
    const AlgebroidState st{Vec(0), p.samples[i].xi};
    e_drift = std::max(e_drift, std::abs(legendre_energy(l, st) - e0));
    c_drift = std::max(c_drift, std::abs(momentum(l, st).squaredNorm() - c0));
  }
  EXPECT_LT(err / scale, 1e-5);
  EXPECT_LT(e_drift, 1e-6);
  EXPECT_LT(c_drift, 1e-6);
  EXPECT_NEAR(e0, 0.5 * (1.0 + 2.0 * 0.01 + 3.0 * 0.25), 1e-15);
}

TEST(ElFlow, HarmonicOscillator) {
  const AlgebroidModel m = build_tangent_algebroid(euclidean_chart(2));
  QuadraticLagrangian l = free_lagrangian(Mat::Identity(2, 2));
  l.potential = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  const Vec x0 = Eigen::Vector2d(1.0, -0.5), v0 = Eigen::Vector2d(0.2, 0.8);
  const AlgebroidPath p = el_flow(l, m, {x0, v0}, 2 * pi, 1e-3);
  ASSERT_EQ(p.status, FlowStatus::kCompleted);
  double err = 0.0, drift = 0.0;
  const double e0 = 0.5 * v0.squaredNorm() + 0.5 * x0.squaredNorm();
  EXPECT_NEAR(legendre_energy(l, {x0, v0}), e0, 1e-15);
  for (const auto& s : p.samples) {
    err = std::max(err, (s.x - (x0 * std::cos(s.s) + v0 * std::sin(s.s))).cwiseAbs().maxCoeff());
    drift = std::max(drift, std::abs(legendre_energy(l, {s.x, s.xi}) - e0));
  }
  EXPECT_LT(err, 1e-8);
  EXPECT_LT(drift, 1e-8);
}

TEST(ElFlow, FreeConstantMetricIsStraight) {
  const AlgebroidModel m = build_tangent_algebroid(euclidean_chart(3));
  const Mat eta = Eigen::Vector3d(1, 4, 2).asDiagonal();
  const Vec x0 = Vec::Constant(3, 0.5), v0 = Eigen::Vector3d(1, -1, 0.25);
  const AlgebroidPath p = el_flow(free_lagrangian(eta), m, {x0, v0}, 3.0, 1e-2);
  for (const auto& s : p.samples) EXPECT_LT((s.x - (x0 + s.s * v0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ElFlow, SingularLagrangianRejected) {
  const AlgebroidModel m = build_tangent_algebroid(euclidean_chart(2));
  const QuadraticLagrangian l = free_lagrangian(Mat::Zero(2, 2));
  EXPECT_THROW(el_flow(l, m, {Vec::Zero(2), Vec::Ones(2)}, 1.0), InvalidArgument);
}

TEST(ElFlow, SingularMetricAlongPathFlagged) {
  // eta = diag(1, 1 - x1) degenerates at x1 = 1, reached by straight motion.
  const AlgebroidModel m = build_tangent_algebroid(euclidean_chart(2));
  QuadraticLagrangian l = free_lagrangian(Mat::Identity(2, 2));
  l.eta = [](const Vec& x) -> Mat { return Eigen::Vector2d(1.0, 1.0 - x[0]).asDiagonal(); };
  const AlgebroidPath p = el_flow(l, m, {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)}, 2.0, 1e-2);
  EXPECT_EQ(p.status, FlowStatus::kSingularMetric);
}

TEST(Legendre, ZeroVelocityGivesPotential) {
  QuadraticLagrangian l = free_lagrangian(Mat::Identity(2, 2));
  l.potential = [](const Vec& x) { return 3.0 + x[0]; };
  EXPECT_DOUBLE_EQ(legendre_energy(l, {Eigen::Vector2d(2.0, 0.0), Vec::Zero(2)}), 5.0);
}
