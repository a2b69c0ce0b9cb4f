#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlag/chart.hpp"

namespace qlag {

/// Lie algebroid in a coordinate chart and a local frame sigma_a.
///
///   [sigma_a, sigma_b] = C^c_ab sigma_c,   mu(sigma_a) = mu^k_a d/dx^k.
///
/// A Lie algebra is the case base_dim == 0: the chart is a single point and
/// every anchor term vanishes.
struct AlgebroidModel {
  std::string name;
  int base_dim = 0;
  int rank = 0;
  TensorField structure;  // structure(x)[c](a, b) = C^c_ab
  MatField anchor;        // anchor(x)(k, a) = mu^k_a, base_dim x rank
  std::optional<MatField> metric;             // fiber metric eta_ab
  std::optional<TensorField> metric_derivative;  // [k](a, b) = d eta_ab / dx^k
  // Analytic Levi-Civita coefficients [c](a, b); replaces the Koszul solve.
  std::optional<TensorField> levi_civita;
  Box domain;
};

// Connection coefficients Gamma^c_ab, nabla_{sigma_a} sigma_b = Gamma^c_ab sigma_c.
struct AConnection {
  TensorField coefficients;
  AlgebroidModel model;
};

struct AlgebroidState {
  Vec x;
  Vec xi;
};

struct PathSample {
  double s = 0.0;
  Vec x;
  Vec xi;
};

enum class FlowStatus { kCompleted, kChartExit, kBlowup, kSingularMetric };

const char* to_string(FlowStatus status);

struct AlgebroidPath {
  std::vector<PathSample> samples;
  double step = 0.0;
  FlowStatus status = FlowStatus::kCompleted;

  const PathSample& back() const { return samples.back(); }
};

/// L = 1/2 eta_ab xi^a xi^b + A_a xi^a - V.
struct QuadraticLagrangian {
  MatField eta;
  VecField linear;     // A_a
  ScalarField potential;  // V
  // Analytic base derivatives; central differences otherwise.
  std::optional<TensorField> eta_derivative;  // [k](a, b)
  std::optional<MatField> linear_derivative;  // (k, b) = d A_b / dx^k
  std::optional<VecField> potential_gradient;
  double mass = 1.0;
  double c_k = 1.0;
};

// Tangent bundle of a chart: rank n, C = 0, anchor = identity, eta = metric.
AlgebroidModel build_tangent_algebroid(const RiemannianChart& chart);

struct StructureConstantsCheck {
  double antisymmetry_defect = 0.0;
  double jacobi_defect = 0.0;
};

// Raw Jacobi sum  sum_cyclic(a,b,c) C^e_ad C^d_bc, maximized over a, b, c, e.
StructureConstantsCheck check_structure_constants(const Tensor3& c);

// Rejects constants that are not antisymmetric or fail Jacobi (tolerance tol).
AlgebroidModel build_lie_algebra_algebroid(const Tensor3& constants,
                                           std::optional<Mat> metric = std::nullopt,
                                           double tol = 1e-12);

// so(3) constants C^c_ab = epsilon_abc.
Tensor3 so3_structure_constants();

struct CompatibilityReport {
  double structure_residual = 0.0;  // cyclic identity on C and d C
  double anchor_residual = 0.0;     // mu is a bracket homomorphism
};

CompatibilityReport verify_compatibility(const AlgebroidModel& model,
                                         const std::vector<Vec>& samples, double fd_step = 1e-5);

// d eta / dx^k of the model's fiber metric, analytic when available.
Tensor3 fiber_metric_derivative(const AlgebroidModel& model, const Vec& x);

/// Torsion-free, metric A-connection of the fiber metric (Koszul formula).
AConnection levi_civita_connection(const AlgebroidModel& model);

// Levi-Civita coefficients at one point; levi_civita_connection evaluates this.
Tensor3 koszul_coefficients(const Mat& eta, const Tensor3& d_eta, const Mat& anchor,
                            const Tensor3& structure);

/// Fixed-step RK4 for  d xi^a/ds = -Gamma^a_bc xi^b xi^c,  dx^k/ds = mu^k_a xi^a.
/// Stops early (status set) when x leaves the chart or the state blows up.
AlgebroidPath geodesic_flow(const AConnection& conn, const AlgebroidState& init, double s_max,
                            double step = 1e-3);

/// Endpoint of the unit-parameter geodesic with initial fiber vector xi.
/// Throws ExpUndefined when the geodesic does not reach s = 1.
AlgebroidState exp_map(const AConnection& conn, const Vec& x, const Vec& xi, double step = 1e-3);

/// Euler-Lagrange flow of a quadratic Lagrangian, integrated in momentum form
/// p_a = eta_ab xi^b + A_a.
AlgebroidPath el_flow(const QuadraticLagrangian& lagrangian, const AlgebroidModel& model,
                      const AlgebroidState& init, double t_max, double step = 1e-3);

double legendre_energy(const QuadraticLagrangian& lagrangian, const AlgebroidState& state);

Vec momentum(const QuadraticLagrangian& lagrangian, const AlgebroidState& state);

}  // namespace qlag
