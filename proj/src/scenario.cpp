#include "qlag/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qlag/action.hpp"
#include "qlag/groupoid_io.hpp"
#include "qlag/riemann.hpp"
#include "qlag/rk4.hpp"
#include "qlag/svg.hpp"

namespace qlag {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_escape(fields[i]);
  out_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(format_double(v));
  row(f);
}

std::string format_vector(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------
// Config schema

namespace {

const std::set<std::string> kScenarios = {"euclidean", "sphere", "hyperbolic",
                                          "so3", "pair-groupoid-state", "custom"};

template <typename T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("config key '") + key + "' has the wrong type");
  }
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw SchemaError(std::string("config key '") + key + "' must be positive");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& doc) {
  static const std::set<std::string> known = {
      "scenario", "n",       "m",          "c_K",        "hbar",
      "step",     "t_max",   "seed",       "samples",    "output_dir",
      "inertia",  "initial_xi", "structure_constants", "eta", "tolerances"};
  if (!doc.is_object()) throw SchemaError("config must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw SchemaError("unknown config key '" + key + "'");
  if (!doc.contains("scenario")) throw SchemaError("config key 'scenario' is required");

  ScenarioConfig c;
  c.scenario = get_as<std::string>(doc, "scenario");
  if (!kScenarios.count(c.scenario)) throw SchemaError("unknown scenario '" + c.scenario + "'");
  if (doc.contains("n")) c.n = get_as<int>(doc, "n");
  if (doc.contains("m")) c.m = get_as<double>(doc, "m");
  if (doc.contains("c_K")) c.c_K = get_as<double>(doc, "c_K");
  if (doc.contains("hbar")) c.hbar = get_as<double>(doc, "hbar");
  if (doc.contains("step")) c.step = get_as<double>(doc, "step");
  if (doc.contains("t_max")) c.t_max = get_as<double>(doc, "t_max");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed");
  if (doc.contains("samples")) c.samples = get_as<int>(doc, "samples");
  if (doc.contains("output_dir")) c.output_dir = get_as<std::string>(doc, "output_dir");
  if (doc.contains("inertia")) c.inertia = get_as<std::vector<double>>(doc, "inertia");
  if (doc.contains("initial_xi")) c.initial_xi = get_as<std::vector<double>>(doc, "initial_xi");
  if (doc.contains("structure_constants"))
    c.structure_constants =
        get_as<std::vector<std::vector<std::vector<double>>>>(doc, "structure_constants");
  if (doc.contains("eta")) c.eta = get_as<std::vector<std::vector<double>>>(doc, "eta");
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) throw SchemaError("config key 'tolerances' must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number()) throw SchemaError("tolerance '" + key + "' must be a number");
      const double v = value.get<double>();
      if (!(v > 0.0)) throw SchemaError("tolerance '" + key + "' must be positive");
      c.tolerances[key] = v;
    }
  }
  if (c.n < 1) throw SchemaError("config key 'n' must be at least 1");
  if (c.samples < 0) throw SchemaError("config key 'samples' must be nonnegative");
  require_positive(c.m, "m");
  require_positive(c.c_K, "c_K");
  require_positive(c.hbar, "hbar");
  require_positive(c.step, "step");
  require_positive(c.t_max, "t_max");
  for (double v : c.inertia) require_positive(v, "inertia");
  return c;
}

double ScenarioConfig::tolerance(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

class Run {
 public:
  explicit Run(const ScenarioConfig& cfg) : cfg_(cfg), dir_(cfg.output_dir) {
    std::filesystem::create_directories(dir_);
    result_.report["scenario"] = cfg.scenario;
    result_.report["seed"] = cfg.seed;
    result_.report["metrics"] = json::object();
    result_.report["assertions"] = json::array();
  }

  void metric(const std::string& name, double value) { result_.report["metrics"][name] = value; }

  void metric(const std::string& name, const json& value) {
    result_.report["metrics"][name] = value;
  }

  // value < threshold (or >= for kAtLeast)
  enum class Cmp { kBelow, kAtLeast };
  void check(const std::string& name, double value, double threshold, Cmp cmp = Cmp::kBelow) {
    const bool pass = cmp == Cmp::kBelow ? value < threshold : value >= threshold;
    metric(name, value);
    result_.report["assertions"].push_back({{"metric", name},
                                            {"value", value},
                                            {"threshold", threshold},
                                            {"comparison", cmp == Cmp::kBelow ? "<" : ">="},
                                            {"pass", pass}});
    if (!pass) failed_.push_back(name);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    result_.files.push_back(name);
  }

  RunResult finish(std::string error = {}) {
    result_.report["failed"] = failed_;
    if (!error.empty()) result_.report["error"] = error;
    const bool ok = failed_.empty() && error.empty();
    result_.report["status"] = ok ? "pass" : "fail";
    result_.exit_code = ok ? 0 : 1;
    result_.files.push_back("report.json");
    result_.report["files"] = result_.files;
    std::ofstream out(dir_ / "report.json", std::ios::binary);
    out << result_.report.dump(2) << "\n";
    return result_;
  }

  const ScenarioConfig& cfg() const { return cfg_; }

 private:
  const ScenarioConfig& cfg_;
  std::filesystem::path dir_;
  RunResult result_;
  std::vector<std::string> failed_;
};

std::string plot(const PlotSpec& spec) { return emit_svg(spec); }

void remainder_artifacts(Run& run, const TwoPointLagrangian& tpl, const Vec& x,
                         const Vec& direction, const std::function<double(const Vec&)>& quad) {
  const auto radii = log_spaced(1e-3, 1e-1, 9);
  const auto sweep = remainder_sweep(tpl, x, direction, quad, radii);
  std::ostringstream csv;
  CsvWriter w(csv);
  w.row(std::vector<std::string>{"x", "v", "L_exact", "L_quadratic", "remainder"});
  Series exact{"L_exact", {}, {}}, rem{"remainder", {}, {}};
  double worst_rel = 0.0;
  for (const auto& s : sweep) {
    const Vec v = s.radius * tpl.c_k * direction.normalized();
    w.row(std::vector<std::string>{format_vector(x), format_vector(v), format_double(s.exact),
                                   format_double(s.quadratic), format_double(s.remainder)});
    exact.xs.push_back(s.radius);
    exact.ys.push_back(s.exact);
    rem.xs.push_back(s.radius);
    rem.ys.push_back(s.remainder);
    if (s.exact != 0.0) worst_rel = std::max(worst_rel, s.remainder / std::abs(s.exact));
  }
  run.write("sweep.csv", csv.str());
  const double slope = loglog_slope(sweep);
  run.metric("remainder_slope", std::isfinite(slope) ? json(slope) : json(nullptr));
  run.metric("remainder_max_relative", worst_rel);
  PlotSpec spec{PlotKind::kLogLog, "c-Lagrangian remainder", "|v| / c_K", "value", {exact, rem},
                std::isfinite(slope) ? std::optional<double>(slope) : std::nullopt};
  run.write("remainder.svg", plot(spec));
}

void run_euclidean(Run& run) {
  const auto& cfg = run.cfg();
  if (cfg.n > 3) throw SchemaError("euclidean scenario supports n <= 3");
  const RiemannianChart chart = euclidean_chart(cfg.n);
  const auto tpl = TwoPointLagrangian::canonical(chart, cfg.m, cfg.c_K, {.step = cfg.step});
  CounterRng rng(cfg.seed);
  const int samples = cfg.samples ? cfg.samples : 20;
  double hess = 0, lin = 0, pot = 0;
  Vec first;
  ExpansionData first_exp;
  for (int i = 0; i < samples; ++i) {
    const Vec x = rng.uniform_vec(cfg.n, -5.0, 5.0);
    const ExpansionData e = quadratic_expansion(tpl, x);
    hess = std::max(hess, (e.eta - cfg.m * Mat::Identity(cfg.n, cfg.n)).cwiseAbs().maxCoeff());
    lin = std::max(lin, e.linear.cwiseAbs().maxCoeff());
    pot = std::max(pot, std::abs(e.potential));
    if (i == 0) {
      first = x;
      first_exp = e;
    }
  }
  run.check("hessian_error", hess, cfg.tolerance("hessian_error", 1e-6));
  run.check("linear_error", lin, cfg.tolerance("linear_error", 1e-8));
  run.check("potential_error", pot, cfg.tolerance("potential_error", 1e-10));
  const Vec dir = rng.uniform_vec(cfg.n, -1.0, 1.0);
  remainder_artifacts(run, tpl, first, dir, [&](const Vec& v) { return first_exp.evaluate(v); });
}

// Embedding of the sphere chart in R^3 and its differential.
Eigen::Vector3d sphere_point(const Vec& x) {
  return {std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0])};
}

Eigen::Vector3d sphere_push(const Vec& x, const Vec& v) {
  const double st = std::sin(x[0]), ct = std::cos(x[0]);
  const double sp = std::sin(x[1]), cp = std::cos(x[1]);
  return Eigen::Vector3d(ct * cp, ct * sp, -st) * v[0] + Eigen::Vector3d(-st * sp, st * cp, 0) * v[1];
}

double hyperbolic_distance(const Vec& a, const Vec& b) {
  const double d2 = (a - b).squaredNorm();
  return std::acosh(1.0 + d2 / (2.0 * a[1] * b[1]));
}

void run_curved(Run& run, bool sphere) {
  using std::numbers::pi;
  const auto& cfg = run.cfg();
  const RiemannianChart chart = sphere ? sphere_chart() : hyperbolic_chart();
  const ShootingOptions shoot{.step = cfg.step};
  const auto tpl = TwoPointLagrangian::canonical(chart, cfg.m, cfg.c_K, shoot);
  CounterRng rng(cfg.seed);
  auto random_point = [&]() -> Vec {
    if (sphere) return Eigen::Vector2d(rng.uniform(0.6, pi - 0.6), rng.uniform(-pi, pi));
    return Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
  };

  const int samples = cfg.samples ? cfg.samples : 10;
  double hess_rel = 0.0;
  Vec first;
  for (int i = 0; i < samples; ++i) {
    const Vec x = random_point();
    if (i == 0) first = x;
    const ExpansionData e = quadratic_expansion(tpl, x);
    const Mat ref = cfg.m * chart.metric(x);
    hess_rel = std::max(hess_rel, (e.eta - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
  }
  run.check("hessian_rel_error", hess_rel, cfg.tolerance("hessian_rel_error", 1e-4));

  double roundtrip = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_point();
    const Vec v = rng.uniform_vec(2, -0.4, 0.4);
    const PairElement g = riemann_exp(chart, x, v, cfg.step);
    roundtrip = std::max(roundtrip, (riemann_log(chart, g.y, x, shoot) - v).cwiseAbs().maxCoeff());
  }
  run.check("roundtrip_error", roundtrip, cfg.tolerance("roundtrip_error", 1e-8));

  // Geodesic against the closed-form oracle of each chart.
  const Vec x0 = first;
  const Vec v0 = rng.uniform_vec(2, -0.8, 0.8);
  const AConnection conn = levi_civita_connection(build_tangent_algebroid(chart));
  const AlgebroidPath path = geodesic_flow(conn, {x0, v0}, 1.0, cfg.step);
  const double speed = std::sqrt(v0.dot(chart.metric(x0) * v0));
  double geo = 0.0;
  std::ostringstream csv;
  CsvWriter w(csv);
  w.row(std::vector<std::string>{"s", "x_1", "x_2", "xi_1", "xi_2", "energy", "eta_norm"});
  Series traj{"geodesic", {}, {}};
  for (const auto& s : path.samples) {
    double err;
    if (sphere) {
      const Eigen::Vector3d p = sphere_point(x0), u = sphere_push(x0, v0);
      const Eigen::Vector3d ref =
          std::cos(speed * s.s) * p + std::sin(speed * s.s) * u / u.norm();
      err = (sphere_point(s.x) - ref).norm();
    } else {
      err = std::abs(hyperbolic_distance(x0, s.x) - speed * s.s);
    }
    geo = std::max(geo, err);
    const double e2 = s.xi.dot(chart.metric(s.x) * s.xi);
    w.row(std::vector<double>{s.s, s.x[0], s.x[1], s.xi[0], s.xi[1], 0.5 * e2, std::sqrt(e2)});
    traj.xs.push_back(s.x[1]);
    traj.ys.push_back(s.x[0]);
  }
  if (path.status != FlowStatus::kCompleted) geo = std::numeric_limits<double>::infinity();
  run.check("geodesic_error", geo, cfg.tolerance("geodesic_error", 1e-6));
  run.write("geodesic.csv", csv.str());
  run.write("geodesic.svg", plot({PlotKind::kLine, "geodesic in chart coordinates", "x_2", "x_1",
                                  {traj}, std::nullopt}));

  const Mat eta0 = chart.metric(first);
  remainder_artifacts(run, tpl, first, rng.uniform_vec(2, -1.0, 1.0),
                      [&](const Vec& v) { return 0.5 * cfg.m * v.dot(eta0 * v); });
}

// Euler equations I w' = (I w) x w, integrated directly in angular velocity.
Eigen::Vector3d euler_rhs(const Eigen::Vector3d& inertia, const Eigen::Vector3d& w) {
  return {(inertia[1] - inertia[2]) * w[1] * w[2] / inertia[0],
          (inertia[2] - inertia[0]) * w[2] * w[0] / inertia[1],
          (inertia[0] - inertia[1]) * w[0] * w[1] / inertia[2]};
}

void run_so3(Run& run) {
  const auto& cfg = run.cfg();
  std::vector<double> in = cfg.inertia.empty() ? std::vector<double>{1, 2, 3} : cfg.inertia;
  std::vector<double> w0 =
      cfg.initial_xi.empty() ? std::vector<double>{1.0, 0.1, 0.5} : cfg.initial_xi;
  if (in.size() != 3 || w0.size() != 3)
    throw SchemaError("so3 scenario needs three inertia values and a 3-vector initial_xi");
  const Eigen::Vector3d inertia(in[0], in[1], in[2]);
  const Vec omega0 = Eigen::Vector3d(w0[0], w0[1], w0[2]);

  const Mat eta = inertia.asDiagonal();
  const AlgebroidModel model = build_lie_algebra_algebroid(so3_structure_constants(), eta);
  QuadraticLagrangian lag;
  lag.eta = [eta](const Vec&) { return eta; };
  lag.linear = [](const Vec&) -> Vec { return Vec::Zero(3); };
  lag.potential = [](const Vec&) { return 0.0; };
  lag.mass = cfg.m;
  const AlgebroidPath path = el_flow(lag, model, {Vec(0), omega0}, cfg.t_max, cfg.step);

  // Independent reference.
  auto rhs = [&](double, const Vec& w) -> Vec { return euler_rhs(inertia, w); };
  Vec w = omega0;
  double err = 0.0, scale = 0.0, e_drift = 0.0, c_drift = 0.0;
  const double e0 = legendre_energy(lag, {Vec(0), omega0});
  const double c0 = momentum(lag, {Vec(0), omega0}).squaredNorm();
  std::ostringstream csv;
  CsvWriter out(csv);
  out.row(std::vector<std::string>{"t", "xi_1", "xi_2", "xi_3", "energy", "casimir"});
  Series s1{"xi_1", {}, {}}, s2{"xi_2", {}, {}}, s3{"xi_3", {}, {}};
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    const auto& s = path.samples[i];
    if (i > 0) w = rk4_step(rhs, path.samples[i - 1].s, w, path.step);
    err = std::max(err, (s.xi - w).norm());
    scale = std::max(scale, w.norm());
    const double e = legendre_energy(lag, {s.x, s.xi});
    const double c = momentum(lag, {s.x, s.xi}).squaredNorm();
    e_drift = std::max(e_drift, std::abs(e - e0));
    c_drift = std::max(c_drift, std::abs(c - c0));
    if (i % 10 == 0 || i + 1 == path.samples.size()) {
      out.row(std::vector<double>{s.s, s.xi[0], s.xi[1], s.xi[2], e, c});
      s1.xs.push_back(s.s);
      s1.ys.push_back(s.xi[0]);
      s2.xs.push_back(s.s);
      s2.ys.push_back(s.xi[1]);
      s3.xs.push_back(s.s);
      s3.ys.push_back(s.xi[2]);
    }
  }
  run.metric("flow_status", json(to_string(path.status)));
  if (path.status != FlowStatus::kCompleted) err = std::numeric_limits<double>::infinity();
  run.check("trajectory_error", err / scale, cfg.tolerance("trajectory_error", 1e-5));
  run.check("energy_drift", e_drift, cfg.tolerance("energy_drift", 1e-6));
  run.check("casimir_drift", c_drift, cfg.tolerance("casimir_drift", 1e-6));
  run.write("trajectory.csv", csv.str());
  run.write("trajectory.svg",
            plot({PlotKind::kLine, "rigid body angular velocity", "t", "xi", {s1, s2, s3}, {}}));
}

void run_pair_state(Run& run) {
  const auto& cfg = run.cfg();
  if (cfg.n > 8) throw SchemaError("pair-groupoid-state scenario supports n <= 8");
  const FiniteGroupoid g = build_pair_groupoid(cfg.n);
  CounterRng rng(cfg.seed);
  Vec p = rng.uniform_vec(cfg.n, 0.05, 1.0);
  p /= p.sum();
  const Vec potential = rng.uniform_vec(cfg.n, -3.0, 3.0);
  const ActionFunctionalData data{coboundary_action(g, potential), cfg.hbar, p};
  const CVec phi = dirac_feynman_function(g, data);
  const Measure nu = Measure::counting(g);
  const PositivityCheck pos = check_positive_type(g, nu, phi);
  const StateEvaluation st = state_evaluate(g, nu, phi, unit_indicator(g).cast<Complex>());

  run.check("groupoid_violations", static_cast<double>(validate_groupoid(g).violations.size()), 0.5);
  run.check("loglike_violations",
            static_cast<double>(loglike_validate(g, data.action).violations.size()), 0.5);
  run.check("min_eigenvalue", pos.min_eigenvalue, -cfg.tolerance("min_eigenvalue", 1e-10),
            Run::Cmp::kAtLeast);
  run.check("hermitian_defect", pos.hermitian_defect, cfg.tolerance("hermitian_defect", 1e-12));
  run.metric("normalization", json::array({st.normalization.real(), st.normalization.imag()}));
  run.metric("unit_expectation", st.value.real());

  run.write("groupoid.json", groupoid_to_json(g).dump(2) + "\n");
  run.write("phi.json", function_to_json(g, phi).dump(2) + "\n");
  std::ostringstream csv;
  CsvWriter w(csv);
  w.row(std::vector<std::string>{"index", "eigenvalue"});
  Series spec{"eigenvalues", {}, {}};
  for (Eigen::Index i = 0; i < pos.eigenvalues.size(); ++i) {
    w.row(std::vector<double>{static_cast<double>(i), pos.eigenvalues[i]});
    spec.xs.push_back(static_cast<double>(i));
    spec.ys.push_back(pos.eigenvalues[i]);
  }
  run.write("spectrum.csv", csv.str());
  run.write("spectrum.svg", plot({PlotKind::kSpectrum, "positivity form spectrum", "index",
                                  "eigenvalue", {spec}, {}}));
}

void run_custom(Run& run) {
  const auto& cfg = run.cfg();
  const auto& raw = cfg.structure_constants;
  if (raw.empty()) throw SchemaError("custom scenario needs 'structure_constants'");
  const int r = static_cast<int>(raw.size());
  Tensor3 c = zero_tensor(r, r, r);
  for (int e = 0; e < r; ++e) {
    if (static_cast<int>(raw[e].size()) != r) throw SchemaError("structure_constants must be r x r x r");
    for (int a = 0; a < r; ++a) {
      if (static_cast<int>(raw[e][a].size()) != r)
        throw SchemaError("structure_constants must be r x r x r");
      for (int b = 0; b < r; ++b) c[e](a, b) = raw[e][a][b];
    }
  }
  Mat eta = Mat::Identity(r, r);
  if (!cfg.eta.empty()) {
    if (static_cast<int>(cfg.eta.size()) != r) throw SchemaError("eta must be r x r");
    for (int a = 0; a < r; ++a) {
      if (static_cast<int>(cfg.eta[a].size()) != r) throw SchemaError("eta must be r x r");
      for (int b = 0; b < r; ++b) eta(a, b) = cfg.eta[a][b];
    }
  }
  Vec xi0 = Vec::Ones(r);
  if (!cfg.initial_xi.empty()) {
    if (static_cast<int>(cfg.initial_xi.size()) != r) throw SchemaError("initial_xi must have length r");
    xi0 = Eigen::Map<const Vec>(cfg.initial_xi.data(), r);
  }
  if (!(eta - eta.transpose()).isZero(0.0) || Eigen::LLT<Mat>(eta).info() != Eigen::Success)
    throw SchemaError("eta must be symmetric positive definite");

  const auto cc = check_structure_constants(c);
  run.check("antisymmetry_defect", cc.antisymmetry_defect,
            cfg.tolerance("antisymmetry_defect", 1e-12));
  run.check("jacobi_defect", cc.jacobi_defect, cfg.tolerance("jacobi_defect", 1e-12));
  if (!(cc.antisymmetry_defect < cfg.tolerance("antisymmetry_defect", 1e-12)) ||
      !(cc.jacobi_defect < cfg.tolerance("jacobi_defect", 1e-12)))
    return;

  const AlgebroidModel model = build_lie_algebra_algebroid(c, eta);
  QuadraticLagrangian lag;
  lag.eta = [eta](const Vec&) { return eta; };
  lag.linear = [r](const Vec&) -> Vec { return Vec::Zero(r); };
  lag.potential = [](const Vec&) { return 0.0; };
  const AlgebroidPath path = el_flow(lag, model, {Vec(0), xi0}, cfg.t_max, cfg.step);
  const double e0 = legendre_energy(lag, {Vec(0), xi0});
  double drift = 0.0;
  std::ostringstream csv;
  CsvWriter w(csv);
  std::vector<std::string> header{"t"};
  for (int a = 0; a < r; ++a) header.push_back("xi_" + std::to_string(a + 1));
  header.push_back("energy");
  w.row(header);
  std::vector<Series> series(r);
  for (int a = 0; a < r; ++a) series[a].label = "xi_" + std::to_string(a + 1);
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    const auto& s = path.samples[i];
    const double e = legendre_energy(lag, {s.x, s.xi});
    drift = std::max(drift, std::abs(e - e0));
    if (i % 10 == 0 || i + 1 == path.samples.size()) {
      std::vector<double> row{s.s};
      for (int a = 0; a < r; ++a) {
        row.push_back(s.xi[a]);
        series[a].xs.push_back(s.s);
        series[a].ys.push_back(s.xi[a]);
      }
      row.push_back(e);
      w.row(row);
    }
  }
  run.metric("flow_status", json(to_string(path.status)));
  if (path.status != FlowStatus::kCompleted) drift = std::numeric_limits<double>::infinity();
  run.check("energy_drift", drift, cfg.tolerance("energy_drift", 1e-6));
  run.write("trajectory.csv", csv.str());
  run.write("trajectory.svg",
            plot({PlotKind::kLine, "Euler-Lagrange flow", "t", "xi", series, std::nullopt}));
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  Run run(config);
  try {
    const auto& s = config.scenario;
    if (s == "euclidean") run_euclidean(run);
    else if (s == "sphere") run_curved(run, true);
    else if (s == "hyperbolic") run_curved(run, false);
    else if (s == "so3") run_so3(run);
    else if (s == "pair-groupoid-state") run_pair_state(run);
    else if (s == "custom") run_custom(run);
    else throw SchemaError("unknown scenario '" + s + "'");
  } catch (const SchemaError& e) {
    RunResult r = run.finish(e.what());
    r.exit_code = 2;
    return r;
  } catch (const Error& e) {
    return run.finish(e.what());
  }
  return run.finish();
}

}  // namespace qlag
