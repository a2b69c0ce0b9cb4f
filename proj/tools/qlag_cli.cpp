// Command-line front end: scenario runner and one-shot inspection commands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qlag/action.hpp"
#include "qlag/groupoid_io.hpp"
#include "qlag/riemann.hpp"
#include "qlag/scenario.hpp"

using namespace qlag;
using nlohmann::json;

namespace {

Vec parse_coords(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse coordinate '" + item + "'");
    }
  }
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

int cmd_run(const std::string& path, const std::string& out_override) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::from_json(doc);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    std::string dir = out_override;
    if (dir.empty() && doc.is_object() && doc.contains("output_dir") && doc["output_dir"].is_string())
      dir = doc["output_dir"].get<std::string>();
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      std::ofstream(std::filesystem::path(dir) / "report.json")
          << json{{"status", "fail"}, {"error", e.what()}, {"failed", {"schema"}}}.dump(2) << "\n";
    }
    return 2;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  const RunResult r = run_scenario(cfg);
  std::cout << r.report.dump(2) << "\n";
  return r.exit_code;
}

int cmd_validate(const std::string& path) {
  const FiniteGroupoid g = groupoid_from_json(read_json_file(path));
  const ValidationReport rep = validate_groupoid(g);
  json out{{"objects", g.num_objects()}, {"morphisms", g.num_morphisms()}, {"valid", rep.ok()}};
  json v = json::array();
  for (const auto& viol : rep.violations) {
    json ms = json::array();
    if (g.tables_well_formed())
      for (int m : viol.morphisms) ms.push_back(g.morphism_name(m));
    v.push_back({{"axiom", to_string(viol.kind)}, {"morphisms", ms}, {"detail", viol.detail}});
  }
  out["violations"] = v;
  std::cout << out.dump(2) << "\n";
  return rep.ok() ? 0 : 1;
}

int cmd_state_check(const std::string& groupoid_path, const std::string& phi_path, double tol) {
  const FiniteGroupoid g = groupoid_from_json(read_json_file(groupoid_path));
  if (!validate_groupoid(g).ok()) {
    std::cerr << "error: groupoid fails validation\n";
    return 2;
  }
  const CVec phi = function_from_json(g, read_json_file(phi_path));
  const Measure nu = Measure::counting(g);
  const PositivityCheck pos = check_positive_type(g, nu, phi, tol);
  const StateEvaluation st = state_evaluate(g, nu, phi, phi.conjugate());
  json out{{"positive_type", pos.positive_type},
           {"min_eigenvalue", pos.min_eigenvalue},
           {"hermitian_defect", pos.hermitian_defect},
           {"eigenvalues", vec_json(pos.eigenvalues)},
           {"normalization", {st.normalization.real(), st.normalization.imag()}},
           {"normalizable", st.normalized.has_value()}};
  std::cout << out.dump(2) << "\n";
  return pos.positive_type ? 0 : 1;
}

int cmd_expand(const std::string& chart_name, const std::string& coords, double m, double ck,
               bool richardson) {
  const RiemannianChart chart = chart_by_name(chart_name);
  const Vec x = parse_coords(coords);
  const auto tpl = TwoPointLagrangian::canonical(chart, m, ck);
  ExpansionOptions opt;
  opt.richardson = richardson;
  const ExpansionData e = quadratic_expansion(tpl, x, opt);
  json eta = json::array();
  for (Eigen::Index a = 0; a < e.eta.rows(); ++a) eta.push_back(vec_json(e.eta.row(a).transpose()));
  const Mat ref = m * chart.metric(x);
  json out{{"x", vec_json(x)},
           {"V", e.potential + 0.0},
           {"A", vec_json(e.linear)},
           {"eta", eta},
           {"regular", e.regular},
           {"fd_steps", {{"gradient", e.gradient_step}, {"hessian", e.hessian_step}}},
           {"residuals",
            {{"min_eigenvalue", e.min_eigenvalue},
             {"metric_deviation", (e.eta - ref).cwiseAbs().maxCoeff()}}}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_geodesic(const std::string& chart_name, const std::string& xs, const std::string& vs,
                 double smax, double step) {
  const RiemannianChart chart = chart_by_name(chart_name);
  const AlgebroidModel model = build_tangent_algebroid(chart);
  const AConnection conn = levi_civita_connection(model);
  const AlgebroidPath path = geodesic_flow(conn, {parse_coords(xs), parse_coords(vs)}, smax, step);
  CsvWriter w(std::cout);
  std::vector<std::string> header{"s"};
  for (int k = 0; k < chart.dim; ++k) header.push_back("x_" + std::to_string(k + 1));
  for (int k = 0; k < chart.dim; ++k) header.push_back("xi_" + std::to_string(k + 1));
  header.push_back("energy");
  header.push_back("eta_norm");
  w.row(header);
  for (const auto& s : path.samples) {
    std::vector<double> row{s.s};
    for (int k = 0; k < chart.dim; ++k) row.push_back(s.x[k]);
    for (int k = 0; k < chart.dim; ++k) row.push_back(s.xi[k]);
    const double e2 = s.xi.dot(chart.metric(s.x) * s.xi);
    row.push_back(0.5 * e2);
    row.push_back(std::sqrt(e2));
    w.row(row);
  }
  if (path.status != FlowStatus::kCompleted) {
    std::cerr << "geodesic stopped early: " << to_string(path.status) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupoid q-Lagrangian toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario config (JSON)")->required();
  run->add_option("--output-dir", out_dir, "override the config's output_dir");

  std::string groupoid_path;
  auto* validate = app.add_subcommand("validate", "check the groupoid axioms of a document");
  validate->add_option("groupoid", groupoid_path)->required();

  std::string chart = "euclidean", x, v;
  double m = 1.0, ck = 1.0, smax = 1.0, step = 1e-3;
  bool richardson = false;
  auto* expand = app.add_subcommand("expand", "quadratic expansion of the c-Lagrangian");
  expand->add_option("--chart", chart)->required();
  expand->add_option("--x", x, "comma-separated chart point")->required();
  expand->add_option("--m", m);
  expand->add_option("--cK", ck);
  expand->add_flag("--richardson", richardson);

  auto* geodesic = app.add_subcommand("geodesic", "integrate a Levi-Civita geodesic (CSV)");
  geodesic->add_option("--chart", chart)->required();
  geodesic->add_option("--x", x)->required();
  geodesic->add_option("--v", v)->required();
  geodesic->add_option("--smax", smax);
  geodesic->add_option("--step", step);

  std::string phi_path;
  double tol = 1e-10;
  auto* state = app.add_subcommand("state-check", "positive-type test of phi on a groupoid");
  state->add_option("groupoid", groupoid_path)->required();
  state->add_option("phi", phi_path)->required();
  state->add_option("--tol", tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*validate) return cmd_validate(groupoid_path);
    if (*expand) return cmd_expand(chart, x, m, ck, richardson);
    if (*geodesic) return cmd_geodesic(chart, x, v, smax, step);
    if (*state) return cmd_state_check(groupoid_path, phi_path, tol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
