#include "qlag/action.hpp"

#include <cmath>

namespace qlag {

LoglikeReport loglike_validate(const FiniteGroupoid& g, const Vec& action, double tol) {
  detail::require_on(g, action, "action functional");
  LoglikeReport report;
  const int k = g.num_morphisms();
  for (int a = 0; a < k; ++a) {
    const double d = action[g.inverse(a)] + action[a];
    if (std::abs(d) > tol)
      report.violations.push_back({LoglikeViolation::Kind::kAntisymmetry, {a}, d});
  }
  for (int b = 0; b < k; ++b) {
    for (int a = 0; a < k; ++a) {
      if (!g.composable(b, a)) continue;
      const double d = action[g.compose(b, a)] - action[b] - action[a];
      if (std::abs(d) > tol)
        report.violations.push_back({LoglikeViolation::Kind::kAdditivity, {b, a}, d});
    }
  }
  return report;
}

Vec loglike_potential(const FiniteGroupoid& g, const Vec& action, int base) {
  if (!g.is_pair_groupoid())
    throw InvalidArgument("potential extraction is only defined on pair groupoids");
  detail::require_on(g, action, "action functional");
  const int n = g.pair_size();
  if (base < 0 || base >= n) throw InvalidArgument("base object out of range");
  Vec f(n);
  for (int x = 0; x < n; ++x) f[x] = action[g.pair_index(x, base)];
  return f;
}

Vec coboundary_action(const FiniteGroupoid& g, const Vec& potential) {
  if (potential.size() != g.num_objects())
    throw InvalidArgument("potential is not defined on the objects of this groupoid");
  Vec s(g.num_morphisms());
  for (int a = 0; a < g.num_morphisms(); ++a)
    s[a] = potential[g.target(a)] - potential[g.source(a)];
  return s;
}

CVec dirac_feynman_function(const FiniteGroupoid& g, const ActionFunctionalData& data,
                            double tol) {
  if (!(data.hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  if (data.density.size() != g.num_objects())
    throw InvalidArgument("density is not defined on the objects of this groupoid");
  if ((data.density.array() < 0.0).any()) throw InvalidArgument("density has negative entries");
  if (std::abs(data.density.sum() - 1.0) > 1e-9)
    throw InvalidArgument("density does not sum to one");
  if (!loglike_validate(g, data.action, tol).ok())
    throw InvalidArgument("action functional is not log-like");

  CVec phi(g.num_morphisms());
  for (int a = 0; a < g.num_morphisms(); ++a) {
    const double amp = std::sqrt(data.density[g.source(a)] * data.density[g.target(a)]);
    phi[a] = std::polar(amp, data.action[a] / data.hbar);
  }
  return phi;
}

StateEvaluation state_evaluate(const FiniteGroupoid& g, const Measure& nu, const CVec& phi,
                               const CVec& f, double zero_tol) {
  detail::require_on(g, phi, "phi");
  detail::require_on(g, f, "observable");
  detail::require_measure(g, nu, false);
  StateEvaluation out;
  out.value = (f.array() * phi.array() * nu.weight.array().cast<Complex>()).sum();
  out.normalization = (phi.array() * nu.weight.array().cast<Complex>()).sum();
  if (std::abs(out.normalization) > zero_tol) out.normalized = out.value / out.normalization;
  return out;
}

}  // namespace qlag
