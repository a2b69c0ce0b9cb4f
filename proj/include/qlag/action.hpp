#pragma once

#include <optional>

#include "qlag/convolution.hpp"

namespace qlag {

// Action functional S on K together with the data of a Dirac-Feynman state.
struct ActionFunctionalData {
  Vec action;       // S, indexed by morphism
  double hbar = 1.0;
  Vec density;      // p, indexed by object, sums to one
};

struct LoglikeViolation {
  enum class Kind { kAdditivity, kAntisymmetry } kind;
  std::vector<int> morphisms;
  double defect = 0.0;
};

struct LoglikeReport {
  std::vector<LoglikeViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks S(b o a) = S(b) + S(a) on every composable pair and
// S(a^-1) = -S(a) on every morphism.
LoglikeReport loglike_validate(const FiniteGroupoid& g, const Vec& action, double tol = 1e-12);

// On a pair groupoid, F with S(y,x) = F(y) - F(x), normalized by F(x0) = 0
// where x0 = `base`.
Vec loglike_potential(const FiniteGroupoid& g, const Vec& action, int base = 0);

// S(alpha) = F(target alpha) - F(source alpha); log-like on any groupoid.
Vec coboundary_action(const FiniteGroupoid& g, const Vec& potential);

/// phi(alpha) = sqrt(p(x) p(y)) exp(i S(alpha) / hbar) for alpha : x -> y.
CVec dirac_feynman_function(const FiniteGroupoid& g, const ActionFunctionalData& data,
                            double tol = 1e-12);

struct StateEvaluation {
  Complex value;                     // rho(f) = sum f phi weight
  Complex normalization;             // Z = sum phi weight
  std::optional<Complex> normalized; // rho(f) / Z, absent when Z vanishes
};

StateEvaluation state_evaluate(const FiniteGroupoid& g, const Measure& nu, const CVec& phi,
                               const CVec& f, double zero_tol = 1e-12);

}  // namespace qlag
