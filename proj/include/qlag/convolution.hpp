#pragma once

#include <Eigen/Eigenvalues>

#include "qlag/groupoid.hpp"

namespace qlag {

// A function on the morphisms of a finite groupoid, indexed like K.
template <typename Scalar>
using GroupoidFunction = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Measure on K. Only the counting measure (weight 1, modular function 1)
/// is supported by the *-algebra operations; `convolve` accepts any weight.
struct Measure {
  Vec weight;
  Vec modular;

  static Measure counting(const FiniteGroupoid& g) {
    return {Vec::Ones(g.num_morphisms()), Vec::Ones(g.num_morphisms())};
  }

  bool is_counting() const {
    return (weight.array() == 1.0).all() && (modular.array() == 1.0).all();
  }
};

namespace detail {

template <typename Derived>
void require_on(const FiniteGroupoid& g, const Eigen::MatrixBase<Derived>& f, const char* what) {
  if (f.size() != g.num_morphisms())
    throw InvalidArgument(std::string(what) + " is not defined on this groupoid (size " +
                          std::to_string(f.size()) + ", expected " +
                          std::to_string(g.num_morphisms()) + ")");
}

inline void require_measure(const FiniteGroupoid& g, const Measure& nu, bool counting) {
  if (nu.weight.size() != g.num_morphisms() || nu.modular.size() != g.num_morphisms())
    throw InvalidArgument("measure is not defined on this groupoid");
  if (counting && !nu.is_counting())
    throw InvalidArgument("operation requires the counting measure");
}

}  // namespace detail

/// (f * g)(alpha) = sum over gamma with target(gamma) = target(alpha) of
/// f(gamma) g(gamma^-1 o alpha) weight(gamma).
template <typename DerivedF, typename DerivedG>
auto convolve(const FiniteGroupoid& g, const Measure& nu, const Eigen::MatrixBase<DerivedF>& f,
              const Eigen::MatrixBase<DerivedG>& h) {
  using Scalar = typename DerivedF::Scalar;
  detail::require_on(g, f, "left factor");
  detail::require_on(g, h, "right factor");
  detail::require_measure(g, nu, false);
  const int k = g.num_morphisms();
  GroupoidFunction<Scalar> out = GroupoidFunction<Scalar>::Zero(k);
  for (int gamma = 0; gamma < k; ++gamma) {
    const int gamma_inv = g.inverse(gamma);
    const Scalar fw = f[gamma] * nu.weight[gamma];
    for (int alpha = 0; alpha < k; ++alpha) {
      if (g.target(alpha) != g.target(gamma)) continue;
      out[alpha] += fw * h[g.compose(gamma_inv, alpha)];
    }
  }
  return out;
}

/// f*(alpha) = conj(f(alpha^-1)) for the counting measure.
template <typename Derived>
auto involution(const FiniteGroupoid& g, const Measure& nu, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  detail::require_on(g, f, "function");
  detail::require_measure(g, nu, true);
  GroupoidFunction<Scalar> out(g.num_morphisms());
  for (int alpha = 0; alpha < g.num_morphisms(); ++alpha)
    out[alpha] = Eigen::numext::conj(f[g.inverse(alpha)]);
  return out;
}

/// Matrix of psi -> f * psi on C^K (left regular representation).
template <typename Derived>
auto convolution_operator(const FiniteGroupoid& g, const Measure& nu,
                          const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  detail::require_on(g, f, "function");
  detail::require_measure(g, nu, true);
  const int k = g.num_morphisms();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> op =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(k, k);
  for (int gamma = 0; gamma < k; ++gamma) {
    const int gamma_inv = g.inverse(gamma);
    for (int alpha = 0; alpha < k; ++alpha) {
      if (g.target(alpha) != g.target(gamma)) continue;
      op(alpha, g.compose(gamma_inv, alpha)) += f[gamma];
    }
  }
  return op;
}

/// Form matrix Q with f^H Q f = sum_alpha (f* * f)(alpha) phi(alpha).
/// Q(beta, delta) = phi(beta^-1 o delta) when target(beta) = target(delta).
template <typename Derived>
CMat positivity_form(const FiniteGroupoid& g, const Measure& nu,
                     const Eigen::MatrixBase<Derived>& phi) {
  detail::require_on(g, phi, "phi");
  detail::require_measure(g, nu, true);
  const int k = g.num_morphisms();
  CMat q = CMat::Zero(k, k);
  for (int beta = 0; beta < k; ++beta) {
    const int beta_inv = g.inverse(beta);
    for (int delta = 0; delta < k; ++delta) {
      if (g.target(beta) != g.target(delta)) continue;
      q(beta, delta) = Complex(phi[g.compose(beta_inv, delta)]);
    }
  }
  return q;
}

struct PositivityCheck {
  CMat form;
  Vec eigenvalues;  // ascending, of the Hermitian part
  double min_eigenvalue = 0.0;
  double hermitian_defect = 0.0;  // max |Q - Q^H|
  bool positive_type = false;
};

inline PositivityCheck check_positive_type(CMat form, double tol = 1e-10) {
  PositivityCheck out;
  out.hermitian_defect = form.size() == 0 ? 0.0 : (form - form.adjoint()).cwiseAbs().maxCoeff();
  const CMat herm = 0.5 * (form + form.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  out.eigenvalues = es.eigenvalues();
  out.min_eigenvalue = out.eigenvalues.size() ? out.eigenvalues.minCoeff() : 0.0;
  out.positive_type = out.hermitian_defect <= tol && out.min_eigenvalue >= -tol;
  out.form = std::move(form);
  return out;
}

template <typename Derived>
PositivityCheck check_positive_type(const FiniteGroupoid& g, const Measure& nu,
                                    const Eigen::MatrixBase<Derived>& phi, double tol = 1e-10) {
  return check_positive_type(positivity_form(g, nu, phi), tol);
}

// Indicator of the units: the identity of the convolution algebra.
inline Vec unit_indicator(const FiniteGroupoid& g) {
  Vec out = Vec::Zero(g.num_morphisms());
  for (int x = 0; x < g.num_objects(); ++x) out[g.unit(x)] = 1.0;
  return out;
}

// Value matrix M(y, x) = f(y, x) of a function on a pair groupoid.
template <typename Derived>
auto value_matrix(const FiniteGroupoid& g, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  if (!g.is_pair_groupoid()) throw InvalidArgument("value matrix needs a pair groupoid");
  detail::require_on(g, f, "function");
  const int n = g.pair_size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) m(y, x) = f[g.pair_index(y, x)];
  return m;
}

template <typename Derived>
auto from_value_matrix(const FiniteGroupoid& g, const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (!g.is_pair_groupoid()) throw InvalidArgument("value matrix needs a pair groupoid");
  const int n = g.pair_size();
  if (m.rows() != n || m.cols() != n) throw InvalidArgument("value matrix has wrong shape");
  GroupoidFunction<Scalar> f(n * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) f[g.pair_index(y, x)] = m(y, x);
  return f;
}

}  // namespace qlag
