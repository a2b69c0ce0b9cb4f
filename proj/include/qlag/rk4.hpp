#pragma once

#include <Eigen/Core>

namespace qlag {

/// One classical four-stage Runge-Kutta step of y' = rhs(t, y).
template <typename Scalar, typename Rhs>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rk4_step(Rhs&& rhs, Scalar t,
                                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                                  Scalar h) {
  using State = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar half = h / Scalar(2);
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + half, State(y + half * k1));
  const State k3 = rhs(t + half, State(y + half * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return y + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

}  // namespace qlag
