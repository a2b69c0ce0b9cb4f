#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qlag {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Three-index coefficient array stored as one matrix per upper index:
// t[c](a, b) holds T^c_ab.
using Tensor3 = std::vector<Mat>;

inline Tensor3 zero_tensor(Eigen::Index upper, Eigen::Index rows, Eigen::Index cols) {
  return Tensor3(static_cast<std::size_t>(upper), Mat::Zero(rows, cols));
}

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised when a geodesic leaves the chart or blows up before the requested
// parameter is reached.
class ExpUndefined : public Error {
 public:
  using Error::Error;
};

// Raised when the shooting solver cannot invert the exponential map.
class LogNotConverged : public Error {
 public:
  using Error::Error;
};

// Axis-aligned box in chart coordinates. A zero-dimensional box models the
// single chart point of a Lie algebra.
struct Box {
  Vec lower;
  Vec upper;

  Eigen::Index dim() const { return lower.size(); }

  bool contains(const Vec& x) const {
    if (x.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > lower[i] && x[i] < upper[i])) return false;
    }
    return true;
  }
};

/// Counter-based generator: draw k of stream `seed` is splitmix64(seed, k).
/// Results depend only on (seed, counter), never on the platform's <random>.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(seed_ * 0x9e3779b97f4a7c15ULL + mix(counter_));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  Vec uniform_vec(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  CVec uniform_cvec(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = uniform(-1.0, 1.0);
      const double im = uniform(-1.0, 1.0);
      v[i] = Complex(re, im);
    }
    return v;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace qlag
