#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlag/groupoid.hpp"

namespace qlag {

enum class Orientation { kForward, kReversed };

struct Segment {
  int morphism;
  double duration;

  bool operator==(const Segment&) const = default;
};

/// Piecewise-constant history in K over [t0, t0 + duration()].
///
/// Segments are always stored in increasing time. A reversed history is the
/// formal inverse of a forward one: same time interval, inverted segment
/// morphisms, traversed from the end time back to t0.
struct History {
  std::vector<Segment> segments;
  double t0 = 0.0;
  Orientation orientation = Orientation::kForward;

  double duration() const;
  double t_end() const { return t0 + duration(); }

  bool operator==(const History&) const = default;
};

// q-Lagrangian on K with its time-reversal certificate.
struct QLagrangianOnK {
  Vec values;
  bool tau_invariant = false;

  static QLagrangianOnK from_values(const FiniteGroupoid& g, Vec values, double tol = 1e-12);
};

/// `second o first`: first is traversed, then second. Forward histories need
/// first.t_end() == second.t0; reversed histories run backwards in time, so
/// they need second.t_end() == first.t0. Mixed orientations are rejected.
History compose_histories(const History& first, const History& second, double time_tol = 1e-12);

History reverse_history(const FiniteGroupoid& g, const History& w);

// Matching condition on K: the last morphism of `first` must equal the first
// morphism of `second` along the direction of travel. Returns a description
// of the mismatch, or nothing when both sides agree or one side is empty.
std::optional<std::string> matching_warning(const FiniteGroupoid& g, const History& first,
                                            const History& second);

/// Sum of l(alpha_i) dt_i, with an overall minus sign for reversed histories.
double action(const QLagrangianOnK& l, const History& w);

}  // namespace qlag
