#include "qlag/histories.hpp"

#include <cmath>

namespace qlag {

double History::duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

QLagrangianOnK QLagrangianOnK::from_values(const FiniteGroupoid& g, Vec values, double tol) {
  if (values.size() != g.num_morphisms())
    throw InvalidArgument("q-Lagrangian is not defined on this groupoid");
  bool invariant = true;
  for (int a = 0; a < g.num_morphisms() && invariant; ++a)
    invariant = std::abs(values[a] - values[g.inverse(a)]) <= tol;
  return {std::move(values), invariant};
}

namespace {

void require_positive_durations(const History& w) {
  for (const auto& s : w.segments)
    if (!(s.duration > 0.0) || !std::isfinite(s.duration))
      throw InvalidArgument("history segments need positive finite durations");
}

}  // namespace

History compose_histories(const History& first, const History& second, double time_tol) {
  if (first.orientation != second.orientation)
    throw InvalidArgument("cannot compose histories of opposite orientation");
  require_positive_durations(first);
  require_positive_durations(second);

  History out;
  out.orientation = first.orientation;
  if (first.orientation == Orientation::kForward) {
    if (std::abs(first.t_end() - second.t0) > time_tol)
      throw InvalidArgument("time mismatch: first history ends at " + std::to_string(first.t_end()) +
                            ", second starts at " + std::to_string(second.t0));
    out.t0 = first.t0;
    out.segments = first.segments;
    out.segments.insert(out.segments.end(), second.segments.begin(), second.segments.end());
  } else {
    if (std::abs(second.t_end() - first.t0) > time_tol)
      throw InvalidArgument("time mismatch: reversed history arrives at " +
                            std::to_string(first.t0) + ", next one leaves from " +
                            std::to_string(second.t_end()));
    out.t0 = second.t0;
    out.segments = second.segments;
    out.segments.insert(out.segments.end(), first.segments.begin(), first.segments.end());
  }
  return out;
}

History reverse_history(const FiniteGroupoid& g, const History& w) {
  History out = w;
  for (auto& s : out.segments) {
    if (s.morphism < 0 || s.morphism >= g.num_morphisms())
      throw InvalidArgument("history refers to a morphism outside the groupoid");
    s.morphism = g.inverse(s.morphism);
  }
  out.orientation =
      w.orientation == Orientation::kForward ? Orientation::kReversed : Orientation::kForward;
  return out;
}

std::optional<std::string> matching_warning(const FiniteGroupoid& g, const History& first,
                                            const History& second) {
  if (first.segments.empty() || second.segments.empty()) return std::nullopt;
  const bool fwd = first.orientation == Orientation::kForward;
  const int leaving = fwd ? first.segments.back().morphism : first.segments.front().morphism;
  const int entering = fwd ? second.segments.front().morphism : second.segments.back().morphism;
  if (leaving == entering) return std::nullopt;
  return "matching condition w(t1) = w'(t1) fails: " + g.morphism_name(leaving) + " vs " +
         g.morphism_name(entering);
}

double action(const QLagrangianOnK& l, const History& w) {
  double s = 0.0;
  for (const auto& seg : w.segments) {
    if (seg.morphism < 0 || seg.morphism >= l.values.size())
      throw InvalidArgument("q-Lagrangian is not defined on a history segment");
    s += l.values[seg.morphism] * seg.duration;
  }
  return w.orientation == Orientation::kForward ? s : -s;
}

}  // namespace qlag
