#pragma once

#include <string>
#include <vector>

#include "qlag/core.hpp"

namespace qlag {

/// Exhaustive table representation of a finite groupoid.
///
/// Composition uses the backwards convention: `compose(beta, alpha)` is
/// `beta o alpha`, i.e. alpha is performed first. It is defined iff
/// target(alpha) == source(beta); undefined entries hold -1.
class FiniteGroupoid {
 public:
  static constexpr int kUndefined = -1;

  FiniteGroupoid() = default;

  // Takes the raw tables as given; nothing is checked here. Use
  // validate_groupoid() to inspect the axioms.
  FiniteGroupoid(std::vector<std::string> object_names, std::vector<std::string> morphism_names,
                 std::vector<int> source, std::vector<int> target, std::vector<int> compose_table,
                 std::vector<int> inverse, std::vector<int> unit);

  int num_objects() const { return static_cast<int>(object_names_.size()); }
  int num_morphisms() const { return static_cast<int>(morphism_names_.size()); }

  int source(int alpha) const { return source_[alpha]; }
  int target(int alpha) const { return target_[alpha]; }
  int inverse(int alpha) const { return inverse_[alpha]; }
  int unit(int x) const { return unit_[x]; }
  int compose(int beta, int alpha) const {
    return compose_[static_cast<std::size_t>(beta) * morphism_names_.size() + alpha];
  }
  bool composable(int beta, int alpha) const { return target_[alpha] == source_[beta]; }

  const std::string& object_name(int x) const { return object_names_[x]; }
  const std::string& morphism_name(int alpha) const { return morphism_names_[alpha]; }
  const std::vector<std::string>& object_names() const { return object_names_; }
  const std::vector<std::string>& morphism_names() const { return morphism_names_; }

  int find_morphism(const std::string& name) const;
  int find_object(const std::string& name) const;

  // Set when built by build_pair_groupoid; pair_index(y, x) is the
  // morphism (y, x) : x -> y.
  bool is_pair_groupoid() const { return pair_size_ > 0; }
  int pair_size() const { return pair_size_; }
  int pair_index(int y, int x) const { return y * pair_size_ + x; }

  // Direct table access for tests that corrupt entries on purpose.
  std::vector<int>& mutable_compose_table() { return compose_; }
  std::vector<int>& mutable_inverse_table() { return inverse_; }

  // Sizes agree and every stored index is in range.
  bool tables_well_formed() const;

  bool operator==(const FiniteGroupoid&) const = default;

 private:
  friend FiniteGroupoid build_pair_groupoid(int n);

  std::vector<std::string> object_names_;
  std::vector<std::string> morphism_names_;
  std::vector<int> source_;
  std::vector<int> target_;
  std::vector<int> compose_;
  std::vector<int> inverse_;
  std::vector<int> unit_;
  int pair_size_ = 0;
};

// Cayley table of a finite group: table[g][h] = g * h.
using CayleyTable = std::vector<std::vector<int>>;

FiniteGroupoid build_pair_groupoid(int n);
FiniteGroupoid build_group_groupoid(const CayleyTable& table);
// Objects and morphisms of `b` are appended after those of `a`.
FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);

CayleyTable cyclic_group_table(int n);
// Dihedral group of order 2k: elements r^i (index i) and s r^i (index k + i).
CayleyTable dihedral_group_table(int k);

enum class AxiomKind {
  kTableShape,
  kSourceTarget,
  kComposability,
  kAssociativity,
  kUnit,
  kInverse,
};

const char* to_string(AxiomKind kind);

struct AxiomViolation {
  AxiomKind kind;
  std::vector<int> morphisms;
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(AxiomKind kind) const;
};

ValidationReport validate_groupoid(const FiniteGroupoid& g);

}  // namespace qlag
