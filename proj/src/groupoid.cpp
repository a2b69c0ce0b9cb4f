#include "qlag/groupoid.hpp"

#include <algorithm>
#include <sstream>

namespace qlag {

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> object_names,
                               std::vector<std::string> morphism_names, std::vector<int> source,
                               std::vector<int> target, std::vector<int> compose_table,
                               std::vector<int> inverse, std::vector<int> unit)
    : object_names_(std::move(object_names)),
      morphism_names_(std::move(morphism_names)),
      source_(std::move(source)),
      target_(std::move(target)),
      compose_(std::move(compose_table)),
      inverse_(std::move(inverse)),
      unit_(std::move(unit)) {}

int FiniteGroupoid::find_morphism(const std::string& name) const {
  auto it = std::find(morphism_names_.begin(), morphism_names_.end(), name);
  return it == morphism_names_.end() ? kUndefined
                                     : static_cast<int>(it - morphism_names_.begin());
}

int FiniteGroupoid::find_object(const std::string& name) const {
  auto it = std::find(object_names_.begin(), object_names_.end(), name);
  return it == object_names_.end() ? kUndefined : static_cast<int>(it - object_names_.begin());
}

FiniteGroupoid build_pair_groupoid(int n) {
  if (n < 1) throw InvalidArgument("pair groupoid needs at least one object");
  const int k = n * n;
  std::vector<std::string> objects(n), morphisms(k);
  std::vector<int> source(k), target(k), inverse(k), unit(n);
  std::vector<int> compose(static_cast<std::size_t>(k) * k, FiniteGroupoid::kUndefined);
  for (int x = 0; x < n; ++x) {
    objects[x] = std::to_string(x);
    unit[x] = x * n + x;
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int a = y * n + x;
      morphisms[a] = "(" + std::to_string(y) + "," + std::to_string(x) + ")";
      source[a] = x;
      target[a] = y;
      inverse[a] = x * n + y;
    }
  }
  // (z,y) o (y,x) = (z,x)
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        compose[static_cast<std::size_t>(z * n + y) * k + (y * n + x)] = z * n + x;

  FiniteGroupoid g(std::move(objects), std::move(morphisms), std::move(source), std::move(target),
                   std::move(compose), std::move(inverse), std::move(unit));
  g.pair_size_ = n;
  return g;
}

namespace {

void check_group_table(const CayleyTable& t) {
  const int n = static_cast<int>(t.size());
  if (n == 0) throw InvalidArgument("group table is empty");
  for (const auto& row : t) {
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw InvalidArgument("group table entry out of range");
  }
  int e = -1;
  for (int c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = t[c][g] == g && t[g][c] == g;
    if (ok) e = c;
  }
  if (e < 0) throw InvalidArgument("group table has no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]]) {
          std::ostringstream os;
          os << "group table is not associative at (" << a << "," << b << "," << c << ")";
          throw InvalidArgument(os.str());
        }
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b) has_inverse = t[a][b] == e && t[b][a] == e;
    if (!has_inverse) throw InvalidArgument("group element " + std::to_string(a) + " has no inverse");
  }
}

}  // namespace

FiniteGroupoid build_group_groupoid(const CayleyTable& table) {
  check_group_table(table);
  const int n = static_cast<int>(table.size());
  int e = 0;
  while (!(table[e][0] == 0 && table[0][e] == 0 && table[e][e] == e)) ++e;
  std::vector<std::string> morphisms(n);
  std::vector<int> source(n, 0), target(n, 0), inverse(n);
  std::vector<int> compose(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    morphisms[a] = "g" + std::to_string(a);
    for (int b = 0; b < n; ++b) {
      compose[static_cast<std::size_t>(a) * n + b] = table[a][b];
      if (table[a][b] == e) inverse[b] = a;
    }
  }
  return FiniteGroupoid({"*"}, std::move(morphisms), std::move(source), std::move(target),
                        std::move(compose), std::move(inverse), {e});
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  const int na = a.num_objects(), nb = b.num_objects();
  const int ka = a.num_morphisms(), kb = b.num_morphisms();
  const int k = ka + kb;
  std::vector<std::string> objects, morphisms;
  std::vector<int> source(k), target(k), inverse(k), unit(na + nb);
  std::vector<int> compose(static_cast<std::size_t>(k) * k, FiniteGroupoid::kUndefined);
  for (int x = 0; x < na; ++x) {
    objects.push_back("a." + a.object_name(x));
    unit[x] = a.unit(x);
  }
  for (int x = 0; x < nb; ++x) {
    objects.push_back("b." + b.object_name(x));
    unit[na + x] = ka + b.unit(x);
  }
  for (int m = 0; m < ka; ++m) {
    morphisms.push_back("a." + a.morphism_name(m));
    source[m] = a.source(m);
    target[m] = a.target(m);
    inverse[m] = a.inverse(m);
    for (int n = 0; n < ka; ++n) compose[static_cast<std::size_t>(m) * k + n] = a.compose(m, n);
  }
  for (int m = 0; m < kb; ++m) {
    morphisms.push_back("b." + b.morphism_name(m));
    source[ka + m] = na + b.source(m);
    target[ka + m] = na + b.target(m);
    inverse[ka + m] = ka + b.inverse(m);
    for (int n = 0; n < kb; ++n) {
      const int c = b.compose(m, n);
      compose[static_cast<std::size_t>(ka + m) * k + (ka + n)] =
          c == FiniteGroupoid::kUndefined ? c : ka + c;
    }
  }
  return FiniteGroupoid(std::move(objects), std::move(morphisms), std::move(source),
                        std::move(target), std::move(compose), std::move(inverse), std::move(unit));
}

CayleyTable cyclic_group_table(int n) {
  if (n < 1) throw InvalidArgument("cyclic group order must be positive");
  CayleyTable t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

CayleyTable dihedral_group_table(int k) {
  if (k < 1) throw InvalidArgument("dihedral group parameter must be positive");
  // r^i s^j with s r = r^{-1} s; index i + k*j.
  const int n = 2 * k;
  CayleyTable t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    const int i1 = a % k, j1 = a / k;
    for (int b = 0; b < n; ++b) {
      const int i2 = b % k, j2 = b / k;
      // r^i1 s^j1 r^i2 s^j2 = r^(i1 + (-1)^j1 i2) s^(j1 + j2)
      const int i = ((i1 + (j1 ? -i2 : i2)) % k + k) % k;
      const int j = (j1 + j2) % 2;
      t[a][b] = i + k * j;
    }
  }
  return t;
}

bool FiniteGroupoid::tables_well_formed() const {
  const auto n = object_names_.size();
  const auto k = morphism_names_.size();
  if (n == 0 || source_.size() != k || target_.size() != k || inverse_.size() != k ||
      unit_.size() != n || compose_.size() != k * k)
    return false;
  auto in = [](int v, std::size_t hi) { return v >= 0 && static_cast<std::size_t>(v) < hi; };
  for (std::size_t a = 0; a < k; ++a)
    if (!in(source_[a], n) || !in(target_[a], n) || !in(inverse_[a], k)) return false;
  for (int e : unit_)
    if (!in(e, k)) return false;
  for (int c : compose_)
    if (c != kUndefined && !in(c, k)) return false;
  return true;
}

const char* to_string(AxiomKind kind) {
  switch (kind) {
    case AxiomKind::kTableShape: return "table-shape";
    case AxiomKind::kSourceTarget: return "source-target";
    case AxiomKind::kComposability: return "composability";
    case AxiomKind::kAssociativity: return "associativity";
    case AxiomKind::kUnit: return "unit";
    case AxiomKind::kInverse: return "inverse";
  }
  return "unknown";
}

std::size_t ValidationReport::count(AxiomKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [kind](const auto& v) { return v.kind == kind; }));
}

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport report;
  auto add = [&report](AxiomKind kind, std::vector<int> ms, std::string detail) {
    report.violations.push_back({kind, std::move(ms), std::move(detail)});
  };
  const int n = g.num_objects();
  const int k = g.num_morphisms();

  // Shape problems make every later check meaningless, so stop at them.
  if (!g.tables_well_formed()) {
    add(AxiomKind::kTableShape, {}, "tables are not total on their declared domains");
    return report;
  }

  for (int b = 0; b < k; ++b) {
    for (int a = 0; a < k; ++a) {
      const int c = g.compose(b, a);
      const bool defined = c != FiniteGroupoid::kUndefined;
      if (defined != g.composable(b, a)) {
        add(AxiomKind::kComposability, {b, a},
            g.morphism_name(b) + " o " + g.morphism_name(a) +
                (defined ? " is defined but target/source differ"
                         : " is undefined but target/source match"));
        continue;
      }
      if (defined && (g.source(c) != g.source(a) || g.target(c) != g.target(b))) {
        add(AxiomKind::kSourceTarget, {b, a, c},
            g.morphism_name(b) + " o " + g.morphism_name(a) + " = " + g.morphism_name(c) +
                " has wrong source or target");
      }
    }
  }

  for (int x = 0; x < n; ++x) {
    const int e = g.unit(x);
    if (g.source(e) != x || g.target(e) != x)
      add(AxiomKind::kUnit, {e}, "unit of object " + g.object_name(x) + " is not a loop at it");
  }
  for (int a = 0; a < k; ++a) {
    const int left = g.unit(g.target(a));
    const int right = g.unit(g.source(a));
    if (g.compose(left, a) != a || g.compose(a, right) != a)
      add(AxiomKind::kUnit, {a}, "units do not act as identity on " + g.morphism_name(a));
    const int inv = g.inverse(a);
    if (g.compose(inv, a) != right || g.compose(a, inv) != left)
      add(AxiomKind::kInverse, {a, inv},
          "inverse laws fail for " + g.morphism_name(a) + " and " + g.morphism_name(inv));
  }

  for (int c = 0; c < k; ++c) {
    for (int b = 0; b < k; ++b) {
      const int cb = g.compose(c, b);
      if (cb == FiniteGroupoid::kUndefined) continue;
      for (int a = 0; a < k; ++a) {
        const int ba = g.compose(b, a);
        if (ba == FiniteGroupoid::kUndefined) continue;
        const int lhs = g.compose(c, ba);
        const int rhs = g.compose(cb, a);
        if (lhs != rhs) {
          add(AxiomKind::kAssociativity, {c, b, a},
              "(" + g.morphism_name(c) + " o " + g.morphism_name(b) + ") o " + g.morphism_name(a) +
                  " differs from " + g.morphism_name(c) + " o (" + g.morphism_name(b) + " o " +
                  g.morphism_name(a) + ")");
        }
      }
    }
  }
  return report;
}

}  // namespace qlag
