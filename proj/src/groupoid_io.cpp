#include "qlag/groupoid_io.hpp"

#include <fstream>
#include <map>

namespace qlag {

using nlohmann::json;

json groupoid_to_json(const FiniteGroupoid& g) {
  json doc;
  doc["objects"] = g.object_names();
  json morphisms = json::array();
  for (int a = 0; a < g.num_morphisms(); ++a) {
    morphisms.push_back({{"id", g.morphism_name(a)},
                         {"src", g.object_name(g.source(a))},
                         {"tgt", g.object_name(g.target(a))}});
  }
  doc["morphisms"] = std::move(morphisms);
  json compose = json::array();
  for (int b = 0; b < g.num_morphisms(); ++b)
    for (int a = 0; a < g.num_morphisms(); ++a) {
      const int c = g.compose(b, a);
      if (c != FiniteGroupoid::kUndefined)
        compose.push_back({g.morphism_name(b), g.morphism_name(a), g.morphism_name(c)});
    }
  doc["compose"] = std::move(compose);
  json inverse = json::array();
  for (int a = 0; a < g.num_morphisms(); ++a)
    inverse.push_back({g.morphism_name(a), g.morphism_name(g.inverse(a))});
  doc["inverse"] = std::move(inverse);
  json units = json::array();
  for (int x = 0; x < g.num_objects(); ++x)
    units.push_back({g.object_name(x), g.morphism_name(g.unit(x))});
  doc["units"] = std::move(units);
  return doc;
}

namespace {

int lookup(const std::map<std::string, int>& index, const std::string& key, const char* what) {
  auto it = index.find(key);
  if (it == index.end()) throw InvalidArgument(std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

}  // namespace

FiniteGroupoid groupoid_from_json(const json& doc) {
  try {
    std::vector<std::string> objects = doc.at("objects").get<std::vector<std::string>>();
    std::map<std::string, int> obj_index, mor_index;
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (!obj_index.emplace(objects[i], static_cast<int>(i)).second)
        throw InvalidArgument("duplicate object '" + objects[i] + "'");

    std::vector<std::string> names;
    std::vector<int> source, target;
    for (const auto& m : doc.at("morphisms")) {
      const auto id = m.at("id").get<std::string>();
      if (!mor_index.emplace(id, static_cast<int>(names.size())).second)
        throw InvalidArgument("duplicate morphism '" + id + "'");
      names.push_back(id);
      source.push_back(lookup(obj_index, m.at("src").get<std::string>(), "object"));
      target.push_back(lookup(obj_index, m.at("tgt").get<std::string>(), "object"));
    }
    const std::size_t k = names.size();
    std::vector<int> compose(k * k, FiniteGroupoid::kUndefined);
    for (const auto& row : doc.at("compose")) {
      if (row.size() != 3) throw InvalidArgument("compose entries must be [beta, alpha, result]");
      const int b = lookup(mor_index, row[0].get<std::string>(), "morphism");
      const int a = lookup(mor_index, row[1].get<std::string>(), "morphism");
      compose[static_cast<std::size_t>(b) * k + a] =
          lookup(mor_index, row[2].get<std::string>(), "morphism");
    }
    std::vector<int> inverse(k, -1);
    for (const auto& row : doc.at("inverse")) {
      if (row.size() != 2) throw InvalidArgument("inverse entries must be [alpha, alpha^-1]");
      inverse[lookup(mor_index, row[0].get<std::string>(), "morphism")] =
          lookup(mor_index, row[1].get<std::string>(), "morphism");
    }
    std::vector<int> unit(objects.size(), -1);
    if (doc.contains("units")) {
      for (const auto& row : doc.at("units")) {
        if (row.size() != 2) throw InvalidArgument("unit entries must be [object, morphism]");
        unit[lookup(obj_index, row[0].get<std::string>(), "object")] =
            lookup(mor_index, row[1].get<std::string>(), "morphism");
      }
    } else {
      for (std::size_t e = 0; e < k; ++e) {
        if (source[e] == target[e] && compose[e * k + e] == static_cast<int>(e))
          unit[source[e]] = static_cast<int>(e);
      }
    }
    return FiniteGroupoid(std::move(objects), std::move(names), std::move(source),
                          std::move(target), std::move(compose), std::move(inverse),
                          std::move(unit));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed groupoid document: ") + e.what());
  }
}

json function_to_json(const FiniteGroupoid& g, const CVec& f) {
  detail::require_on(g, f, "function");
  json doc = json::object();
  for (int a = 0; a < g.num_morphisms(); ++a)
    doc[g.morphism_name(a)] = {f[a].real(), f[a].imag()};
  return doc;
}

CVec function_from_json(const FiniteGroupoid& g, const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("function document must be an object");
  CVec f = CVec::Zero(g.num_morphisms());
  for (const auto& [key, value] : doc.items()) {
    const int a = g.find_morphism(key);
    if (a == FiniteGroupoid::kUndefined) throw InvalidArgument("unknown morphism '" + key + "'");
    if (value.is_number()) {
      f[a] = value.get<double>();
    } else if (value.is_array() && value.size() == 2) {
      f[a] = Complex(value[0].get<double>(), value[1].get<double>());
    } else {
      throw InvalidArgument("function value for '" + key + "' must be [re, im]");
    }
  }
  return f;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace qlag
