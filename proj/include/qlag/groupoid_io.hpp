#pragma once

#include <string>

#include "json.hpp"
#include "qlag/convolution.hpp"

namespace qlag {

// Document layout:
//   { "objects": [ids],
//     "morphisms": [{"id", "src", "tgt"}],
//     "compose": [[beta, alpha, beta o alpha]],
//     "inverse": [[alpha, alpha^-1]],
//     "units": [[object, morphism]] }          (optional)
// Missing compose entries are undefined products. Units, when absent, are the
// loops e at x with e o e = e.
nlohmann::json groupoid_to_json(const FiniteGroupoid& g);
FiniteGroupoid groupoid_from_json(const nlohmann::json& doc);

// Functions are {morphism id: [re, im]}; morphisms not listed map to zero.
nlohmann::json function_to_json(const FiniteGroupoid& g, const CVec& f);
CVec function_from_json(const FiniteGroupoid& g, const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);

}  // namespace qlag
