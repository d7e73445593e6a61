#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "valdist/valdist.hpp"

namespace testutil {

using namespace valdist;

/// One-off handle from a JSON catalog entry.
inline FunctionHandle from_entry(const nlohmann::json& e) {
  return Catalog::from_json(nlohmann::json::array({e})).get(e.at("name").get<std::string>());
}

inline FunctionHandle rational(const std::string& name, const nlohmann::json& zeros, const nlohmann::json& poles,
                               const std::string& domain = "plane", double scale = 1.0) {
  return from_entry({{"name", name},
                     {"expression-tag", "rational"},
                     {"domain", domain},
                     {"params", {{"zeros", zeros}, {"poles", poles}, {"scale_re", scale}}}});
}

inline FunctionHandle constant(double c, const std::string& domain = "plane") {
  return from_entry({{"name", "c"}, {"expression-tag", "constant"}, {"domain", domain}, {"params", {{"re", c}}}});
}

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(VALDIST_TEST_DATA "/oracle.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline std::vector<double> geom(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

/// Relative distance between two Values, computed in log form.
inline double rel_diff(const Value& a, const Value& b) {
  if (b.is_zero()) return a.is_zero() ? 0.0 : inf;
  const cplx ratio = (a / b).to_complex();
  return std::abs(ratio - 1.0);
}

}  // namespace testutil
