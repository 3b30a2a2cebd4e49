#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vbsmpe/vbsmpe.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(VBSMPE_DATA_DIR) + "/" + name; }

inline vbsmpe::Model table1_model() { return vbsmpe::load_model(data_path("tables12.json")); }

/// "a1,b1,c2" -> ordinals, resolving each label against variables in order.
inline vbsmpe::Configuration config_of(const vbsmpe::Model& model, const std::string& labels) {
  std::vector<vbsmpe::Ordinal> values;
  std::stringstream in(labels);
  std::string label;
  std::size_t i = 0;
  while (std::getline(in, label, ',')) {
    const auto& frame = model.variable(i++).frame;
    for (std::size_t k = 0; k < frame.size(); ++k) {
      if (frame[k] == label) values.push_back(static_cast<vbsmpe::Ordinal>(k));
    }
  }
  return vbsmpe::Configuration(values);
}

inline vbsmpe::Evidence evidence_hgja(const vbsmpe::Model& model) {
  return vbsmpe::load_evidence(data_path("evidence_hgja.json"), model);
}

/// Singleton commonalities transcribed from the published reference table,
/// keyed by universe number (1-based) then tuple labels in the universe's
/// variable order.
inline const std::vector<std::pair<int, std::map<std::string, double>>>& reference_qtables() {
  static const std::vector<std::pair<int, std::map<std::string, double>>> tables = {
      {1, {{"b1,a1", 0.90}, {"b1,a2", 0.55}, {"b1,a3", 0.25}, {"b2,a1", 0.10}, {"b2,a2", 0.45}, {"b2,a3", 0.70}}},
      {2, {{"a1", 0.80}, {"a2", 0.40}, {"a3", 0.20}}},
      {3, {{"c1,b1", 0.30}, {"c1,b2", 0.90}, {"c2,b1", 0.70}, {"c2,b2", 0.10}}},
      {4, {{"f1,b1", 0.40}, {"f1,b2", 0.18}, {"f2,b1", 0.60}, {"f2,b2", 0.82}}},
      {5, {{"e1,c1,d1", 0.55}, {"e1,c1,d2", 0.35}, {"e1,c2,d1", 0.70}, {"e1,c2,d2", 0.60},
           {"e2,c1,d1", 0.45}, {"e2,c1,d2", 0.65}, {"e2,c2,d1", 0.30}, {"e2,c2,d2", 0.40}}},
      {6, {{"i1,f1,j1", 0.80}, {"i1,f1,j2", 0.40}, {"i1,f2,j1", 0.90}, {"i1,f2,j2", 0.70},
           {"i2,f1,j1", 0.20}, {"i2,f1,j2", 0.60}, {"i2,f2,j1", 0.10}, {"i2,f2,j2", 0.30}}},
      {7, {{"g1,f1", 0.40}, {"g1,f2", 0.68}, {"g2,f1", 0.60}, {"g2,f2", 0.32}}},
      {8, {{"j1", 0.46}, {"j2", 0.54}}},
      {9, {{"d1", 0.40}, {"d2", 0.60}}},
      {10, {{"h1,g1", 0.70}, {"h1,g2", 0.78}, {"h2,g1", 0.30}, {"h2,g2", 0.22}}},
  };
  return tables;
}

/// Sub-model of the fixture keeping only the listed universes (0-based).
inline vbsmpe::Model sub_model(const vbsmpe::Model& model, const std::vector<std::size_t>& keep) {
  std::vector<vbsmpe::MassUniverse> masses;
  for (auto i : keep) masses.push_back(model.masses()[i]);
  std::vector<vbsmpe::Variable> vars(model.variables().begin(), model.variables().end());
  return vbsmpe::Model::dst(std::move(vars), std::move(masses));
}

}  // namespace testing_support
