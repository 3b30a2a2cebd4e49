#pragma once

// JSON model, evidence and result formats.
//
// Model file:
//   { "kind": "bayesian" | "dst",
//     "variables": [ {"name": "A", "values": ["a1", "a2"]}, ... ],
//     "cpts":   [ {"child": "A", "parents": ["B"], "table": [...]}, ... ],
//     "masses": [ {"vars": ["B", "A"],
//                  "focal": [ {"tuples": [["b1", "a1"]], "mass": 0.2}, ... ]}, ... ] }
//
// CPT tables are flat in lookup order: child slowest, last parent fastest.
// Evidence file: { "A": ["a1", "a3"], "H": ["h1"] }.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbsmpe/core.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/ga.hpp"
#include "vbsmpe/model.hpp"
#include "vbsmpe/oracle.hpp"

namespace vbsmpe {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& field, const std::string& what) {
  raise(ErrorCode::parse, field + ": " + what);
}

inline const json& member(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object()) parse_fail(field, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(field, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) parse_fail(field, "expected a string");
  return j.get<std::string>();
}

inline double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) parse_fail(field, "expected a number");
  return j.get<double>();
}

inline const json& as_array(const json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array");
  return j;
}

inline VariableId resolve_variable(const std::vector<Variable>& vars, const std::string& name,
                                   const std::string& field) {
  for (const auto& v : vars) {
    if (v.name == name) return v.id;
  }
  parse_fail(field, "unknown variable \"" + name + "\"");
}

inline Ordinal resolve_label(const Variable& var, const std::string& label, const std::string& field) {
  for (std::size_t i = 0; i < var.frame.size(); ++i) {
    if (var.frame[i] == label) return static_cast<Ordinal>(i);
  }
  parse_fail(field, "unknown value \"" + label + "\" for variable " + var.name);
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::parse, source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model

/// Builds a Model from its JSON form. Unknown names and labels are parse
/// errors; semantic problems (normalization, table sizes) are left for
/// validate_model. Zero-mass focal sets are dropped.
inline Model model_from_json(const json& doc) {
  using namespace detail;
  const std::string kind = as_string(member(doc, "kind", "model"), "kind");
  if (kind != "bayesian" && kind != "dst") parse_fail("kind", "expected \"bayesian\" or \"dst\"");

  std::vector<Variable> vars;
  const auto& jvars = as_array(member(doc, "variables", "model"), "variables");
  for (std::size_t i = 0; i < jvars.size(); ++i) {
    const std::string field = "variables[" + std::to_string(i) + "]";
    Variable v;
    v.id = i;
    v.name = as_string(member(jvars[i], "name", field), field + ".name");
    const auto& jvalues = as_array(member(jvars[i], "values", field), field + ".values");
    for (std::size_t k = 0; k < jvalues.size(); ++k) {
      v.frame.push_back(as_string(jvalues[k], field + ".values[" + std::to_string(k) + "]"));
    }
    vars.push_back(std::move(v));
  }

  if (kind == "bayesian") {
    std::vector<CptUniverse> cpts;
    const auto& jcpts = as_array(member(doc, "cpts", "model"), "cpts");
    for (std::size_t i = 0; i < jcpts.size(); ++i) {
      const std::string field = "cpts[" + std::to_string(i) + "]";
      CptUniverse u;
      u.variables.push_back(resolve_variable(vars, as_string(member(jcpts[i], "child", field), field + ".child"),
                                             field + ".child"));
      if (jcpts[i].contains("parents")) {
        const auto& jparents = as_array(jcpts[i]["parents"], field + ".parents");
        for (std::size_t k = 0; k < jparents.size(); ++k) {
          const std::string pf = field + ".parents[" + std::to_string(k) + "]";
          u.variables.push_back(resolve_variable(vars, as_string(jparents[k], pf), pf));
        }
      }
      const auto& jtable = as_array(member(jcpts[i], "table", field), field + ".table");
      for (std::size_t k = 0; k < jtable.size(); ++k) {
        u.valuations.push_back(as_number(jtable[k], field + ".table[" + std::to_string(k) + "]"));
      }
      cpts.push_back(std::move(u));
    }
    return Model::bayesian(std::move(vars), std::move(cpts));
  }

  std::vector<MassUniverse> masses;
  const auto& jmasses = as_array(member(doc, "masses", "model"), "masses");
  for (std::size_t i = 0; i < jmasses.size(); ++i) {
    const std::string field = "masses[" + std::to_string(i) + "]";
    MassUniverse u;
    const auto& juvars = as_array(member(jmasses[i], "vars", field), field + ".vars");
    for (std::size_t k = 0; k < juvars.size(); ++k) {
      const std::string vf = field + ".vars[" + std::to_string(k) + "]";
      u.vars.push_back(resolve_variable(vars, as_string(juvars[k], vf), vf));
    }
    const auto& jfocal = as_array(member(jmasses[i], "focal", field), field + ".focal");
    for (std::size_t f = 0; f < jfocal.size(); ++f) {
      const std::string ff = field + ".focal[" + std::to_string(f) + "]";
      const double mass = as_number(member(jfocal[f], "mass", ff), ff + ".mass");
      std::vector<Tuple> tuples;
      const auto& jtuples = as_array(member(jfocal[f], "tuples", ff), ff + ".tuples");
      for (std::size_t t = 0; t < jtuples.size(); ++t) {
        const std::string tf = ff + ".tuples[" + std::to_string(t) + "]";
        const auto& jt = as_array(jtuples[t], tf);
        if (jt.size() != u.vars.size()) parse_fail(tf, "tuple length does not match vars");
        Tuple tuple;
        for (std::size_t k = 0; k < jt.size(); ++k) {
          tuple.push_back(resolve_label(vars[u.vars[k]], as_string(jt[k], tf), tf));
        }
        tuples.push_back(std::move(tuple));
      }
      if (mass == 0.0) continue;
      u.focal.push_back({FocalSet::make(u.vars, std::move(tuples)), mass});
    }
    masses.push_back(std::move(u));
  }
  return Model::dst(std::move(vars), std::move(masses));
}

inline Model parse_model(const std::string& text, const std::string& source = "model") {
  return model_from_json(detail::parse_text(text, source));
}

inline Model load_model(const std::string& path) {
  try {
    return parse_model(detail::read_file(path), path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse && std::string(e.what()).rfind(path, 0) != 0) {
      raise(ErrorCode::parse, path + ": " + e.what());
    }
    throw;
  }
}

inline ordered_json model_to_json(const Model& model) {
  ordered_json doc;
  doc["kind"] = to_string(model.kind());
  auto& jvars = doc["variables"] = ordered_json::array();
  for (const auto& v : model.variables()) jvars.push_back({{"name", v.name}, {"values", v.frame}});
  auto name_of = [&](VariableId id) { return model.variable(id).name; };
  if (model.kind() == ModelKind::bayesian) {
    auto& jcpts = doc["cpts"] = ordered_json::array();
    for (const auto& u : model.cpts()) {
      ordered_json c;
      c["child"] = name_of(u.variables.front());
      c["parents"] = ordered_json::array();
      for (std::size_t j = 1; j < u.variables.size(); ++j) c["parents"].push_back(name_of(u.variables[j]));
      c["table"] = u.valuations;
      jcpts.push_back(std::move(c));
    }
  } else {
    auto& jmasses = doc["masses"] = ordered_json::array();
    for (const auto& u : model.masses()) {
      ordered_json m;
      m["vars"] = ordered_json::array();
      for (auto v : u.vars) m["vars"].push_back(name_of(v));
      m["focal"] = ordered_json::array();
      for (const auto& f : u.focal) {
        ordered_json tuples = ordered_json::array();
        for (const auto& t : f.set.tuples) {
          ordered_json jt = ordered_json::array();
          for (std::size_t k = 0; k < t.size(); ++k) jt.push_back(model.variable(u.vars[k]).frame[t[k]]);
          tuples.push_back(std::move(jt));
        }
        m["focal"].push_back({{"tuples", std::move(tuples)}, {"mass", f.mass}});
      }
      jmasses.push_back(std::move(m));
    }
  }
  return doc;
}

/// FNV-1a 64 over the canonical serialization, as 16 hex digits.
inline std::string model_hash(const Model& model) {
  const std::string text = model_to_json(model).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Evidence

inline Evidence evidence_from_json(const json& doc, const Model& model) {
  using namespace detail;
  if (!doc.is_object()) parse_fail("evidence", "expected an object mapping variable names to value lists");
  Evidence ev;
  const std::vector<Variable> vars(model.variables().begin(), model.variables().end());
  for (const auto& [name, jvalues] : doc.items()) {
    const std::string field = "evidence." + name;
    const VariableId id = resolve_variable(vars, name, field);
    as_array(jvalues, field);
    if (jvalues.empty()) parse_fail(field, "empty list of allowed values");
    std::vector<Ordinal> values;
    for (const auto& jv : jvalues) values.push_back(resolve_label(vars[id], as_string(jv, field), field));
    ev.restrict(id, std::move(values));
  }
  return ev;
}

inline Evidence parse_evidence(const std::string& text, const Model& model, const std::string& source = "evidence") {
  return evidence_from_json(detail::parse_text(text, source), model);
}

inline Evidence load_evidence(const std::string& path, const Model& model) {
  return parse_evidence(detail::read_file(path), model, path);
}

inline ordered_json evidence_to_json(const Evidence& ev, const Model& model) {
  ordered_json doc = ordered_json::object();
  for (const auto& [var, values] : ev.allowed()) {
    ordered_json labels = ordered_json::array();
    for (auto v : values) labels.push_back(model.variable(var).frame[v]);
    doc[model.variable(var).name] = std::move(labels);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Results

enum class OutputFormat { json, text };

inline ordered_json params_to_json(const GaParams& p) {
  ordered_json j;
  j["population_size"] = p.population_size;
  j["p_m"] = p.p_m;
  j["p_c"] = p.p_c;
  j["max_generations"] = p.max_generations;
  j["stagnation_window"] = p.stagnation_window;
  j["elitism"] = p.elitism;
  if (const auto* t = std::get_if<Tournament>(&p.selection)) {
    j["selection"] = "tournament";
    j["tournament_size"] = t->size;
  } else {
    j["selection"] = "roulette";
  }
  j["seed"] = p.seed;
  return j;
}

inline std::string config_to_string(const Configuration& c, const Model& model) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += model.variable(i).frame[c[i]];
  }
  return out;
}

/// Solver-independent result record. `params` is null for oracle results.
struct ResultFile {
  std::string solver;  // "ga" or "oracle"
  std::string model_hash;
  ordered_json evidence;
  ordered_json params;
  std::size_t k = 0;
  std::vector<RankedExplanation> explanations;
  std::vector<std::string> warnings;
  std::uint64_t total_enumerated = 0;
};

inline ResultFile make_result(const Model& model, const Evidence& ev, const GaParams& params, std::size_t k,
                              const KMpeResult& r) {
  return ResultFile{"ga", model_hash(model), evidence_to_json(ev, model), params_to_json(params), k,
                    r.explanations, r.warnings, 0};
}

inline ResultFile make_result(const Model& model, const Evidence& ev, std::size_t k, const OracleResult& r) {
  return ResultFile{"oracle", model_hash(model), evidence_to_json(ev, model), nullptr, k,
                    r.top, {}, r.total_enumerated};
}

inline ordered_json result_to_json(const ResultFile& r, const Model& model) {
  ordered_json doc;
  ordered_json query;
  query["solver"] = r.solver;
  query["model_hash"] = r.model_hash;
  query["evidence"] = r.evidence;
  query["k"] = r.k;
  if (!r.params.is_null()) {
    query["params"] = r.params;
    query["seed"] = r.params["seed"];
  } else {
    query["total_enumerated"] = r.total_enumerated;
  }
  doc["query"] = std::move(query);
  auto& rows = doc["explanations"] = ordered_json::array();
  for (const auto& e : r.explanations) {
    ordered_json row;
    row["rank"] = e.rank;
    ordered_json assignment = ordered_json::object();
    for (std::size_t i = 0; i < e.config.size(); ++i) {
      assignment[model.variable(i).name] = model.variable(i).frame[e.config[i]];
    }
    row["assignment"] = std::move(assignment);
    row["score"] = e.score;
    row["log_score"] = std::isinf(e.log_score) ? ordered_json(nullptr) : ordered_json(e.log_score);
    row["generations_used"] = e.generations_used;
    rows.push_back(std::move(row));
  }
  doc["warnings"] = r.warnings;
  return doc;
}

inline std::string render_result(const ResultFile& r, const Model& model, OutputFormat format) {
  if (format == OutputFormat::json) return result_to_json(r, model).dump(2) + "\n";
  std::ostringstream out;
  out << "solver: " << r.solver << "\nmodel: " << r.model_hash << "\nevidence: " << r.evidence.dump()
      << "\nk: " << r.k << "\n";
  if (!r.params.is_null()) out << "params: " << r.params.dump() << "\n";
  else out << "enumerated: " << r.total_enumerated << "\n";
  for (const auto& e : r.explanations) {
    out << "#" << e.rank << "  " << config_to_string(e.config, model) << "  score=" << std::setprecision(10)
        << e.score << "  log=" << e.log_score << "  generations=" << e.generations_used << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Commonality tables

inline ordered_json qtables_to_json(const Model& model) {
  if (model.kind() != ModelKind::dst) raise(ErrorCode::usage, "commonality tables need a dst model");
  ordered_json doc = ordered_json::array();
  const auto tables = model.commonalities();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    ordered_json jt;
    jt["universe"] = i + 1;
    jt["vars"] = ordered_json::array();
    for (auto v : t.vars) jt["vars"].push_back(model.variable(v).name);
    jt["rows"] = ordered_json::array();
    for (std::size_t idx = 0; idx < t.q.size(); ++idx) {
      const Tuple tuple = tuple_at(idx, t.radices);
      ordered_json labels = ordered_json::array();
      for (std::size_t k = 0; k < tuple.size(); ++k) labels.push_back(model.variable(t.vars[k]).frame[tuple[k]]);
      jt["rows"].push_back({{"tuple", std::move(labels)}, {"q", t.q[idx]}});
    }
    doc.push_back(std::move(jt));
  }
  return doc;
}

inline std::string render_qtables(const Model& model, OutputFormat format) {
  const auto doc = qtables_to_json(model);
  if (format == OutputFormat::json) return doc.dump(2) + "\n";
  std::ostringstream out;
  out << std::fixed << std::setprecision(8);
  for (const auto& jt : doc) {
    out << "Q_" << jt["universe"].get<std::size_t>() << " in vars ";
    for (std::size_t k = 0; k < jt["vars"].size(); ++k) out << (k ? "," : "") << jt["vars"][k].get<std::string>();
    out << "\n";
    for (const auto& row : jt["rows"]) {
      out << "  {(";
      for (std::size_t k = 0; k < row["tuple"].size(); ++k) {
        out << (k ? "," : "") << row["tuple"][k].get<std::string>();
      }
      out << ")}\t" << row["q"].get<double>() << "\n";
    }
  }
  return out.str();
}

}  // namespace vbsmpe
