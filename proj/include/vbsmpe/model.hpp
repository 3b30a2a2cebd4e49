#pragma once

// The model container shared by both engines, its validator, and the
// objective functions.

#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/dst.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/prob.hpp"

namespace vbsmpe {

enum class ModelKind { bayesian, dst };

inline const char* to_string(ModelKind kind) { return kind == ModelKind::bayesian ? "bayesian" : "dst"; }

/// Immutable after construction. Universes without frame sizes get them from
/// the declared variables. A DST model precomputes one singleton commonality
/// table per universe whenever the universe is structurally sound.
class Model {
 public:
  Model() = default;

  static Model bayesian(std::vector<Variable> variables, std::vector<CptUniverse> cpts) {
    Model m;
    m.kind_ = ModelKind::bayesian;
    m.variables_ = std::move(variables);
    for (auto& u : cpts) m.fill_radices(u.variables, u.radices);
    m.cpts_ = std::move(cpts);
    return m;
  }

  static Model dst(std::vector<Variable> variables, std::vector<MassUniverse> masses) {
    Model m;
    m.kind_ = ModelKind::dst;
    m.variables_ = std::move(variables);
    for (auto& u : masses) {
      m.fill_radices(u.vars, u.radices);
      for (auto& f : u.focal) {
        if (f.set.vars.empty()) f.set.vars = u.vars;
      }
    }
    m.masses_ = std::move(masses);
    m.scorable_ = true;
    for (const auto& u : m.masses_) {
      if (m.structurally_sound(u)) {
        m.commonalities_.push_back(singleton_commonality(u));
      } else {
        m.commonalities_.push_back(CommonalityTable{u.vars, u.radices, {}});
        m.scorable_ = false;
      }
    }
    return m;
  }

  ModelKind kind() const { return kind_; }
  std::span<const Variable> variables() const { return variables_; }
  std::size_t variable_count() const { return variables_.size(); }
  const Variable& variable(VariableId id) const { return variables_.at(id); }
  std::span<const CptUniverse> cpts() const { return cpts_; }
  std::span<const MassUniverse> masses() const { return masses_; }
  std::span<const CommonalityTable> commonalities() const { return commonalities_; }

  /// Universe count for whichever calculus the model uses.
  std::size_t universe_count() const { return kind_ == ModelKind::bayesian ? cpts_.size() : masses_.size(); }

  std::optional<VariableId> find_variable(const std::string& name) const {
    for (const auto& v : variables_) {
      if (v.name == name) return v.id;
    }
    return std::nullopt;
  }

  /// False when some mass universe could not be tabulated (see validate_model).
  bool scorable() const { return kind_ == ModelKind::bayesian || scorable_; }

 private:
  void fill_radices(const std::vector<VariableId>& vars, std::vector<std::size_t>& radices) const {
    if (!radices.empty()) return;
    for (auto v : vars) radices.push_back(v < variables_.size() ? variables_[v].frame_size() : 0);
  }

  bool structurally_sound(const MassUniverse& u) const {
    if (u.vars.empty() || u.radices.size() != u.vars.size()) return false;
    for (std::size_t j = 0; j < u.vars.size(); ++j) {
      if (u.vars[j] >= variables_.size() || u.radices[j] != variables_[u.vars[j]].frame_size()) return false;
    }
    for (const auto& f : u.focal) {
      for (const auto& t : f.set.tuples) {
        if (t.size() != u.vars.size()) return false;
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (t[j] >= u.radices[j]) return false;
        }
      }
    }
    return true;
  }

  ModelKind kind_ = ModelKind::bayesian;
  std::vector<Variable> variables_;
  std::vector<CptUniverse> cpts_;
  std::vector<MassUniverse> masses_;
  std::vector<CommonalityTable> commonalities_;
  bool scorable_ = true;
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void check_universe_vars(const Model& model, const std::vector<VariableId>& vars,
                                const std::vector<std::size_t>& radices, const std::string& where,
                                std::vector<std::string>& out) {
  if (vars.empty()) out.push_back(where + ": no variables");
  std::set<VariableId> seen;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const VariableId v = vars[j];
    if (v >= model.variable_count()) {
      out.push_back(where + ": references undeclared variable id " + std::to_string(v));
      continue;
    }
    if (!seen.insert(v).second) out.push_back(where + ": variable " + model.variable(v).name + " listed twice");
    if (j < radices.size() && radices[j] != model.variable(v).frame_size()) {
      out.push_back(where + ": frame size of " + model.variable(v).name + " does not match its declaration");
    }
  }
  if (radices.size() != vars.size()) out.push_back(where + ": frame size list does not match variable list");
}

}  // namespace detail

/// Every invariant violation in `model`; empty means valid.
inline std::vector<std::string> validate_model(const Model& model) {
  std::vector<std::string> out;
  const auto vars = model.variables();
  std::set<std::string> names;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    const std::string where = "variable " + (v.name.empty() ? std::to_string(i) : v.name);
    if (v.id != i) out.push_back(where + ": id " + std::to_string(v.id) + " breaks the dense 0..n-1 numbering");
    if (v.name.empty()) out.push_back(where + ": empty name");
    if (!names.insert(v.name).second) out.push_back(where + ": duplicate variable name");
    if (v.frame.empty()) out.push_back(where + ": empty frame");
    if (v.frame.size() > kMaxFrameSize) out.push_back(where + ": frame larger than " + std::to_string(kMaxFrameSize));
    std::set<std::string> labels(v.frame.begin(), v.frame.end());
    if (labels.size() != v.frame.size()) out.push_back(where + ": duplicate value labels");
  }

  if (model.kind() == ModelKind::bayesian) {
    if (!model.masses().empty()) out.push_back("bayesian model carries mass universes");
    const auto cpts = model.cpts();
    for (std::size_t i = 0; i < cpts.size(); ++i) {
      const auto& u = cpts[i];
      const std::string where = "cpt[" + std::to_string(i) + "]";
      const std::size_t before = out.size();
      detail::check_universe_vars(model, u.variables, u.radices, where, out);
      if (out.size() != before) continue;
      if (u.valuations.size() != table_size(u.radices)) {
        out.push_back(where + ": table has " + std::to_string(u.valuations.size()) + " entries, expected " +
                      std::to_string(table_size(u.radices)));
        continue;
      }
      bool in_unit = true;
      for (double p : u.valuations) in_unit = in_unit && p >= 0.0 && p <= 1.0;
      if (!in_unit) out.push_back(where + ": entry outside [0, 1]");
      const auto sums = cpt_column_sums(u);
      for (std::size_t c = 0; c < sums.size(); ++c) {
        if (std::abs(sums[c] - 1.0) > 1e-9) {
          out.push_back(where + ": column " + std::to_string(c) + " sums to " + std::to_string(sums[c]));
        }
      }
    }
  } else {
    if (!model.cpts().empty()) out.push_back("dst model carries conditional probability tables");
    const auto masses = model.masses();
    for (std::size_t i = 0; i < masses.size(); ++i) {
      const auto& u = masses[i];
      const std::string where = "mass[" + std::to_string(i) + "]";
      const std::size_t before = out.size();
      detail::check_universe_vars(model, u.vars, u.radices, where, out);
      if (out.size() != before) continue;
      auto more = mass_violations(u, where);
      out.insert(out.end(), more.begin(), more.end());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Objectives

inline void check_configuration(const Configuration& config, const Model& model) {
  if (config.size() != model.variable_count()) {
    raise(ErrorCode::index, "configuration has " + std::to_string(config.size()) + " values, model has " +
                                std::to_string(model.variable_count()) + " variables");
  }
}

/// Natural log of the model objective at `config`; -inf for an exact zero.
inline double log_score(const Configuration& config, const Model& model) {
  check_configuration(config, model);
  if (model.kind() == ModelKind::bayesian) return log_prob_product(config, model.cpts());
  if (!model.scorable()) raise(ErrorCode::validation, "dst model has malformed mass universes");
  return log_commonality_product(config, model.commonalities());
}

inline double score_from_log(double log_value) { return std::isinf(log_value) && log_value < 0 ? 0.0 : std::exp(log_value); }

/// Joint probability of `config` under a Bayesian model.
inline double prob_score(const Configuration& config, const Model& model) {
  if (model.kind() != ModelKind::bayesian) raise(ErrorCode::usage, "prob_score needs a bayesian model");
  return score_from_log(log_score(config, model));
}

/// Product of singleton commonalities at the projections of `config`.
inline double dst_score(const Configuration& config, const Model& model) {
  if (model.kind() != ModelKind::dst) raise(ErrorCode::usage, "dst_score needs a dst model");
  return score_from_log(log_score(config, model));
}

inline double score(const Configuration& config, const Model& model) {
  return score_from_log(log_score(config, model));
}

}  // namespace vbsmpe
