#pragma once

// Variables, configurations and evidence shared by both calculi.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vbsmpe {

using VariableId = std::size_t;
using Ordinal = std::uint16_t;

/// Largest frame a variable may have; ordinals must fit in `Ordinal`.
inline constexpr std::size_t kMaxFrameSize = std::size_t{1} << 16;

struct Variable {
  VariableId id = 0;
  std::string name;
  std::vector<std::string> frame;

  std::size_t frame_size() const { return frame.size(); }
};

/// A total assignment: one value ordinal per variable, indexed by variable id.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Ordinal> values) : values_(std::move(values)) {}
  Configuration(std::initializer_list<Ordinal> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  Ordinal operator[](VariableId v) const { return values_[v]; }
  Ordinal& operator[](VariableId v) { return values_[v]; }

  std::span<const Ordinal> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Ordinal> values_;
};

/// Per-variable allowed value subsets. Unlisted variables are unconstrained.
/// Subsets are kept sorted and free of duplicates.
class Evidence {
 public:
  Evidence() = default;
  Evidence(std::initializer_list<std::pair<const VariableId, std::vector<Ordinal>>> items) {
    for (const auto& [var, values] : items) restrict(var, values);
  }

  void restrict(VariableId var, std::vector<Ordinal> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    allowed_[var] = std::move(values);
  }

  bool empty() const { return allowed_.empty(); }
  const std::map<VariableId, std::vector<Ordinal>>& allowed() const { return allowed_; }

  const std::vector<Ordinal>* find(VariableId var) const {
    auto it = allowed_.find(var);
    return it == allowed_.end() ? nullptr : &it->second;
  }

  bool allows(VariableId var, Ordinal value) const {
    const auto* values = find(var);
    return values == nullptr || std::binary_search(values->begin(), values->end(), value);
  }

  friend bool operator==(const Evidence&, const Evidence&) = default;

 private:
  std::map<VariableId, std::vector<Ordinal>> allowed_;
};

inline bool satisfies(const Configuration& config, const Evidence& ev) {
  for (const auto& [var, values] : ev.allowed()) {
    if (var >= config.size()) return false;
    if (!std::binary_search(values.begin(), values.end(), config[var])) return false;
  }
  return true;
}

/// The values a search may place at each locus: the evidence subset when
/// constrained, the full frame otherwise.
inline std::vector<std::vector<Ordinal>> allowed_domains(std::span<const Variable> variables,
                                                         const Evidence& ev) {
  std::vector<std::vector<Ordinal>> domains(variables.size());
  for (const auto& var : variables) {
    if (const auto* subset = ev.find(var.id)) {
      domains[var.id] = *subset;
    } else {
      auto& d = domains[var.id];
      d.resize(var.frame_size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<Ordinal>(i);
    }
  }
  return domains;
}

/// Number of configurations in the product of `domains`, saturating at `cap + 1`.
inline std::uint64_t space_size(const std::vector<std::vector<Ordinal>>& domains,
                                std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& d : domains) {
    if (d.empty()) return 0;
    if (total > cap / d.size()) return cap + 1;
    total *= d.size();
  }
  return total;
}

}  // namespace vbsmpe
