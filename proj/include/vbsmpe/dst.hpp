#pragma once

// Dempster-Shafer calculus over focal elements: commonality, belief,
// plausibility, Dempster combination and mass-space marginalization.
//
// Focal sets are stored as sorted, duplicate-free lists of value tuples over
// an ordered list of variables. Nothing here materializes a power set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/prob.hpp"

namespace vbsmpe {

using Tuple = std::vector<Ordinal>;

inline constexpr std::size_t kDefaultTupleGuard = std::size_t{1} << 24;
inline constexpr std::size_t kDefaultFocalGuard = std::size_t{1} << 20;

struct FocalSet {
  std::vector<VariableId> vars;
  std::vector<Tuple> tuples;

  /// Sorts and deduplicates the tuples.
  static FocalSet make(std::vector<VariableId> vars, std::vector<Tuple> tuples) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    return FocalSet{std::move(vars), std::move(tuples)};
  }

  bool contains(const Tuple& t) const { return std::binary_search(tuples.begin(), tuples.end(), t); }

  friend bool operator==(const FocalSet&, const FocalSet&) = default;
};

struct FocalElement {
  FocalSet set;
  double mass = 0.0;
};

/// A basic probability assignment over `vars`. `radices[j]` is the frame size
/// of `vars[j]`.
struct MassUniverse {
  std::vector<VariableId> vars;
  std::vector<std::size_t> radices;
  std::vector<FocalElement> focal;

  double total_mass() const {
    double total = 0.0;
    for (const auto& f : focal) total += f.mass;
    return total;
  }
};

/// Singleton commonalities Q({t}) laid out like a CPT over the same variables.
struct CommonalityTable {
  std::vector<VariableId> vars;
  std::vector<std::size_t> radices;
  std::vector<double> q;

  double at(const Configuration& config) const { return q[flat_index(vars, radices, config)]; }
};

// ---------------------------------------------------------------------------
// Tuple helpers

inline std::size_t tuple_index(const Tuple& t, std::span<const std::size_t> radices) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < t.size(); ++j) idx = idx * radices[j] + t[j];
  return idx;
}

inline Tuple tuple_at(std::size_t idx, std::span<const std::size_t> radices) {
  Tuple t(radices.size());
  for (std::size_t j = radices.size(); j-- > 0;) {
    t[j] = static_cast<Ordinal>(idx % radices[j]);
    idx /= radices[j];
  }
  return t;
}

/// Every tuple of the product frame, in index order.
inline std::vector<Tuple> all_tuples(std::span<const std::size_t> radices) {
  const std::size_t n = table_size(radices);
  std::vector<Tuple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(tuple_at(i, radices));
  return out;
}

inline FocalSet full_frame(const std::vector<VariableId>& vars, std::span<const std::size_t> radices) {
  return FocalSet{vars, all_tuples(radices)};
}

inline FocalSet complement(const FocalSet& a, std::span<const std::size_t> radices) {
  FocalSet out{a.vars, {}};
  for (auto& t : all_tuples(radices)) {
    if (!a.contains(t)) out.tuples.push_back(std::move(t));
  }
  return out;
}

inline MassUniverse vacuous(std::vector<VariableId> vars, std::vector<std::size_t> radices) {
  MassUniverse m{std::move(vars), std::move(radices), {}};
  m.focal.push_back({full_frame(m.vars, m.radices), 1.0});
  return m;
}

inline bool intersects(const FocalSet& a, const FocalSet& b) {
  auto i = a.tuples.begin();
  auto j = b.tuples.begin();
  while (i != a.tuples.end() && j != b.tuples.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

inline bool is_subset(const FocalSet& sub, const FocalSet& super) {
  return std::includes(super.tuples.begin(), super.tuples.end(), sub.tuples.begin(), sub.tuples.end());
}

// ---------------------------------------------------------------------------
// Validation

/// Violations of the mass-function axioms and focal-set structure. `where`
/// prefixes each message.
inline std::vector<std::string> mass_violations(const MassUniverse& m, const std::string& where) {
  std::vector<std::string> out;
  if (m.vars.empty()) out.push_back(where + ": no variables");
  if (m.radices.size() != m.vars.size()) {
    out.push_back(where + ": frame sizes do not match variable list");
    return out;
  }
  if (m.focal.empty()) out.push_back(where + ": no focal sets");
  double total = 0.0;
  for (std::size_t i = 0; i < m.focal.size(); ++i) {
    const auto& f = m.focal[i];
    const std::string at = where + " focal[" + std::to_string(i) + "]";
    if (!(f.mass >= 0.0)) out.push_back(at + ": negative mass " + std::to_string(f.mass));
    total += f.mass;
    if (f.set.vars != m.vars) out.push_back(at + ": variables differ from the universe");
    if (f.set.tuples.empty()) out.push_back(at + ": empty focal set");
    bool in_range = true;
    for (const auto& t : f.set.tuples) {
      if (t.size() != m.vars.size()) {
        in_range = false;
        continue;
      }
      for (std::size_t j = 0; j < t.size(); ++j) in_range = in_range && t[j] < m.radices[j];
    }
    if (!in_range) out.push_back(at + ": tuple out of range");
    if (std::adjacent_find(f.set.tuples.begin(), f.set.tuples.end()) != f.set.tuples.end() ||
        !std::is_sorted(f.set.tuples.begin(), f.set.tuples.end())) {
      out.push_back(at + ": tuples not in canonical sorted, duplicate-free form");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (m.focal[k].set.tuples == f.set.tuples) {
        out.push_back(at + ": duplicates focal[" + std::to_string(k) + "]");
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    out.push_back(where + ": masses sum to " + std::to_string(total) + ", expected 1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Set functions

inline CommonalityTable singleton_commonality(const MassUniverse& m) {
  CommonalityTable table{m.vars, m.radices, std::vector<double>(table_size(m.radices), 0.0)};
  for (const auto& f : m.focal) {
    for (const auto& t : f.set.tuples) table.q[tuple_index(t, m.radices)] += f.mass;
  }
  return table;
}

inline void require_same_universe(const MassUniverse& m, const FocalSet& a) {
  if (a.vars != m.vars) raise(ErrorCode::usage, "focal set is over a different universe");
}

inline double belief(const MassUniverse& m, const FocalSet& a) {
  require_same_universe(m, a);
  double total = 0.0;
  for (const auto& f : m.focal) {
    if (is_subset(f.set, a)) total += f.mass;
  }
  return total;
}

/// Mass of focal sets meeting `a`; equals 1 - Bel(complement of a).
inline double plausibility(const MassUniverse& m, const FocalSet& a) {
  require_same_universe(m, a);
  double total = 0.0;
  for (const auto& f : m.focal) {
    if (intersects(f.set, a)) total += f.mass;
  }
  return total;
}

/// Full commonality Q(A) = sum of m(B) over focal B containing A.
inline double commonality(const MassUniverse& m, const FocalSet& a) {
  require_same_universe(m, a);
  double total = 0.0;
  for (const auto& f : m.focal) {
    if (is_subset(a, f.set)) total += f.mass;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Combination and marginalization

namespace detail {

inline std::vector<FocalElement> merge_focal(std::map<std::vector<Tuple>, double>& acc,
                                             const std::vector<VariableId>& vars, double scale) {
  std::vector<FocalElement> out;
  out.reserve(acc.size());
  for (auto& [tuples, mass] : acc) {
    if (mass <= 0.0) continue;
    out.push_back({FocalSet{vars, tuples}, mass * scale});
  }
  return out;
}

inline std::vector<std::size_t> positions_of(std::span<const VariableId> wanted,
                                             std::span<const VariableId> vars) {
  std::vector<std::size_t> pos;
  pos.reserve(wanted.size());
  for (auto v : wanted) {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) {
      raise(ErrorCode::usage, "variable " + std::to_string(v) + " is not in the universe");
    }
    pos.push_back(static_cast<std::size_t>(it - vars.begin()));
  }
  return pos;
}

inline Tuple project(const Tuple& t, std::span<const std::size_t> pos) {
  Tuple out;
  out.reserve(pos.size());
  for (auto p : pos) out.push_back(t[p]);
  return out;
}

}  // namespace detail

struct CombineResult {
  MassUniverse mass;
  double conflict = 0.0;
};

/// Dempster's rule. The result lives on m1.vars followed by the variables of
/// m2 not already in m1. Each pair of focal sets is joined on the shared
/// variables, which is the intersection of their cylindrical extensions.
inline CombineResult combine(const MassUniverse& m1, const MassUniverse& m2,
                             std::size_t tuple_guard = kDefaultTupleGuard,
                             std::size_t focal_guard = kDefaultFocalGuard) {
  std::vector<VariableId> vars = m1.vars;
  std::vector<std::size_t> radices = m1.radices;
  std::vector<std::size_t> shared_in_1;
  std::vector<std::size_t> shared_in_2;
  std::vector<std::size_t> rest_in_2;
  for (std::size_t j = 0; j < m2.vars.size(); ++j) {
    auto it = std::find(m1.vars.begin(), m1.vars.end(), m2.vars[j]);
    if (it == m1.vars.end()) {
      vars.push_back(m2.vars[j]);
      radices.push_back(m2.radices[j]);
      rest_in_2.push_back(j);
    } else {
      shared_in_1.push_back(static_cast<std::size_t>(it - m1.vars.begin()));
      shared_in_2.push_back(j);
    }
  }

  // Index m2's focal tuples by their shared-variable projection.
  std::vector<std::map<Tuple, std::vector<Tuple>>> keyed(m2.focal.size());
  for (std::size_t b = 0; b < m2.focal.size(); ++b) {
    for (const auto& t : m2.focal[b].set.tuples) {
      keyed[b][detail::project(t, shared_in_2)].push_back(detail::project(t, rest_in_2));
    }
  }

  std::map<std::vector<Tuple>, double> acc;
  double conflict = 0.0;
  double kept = 0.0;
  for (const auto& f1 : m1.focal) {
    for (std::size_t b = 0; b < m2.focal.size(); ++b) {
      const double product = f1.mass * m2.focal[b].mass;
      std::vector<Tuple> joined;
      for (const auto& t1 : f1.set.tuples) {
        auto hit = keyed[b].find(detail::project(t1, shared_in_1));
        if (hit == keyed[b].end()) continue;
        for (const auto& rest : hit->second) {
          Tuple merged = t1;
          merged.insert(merged.end(), rest.begin(), rest.end());
          joined.push_back(std::move(merged));
          if (joined.size() > tuple_guard) {
            raise(ErrorCode::capacity, "combined focal set exceeds " + std::to_string(tuple_guard) + " tuples");
          }
        }
      }
      if (joined.empty()) {
        conflict += product;
        continue;
      }
      std::sort(joined.begin(), joined.end());
      acc[std::move(joined)] += product;
      kept += product;
      if (acc.size() > focal_guard) {
        raise(ErrorCode::capacity, "combination exceeds " + std::to_string(focal_guard) + " focal sets");
      }
    }
  }
  if (!(kept > 0.0)) raise(ErrorCode::total_conflict, "total conflict: Dempster normalization undefined");

  CombineResult result;
  result.conflict = conflict;
  result.mass.vars = vars;
  result.mass.radices = radices;
  result.mass.focal = detail::merge_focal(acc, vars, 1.0 / kept);
  return result;
}

/// Projects every focal set onto `onto` and merges equal projections.
inline MassUniverse marginalize_mass(const MassUniverse& m, const std::vector<VariableId>& onto) {
  if (onto.empty()) raise(ErrorCode::usage, "marginalization target is empty");
  const auto pos = detail::positions_of(onto, m.vars);
  std::vector<std::size_t> radices;
  for (auto p : pos) radices.push_back(m.radices[p]);

  std::map<std::vector<Tuple>, double> acc;
  for (const auto& f : m.focal) {
    std::vector<Tuple> projected;
    projected.reserve(f.set.tuples.size());
    for (const auto& t : f.set.tuples) projected.push_back(detail::project(t, pos));
    std::sort(projected.begin(), projected.end());
    projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
    acc[std::move(projected)] += f.mass;
  }
  return MassUniverse{onto, radices, detail::merge_focal(acc, onto, 1.0)};
}

/// Log of the product of singleton commonalities; -inf when any factor is zero.
inline double log_commonality_product(const Configuration& config, std::span<const CommonalityTable> tables) {
  double log_total = 0.0;
  for (const auto& table : tables) {
    const double q = table.at(config);
    if (q <= 0.0) return -std::numeric_limits<double>::infinity();
    log_total += std::log(q);
  }
  return log_total;
}

}  // namespace vbsmpe
