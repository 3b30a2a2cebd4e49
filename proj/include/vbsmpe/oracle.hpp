#pragma once

// Exhaustive reference answers. Deliberately naive: every evidence-compatible
// configuration is scored, and refusing oversized inputs is part of the
// contract.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/dst.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/ga.hpp"
#include "vbsmpe/model.hpp"

namespace vbsmpe {

inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultJointGuard = std::uint64_t{1} << 20;

struct OracleResult {
  std::vector<RankedExplanation> top;
  std::uint64_t total_enumerated = 0;
};

/// Calls `visit` on every configuration in the product of `domains`, in
/// lexicographic order of ordinal vectors.
template <typename Visit>
void for_each_configuration(const std::vector<std::vector<Ordinal>>& domains, Visit&& visit) {
  const std::size_t n = domains.size();
  for (const auto& d : domains) {
    if (d.empty()) return;
  }
  std::vector<std::size_t> digit(n, 0);
  std::vector<Ordinal> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = domains[i][0];
  Configuration config(values);
  while (true) {
    visit(static_cast<const Configuration&>(config));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++digit[i] < domains[i].size()) {
        config[i] = domains[i][digit[i]];
        break;
      }
      digit[i] = 0;
      config[i] = domains[i][0];
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

/// Exact top-k by score; ties go to the lexicographically smaller configuration.
inline OracleResult enumerate_top_k(const Model& model, const Evidence& ev, std::size_t k,
                                    std::uint64_t guard = kDefaultEnumerationGuard) {
  if (k == 0) raise(ErrorCode::usage, "k must be at least 1");
  const auto domains = allowed_domains(model.variables(), ev);
  const std::uint64_t space = space_size(domains, guard);
  if (space > guard) {
    raise(ErrorCode::capacity, "evidence-compatible space exceeds " + std::to_string(guard) +
                                   " configurations; use the genetic solver instead");
  }

  struct Entry {
    double log_score;
    Configuration config;
  };
  // "Better" means higher score, then smaller configuration. The heap keeps
  // the worst retained entry on top.
  auto better = [](const Entry& a, const Entry& b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    return a.config < b.config;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(better)> heap(better);

  OracleResult result;
  for_each_configuration(domains, [&](const Configuration& c) {
    ++result.total_enumerated;
    const double s = log_score(c, model);
    if (heap.size() < k) {
      heap.push({s, c});
    } else if (s > heap.top().log_score) {
      // Enumeration is lexicographic, so an equal score never displaces.
      heap.pop();
      heap.push({s, c});
    }
  });

  std::vector<Entry> kept;
  kept.reserve(heap.size());
  while (!heap.empty()) {
    kept.push_back(heap.top());
    heap.pop();
  }
  std::sort(kept.begin(), kept.end(), better);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    RankedExplanation r;
    r.rank = i + 1;
    r.config = std::move(kept[i].config);
    r.log_score = kept[i].log_score;
    r.score = score_from_log(r.log_score);
    result.top.push_back(std::move(r));
  }
  return result;
}

/// Dempster combination of every universe of a DST model.
inline MassUniverse joint_mass(const Model& model, std::size_t tuple_guard = kDefaultTupleGuard,
                               std::size_t focal_guard = kDefaultFocalGuard) {
  if (model.kind() != ModelKind::dst) raise(ErrorCode::usage, "joint mass needs a dst model");
  const auto masses = model.masses();
  if (masses.empty()) raise(ErrorCode::usage, "model has no mass universes");
  MassUniverse acc = masses.front();
  for (std::size_t i = 1; i < masses.size(); ++i) acc = combine(acc, masses[i], tuple_guard, focal_guard).mass;
  return acc;
}

/// Exact joint singleton commonality Q({config}) of the combined belief.
inline double exact_joint_commonality(const Model& model, const Configuration& config,
                                      std::size_t tuple_guard = kDefaultTupleGuard,
                                      std::size_t focal_guard = kDefaultFocalGuard) {
  check_configuration(config, model);
  return singleton_commonality(joint_mass(model, tuple_guard, focal_guard)).at(config);
}

/// The full joint distribution of a Bayesian model, first variable slowest.
/// Each entry is a direct product of CPT entries located through per-table
/// strides, independently of find_valuation.
inline std::vector<double> joint_table(const Model& model, std::uint64_t guard = kDefaultJointGuard) {
  if (model.kind() != ModelKind::bayesian) raise(ErrorCode::usage, "joint table needs a bayesian model");
  const auto vars = model.variables();
  std::uint64_t total = 1;
  for (const auto& v : vars) {
    if (total > guard / std::max<std::size_t>(v.frame_size(), 1)) {
      raise(ErrorCode::capacity, "joint table exceeds " + std::to_string(guard) + " entries");
    }
    total *= v.frame_size();
  }

  // stride[c][v]: step in table c for a unit change of variable v (0 if absent).
  const auto cpts = model.cpts();
  std::vector<std::vector<std::size_t>> stride(cpts.size(), std::vector<std::size_t>(vars.size(), 0));
  for (std::size_t c = 0; c < cpts.size(); ++c) {
    std::size_t step = 1;
    for (std::size_t j = cpts[c].variables.size(); j-- > 0;) {
      stride[c][cpts[c].variables[j]] = step;
      step *= vars[cpts[c].variables[j]].frame_size();
    }
  }

  std::vector<double> joint(total, 1.0);
  std::vector<std::size_t> digits(vars.size(), 0);
  for (std::uint64_t cell = 0; cell < total; ++cell) {
    double p = 1.0;
    for (std::size_t c = 0; c < cpts.size(); ++c) {
      std::size_t offset = 0;
      for (std::size_t v = 0; v < vars.size(); ++v) offset += stride[c][v] * digits[v];
      p *= cpts[c].valuations.at(offset);
    }
    joint[cell] = p;
    for (std::size_t v = vars.size(); v-- > 0;) {
      if (++digits[v] < vars[v].frame_size()) break;
      digits[v] = 0;
    }
  }
  return joint;
}

}  // namespace vbsmpe
