#pragma once

// Seeded random models for test corpora.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/dst.hpp"
#include "vbsmpe/ga.hpp"
#include "vbsmpe/model.hpp"
#include "vbsmpe/prob.hpp"

namespace vbsmpe {

struct GenOptions {
  ModelKind kind = ModelKind::bayesian;
  std::size_t n_vars = 5;
  std::size_t max_frame = 2;
  std::size_t max_parents = 2;        // bayesian
  std::size_t universes = 0;          // dst; 0 means one per variable
  std::size_t max_universe_vars = 3;  // dst
  std::size_t max_focal = 4;          // dst, before discounting
  bool discount = true;               // dst: add the whole frame as a focal set
  std::uint64_t seed = 0;
};

namespace detail {

inline std::size_t draw(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double weight(Rng& rng) { return std::uniform_real_distribution<double>(0.05, 1.0)(rng); }

inline std::vector<double> normalized(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

inline std::vector<Variable> random_variables(const GenOptions& opt, Rng& rng) {
  std::vector<Variable> vars;
  const std::size_t lo = std::min<std::size_t>(2, std::max<std::size_t>(opt.max_frame, 1));
  for (std::size_t i = 0; i < opt.n_vars; ++i) {
    Variable v;
    v.id = i;
    v.name = "X" + std::to_string(i + 1);
    const std::size_t size = draw(lo, std::max(lo, opt.max_frame), rng);
    for (std::size_t k = 0; k < size; ++k) v.frame.push_back("x" + std::to_string(i + 1) + "_" + std::to_string(k + 1));
    vars.push_back(std::move(v));
  }
  return vars;
}

/// `count` distinct ids from 0..n-1 other than `exclude`, in random order.
inline std::vector<VariableId> pick_distinct(std::size_t n, std::size_t count, std::size_t exclude, Rng& rng) {
  std::vector<VariableId> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != exclude) pool.push_back(i);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

}  // namespace detail

inline Model generate_model(const GenOptions& opt) {
  if (opt.n_vars == 0) raise(ErrorCode::usage, "need at least one variable");
  Rng rng(opt.seed);
  auto vars = detail::random_variables(opt, rng);

  if (opt.kind == ModelKind::bayesian) {
    std::vector<CptUniverse> cpts;
    for (std::size_t i = 0; i < opt.n_vars; ++i) {
      CptUniverse u;
      u.variables.push_back(i);
      const std::size_t n_parents = detail::draw(0, std::min(opt.max_parents, i), rng);
      auto parents = detail::pick_distinct(i, n_parents, i, rng);
      u.variables.insert(u.variables.end(), parents.begin(), parents.end());
      for (auto v : u.variables) u.radices.push_back(vars[v].frame_size());
      const std::size_t child = u.radices.front();
      const std::size_t columns = table_size(u.radices) / child;
      u.valuations.assign(child * columns, 0.0);
      for (std::size_t c = 0; c < columns; ++c) {
        std::vector<double> w(child);
        for (auto& x : w) x = detail::weight(rng);
        w = detail::normalized(std::move(w));
        for (std::size_t k = 0; k < child; ++k) u.valuations[k * columns + c] = w[k];
      }
      cpts.push_back(std::move(u));
    }
    return Model::bayesian(std::move(vars), std::move(cpts));
  }

  const std::size_t n_universes = opt.universes == 0 ? opt.n_vars : opt.universes;
  std::vector<MassUniverse> masses;
  for (std::size_t i = 0; i < n_universes; ++i) {
    MassUniverse u;
    const VariableId anchor = i % opt.n_vars;
    const std::size_t extra = detail::draw(0, std::max<std::size_t>(opt.max_universe_vars, 1) - 1, rng);
    u.vars.push_back(anchor);
    auto others = detail::pick_distinct(opt.n_vars, extra, anchor, rng);
    u.vars.insert(u.vars.end(), others.begin(), others.end());
    for (auto v : u.vars) u.radices.push_back(vars[v].frame_size());
    const std::size_t cells = table_size(u.radices);

    std::map<std::vector<Tuple>, double> acc;
    const std::size_t n_focal = detail::draw(1, std::max<std::size_t>(opt.max_focal, 1), rng);
    for (std::size_t f = 0; f < n_focal; ++f) {
      std::vector<std::size_t> cell(cells);
      std::iota(cell.begin(), cell.end(), 0);
      std::shuffle(cell.begin(), cell.end(), rng);
      cell.resize(detail::draw(1, cells, rng));
      std::vector<Tuple> tuples;
      for (auto c : cell) tuples.push_back(tuple_at(c, u.radices));
      std::sort(tuples.begin(), tuples.end());
      acc[std::move(tuples)] += detail::weight(rng);
    }
    if (opt.discount) acc[all_tuples(u.radices)] += detail::weight(rng);

    std::vector<double> w;
    for (const auto& [tuples, mass] : acc) w.push_back(mass);
    w = detail::normalized(std::move(w));
    std::size_t k = 0;
    for (const auto& [tuples, mass] : acc) u.focal.push_back({FocalSet{u.vars, tuples}, w[k++]});
    masses.push_back(std::move(u));
  }
  return Model::dst(std::move(vars), std::move(masses));
}

/// Each variable is constrained with probability `p_constrain` to a random
/// non-empty subset of its frame.
inline Evidence random_evidence(const Model& model, double p_constrain, Rng& rng) {
  Evidence ev;
  for (const auto& v : model.variables()) {
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= p_constrain) continue;
    std::vector<Ordinal> values(v.frame_size());
    std::iota(values.begin(), values.end(), Ordinal{0});
    std::shuffle(values.begin(), values.end(), rng);
    values.resize(detail::draw(1, values.size(), rng));
    ev.restrict(v.id, std::move(values));
  }
  return ev;
}

}  // namespace vbsmpe
