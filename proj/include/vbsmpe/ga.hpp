#pragma once

// Genetic search for the k best explanations of evidence.
//
// Individuals are total configurations. Initialisation, mutation and
// crossover only ever place values from each locus' allowed set, so every
// individual satisfies the evidence. Previously returned configurations are
// blocked: their fitness is forced to zero.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vbsmpe/core.hpp"
#include "vbsmpe/error.hpp"
#include "vbsmpe/model.hpp"

namespace vbsmpe {

using Rng = std::mt19937_64;

struct Tournament {
  std::size_t size = 2;
  friend bool operator==(const Tournament&, const Tournament&) = default;
};
struct Roulette {
  friend bool operator==(const Roulette&, const Roulette&) = default;
};
using Selection = std::variant<Tournament, Roulette>;

struct GaParams {
  std::size_t population_size = 50;
  double p_m = 0.05;
  double p_c = 0.7;
  std::size_t max_generations = 200;
  std::size_t stagnation_window = 50;  // 0 disables early stopping
  std::size_t elitism = 1;
  Selection selection = Tournament{2};
  std::uint64_t seed = 0;

  void validate() const {
    if (population_size < 2) raise(ErrorCode::usage, "population size must be at least 2");
    if (elitism >= population_size) raise(ErrorCode::usage, "elitism must be smaller than the population");
    if (!(p_m >= 0.0 && p_m <= 1.0)) raise(ErrorCode::usage, "mutation probability must be in [0, 1]");
    if (!(p_c >= 0.0 && p_c <= 1.0)) raise(ErrorCode::usage, "crossover probability must be in [0, 1]");
    if (const auto* t = std::get_if<Tournament>(&selection); t && t->size == 0) {
      raise(ErrorCode::usage, "tournament size must be positive");
    }
  }
};

/// Configurations already returned, in discovery order.
class BlockedSet {
 public:
  bool contains(const Configuration& c) const { return std::find(items_.begin(), items_.end(), c) != items_.end(); }

  /// Returns false if `c` was already blocked.
  bool push(const Configuration& c) {
    if (contains(c)) return false;
    items_.push_back(c);
    return true;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Configuration>& items() const { return items_; }

 private:
  std::vector<Configuration> items_;
};

struct RankedExplanation {
  std::size_t rank = 0;
  Configuration config;
  double score = 0.0;
  double log_score = -std::numeric_limits<double>::infinity();
  std::size_t generations_used = 0;
};

using Population = std::vector<Configuration>;

/// Log-space fitness: -inf for blocked configurations and zero products.
inline double log_fitness(const Configuration& config, const Model& model, const BlockedSet& blocked) {
  if (blocked.contains(config)) return -std::numeric_limits<double>::infinity();
  return log_score(config, model);
}

inline double fitness(const Configuration& config, const Model& model, const BlockedSet& blocked) {
  return score_from_log(log_fitness(config, model, blocked));
}

namespace detail {

inline std::size_t uniform_below(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace detail

inline Configuration random_individual(const std::vector<std::vector<Ordinal>>& domains, Rng& rng) {
  std::vector<Ordinal> values(domains.size());
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const auto& d = domains[i];
    values[i] = d.size() == 1 ? d.front() : d[detail::uniform_below(d.size(), rng)];
  }
  return Configuration(std::move(values));
}

inline Population init_population(const Model& model, const Evidence& ev, const GaParams& params, Rng& rng) {
  const auto domains = allowed_domains(model.variables(), ev);
  Population pop;
  pop.reserve(params.population_size);
  for (std::size_t i = 0; i < params.population_size; ++i) pop.push_back(random_individual(domains, rng));
  return pop;
}

/// Each locus with more than one allowed value is, with probability p_m,
/// replaced by a different allowed value chosen uniformly.
inline Configuration mutate(Configuration ind, const std::vector<std::vector<Ordinal>>& domains, double p_m,
                            Rng& rng) {
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const auto& d = domains[i];
    if (d.size() < 2) continue;
    if (!(detail::unit(rng) < p_m)) continue;
    const auto current = std::find(d.begin(), d.end(), ind[i]);
    if (current == d.end()) {
      ind[i] = d[detail::uniform_below(d.size(), rng)];
      continue;
    }
    // Draw from the others by skipping over the current slot.
    std::size_t pick = detail::uniform_below(d.size() - 1, rng);
    if (pick >= static_cast<std::size_t>(current - d.begin())) ++pick;
    ind[i] = d[pick];
  }
  return ind;
}

inline Configuration mutate(Configuration ind, const Model& model, const Evidence& ev, double p_m, Rng& rng) {
  return mutate(std::move(ind), allowed_domains(model.variables(), ev), p_m, rng);
}

/// Single-point crossover at `cut`: offspring take a[0..cut) + b[cut..n) and
/// b[0..cut) + a[cut..n).
inline std::pair<Configuration, Configuration> crossover_at(const Configuration& a, const Configuration& b,
                                                            std::size_t cut) {
  Configuration x = a;
  Configuration y = b;
  for (std::size_t i = cut; i < a.size(); ++i) {
    x[i] = b[i];
    y[i] = a[i];
  }
  return {std::move(x), std::move(y)};
}

/// Cut point drawn uniformly from 1..n-1. With fewer than two loci the parents
/// are returned unchanged.
inline std::pair<Configuration, Configuration> crossover(const Configuration& a, const Configuration& b, Rng& rng) {
  if (a.size() < 2) return {a, b};
  const std::size_t cut = 1 + detail::uniform_below(a.size() - 1, rng);
  return crossover_at(a, b, cut);
}

struct GaRun {
  RankedExplanation best;
  std::vector<double> trace;  // best score in each evaluated population
};

namespace detail {

inline std::size_t select_one(const std::vector<double>& log_fit, const Selection& selection, Rng& rng) {
  const std::size_t n = log_fit.size();
  if (const auto* t = std::get_if<Tournament>(&selection)) {
    std::size_t winner = uniform_below(n, rng);
    for (std::size_t i = 1; i < t->size; ++i) {
      const std::size_t challenger = uniform_below(n, rng);
      if (log_fit[challenger] > log_fit[winner]) winner = challenger;
    }
    return winner;
  }
  // Roulette on fitness normalised by the population maximum.
  const double top = *std::max_element(log_fit.begin(), log_fit.end());
  if (std::isinf(top) && top < 0) return uniform_below(n, rng);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = std::exp(log_fit[i] - top);
  return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);
}

}  // namespace detail

/// One generational GA run. Returns the fittest individual seen in any
/// generation. Throws no_solution if every individual ever evaluated had
/// zero fitness.
inline GaRun run_ga(const Model& model, const Evidence& ev, const GaParams& params, const BlockedSet& blocked,
                    Rng& rng) {
  params.validate();
  const auto domains = allowed_domains(model.variables(), ev);
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i].empty()) raise(ErrorCode::usage, "evidence leaves no value for " + model.variable(i).name);
  }
  const bool single_point = space_size(domains, 1) == 1;

  Population pop;
  pop.reserve(params.population_size);
  for (std::size_t i = 0; i < params.population_size; ++i) pop.push_back(random_individual(domains, rng));

  std::vector<double> log_fit(pop.size());
  auto evaluate = [&] {
    for (std::size_t i = 0; i < pop.size(); ++i) log_fit[i] = log_fitness(pop[i], model, blocked);
  };

  GaRun run;
  double best_log = -std::numeric_limits<double>::infinity();
  Configuration best = pop.front();
  std::size_t since_improvement = 0;
  auto record = [&] {
    const auto it = std::max_element(log_fit.begin(), log_fit.end());
    const std::size_t idx = static_cast<std::size_t>(it - log_fit.begin());
    run.trace.push_back(score_from_log(*it));
    if (*it > best_log) {
      best_log = *it;
      best = pop[idx];
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
  };

  evaluate();
  record();
  std::size_t generation = 0;
  while (!single_point && generation < params.max_generations &&
         (params.stagnation_window == 0 || since_improvement < params.stagnation_window)) {
    ++generation;

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return log_fit[a] > log_fit[b]; });

    Population next;
    next.reserve(params.population_size);
    for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(pop[order[e]]);

    const std::size_t offspring = params.population_size - params.elitism;
    Population parents;
    parents.reserve(offspring + 1);
    for (std::size_t i = 0; i < offspring; ++i) parents.push_back(pop[detail::select_one(log_fit, params.selection, rng)]);

    for (std::size_t i = 0; i < parents.size(); i += 2) {
      if (i + 1 == parents.size()) {
        next.push_back(mutate(parents[i], domains, params.p_m, rng));
        break;
      }
      auto [x, y] = detail::unit(rng) < params.p_c ? crossover(parents[i], parents[i + 1], rng)
                                                   : std::pair{parents[i], parents[i + 1]};
      next.push_back(mutate(std::move(x), domains, params.p_m, rng));
      next.push_back(mutate(std::move(y), domains, params.p_m, rng));
    }
    pop = std::move(next);
    evaluate();
    record();
  }

  if (std::isinf(best_log) && best_log < 0) {
    raise(ErrorCode::no_solution, "no configuration with positive score was found");
  }
  run.best.rank = 1;
  run.best.config = best;
  run.best.log_score = best_log;
  run.best.score = score_from_log(best_log);
  run.best.generations_used = generation + 1;
  return run;
}

inline GaRun run_ga(const Model& model, const Evidence& ev, const GaParams& params, const BlockedSet& blocked = {}) {
  Rng rng(params.seed);
  return run_ga(model, ev, params, blocked, rng);
}

struct KMpeResult {
  std::vector<RankedExplanation> explanations;
  std::vector<std::string> warnings;
};

/// Runs the GA k times from one random stream, blocking each answer before
/// the next run. Results keep discovery order; score inversions are reported
/// as warnings, not re-sorted.
inline KMpeResult k_mpe(const Model& model, const Evidence& ev, const GaParams& params, std::size_t k,
                        BlockedSet blocked = {}) {
  if (k == 0) raise(ErrorCode::usage, "k must be at least 1");
  Rng rng(params.seed);
  KMpeResult result;
  for (std::size_t i = 0; i < k; ++i) {
    GaRun run = run_ga(model, ev, params, blocked, rng);
    run.best.rank = i + 1;
    blocked.push(run.best.config);
    result.explanations.push_back(std::move(run.best));
  }
  for (std::size_t i = 1; i < result.explanations.size(); ++i) {
    const auto& prev = result.explanations[i - 1];
    const auto& cur = result.explanations[i];
    if (cur.log_score > prev.log_score) {
      result.warnings.push_back("score inversion: rank " + std::to_string(cur.rank) + " scores higher than rank " +
                                std::to_string(prev.rank));
    }
  }
  return result;
}

}  // namespace vbsmpe
