#pragma once

// Genetic wrapper search over feature subsets. Fitness is the stratified
// cross-validation accuracy of Naive Bayes on the projected dataset, with one
// shared fold plan per search and a bitmask-keyed memo cache. Selection,
// crossover and mutation draws happen on a single coordinator in a fixed
// order, so the trace does not depend on how many workers evaluate fitness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fsel/classifier.hpp"
#include "fsel/dataset.hpp"
#include "fsel/naive_bayes.hpp"
#include "fsel/rng.hpp"
#include "fsel/scoring.hpp"

namespace fsel {

enum class SeedingScheme { PrefixAndRandom, AllRandom };

struct GAParams {
  int population_size = 20;
  int max_generations = 20;
  double crossover_prob = 0.6;
  double mutation_prob = 0.033;
  int elitism = 1;
  std::uint64_t seed = 0;
  int fitness_folds = 5;
  SeedingScheme seeding = SeedingScheme::PrefixAndRandom;
  int threads = 1;

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (max_generations < 0) throw std::invalid_argument("max_generations must be >= 0");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
      throw std::invalid_argument("crossover_prob must be in [0,1]");
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
      throw std::invalid_argument("mutation_prob must be in [0,1]");
    if (elitism < 0 || elitism >= population_size)
      throw std::invalid_argument("elitism must be in [0, population_size)");
    if (fitness_folds < 2) throw std::invalid_argument("fitness_folds must be >= 2");
  }
};

// Bitmask over the candidate features (the ones surviving the prefilter).
struct Chromosome {
  std::vector<std::uint8_t> genes;
  double fitness = -1.0;
  bool evaluated = false;

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(genes.begin(), genes.end(), 1));
  }
};

// Prefers higher fitness, then fewer genes, then the lexicographically
// smaller bitmask.
inline bool fitter(const Chromosome& a, const Chromosome& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  const std::size_t ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  return a.genes < b.genes;
}

struct GenerationStats {
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::vector<std::uint8_t> best_genes;
};

struct SearchTrace {
  std::vector<GenerationStats> generations;  // entry 0 is the seeded population
  std::size_t evaluation_count = 0;          // distinct fitness computations
};

// Ensures at least one gene is set; NB on zero features is undefined.
inline void repair(Chromosome& c, Rng& rng) {
  for (auto g : c.genes)
    if (g) return;
  c.genes[rng.next_index(c.genes.size())] = 1;
}

// Half the population (rounded up) are prefix chromosomes over the ranking
// order, the rest random with per-gene inclusion probability 0.5.
inline std::vector<Chromosome> seed_population(std::size_t n_candidates,
                                               const GAParams& params) {
  if (n_candidates == 0) throw std::invalid_argument("empty candidate set");
  params.validate();
  Rng rng(derive_seed(params.seed, 0x5eedULL));
  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(params.population_size));

  std::size_t n_prefix = 0;
  if (params.seeding == SeedingScheme::PrefixAndRandom) {
    n_prefix = (static_cast<std::size_t>(params.population_size) + 1) / 2;
    for (std::size_t j = 0; j < n_prefix; ++j) {
      // m spaced evenly in [1, N]; a single prefix takes the full set
      std::size_t m =
          n_prefix == 1
              ? n_candidates
              : 1 + (j * (n_candidates - 1) + (n_prefix - 1) / 2) / (n_prefix - 1);
      Chromosome c;
      c.genes.assign(n_candidates, 0);
      for (std::size_t i = 0; i < m; ++i) c.genes[i] = 1;
      pop.push_back(std::move(c));
    }
  }
  while (pop.size() < static_cast<std::size_t>(params.population_size)) {
    Chromosome c;
    c.genes.resize(n_candidates);
    for (auto& g : c.genes) g = rng.next_bool(0.5) ? 1 : 0;
    repair(c, rng);
    pop.push_back(std::move(c));
  }
  return pop;
}

// Memoized wrapper fitness shared by one search.
class FitnessCache {
 public:
  FitnessCache(const Dataset& d, const std::vector<std::size_t>& candidate_features,
               const FoldPlan& folds)
      : data_(d), candidates_(candidate_features), folds_(folds) {}

  // Stratified CV accuracy of NB on the selected projection.
  double evaluate(const std::vector<std::uint8_t>& genes) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(genes);
      if (it != cache_.end()) return it->second;
    }
    double fitness = compute(genes);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(genes, fitness);
    if (inserted) ++distinct_evaluations_;
    return it->second;
  }

  std::size_t distinct_evaluations() const { return distinct_evaluations_; }

 private:
  double compute(const std::vector<std::uint8_t>& genes) const {
    std::vector<std::size_t> selected;
    for (std::size_t j = 0; j < genes.size(); ++j)
      if (genes[j]) selected.push_back(candidates_[j]);
    if (selected.empty()) throw std::invalid_argument("empty chromosome");
    Dataset view = project(data_, FeatureSubset::from_indices(data_.n_features(), selected));
    ClassifierSpec nb;
    CvResult cv = cv_evaluate(nb, view, folds_);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < cv.predictions.size(); ++i)
      if (cv.predictions[i].predicted_label == cv.actuals[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(cv.predictions.size());
  }

  const Dataset& data_;
  std::vector<std::size_t> candidates_;
  FoldPlan folds_;
  std::map<std::vector<std::uint8_t>, double> cache_;
  std::size_t distinct_evaluations_ = 0;
  mutable std::mutex mutex_;
};

struct GAResult {
  FeatureSubset subset;  // over the full schema's feature indices
  double fitness = 0.0;
  SearchTrace trace;
};

namespace detail {

inline void evaluate_population(std::vector<Chromosome>& pop, FitnessCache& cache,
                                int threads) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].evaluated) todo.push_back(i);
  auto work = [&](std::size_t i) {
    pop[i].fitness = cache.evaluate(pop[i].genes);
    pop[i].evaluated = true;
  };
  if (threads <= 1 || todo.size() < 2) {
    for (std::size_t i : todo) work(i);
  } else {
    const std::size_t nt =
        std::min<std::size_t>(static_cast<std::size_t>(threads), todo.size());
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t)
      workers.emplace_back([&, t]() {
        for (std::size_t j = t; j < todo.size(); j += nt) work(todo[j]);
      });
    for (auto& w : workers) w.join();
  }
}

inline GenerationStats stats_of(const std::vector<Chromosome>& pop) {
  GenerationStats s;
  const Chromosome* best = &pop[0];
  double sum = 0.0;
  for (const auto& c : pop) {
    sum += c.fitness;
    if (fitter(c, *best)) best = &c;
  }
  s.best_fitness = best->fitness;
  s.mean_fitness = sum / static_cast<double>(pop.size());
  s.best_genes = best->genes;
  return s;
}

// Roulette selection; uniform when all fitnesses are zero.
inline std::size_t select_parent(const std::vector<Chromosome>& pop, Rng& rng) {
  double total = 0.0;
  for (const auto& c : pop) total += c.fitness;
  if (total <= 0.0) return rng.next_index(pop.size());
  double target = rng.next_double() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    acc += pop[i].fitness;
    if (target < acc) return i;
  }
  return pop.size() - 1;
}

}  // namespace detail

// Generational GA: roulette selection, single-point crossover, per-gene
// bit-flip mutation, elitism. Returns the best-ever chromosome mapped back to
// original feature indices.
inline GAResult ga_search(const Dataset& d, const RankResult& prefilter,
                          const GAParams& params) {
  params.validate();
  const std::vector<std::size_t> ranked = [&] {
    // candidate features in ranking order
    std::vector<std::size_t> out;
    for (std::size_t f : prefilter.ranking.order)
      if (prefilter.subset.contains(f)) out.push_back(f);
    return out;
  }();
  if (ranked.empty()) throw std::invalid_argument("empty candidate set");
  const std::size_t n = ranked.size();

  const FoldPlan folds =
      stratified_folds(d, params.fitness_folds, derive_seed(params.seed, 0xf01dULL));
  FitnessCache cache(d, ranked, folds);

  std::vector<Chromosome> pop = seed_population(n, params);
  detail::evaluate_population(pop, cache, params.threads);

  SearchTrace trace;
  trace.generations.push_back(detail::stats_of(pop));
  Chromosome best = pop[0];
  for (const auto& c : pop)
    if (fitter(c, best)) best = c;

  Rng rng(derive_seed(params.seed, 0x9aULL));
  for (int gen = 0; gen < params.max_generations; ++gen) {
    std::vector<Chromosome> next;
    next.reserve(pop.size());

    if (params.elitism > 0) {
      std::vector<std::size_t> order(pop.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fitter(pop[a], pop[b]);
      });
      for (int e = 0; e < params.elitism; ++e)
        next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    }

    while (next.size() < pop.size()) {
      Chromosome a = pop[detail::select_parent(pop, rng)];
      Chromosome b = pop[detail::select_parent(pop, rng)];
      if (n > 1 && rng.next_bool(params.crossover_prob)) {
        // single-point crossover at a position in [1, n-1]
        std::size_t point = 1 + rng.next_index(n - 1);
        for (std::size_t i = point; i < n; ++i) std::swap(a.genes[i], b.genes[i]);
      }
      for (Chromosome* child : {&a, &b}) {
        if (next.size() >= pop.size()) break;
        for (auto& g : child->genes)
          if (rng.next_bool(params.mutation_prob)) g ^= 1;
        repair(*child, rng);
        child->evaluated = false;
        child->fitness = -1.0;
        next.push_back(std::move(*child));
      }
    }

    pop = std::move(next);
    detail::evaluate_population(pop, cache, params.threads);
    trace.generations.push_back(detail::stats_of(pop));
    for (const auto& c : pop)
      if (fitter(c, best)) best = c;
  }

  trace.evaluation_count = cache.distinct_evaluations();

  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < n; ++j)
    if (best.genes[j]) selected.push_back(ranked[j]);
  std::sort(selected.begin(), selected.end());
  return GAResult{FeatureSubset::from_indices(d.n_features(), selected), best.fitness,
                  std::move(trace)};
}

}  // namespace fsel
