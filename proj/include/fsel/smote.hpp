#pragma once

// Synthetic minority oversampling: per-class rates in multiples of 100%, HEOM
// distance over mixed feature types, synthetic points on seed-neighbor
// segments. Draw streams are derived from (seed, synthetic index) so output is
// identical no matter how the work is scheduled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fsel/dataset.hpp"
#include "fsel/rng.hpp"

namespace fsel {

struct SmotePlan {
  std::map<int, int> per_class_rate;  // class index -> percentage, multiple of 100
  int k_neighbors = 5;
  std::uint64_t seed = 0;

  int rate_for(int cls) const {
    auto it = per_class_rate.find(cls);
    return it == per_class_rate.end() ? 0 : it->second;
  }

  void validate() const {
    if (k_neighbors < 1) throw std::invalid_argument("k_neighbors must be >= 1");
    for (const auto& [cls, rate] : per_class_rate) {
      if (rate < 0) throw std::invalid_argument("negative oversampling rate");
      if (rate % 100 != 0)
        throw std::invalid_argument("oversampling rate must be a multiple of 100");
    }
  }
};

// Oversample every non-majority class toward balance, capped at 300%.
inline SmotePlan default_smote_plan(const Dataset& d, std::uint64_t seed,
                                    int k_neighbors = 5) {
  SmotePlan plan;
  plan.seed = seed;
  plan.k_neighbors = k_neighbors;
  const auto counts = d.class_counts();
  std::size_t majority = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[majority]) majority = c;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (c == majority || counts[c] == 0) continue;
    double ratio = static_cast<double>(counts[majority]) / static_cast<double>(counts[c]);
    int rate = 100 * static_cast<int>(std::lround(std::max(0.0, ratio - 1.0)));
    plan.per_class_rate[static_cast<int>(c)] = std::min(rate, 300);
  }
  return plan;
}

// Per-feature numeric ranges of a dataset, for HEOM normalization.
inline std::vector<double> numeric_ranges(const Dataset& d) {
  std::vector<double> ranges(d.n_features(), 0.0);
  for (std::size_t f = 0; f < d.n_features(); ++f) {
    if (d.schema().features[f].kind != FeatureKind::Numeric) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& inst : d.instances()) {
      double v = inst.values[f];
      if (is_missing(v)) throw std::invalid_argument("SMOTE requires no missing values");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ranges[f] = d.n_instances() ? hi - lo : 0.0;
  }
  return ranges;
}

// HEOM: |delta|/range per numeric feature (zero-range features contribute 0),
// 0/1 mismatch per nominal feature.
inline double heom_distance(const Instance& a, const Instance& b,
                            const FeatureSchema& schema,
                            const std::vector<double>& ranges) {
  double sum = 0.0;
  for (std::size_t f = 0; f < schema.n_features(); ++f) {
    double term;
    if (schema.features[f].kind == FeatureKind::Numeric) {
      term = ranges[f] > 0.0 ? std::abs(a.values[f] - b.values[f]) / ranges[f] : 0.0;
    } else {
      term = a.values[f] == b.values[f] ? 0.0 : 1.0;
    }
    sum += term * term;
  }
  return std::sqrt(sum);
}

// Indices into `pool` of the min(k, |pool|) nearest neighbors of x, ordered by
// ascending distance with ties broken by pool index.
inline std::vector<std::size_t> nearest_neighbors(const Instance& x,
                                                  const std::vector<Instance>& pool,
                                                  int k, const FeatureSchema& schema,
                                                  const std::vector<double>& ranges) {
  if (pool.empty()) throw std::invalid_argument("empty neighbor pool");
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    dist.push_back({heom_distance(x, pool[i], schema, ranges), i});
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take),
                    dist.end());
  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = dist[i].second;
  return out;
}

// One synthetic instance on the segment from x to neighbor. Numeric
// coordinates interpolate by u; nominal coordinates copy from x when u < 0.5,
// from the neighbor otherwise.
inline Instance synthesize(const Instance& x, const Instance& neighbor, double u,
                           const FeatureSchema& schema) {
  if (x.class_label != neighbor.class_label)
    throw std::invalid_argument("synthesize requires a same-class neighbor");
  Instance out;
  out.values.resize(x.values.size());
  for (std::size_t f = 0; f < x.values.size(); ++f) {
    if (schema.features[f].kind == FeatureKind::Numeric)
      out.values[f] = x.values[f] + u * (neighbor.values[f] - x.values[f]);
    else
      out.values[f] = u < 0.5 ? x.values[f] : neighbor.values[f];
  }
  out.class_label = x.class_label;
  out.provenance = Provenance::Synthetic;
  return out;
}

// Appends, per class c with rate r, (r/100)*count(c) synthetic instances. The
// input rows are the untouched prefix of the output.
inline Dataset smote(const Dataset& d, const SmotePlan& plan, int threads = 1) {
  plan.validate();
  const auto counts = d.class_counts();
  for (const auto& [cls, rate] : plan.per_class_rate) {
    if (rate == 0) continue;
    if (cls < 0 || cls >= static_cast<int>(d.n_classes()))
      throw std::invalid_argument("oversampling rate for an unknown class");
    if (counts[static_cast<std::size_t>(cls)] < 2)
      throw std::invalid_argument(
          "class " + d.schema().class_values[static_cast<std::size_t>(cls)] +
          " has fewer than 2 instances; cannot oversample");
  }

  const auto ranges = numeric_ranges(d);

  // Work items are fixed up front: one per synthetic instance, in output
  // order, each with its own derived RNG stream.
  struct Job {
    std::size_t seed_index;   // index into the class pool
    int cls;
    std::uint64_t stream;
  };
  std::vector<std::vector<std::size_t>> pool_of(d.n_classes());
  for (std::size_t i = 0; i < d.n_instances(); ++i)
    pool_of[static_cast<std::size_t>(d[i].class_label)].push_back(i);

  std::vector<Job> jobs;
  std::uint64_t stream = 0;
  for (int cls = 0; cls < static_cast<int>(d.n_classes()); ++cls) {
    const int rate = plan.rate_for(cls);
    if (rate <= 0) continue;
    const int copies = rate / 100;
    const auto& pool = pool_of[static_cast<std::size_t>(cls)];
    for (std::size_t s = 0; s < pool.size(); ++s)
      for (int rep = 0; rep < copies; ++rep)
        jobs.push_back({s, cls, stream++});
  }

  std::vector<Instance> synthetic(jobs.size());
  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto& pool_idx = pool_of[static_cast<std::size_t>(job.cls)];
    const Instance& seed_inst = d[pool_idx[job.seed_index]];
    std::vector<Instance> pool;
    pool.reserve(pool_idx.size() - 1);
    for (std::size_t i = 0; i < pool_idx.size(); ++i)
      if (i != job.seed_index) pool.push_back(d[pool_idx[i]]);
    auto nn = nearest_neighbors(seed_inst, pool, plan.k_neighbors, d.schema(), ranges);
    Rng rng(derive_seed(plan.seed, job.stream));
    const Instance& neighbor = pool[nn[rng.next_index(nn.size())]];
    synthetic[j] = synthesize(seed_inst, neighbor, rng.next_double(), d.schema());
  };

  if (threads <= 1 || jobs.size() < 2) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                 jobs.size());
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      workers.emplace_back([&, t]() {
        for (std::size_t j = t; j < jobs.size(); j += nt) run_job(j);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<Instance> rows = d.instances();
  rows.insert(rows.end(), synthetic.begin(), synthetic.end());
  return Dataset(d.schema(), std::move(rows), d.name());
}

}  // namespace fsel
