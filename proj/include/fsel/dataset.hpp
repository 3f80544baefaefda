#pragma once

// Tabular data model: typed feature schema, instances with provenance,
// missing-value imputation, stratified fold plans and subset projection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsel/rng.hpp"

namespace fsel {

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

enum class FeatureKind { Numeric, Nominal };

struct FeatureInfo {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> values;  // nominal kinds only

  bool operator==(const FeatureInfo&) const = default;
};

struct FeatureSchema {
  std::vector<FeatureInfo> features;
  std::string class_name = "class";
  std::vector<std::string> class_values;

  std::size_t n_features() const { return features.size(); }
  std::size_t n_classes() const { return class_values.size(); }

  bool operator==(const FeatureSchema&) const = default;

  void validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& f : features) {
      if (!seen.insert(f.name).second)
        throw std::invalid_argument("duplicate feature name: " + f.name);
      if (f.kind == FeatureKind::Nominal && f.values.empty())
        throw std::invalid_argument("nominal feature with empty value list: " + f.name);
    }
    if (seen.count(class_name))
      throw std::invalid_argument("class name collides with a feature: " + class_name);
    if (class_values.empty())
      throw std::invalid_argument("class value list is empty");
  }
};

enum class Provenance : std::uint8_t { Original, Synthetic };

struct Instance {
  std::vector<double> values;  // numeric value or nominal value index; NaN marks missing
  int class_label = 0;
  Provenance provenance = Provenance::Original;
};

// Ordered bitmask over a schema's feature indices.
class FeatureSubset {
 public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<std::uint8_t> mask) : mask_(std::move(mask)) {}

  static FeatureSubset all(std::size_t n) {
    return FeatureSubset(std::vector<std::uint8_t>(n, 1));
  }
  static FeatureSubset none(std::size_t n) {
    return FeatureSubset(std::vector<std::uint8_t>(n, 0));
  }
  static FeatureSubset from_indices(std::size_t n, const std::vector<std::size_t>& idx) {
    std::vector<std::uint8_t> m(n, 0);
    for (std::size_t i : idx) {
      if (i >= n) throw std::out_of_range("feature index out of range");
      m[i] = 1;
    }
    return FeatureSubset(std::move(m));
  }

  std::size_t size() const { return mask_.size(); }
  bool contains(std::size_t i) const { return mask_.at(i) != 0; }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
  }
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
      if (mask_[i]) out.push_back(i);
    return out;
  }
  FeatureSubset intersect(const FeatureSubset& o) const {
    if (o.size() != size()) throw std::invalid_argument("subset size mismatch");
    std::vector<std::uint8_t> m(mask_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) m[i] = mask_[i] & o.mask_[i];
    return FeatureSubset(std::move(m));
  }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool operator==(const FeatureSubset&) const = default;

 private:
  std::vector<std::uint8_t> mask_;
};

// Immutable table of instances conforming to one schema. Every transformation
// returns a new Dataset, so instances can be shared across concurrent readers.
class Dataset {
 public:
  Dataset(FeatureSchema schema, std::vector<Instance> instances, std::string name = "dataset")
      : schema_(std::move(schema)), instances_(std::move(instances)), name_(std::move(name)) {
    schema_.validate();
    for (std::size_t r = 0; r < instances_.size(); ++r) {
      const Instance& inst = instances_[r];
      if (inst.values.size() != schema_.n_features())
        throw std::invalid_argument("instance " + std::to_string(r) +
                                    " arity does not match schema");
      if (inst.class_label < 0 ||
          inst.class_label >= static_cast<int>(schema_.n_classes()))
        throw std::invalid_argument("instance " + std::to_string(r) +
                                    " class label out of range");
      for (std::size_t f = 0; f < inst.values.size(); ++f) {
        if (schema_.features[f].kind != FeatureKind::Nominal) continue;
        double v = inst.values[f];
        if (is_missing(v)) continue;
        if (v != std::floor(v) || v < 0 ||
            v >= static_cast<double>(schema_.features[f].values.size()))
          throw std::invalid_argument("instance " + std::to_string(r) +
                                      " has an invalid nominal index at feature " +
                                      schema_.features[f].name);
      }
    }
  }

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }
  const std::string& name() const { return name_; }

  std::size_t n_instances() const { return instances_.size(); }
  std::size_t n_features() const { return schema_.n_features(); }
  std::size_t n_classes() const { return schema_.n_classes(); }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(n_classes(), 0);
    for (const auto& inst : instances_) counts[static_cast<std::size_t>(inst.class_label)]++;
    return counts;
  }

  bool has_missing() const {
    for (const auto& inst : instances_)
      for (double v : inst.values)
        if (is_missing(v)) return true;
    return false;
  }

 private:
  FeatureSchema schema_;
  std::vector<Instance> instances_;
  std::string name_;
};

// Per-instance fold assignment for stratified k-fold evaluation.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;
  std::uint64_t seed = 0;
};

enum class ImputePolicy { MeanMode, DropRow };

// Keeps exactly the selected features, in schema order; the class column is
// always retained and the instance count is unchanged.
inline Dataset project(const Dataset& d, const FeatureSubset& s) {
  if (s.size() != d.n_features())
    throw std::invalid_argument("subset length does not match schema width");
  const auto idx = s.indices();
  FeatureSchema schema;
  schema.class_name = d.schema().class_name;
  schema.class_values = d.schema().class_values;
  schema.features.reserve(idx.size());
  for (std::size_t i : idx) schema.features.push_back(d.schema().features[i]);
  std::vector<Instance> rows;
  rows.reserve(d.n_instances());
  for (const auto& inst : d.instances()) {
    Instance out;
    out.values.reserve(idx.size());
    for (std::size_t i : idx) out.values.push_back(inst.values[i]);
    out.class_label = inst.class_label;
    out.provenance = inst.provenance;
    rows.push_back(std::move(out));
  }
  return Dataset(std::move(schema), std::move(rows), d.name());
}

inline Dataset impute_missing(const Dataset& d, ImputePolicy policy) {
  if (policy == ImputePolicy::DropRow) {
    std::vector<Instance> rows;
    for (const auto& inst : d.instances()) {
      bool any = false;
      for (double v : inst.values)
        if (is_missing(v)) { any = true; break; }
      if (!any) rows.push_back(inst);
    }
    return Dataset(d.schema(), std::move(rows), d.name());
  }

  const std::size_t nf = d.n_features();
  std::vector<double> replacement(nf, 0.0);
  std::vector<bool> needed(nf, false);
  for (std::size_t f = 0; f < nf; ++f) {
    bool any_missing = false;
    if (d.schema().features[f].kind == FeatureKind::Numeric) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& inst : d.instances()) {
        double v = inst.values[f];
        if (is_missing(v)) { any_missing = true; continue; }
        sum += v;
        ++n;
      }
      if (any_missing && n == 0)
        throw std::runtime_error("feature " + d.schema().features[f].name +
                                 " is entirely missing; mean imputation impossible");
      replacement[f] = n ? sum / static_cast<double>(n) : 0.0;
    } else {
      std::vector<std::size_t> counts(d.schema().features[f].values.size(), 0);
      std::size_t n = 0;
      for (const auto& inst : d.instances()) {
        double v = inst.values[f];
        if (is_missing(v)) { any_missing = true; continue; }
        counts[static_cast<std::size_t>(v)]++;
        ++n;
      }
      if (any_missing && n == 0)
        throw std::runtime_error("feature " + d.schema().features[f].name +
                                 " is entirely missing; mode imputation impossible");
      std::size_t best = 0;
      for (std::size_t v = 1; v < counts.size(); ++v)
        if (counts[v] > counts[best]) best = v;  // ties keep the lowest value index
      replacement[f] = static_cast<double>(best);
    }
    needed[f] = any_missing;
  }

  std::vector<Instance> rows = d.instances();
  for (auto& inst : rows)
    for (std::size_t f = 0; f < nf; ++f)
      if (needed[f] && is_missing(inst.values[f])) inst.values[f] = replacement[f];
  return Dataset(d.schema(), std::move(rows), d.name());
}

// Deterministic stratified fold assignment: per-class index lists are shuffled
// with a seed derived from (seed, class) and dealt round-robin with a fold
// cursor carried across classes, so per-class counts differ by at most one and
// no fold stays empty while k <= sample count.
inline FoldPlan stratified_folds(const Dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be at least 2");
  if (static_cast<std::size_t>(k) > d.n_instances())
    throw std::invalid_argument("fold count exceeds sample count");

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(d.n_instances(), 0);

  std::vector<std::vector<std::size_t>> by_class(d.n_classes());
  for (std::size_t i = 0; i < d.n_instances(); ++i)
    by_class[static_cast<std::size_t>(d[i].class_label)].push_back(i);

  int cursor = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    Rng rng(derive_seed(seed, c));
    shuffle(members, rng);
    for (std::size_t i : members) {
      plan.assignments[i] = cursor;
      cursor = (cursor + 1) % k;
    }
  }
  return plan;
}

}  // namespace fsel
