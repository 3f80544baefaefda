#pragma once

// Shared builders for the test suites.

#include <cmath>
#include <string>
#include <vector>

#include "fsel/dataset.hpp"

namespace testutil {

// All-numeric dataset with class labels "c0".."c{k-1}".
inline fsel::Dataset numeric_dataset(const std::vector<std::vector<double>>& rows,
                                     const std::vector<int>& labels,
                                     std::size_t n_classes,
                                     const std::string& name = "toy") {
  fsel::FeatureSchema schema;
  const std::size_t nf = rows.empty() ? 0 : rows[0].size();
  for (std::size_t f = 0; f < nf; ++f)
    schema.features.push_back({"f" + std::to_string(f), fsel::FeatureKind::Numeric, {}});
  for (std::size_t c = 0; c < n_classes; ++c)
    schema.class_values.push_back("c" + std::to_string(c));
  std::vector<fsel::Instance> instances;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    fsel::Instance inst;
    inst.values = rows[i];
    inst.class_label = labels[i];
    instances.push_back(std::move(inst));
  }
  return fsel::Dataset(std::move(schema), std::move(instances), name);
}

// Single nominal feature with the given per-row value indices.
inline fsel::Dataset nominal_dataset(const std::vector<int>& column,
                                     std::size_t cardinality,
                                     const std::vector<int>& labels,
                                     std::size_t n_classes) {
  fsel::FeatureSchema schema;
  fsel::FeatureInfo f;
  f.name = "x";
  f.kind = fsel::FeatureKind::Nominal;
  for (std::size_t v = 0; v < cardinality; ++v) f.values.push_back("v" + std::to_string(v));
  schema.features.push_back(std::move(f));
  for (std::size_t c = 0; c < n_classes; ++c)
    schema.class_values.push_back("c" + std::to_string(c));
  std::vector<fsel::Instance> instances;
  for (std::size_t i = 0; i < column.size(); ++i) {
    fsel::Instance inst;
    inst.values = {static_cast<double>(column[i])};
    inst.class_label = labels[i];
    instances.push_back(std::move(inst));
  }
  return fsel::Dataset(std::move(schema), std::move(instances), "nominal-toy");
}

inline bool values_equal(double a, double b) {
  if (fsel::is_missing(a) && fsel::is_missing(b)) return true;
  return a == b;
}

inline bool datasets_equal(const fsel::Dataset& a, const fsel::Dataset& b) {
  if (!(a.schema() == b.schema())) return false;
  if (a.n_instances() != b.n_instances()) return false;
  for (std::size_t i = 0; i < a.n_instances(); ++i) {
    if (a[i].class_label != b[i].class_label) return false;
    if (a[i].values.size() != b[i].values.size()) return false;
    for (std::size_t f = 0; f < a[i].values.size(); ++f)
      if (!values_equal(a[i].values[f], b[i].values[f])) return false;
  }
  return true;
}

}  // namespace testutil
