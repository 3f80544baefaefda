#pragma once

// Sample-domain refinement: oversample, drop instances the Naive Bayes filter
// misclassifies, then merge the survivors' synthetic part back onto the full
// original dataset.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fsel/dataset.hpp"
#include "fsel/naive_bayes.hpp"
#include "fsel/smote.hpp"

namespace fsel {

struct Phase1Report {
  std::size_t before_smote = 0;
  std::size_t after_smote = 0;
  std::size_t removed_by_filter = 0;
  std::size_t removed_original = 0;
  std::size_t removed_synthetic = 0;
  std::size_t after_merge = 0;
  std::vector<std::size_t> removed_indices;
};

struct FilterResult {
  Dataset dataset;
  std::vector<std::size_t> removed_indices;
};

// Fits NB on the whole dataset and removes every instance it misclassifies
// (resubstitution). Survivor order is preserved.
inline FilterResult filter_misclassified(const Dataset& d) {
  if (d.n_instances() == 0) throw std::invalid_argument("cannot filter an empty dataset");
  const NBModel model = NBModel::fit(d);
  std::vector<Instance> kept;
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < d.n_instances(); ++i) {
    if (model.posterior(d[i]).predicted_label == d[i].class_label)
      kept.push_back(d[i]);
    else
      removed.push_back(i);
  }
  if (kept.empty())
    throw std::runtime_error("filter removed every instance; refusing to continue");
  return FilterResult{Dataset(d.schema(), std::move(kept), d.name()), std::move(removed)};
}

// All original instances, in order, followed by the refined dataset's
// surviving synthetic instances. Originals inside `refined` are dropped so
// the original rows are never duplicated.
inline Dataset merge_with_original(const Dataset& original, const Dataset& refined) {
  if (original.schema() != refined.schema())
    throw std::invalid_argument("merge requires equal schemas");
  std::vector<Instance> rows = original.instances();
  for (const auto& inst : refined.instances())
    if (inst.provenance == Provenance::Synthetic) rows.push_back(inst);
  return Dataset(original.schema(), std::move(rows), original.name());
}

struct Phase1Result {
  Dataset dataset;
  Phase1Report report;
};

inline Phase1Result run_phase1(const Dataset& original, const SmotePlan& plan,
                               int threads = 1) {
  Phase1Report report;
  report.before_smote = original.n_instances();
  Dataset oversampled = smote(original, plan, threads);
  report.after_smote = oversampled.n_instances();
  FilterResult filtered = filter_misclassified(oversampled);
  report.removed_by_filter = filtered.removed_indices.size();
  for (std::size_t i : filtered.removed_indices) {
    if (i < report.before_smote)
      report.removed_original++;
    else
      report.removed_synthetic++;
  }
  report.removed_indices = std::move(filtered.removed_indices);
  Dataset merged = merge_with_original(original, filtered.dataset);
  report.after_merge = merged.n_instances();
  return Phase1Result{std::move(merged), std::move(report)};
}

}  // namespace fsel
