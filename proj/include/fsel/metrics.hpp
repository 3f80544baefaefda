#pragma once

// Confusion matrices, misclassification counts, relative absolute error,
// weighted TP rates and the plain-mean aggregates built from them.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsel {

struct ConfusionMatrix {
  // rows = actual class, columns = predicted class
  std::vector<std::vector<std::size_t>> counts;

  std::size_t n_classes() const { return counts.size(); }
  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& row : counts)
      for (std::size_t c : row) t += c;
    return t;
  }
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
  }
  std::size_t misclassified() const { return total() - trace(); }
};

inline ConfusionMatrix confusion(const std::vector<int>& predicted,
                                 const std::vector<int>& actual,
                                 std::size_t n_classes) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("prediction/actual length mismatch");
  if (predicted.empty()) throw std::invalid_argument("no predictions");
  ConfusionMatrix cm;
  cm.counts.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    int a = actual[i];
    int p = predicted[i];
    if (a < 0 || p < 0 || a >= static_cast<int>(n_classes) ||
        p >= static_cast<int>(n_classes))
      throw std::out_of_range("label out of range at index " + std::to_string(i));
    cm.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)]++;
  }
  return cm;
}

// RAE as a percentage: the summed absolute probability error relative to a
// predictor that always emits the class-frequency vector of the actuals.
inline double relative_absolute_error(const std::vector<std::vector<double>>& probs,
                                      const std::vector<int>& actual) {
  if (probs.size() != actual.size())
    throw std::invalid_argument("prediction/actual length mismatch");
  if (probs.empty()) throw std::invalid_argument("no predictions");
  const std::size_t n_classes = probs[0].size();
  std::vector<double> prior(n_classes, 0.0);
  for (int a : actual) {
    if (a < 0 || a >= static_cast<int>(n_classes))
      throw std::out_of_range("actual label out of range");
    prior[static_cast<std::size_t>(a)] += 1.0;
  }
  for (double& q : prior) q /= static_cast<double>(actual.size());

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != n_classes)
      throw std::invalid_argument("ragged probability rows");
    for (std::size_t j = 0; j < n_classes; ++j) {
      double y = (static_cast<int>(j) == actual[i]) ? 1.0 : 0.0;
      num += std::abs(probs[i][j] - y);
      den += std::abs(prior[j] - y);
    }
  }
  if (den == 0.0) {
    if (num == 0.0) return 0.0;  // single-class data predicted perfectly
    throw std::runtime_error("RAE undefined: zero-error baseline with nonzero error");
  }
  return 100.0 * num / den;
}

// Class-support-weighted true positive rate; numerically equal to trace/total.
inline double tp_rate_weighted(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw std::invalid_argument("empty confusion matrix");
  double rate = 0.0;
  for (std::size_t c = 0; c < cm.n_classes(); ++c) {
    std::size_t support = 0;
    for (std::size_t j = 0; j < cm.n_classes(); ++j) support += cm.counts[c][j];
    if (support == 0) continue;  // empty class contributes zero weight
    double weight = static_cast<double>(support) / static_cast<double>(total);
    rate += weight * (static_cast<double>(cm.counts[c][c]) / static_cast<double>(support));
  }
  return rate;
}

// The plain mean used by every aggregate parameter (per classifier group and
// per dataset collection alike).
inline double aggregate(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate of an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Per-classifier summary on one dataset.
struct ClassifierScore {
  std::string classifier;
  std::size_t misclassified = 0;
  std::size_t total = 0;
  double rae = 0.0;      // percent
  double tp_rate = 0.0;  // [0, 1]
};

// Classifier-group aggregates for one dataset.
struct DatasetScore {
  double ams = 0.0;
  double arae = 0.0;
  double atp_rate = 0.0;
};

// Cross-dataset aggregates.
struct SuiteScore {
  double oams = 0.0;
  double oarae = 0.0;
  double oatp_rate = 0.0;
};

inline DatasetScore dataset_score(const std::vector<ClassifierScore>& scores) {
  std::vector<double> ms, rae, tp;
  ms.reserve(scores.size());
  for (const auto& s : scores) {
    ms.push_back(static_cast<double>(s.misclassified));
    rae.push_back(s.rae);
    tp.push_back(s.tp_rate);
  }
  return DatasetScore{aggregate(ms), aggregate(rae), aggregate(tp)};
}

inline SuiteScore suite_score(const std::vector<DatasetScore>& scores) {
  std::vector<double> ams, arae, atp;
  for (const auto& s : scores) {
    ams.push_back(s.ams);
    arae.push_back(s.arae);
    atp.push_back(s.atp_rate);
  }
  return SuiteScore{aggregate(ams), aggregate(arae), aggregate(atp)};
}

}  // namespace fsel
