#pragma once

// Uniform driver over the classifier group: a ClassifierSpec names the
// learner, fit_predict trains and scores a test set, cv_evaluate pools
// out-of-fold predictions over a FoldPlan.

#include <stdexcept>
#include <string>
#include <vector>

#include "fsel/bftree.hpp"
#include "fsel/dataset.hpp"
#include "fsel/logistic.hpp"
#include "fsel/naive_bayes.hpp"

namespace fsel {

enum class ClassifierKind { NaiveBayes, Logistic, BFTree };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  LogisticParams logistic;
  TreeParams tree;

  std::string name() const {
    switch (kind) {
      case ClassifierKind::NaiveBayes: return "naive-bayes";
      case ClassifierKind::Logistic: return "logistic";
      case ClassifierKind::BFTree: return "bf-tree";
    }
    return "?";
  }
};

inline ClassifierSpec classifier_spec(const std::string& name) {
  if (name == "naive-bayes") return {ClassifierKind::NaiveBayes, {}, {}};
  if (name == "logistic") return {ClassifierKind::Logistic, {}, {}};
  if (name == "bf-tree") return {ClassifierKind::BFTree, {}, {}};
  throw std::invalid_argument("unknown classifier: " + name);
}

// The group evaluated by the experiment harness.
inline std::vector<ClassifierSpec> classifier_group() {
  return {classifier_spec("naive-bayes"), classifier_spec("logistic"),
          classifier_spec("bf-tree")};
}

inline std::vector<ProbPrediction> fit_predict(const ClassifierSpec& spec,
                                               const Dataset& train,
                                               const Dataset& test) {
  if (train.schema() != test.schema())
    throw std::invalid_argument("train/test schema mismatch");
  if (train.n_instances() == 0) throw std::invalid_argument("empty training set");
  std::vector<ProbPrediction> out;
  out.reserve(test.n_instances());
  switch (spec.kind) {
    case ClassifierKind::NaiveBayes: {
      NBModel m = NBModel::fit(train);
      for (const auto& inst : test.instances()) out.push_back(m.posterior(inst));
      break;
    }
    case ClassifierKind::Logistic: {
      LogisticModel m = LogisticModel::fit(train, spec.logistic);
      for (const auto& inst : test.instances()) out.push_back(m.predict(inst));
      break;
    }
    case ClassifierKind::BFTree: {
      BFTreeModel m = BFTreeModel::fit(train, spec.tree);
      for (const auto& inst : test.instances()) out.push_back(m.predict(inst));
      break;
    }
  }
  return out;
}

struct CvResult {
  std::vector<ProbPrediction> predictions;  // dataset order
  std::vector<int> actuals;

  std::vector<int> predicted_labels() const {
    std::vector<int> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) out.push_back(p.predicted_label);
    return out;
  }
  std::vector<std::vector<double>> distributions() const {
    std::vector<std::vector<double>> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) out.push_back(p.distribution);
    return out;
  }
};

// Every instance is predicted exactly once by a model not trained on it;
// output order matches the dataset order.
inline CvResult cv_evaluate(const ClassifierSpec& spec, const Dataset& d,
                            const FoldPlan& folds) {
  if (folds.assignments.size() != d.n_instances())
    throw std::invalid_argument("fold plan does not cover the dataset");
  CvResult result;
  result.predictions.resize(d.n_instances());
  result.actuals.resize(d.n_instances());
  for (int fold = 0; fold < folds.k; ++fold) {
    std::vector<Instance> train_rows;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < d.n_instances(); ++i) {
      if (folds.assignments[i] == fold)
        test_idx.push_back(i);
      else
        train_rows.push_back(d[i]);
    }
    if (test_idx.empty()) continue;
    Dataset train(d.schema(), std::move(train_rows), d.name());
    std::vector<Instance> test_rows;
    test_rows.reserve(test_idx.size());
    for (std::size_t i : test_idx) test_rows.push_back(d[i]);
    Dataset test(d.schema(), std::move(test_rows), d.name());
    auto preds = fit_predict(spec, train, test);
    for (std::size_t j = 0; j < test_idx.size(); ++j) {
      result.predictions[test_idx[j]] = preds[j];
      result.actuals[test_idx[j]] = d[test_idx[j]].class_label;
    }
  }
  return result;
}

}  // namespace fsel
