#pragma once

// Experiment orchestration: the two-phase proposed pipeline, the baseline
// selection methods, and the fixed 10-fold evaluation of the classifier group
// on whatever projection a method selects.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsel/classifier.hpp"
#include "fsel/dataset.hpp"
#include "fsel/ga.hpp"
#include "fsel/io.hpp"
#include "fsel/metrics.hpp"
#include "fsel/refine.hpp"
#include "fsel/scoring.hpp"
#include "fsel/smote.hpp"

namespace fsel {

enum class Method { Proposed, AllFeatures, InfoGain, GaWrapper, SuGaWrapper };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::AllFeatures: return "all-features";
    case Method::InfoGain: return "info-gain";
    case Method::GaWrapper: return "ga-wrapper";
    case Method::SuGaWrapper: return "su-ga-wrapper";
  }
  return "?";
}

inline Method method_from_name(const std::string& name) {
  if (name == "proposed") return Method::Proposed;
  if (name == "all-features") return Method::AllFeatures;
  if (name == "info-gain") return Method::InfoGain;
  if (name == "ga-wrapper") return Method::GaWrapper;
  if (name == "su-ga-wrapper") return Method::SuGaWrapper;
  throw std::invalid_argument("unknown method: " + name);
}

struct SmoteConfig {
  bool auto_rates = true;                    // balance-seeking default plan
  std::map<std::string, int> rates_by_label; // explicit per-class percentages
  int k_neighbors = 5;
};

struct ThresholdConfig {
  ThresholdPolicy policy = ThresholdPolicy::mean();
  DiscretizeMethod discretize = DiscretizeMethod::Mdl;
  int equal_width_bins = 10;
};

struct RunConfig {
  std::string dataset_path;
  FileFormat format = FileFormat::Auto;
  std::string class_column;     // empty = last column
  std::string dataset_name;     // empty = relation/file name
  Method method = Method::Proposed;
  std::uint64_t seed = 1;
  int threads = 1;
  ImputePolicy impute = ImputePolicy::MeanMode;
  SmoteConfig smote;
  ThresholdConfig threshold;
  GAParams ga;
  int eval_folds = 10;
};

struct StageCounts {
  std::size_t initial_attributes = 0;
  std::size_t phase1_attributes = 0;
  std::size_t selected_after_filter = 0;   // 2nd phase step 1
  std::size_t selected_after_wrapper = 0;  // 2nd phase step 2
  std::size_t initial_samples = 0;
  std::size_t working_samples = 0;
};

struct RankingEntry {
  std::string feature;
  double score = 0.0;
  bool kept = false;
};

struct EvaluationResult {
  int folds = 0;
  std::vector<ClassifierScore> classifier_scores;
  std::vector<ConfusionMatrix> confusions;  // aligned with classifier_scores
  DatasetScore score;
};

struct StageTimings {
  double load_ms = 0.0;
  double phase1_ms = 0.0;
  double prefilter_ms = 0.0;
  double search_ms = 0.0;
  double evaluation_ms = 0.0;
  double total_ms = 0.0;
};

struct RunReport {
  RunConfig config;
  std::string dataset_name;
  StageCounts stages;
  std::optional<Phase1Report> phase1;
  std::vector<RankingEntry> ranking;        // empty when no prefilter ran
  std::optional<SearchTrace> search_trace;  // present when the GA ran
  double search_fitness = 0.0;
  FeatureSubset selected;                   // over the working dataset's schema
  std::vector<std::string> selected_names;
  EvaluationResult evaluation;
  StageTimings timings;
};

namespace detail {

class StageClock {
 public:
  StageClock() : start_(std::chrono::steady_clock::now()) {}
  double lap_ms() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline SmotePlan resolve_smote_plan(const SmoteConfig& cfg, const Dataset& d,
                                    std::uint64_t seed) {
  if (cfg.auto_rates) return default_smote_plan(d, seed, cfg.k_neighbors);
  SmotePlan plan;
  plan.seed = seed;
  plan.k_neighbors = cfg.k_neighbors;
  for (const auto& [label, rate] : cfg.rates_by_label) {
    const auto& values = d.schema().class_values;
    auto it = std::find(values.begin(), values.end(), label);
    if (it == values.end())
      throw std::invalid_argument("smote rate for unknown class label '" + label + "'");
    plan.per_class_rate[static_cast<int>(it - values.begin())] = rate;
  }
  return plan;
}

inline std::vector<RankingEntry> ranking_entries(const Dataset& d, const RankResult& r) {
  std::vector<RankingEntry> out;
  out.reserve(d.n_features());
  for (std::size_t f = 0; f < d.n_features(); ++f)
    out.push_back({d.schema().features[f].name, r.ranking.scores[f],
                   r.subset.contains(f)});
  return out;
}

}  // namespace detail

// Runs one method on one dataset and evaluates the classifier group with
// stratified eval_folds-fold cross-validation on the selected projection.
inline RunReport run_method(const RunConfig& cfg) {
  detail::StageClock clock;
  detail::StageClock total;
  RunReport report;
  report.config = cfg;

  Dataset original = [&] {
    Dataset raw = load_dataset(cfg.dataset_path, cfg.format,
                               LoadOptions{cfg.class_column});
    return impute_missing(raw, cfg.impute);
  }();
  report.dataset_name = cfg.dataset_name.empty() ? original.name() : cfg.dataset_name;
  report.timings.load_ms = clock.lap_ms();

  report.stages.initial_attributes = original.n_features();
  report.stages.initial_samples = original.n_instances();

  // Stage 1: the working dataset (phase 1 applies to the proposed method only).
  Dataset working = original;
  if (cfg.method == Method::Proposed) {
    SmotePlan plan =
        detail::resolve_smote_plan(cfg.smote, original, derive_seed(cfg.seed, 0x10ULL));
    Phase1Result phase1 = run_phase1(original, plan, cfg.threads);
    working = std::move(phase1.dataset);
    report.phase1 = std::move(phase1.report);
  }
  report.stages.phase1_attributes = working.n_features();
  report.stages.working_samples = working.n_instances();
  report.timings.phase1_ms = clock.lap_ms();

  // Stage 2: feature selection.
  GAParams ga = cfg.ga;
  ga.seed = derive_seed(cfg.seed, 0x6aULL);
  ga.threads = cfg.threads;

  switch (cfg.method) {
    case Method::AllFeatures: {
      report.selected = FeatureSubset::all(working.n_features());
      report.stages.selected_after_filter = working.n_features();
      report.timings.prefilter_ms = clock.lap_ms();
      break;
    }
    case Method::InfoGain: {
      RankResult rr = rank_and_threshold(working, cfg.threshold.policy,
                                         cfg.threshold.discretize, FeatureScorer::InfoGain,
                                         cfg.threshold.equal_width_bins);
      report.ranking = detail::ranking_entries(working, rr);
      report.selected = rr.subset;
      report.stages.selected_after_filter = rr.subset.count();
      report.timings.prefilter_ms = clock.lap_ms();
      break;
    }
    case Method::Proposed:
    case Method::GaWrapper:
    case Method::SuGaWrapper: {
      // ga-wrapper searches the full feature set; the other two prefilter it.
      RankResult rr;
      if (cfg.method == Method::GaWrapper) {
        rr = rank_and_threshold(working, ThresholdPolicy::top_fraction(1.0),
                                cfg.threshold.discretize, FeatureScorer::InfoGain,
                                cfg.threshold.equal_width_bins);
      } else {
        FeatureScorer scorer = cfg.method == Method::SuGaWrapper
                                   ? FeatureScorer::SymmetricalUncertainty
                                   : FeatureScorer::InfoGain;
        rr = rank_and_threshold(working, cfg.threshold.policy, cfg.threshold.discretize,
                                scorer, cfg.threshold.equal_width_bins);
      }
      report.ranking = detail::ranking_entries(working, rr);
      report.stages.selected_after_filter = rr.subset.count();
      report.timings.prefilter_ms = clock.lap_ms();

      GAResult result = ga_search(working, rr, ga);
      report.selected = result.subset;
      report.search_trace = std::move(result.trace);
      report.search_fitness = result.fitness;
      report.timings.search_ms = clock.lap_ms();
      break;
    }
  }
  report.stages.selected_after_wrapper = report.selected.count();
  for (std::size_t f : report.selected.indices())
    report.selected_names.push_back(working.schema().features[f].name);

  // Evaluation: 10-fold stratified CV of every classifier in the group on the
  // selected projection of the working dataset.
  Dataset projected = project(working, report.selected);
  FoldPlan folds =
      stratified_folds(projected, cfg.eval_folds, derive_seed(cfg.seed, 0xe7a1ULL));
  report.evaluation.folds = cfg.eval_folds;
  for (const ClassifierSpec& spec : classifier_group()) {
    CvResult cv = cv_evaluate(spec, projected, folds);
    ConfusionMatrix cm =
        confusion(cv.predicted_labels(), cv.actuals, projected.n_classes());
    ClassifierScore score;
    score.classifier = spec.name();
    score.misclassified = cm.misclassified();
    score.total = cm.total();
    score.rae = relative_absolute_error(cv.distributions(), cv.actuals);
    score.tp_rate = tp_rate_weighted(cm);
    report.evaluation.classifier_scores.push_back(score);
    report.evaluation.confusions.push_back(std::move(cm));
  }
  report.evaluation.score = dataset_score(report.evaluation.classifier_scores);
  report.timings.evaluation_ms = clock.lap_ms();
  report.timings.total_ms = total.lap_ms();
  return report;
}

// One method's scores across datasets, for comparison tables.
struct MethodRow {
  std::string method;
  std::map<std::string, DatasetScore> per_dataset;
};

struct ComparisonTable {
  std::vector<std::string> datasets;  // column order
  std::vector<MethodRow> rows;
  bool overall = false;
  std::map<std::string, SuiteScore> overall_scores;  // method -> cross-dataset mean
};

enum class Grouping { PerDataset, Overall };

// Builds the per-dataset comparison grid; the overall grouping additionally
// averages each method across datasets and requires every method to cover the
// same dataset set.
inline ComparisonTable compare(const std::vector<RunReport>& reports, Grouping grouping,
                               const std::vector<MethodRow>& injected = {}) {
  if (reports.size() + injected.size() < 2)
    throw std::invalid_argument("compare needs at least two reports");
  ComparisonTable table;
  std::map<std::string, MethodRow> by_method;
  std::vector<std::string> method_order;
  for (const auto& r : reports) {
    const std::string m = method_name(r.config.method);
    if (!by_method.count(m)) {
      by_method[m].method = m;
      method_order.push_back(m);
    }
    if (by_method[m].per_dataset.count(r.dataset_name))
      throw std::invalid_argument("duplicate report for method " + m + " on dataset " +
                                  r.dataset_name);
    by_method[m].per_dataset[r.dataset_name] = r.evaluation.score;
    if (std::find(table.datasets.begin(), table.datasets.end(), r.dataset_name) ==
        table.datasets.end())
      table.datasets.push_back(r.dataset_name);
  }
  for (const auto& row : injected) {
    if (by_method.count(row.method))
      throw std::invalid_argument("injected method collides: " + row.method);
    by_method[row.method] = row;
    method_order.push_back(row.method);
    for (const auto& [ds, score] : row.per_dataset)
      if (std::find(table.datasets.begin(), table.datasets.end(), ds) ==
          table.datasets.end())
        table.datasets.push_back(ds);
  }
  for (const auto& m : method_order) table.rows.push_back(by_method[m]);

  if (grouping == Grouping::Overall) {
    table.overall = true;
    for (const auto& row : table.rows) {
      std::vector<DatasetScore> scores;
      for (const auto& ds : table.datasets) {
        auto it = row.per_dataset.find(ds);
        if (it == row.per_dataset.end())
          throw std::invalid_argument("method " + row.method + " missing dataset " + ds +
                                      "; overall grouping needs equal method sets");
        scores.push_back(it->second);
      }
      table.overall_scores[row.method] = suite_score(scores);
    }
  }
  return table;
}

}  // namespace fsel
