#pragma once

// JSON (canonical, stable key order), CSV and Markdown views of run reports
// and comparison tables, plus RunConfig JSON parsing with defaults.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsel/experiment.hpp"

namespace fsel {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// RunConfig <-> JSON

inline std::string impute_name(ImputePolicy p) {
  return p == ImputePolicy::MeanMode ? "mean-mode" : "drop-row";
}

inline ImputePolicy impute_from_name(const std::string& s) {
  if (s == "mean-mode") return ImputePolicy::MeanMode;
  if (s == "drop-row") return ImputePolicy::DropRow;
  throw std::invalid_argument("unknown imputation policy: " + s);
}

inline std::string format_name(FileFormat f) {
  switch (f) {
    case FileFormat::Auto: return "auto";
    case FileFormat::Arff: return "arff";
    case FileFormat::Csv: return "csv";
  }
  return "auto";
}

inline FileFormat format_from_name(const std::string& s) {
  if (s == "auto") return FileFormat::Auto;
  if (s == "arff") return FileFormat::Arff;
  if (s == "csv") return FileFormat::Csv;
  throw std::invalid_argument("unknown file format: " + s);
}

inline std::string policy_name(const ThresholdPolicy& p) {
  switch (p.kind) {
    case ThresholdPolicy::Kind::Positive: return "positive";
    case ThresholdPolicy::Kind::Mean: return "mean";
    case ThresholdPolicy::Kind::TopFraction: return "top-fraction";
    case ThresholdPolicy::Kind::Absolute: return "absolute";
  }
  return "mean";
}

inline ThresholdPolicy policy_from_json(const Json& j) {
  const std::string kind = j.value("policy", "mean");
  const double parameter = j.value("parameter", 0.0);
  if (kind == "positive") return ThresholdPolicy::positive();
  if (kind == "mean") return ThresholdPolicy::mean();
  if (kind == "top-fraction") return ThresholdPolicy::top_fraction(parameter);
  if (kind == "absolute") return ThresholdPolicy::absolute(parameter);
  throw std::invalid_argument("unknown threshold policy: " + kind);
}

inline Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dataset"] = {{"path", cfg.dataset_path},
                  {"format", format_name(cfg.format)},
                  {"class_column", cfg.class_column},
                  {"name", cfg.dataset_name}};
  j["method"] = method_name(cfg.method);
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["impute"] = impute_name(cfg.impute);
  Json rates;
  if (cfg.smote.auto_rates) {
    rates = "auto";
  } else {
    rates = Json::object();
    for (const auto& [label, rate] : cfg.smote.rates_by_label) rates[label] = rate;
  }
  j["smote"] = {{"rates", rates}, {"k_neighbors", cfg.smote.k_neighbors}};
  j["threshold"] = {{"policy", policy_name(cfg.threshold.policy)},
                    {"parameter", cfg.threshold.policy.parameter},
                    {"discretize",
                     cfg.threshold.discretize == DiscretizeMethod::Mdl ? "mdl"
                                                                       : "equal-width"},
                    {"bins", cfg.threshold.equal_width_bins}};
  j["ga"] = {{"population_size", cfg.ga.population_size},
             {"max_generations", cfg.ga.max_generations},
             {"crossover_prob", cfg.ga.crossover_prob},
             {"mutation_prob", cfg.ga.mutation_prob},
             {"elitism", cfg.ga.elitism},
             {"fitness_folds", cfg.ga.fitness_folds},
             {"seeding", cfg.ga.seeding == SeedingScheme::PrefixAndRandom
                             ? "prefix-random"
                             : "all-random"}};
  j["eval_folds"] = cfg.eval_folds;
  return j;
}

inline RunConfig config_from_json(const Json& j) {
  RunConfig cfg;
  if (j.contains("schema_version") && j["schema_version"].get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported config schema version");
  if (j.contains("dataset")) {
    const Json& d = j["dataset"];
    cfg.dataset_path = d.value("path", "");
    cfg.format = format_from_name(d.value("format", "auto"));
    cfg.class_column = d.value("class_column", "");
    cfg.dataset_name = d.value("name", "");
  }
  cfg.method = method_from_name(j.value("method", "proposed"));
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.threads = j.value("threads", 1);
  cfg.impute = impute_from_name(j.value("impute", "mean-mode"));
  if (j.contains("smote")) {
    const Json& s = j["smote"];
    cfg.smote.k_neighbors = s.value("k_neighbors", 5);
    if (s.contains("rates") && s["rates"].is_object()) {
      cfg.smote.auto_rates = false;
      for (const auto& [label, rate] : s["rates"].items())
        cfg.smote.rates_by_label[label] = rate.get<int>();
    }
  }
  if (j.contains("threshold")) {
    const Json& t = j["threshold"];
    cfg.threshold.policy = policy_from_json(t);
    const std::string disc = t.value("discretize", "mdl");
    if (disc == "mdl")
      cfg.threshold.discretize = DiscretizeMethod::Mdl;
    else if (disc == "equal-width")
      cfg.threshold.discretize = DiscretizeMethod::EqualWidth;
    else
      throw std::invalid_argument("unknown discretization method: " + disc);
    cfg.threshold.equal_width_bins = t.value("bins", 10);
  }
  if (j.contains("ga")) {
    const Json& g = j["ga"];
    cfg.ga.population_size = g.value("population_size", 20);
    cfg.ga.max_generations = g.value("max_generations", 20);
    cfg.ga.crossover_prob = g.value("crossover_prob", 0.6);
    cfg.ga.mutation_prob = g.value("mutation_prob", 0.033);
    cfg.ga.elitism = g.value("elitism", 1);
    cfg.ga.fitness_folds = g.value("fitness_folds", 5);
    const std::string seeding = g.value("seeding", "prefix-random");
    if (seeding == "prefix-random")
      cfg.ga.seeding = SeedingScheme::PrefixAndRandom;
    else if (seeding == "all-random")
      cfg.ga.seeding = SeedingScheme::AllRandom;
    else
      throw std::invalid_argument("unknown seeding scheme: " + seeding);
  }
  cfg.eval_folds = j.value("eval_folds", 10);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  Json j = Json::parse(in);
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// RunReport -> JSON

inline Json report_to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_to_json(r.config);
  j["dataset"] = {{"name", r.dataset_name},
                  {"samples", r.stages.initial_samples},
                  {"features", r.stages.initial_attributes}};
  j["stages"] = {{"initial_attributes", r.stages.initial_attributes},
                 {"phase1_attributes", r.stages.phase1_attributes},
                 {"phase2_filter_attributes", r.stages.selected_after_filter},
                 {"phase2_wrapper_attributes", r.stages.selected_after_wrapper},
                 {"initial_samples", r.stages.initial_samples},
                 {"working_samples", r.stages.working_samples}};
  if (r.phase1) {
    j["phase1"] = {{"before_smote", r.phase1->before_smote},
                   {"after_smote", r.phase1->after_smote},
                   {"removed_by_filter", r.phase1->removed_by_filter},
                   {"removed_original", r.phase1->removed_original},
                   {"removed_synthetic", r.phase1->removed_synthetic},
                   {"after_merge", r.phase1->after_merge}};
  }
  if (!r.ranking.empty()) {
    Json ranking = Json::array();
    for (const auto& e : r.ranking)
      ranking.push_back({{"feature", e.feature}, {"score", e.score}, {"kept", e.kept}});
    j["ranking"] = ranking;
  }
  if (r.search_trace) {
    Json gens = Json::array();
    for (const auto& g : r.search_trace->generations) {
      std::size_t size = 0;
      for (auto b : g.best_genes) size += b;
      gens.push_back({{"best_fitness", g.best_fitness},
                      {"mean_fitness", g.mean_fitness},
                      {"best_subset_size", size}});
    }
    j["search"] = {{"generations", gens},
                   {"evaluations", r.search_trace->evaluation_count},
                   {"fitness", r.search_fitness}};
  }
  j["selected"] = {{"indices", r.selected.indices()}, {"names", r.selected_names}};

  Json classifiers = Json::array();
  for (std::size_t i = 0; i < r.evaluation.classifier_scores.size(); ++i) {
    const auto& s = r.evaluation.classifier_scores[i];
    classifiers.push_back({{"name", s.classifier},
                           {"misclassified", s.misclassified},
                           {"total", s.total},
                           {"rae", s.rae},
                           {"tp_rate", s.tp_rate},
                           {"confusion", r.evaluation.confusions[i].counts}});
  }
  j["evaluation"] = {{"folds", r.evaluation.folds},
                     {"classifiers", classifiers},
                     {"ams", r.evaluation.score.ams},
                     {"arae", r.evaluation.score.arae},
                     {"atp_rate", r.evaluation.score.atp_rate}};
  j["timings"] = {{"load_ms", r.timings.load_ms},
                  {"phase1_ms", r.timings.phase1_ms},
                  {"prefilter_ms", r.timings.prefilter_ms},
                  {"search_ms", r.timings.search_ms},
                  {"evaluation_ms", r.timings.evaluation_ms},
                  {"total_ms", r.timings.total_ms}};
  return j;
}

// Timing fields are the only nondeterministic part of a report.
inline Json strip_timings(Json j) {
  j.erase("timings");
  return j;
}

// ---------------------------------------------------------------------------
// Tabular renderings

namespace detail {

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

// Stage table in the four-step layout used throughout the run reports.
inline std::string report_to_markdown(const Json& j) {
  std::ostringstream os;
  os << "# Run report: " << j["dataset"]["name"].get<std::string>() << " / "
     << j["config"]["method"].get<std::string>() << "\n\n";
  const Json& st = j["stages"];
  os << "| Steps | Initial State | 1st Phase | 2nd Phase(1) | 2nd Phase(2) |\n";
  os << "| --- | --- | --- | --- | --- |\n";
  os << "| Attributes | " << st["initial_attributes"] << " | " << st["phase1_attributes"]
     << " | " << st["phase2_filter_attributes"] << " | "
     << st["phase2_wrapper_attributes"] << " |\n";
  os << "| Samples | " << st["initial_samples"] << " | " << st["working_samples"] << " | "
     << st["working_samples"] << " | " << st["working_samples"] << " |\n\n";

  os << "| Classifier | Misclassified | RAE (%) | TP Rate |\n";
  os << "| --- | --- | --- | --- |\n";
  for (const auto& c : j["evaluation"]["classifiers"]) {
    os << "| " << c["name"].get<std::string>() << " | " << c["misclassified"] << " | "
       << detail::fixed4(c["rae"].get<double>()) << " | "
       << detail::fixed4(c["tp_rate"].get<double>()) << " |\n";
  }
  os << "| **group mean** | " << detail::fixed4(j["evaluation"]["ams"].get<double>())
     << " | " << detail::fixed4(j["evaluation"]["arae"].get<double>()) << " | "
     << detail::fixed4(j["evaluation"]["atp_rate"].get<double>()) << " |\n";
  return os.str();
}

inline std::string report_to_csv(const Json& j) {
  std::ostringstream os;
  os << "dataset,method,classifier,misclassified,total,rae,tp_rate\n";
  const std::string ds = j["dataset"]["name"].get<std::string>();
  const std::string method = j["config"]["method"].get<std::string>();
  for (const auto& c : j["evaluation"]["classifiers"]) {
    os << ds << "," << method << "," << c["name"].get<std::string>() << ","
       << c["misclassified"] << "," << c["total"] << ","
       << detail::fixed4(c["rae"].get<double>()) << ","
       << detail::fixed4(c["tp_rate"].get<double>()) << "\n";
  }
  return os.str();
}

inline Json comparison_to_json(const ComparisonTable& t) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["datasets"] = t.datasets;
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    r["method"] = row.method;
    Json per = Json::object();
    for (const auto& ds : t.datasets) {
      auto it = row.per_dataset.find(ds);
      if (it == row.per_dataset.end()) continue;
      per[ds] = {{"ams", it->second.ams},
                 {"arae", it->second.arae},
                 {"atp_rate", it->second.atp_rate}};
    }
    r["scores"] = per;
    rows.push_back(r);
  }
  j["rows"] = rows;
  if (t.overall) {
    Json overall = Json::object();
    for (const auto& row : t.rows) {
      const auto& s = t.overall_scores.at(row.method);
      overall[row.method] = {{"oams", s.oams},
                             {"oarae", s.oarae},
                             {"oatp_rate", s.oatp_rate}};
    }
    j["overall"] = overall;
  }
  return j;
}

inline std::string comparison_to_markdown(const ComparisonTable& t) {
  std::ostringstream os;
  auto metric_table = [&](const std::string& title, auto getter) {
    os << "## " << title << "\n\n| Method |";
    for (const auto& ds : t.datasets) os << " " << ds << " |";
    os << "\n| --- |";
    for (std::size_t i = 0; i < t.datasets.size(); ++i) os << " --- |";
    os << "\n";
    for (const auto& row : t.rows) {
      os << "| " << row.method << " |";
      for (const auto& ds : t.datasets) {
        auto it = row.per_dataset.find(ds);
        os << " " << (it == row.per_dataset.end() ? "-" : detail::fixed4(getter(it->second)))
           << " |";
      }
      os << "\n";
    }
    os << "\n";
  };
  metric_table("AMS", [](const DatasetScore& s) { return s.ams; });
  metric_table("ARAE (%)", [](const DatasetScore& s) { return s.arae; });
  metric_table("ATPRate", [](const DatasetScore& s) { return s.atp_rate; });
  if (t.overall) {
    os << "## Overall\n\n| Method | OAMS | OARAE (%) | OATPRate |\n| --- | --- | --- | --- |\n";
    for (const auto& row : t.rows) {
      const auto& s = t.overall_scores.at(row.method);
      os << "| " << row.method << " | " << detail::fixed4(s.oams) << " | "
         << detail::fixed4(s.oarae) << " | " << detail::fixed4(s.oatp_rate) << " |\n";
    }
  }
  return os.str();
}

inline std::string comparison_to_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "method,dataset,ams,arae,atp_rate\n";
  for (const auto& row : t.rows)
    for (const auto& ds : t.datasets) {
      auto it = row.per_dataset.find(ds);
      if (it == row.per_dataset.end()) continue;
      os << row.method << "," << ds << "," << detail::fixed4(it->second.ams) << ","
         << detail::fixed4(it->second.arae) << "," << detail::fixed4(it->second.atp_rate)
         << "\n";
    }
  if (t.overall) {
    for (const auto& row : t.rows) {
      const auto& s = t.overall_scores.at(row.method);
      os << row.method << ",OVERALL," << detail::fixed4(s.oams) << ","
         << detail::fixed4(s.oarae) << "," << detail::fixed4(s.oatp_rate) << "\n";
    }
  }
  return os.str();
}

// Injected rows let externally published scores sit alongside computed ones.
inline std::vector<MethodRow> injected_rows_from_json(const Json& j) {
  std::vector<MethodRow> rows;
  for (const auto& [method, scores] : j.items()) {
    MethodRow row;
    row.method = method;
    for (const auto& [ds, s] : scores.items())
      row.per_dataset[ds] = DatasetScore{s.value("ams", 0.0), s.value("arae", 0.0),
                                         s.value("atp_rate", 0.0)};
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

enum class EmitFormat { JsonFmt, CsvFmt, MarkdownFmt };

inline EmitFormat emit_format_from_name(const std::string& s) {
  if (s == "json") return EmitFormat::JsonFmt;
  if (s == "csv") return EmitFormat::CsvFmt;
  if (s == "markdown" || s == "md") return EmitFormat::MarkdownFmt;
  throw std::invalid_argument("unknown emit format: " + s);
}

inline void emit_report(const RunReport& r, EmitFormat format, const std::string& path) {
  const Json j = report_to_json(r);
  switch (format) {
    case EmitFormat::JsonFmt: write_text_file(path, j.dump(2) + "\n"); break;
    case EmitFormat::CsvFmt: write_text_file(path, report_to_csv(j)); break;
    case EmitFormat::MarkdownFmt: write_text_file(path, report_to_markdown(j)); break;
  }
}

inline void emit_comparison(const ComparisonTable& t, EmitFormat format,
                            const std::string& path) {
  switch (format) {
    case EmitFormat::JsonFmt:
      write_text_file(path, comparison_to_json(t).dump(2) + "\n");
      break;
    case EmitFormat::CsvFmt: write_text_file(path, comparison_to_csv(t)); break;
    case EmitFormat::MarkdownFmt: write_text_file(path, comparison_to_markdown(t)); break;
  }
}

}  // namespace fsel
