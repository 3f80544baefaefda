// fselect: run feature-selection methods on a dataset, compare runs, and
// pretty-print reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsel/experiment.hpp"
#include "fsel/report.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FSEL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable FSEL_SEED='" << env << "'\n";
    }
  }
  return 1;
}

fsel::ThresholdPolicy parse_policy(const std::string& s) {
  if (s == "mean") return fsel::ThresholdPolicy::mean();
  if (s == "positive") return fsel::ThresholdPolicy::positive();
  if (s.rfind("top:", 0) == 0)
    return fsel::ThresholdPolicy::top_fraction(std::stod(s.substr(4)));
  if (s.rfind("abs:", 0) == 0)
    return fsel::ThresholdPolicy::absolute(std::stod(s.substr(4)));
  throw CLI::ValidationError("--threshold", "expected mean|positive|top:F|abs:T");
}

// "label:rate,label:rate" or "auto"
void parse_rates(const std::string& s, fsel::SmoteConfig& cfg) {
  if (s == "auto") {
    cfg.auto_rates = true;
    cfg.rates_by_label.clear();
    return;
  }
  cfg.auto_rates = false;
  cfg.rates_by_label.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.rfind(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--smote-rates", "expected label:rate[,label:rate...]");
    cfg.rates_by_label[item.substr(0, colon)] = std::stoi(item.substr(colon + 1));
  }
}

int cmd_run(const std::string& config_path, const std::string& data,
            const std::string& format, const std::string& method,
            const std::string& class_column, const std::string& name, long long seed,
            int threads, const std::string& impute, const std::string& smote_rates,
            int k_neighbors, const std::string& threshold, const std::string& discretize,
            int bins, int eval_folds, int fitness_folds, const std::string& out,
            const std::string& emit) {
  fsel::RunConfig cfg;
  if (!config_path.empty()) cfg = fsel::load_config(config_path);
  if (cfg.seed == 1) cfg.seed = default_seed();
  if (!data.empty()) cfg.dataset_path = data;
  if (!format.empty()) cfg.format = fsel::format_from_name(format);
  if (!method.empty()) cfg.method = fsel::method_from_name(method);
  if (!class_column.empty()) cfg.class_column = class_column;
  if (!name.empty()) cfg.dataset_name = name;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (threads > 0) cfg.threads = threads;
  if (!impute.empty()) cfg.impute = fsel::impute_from_name(impute);
  if (!smote_rates.empty()) parse_rates(smote_rates, cfg.smote);
  if (k_neighbors > 0) cfg.smote.k_neighbors = k_neighbors;
  if (!threshold.empty()) cfg.threshold.policy = parse_policy(threshold);
  if (!discretize.empty()) {
    if (discretize == "mdl")
      cfg.threshold.discretize = fsel::DiscretizeMethod::Mdl;
    else if (discretize == "equal-width")
      cfg.threshold.discretize = fsel::DiscretizeMethod::EqualWidth;
    else
      throw CLI::ValidationError("--discretize", "expected mdl|equal-width");
  }
  if (bins > 0) cfg.threshold.equal_width_bins = bins;
  if (eval_folds > 0) cfg.eval_folds = eval_folds;
  if (fitness_folds > 0) cfg.ga.fitness_folds = fitness_folds;
  if (cfg.dataset_path.empty())
    throw CLI::ValidationError("--data", "no dataset path given (flag or config)");

  fsel::RunReport report = fsel::run_method(cfg);
  const fsel::Json j = fsel::report_to_json(report);
  if (!out.empty())
    fsel::emit_report(report, fsel::emit_format_from_name(emit), out);
  else
    std::cout << j.dump(2) << "\n";

  std::cerr << report.dataset_name << " [" << fsel::method_name(cfg.method)
            << "] attributes " << report.stages.initial_attributes << " -> "
            << report.stages.selected_after_filter << " -> "
            << report.stages.selected_after_wrapper << ", samples "
            << report.stages.initial_samples << " -> " << report.stages.working_samples
            << ", AMS " << report.evaluation.score.ams << ", ARAE "
            << report.evaluation.score.arae << "%, ATPRate "
            << report.evaluation.score.atp_rate << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& report_paths, const std::string& grouping,
                const std::string& inject_path, const std::string& out,
                const std::string& format) {
  std::vector<fsel::Json> raw;
  for (const auto& p : report_paths) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open report " + p);
    raw.push_back(fsel::Json::parse(in));
  }
  // Rebuild the minimal report surface compare() needs from the JSON files.
  std::vector<fsel::RunReport> rebuilt;
  for (const auto& j : raw) {
    fsel::RunReport r;
    r.config.method = fsel::method_from_name(j.at("config").at("method"));
    r.dataset_name = j.at("dataset").at("name");
    r.evaluation.score.ams = j.at("evaluation").at("ams");
    r.evaluation.score.arae = j.at("evaluation").at("arae");
    r.evaluation.score.atp_rate = j.at("evaluation").at("atp_rate");
    rebuilt.push_back(std::move(r));
  }
  std::vector<fsel::MethodRow> injected;
  if (!inject_path.empty()) {
    std::ifstream in(inject_path);
    if (!in) throw std::runtime_error("cannot open injection file " + inject_path);
    injected = fsel::injected_rows_from_json(fsel::Json::parse(in));
  }
  fsel::Grouping g =
      grouping == "overall" ? fsel::Grouping::Overall : fsel::Grouping::PerDataset;
  fsel::ComparisonTable table = fsel::compare(rebuilt, g, injected);
  if (!out.empty()) {
    fsel::emit_comparison(table, fsel::emit_format_from_name(format), out);
  } else if (format == "json") {
    std::cout << fsel::comparison_to_json(table).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << fsel::comparison_to_csv(table);
  } else {
    std::cout << fsel::comparison_to_markdown(table);
  }
  return 0;
}

int cmd_inspect(const std::string& report_path, const std::string& format) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open report " + report_path);
  fsel::Json j = fsel::Json::parse(in);
  if (format == "markdown")
    std::cout << fsel::report_to_markdown(j);
  else if (format == "csv")
    std::cout << fsel::report_to_csv(j);
  else
    std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fselect: two-phase hybrid feature selection toolkit"};
  app.require_subcommand(1);

  // run
  std::string config_path, data, format, method, class_column, name;
  long long seed = -1;
  int threads = 0, k_neighbors = 0, bins = 0, eval_folds = 0, fitness_folds = 0;
  std::string impute, smote_rates, threshold, discretize, out, emit = "json";
  auto* run = app.add_subcommand("run", "run one method on one dataset");
  run->add_option("--config", config_path, "RunConfig JSON file");
  run->add_option("--data", data, "dataset path (.arff or .csv)");
  run->add_option("--format", format, "arff|csv|auto");
  run->add_option("--method", method,
                  "proposed|all-features|info-gain|ga-wrapper|su-ga-wrapper");
  run->add_option("--class-column", class_column, "class column name (default: last)");
  run->add_option("--name", name, "dataset display name");
  run->add_option("--seed", seed, "RNG seed (default: FSEL_SEED or 1)");
  run->add_option("--threads", threads, "worker threads for fitness/SMOTE");
  run->add_option("--impute", impute, "mean-mode|drop-row");
  run->add_option("--smote-rates", smote_rates, "auto or label:rate[,label:rate...]");
  run->add_option("--k-neighbors", k_neighbors, "SMOTE neighbor count");
  run->add_option("--threshold", threshold, "mean|positive|top:F|abs:T");
  run->add_option("--discretize", discretize, "mdl|equal-width");
  run->add_option("--bins", bins, "equal-width bin count");
  run->add_option("--eval-folds", eval_folds, "outer CV folds (default 10)");
  run->add_option("--fitness-folds", fitness_folds, "wrapper CV folds (default 5)");
  run->add_option("--out", out, "write the report here instead of stdout");
  run->add_option("--emit", emit, "json|csv|markdown (with --out)");

  // compare
  std::vector<std::string> report_paths;
  std::string grouping = "per-dataset", inject_path, cmp_out, cmp_format = "markdown";
  auto* cmp = app.add_subcommand("compare", "tabulate scores across runs");
  cmp->add_option("reports", report_paths, "run report JSON files")->required();
  cmp->add_option("--grouping", grouping, "per-dataset|overall");
  cmp->add_option("--inject", inject_path, "JSON file with external method scores");
  cmp->add_option("--out", cmp_out, "write the table here instead of stdout");
  cmp->add_option("--format", cmp_format, "json|csv|markdown");

  // inspect
  std::string inspect_path, inspect_format = "markdown";
  auto* ins = app.add_subcommand("inspect", "pretty-print a run report");
  ins->add_option("report", inspect_path, "run report JSON file")->required();
  ins->add_option("--format", inspect_format, "json|csv|markdown");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, data, format, method, class_column, name, seed, threads,
                     impute, smote_rates, k_neighbors, threshold, discretize, bins,
                     eval_folds, fitness_folds, out, emit);
    if (cmp->parsed())
      return cmd_compare(report_paths, grouping, inject_path, cmp_out, cmp_format);
    if (ins->parsed()) return cmd_inspect(inspect_path, inspect_format);
  } catch (const fsel::ParseError& e) {
    std::cerr << "[load] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
