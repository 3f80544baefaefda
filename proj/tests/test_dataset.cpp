#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fsel/dataset.hpp"
#include "fsel/io.hpp"
#include "test_util.hpp"

using namespace fsel;
using testutil::datasets_equal;
using testutil::numeric_dataset;

namespace {

const char* kSmallArff = R"(@relation demo
@attribute a numeric
@attribute b {x,y}
@attribute class {pos,neg}
@data
5.1,x,pos
3.0,y,neg
?,x,pos
)";

Dataset parse_arff(const std::string& text, const LoadOptions& opts = {}) {
  std::istringstream in(text);
  return load_arff(in, opts);
}

}  // namespace

TEST_CASE("ARFF loading maps attributes, missing markers and labels", "[dataset]") {
  Dataset d = parse_arff(kSmallArff);
  REQUIRE(d.name() == "demo");
  REQUIRE(d.n_features() == 2);
  REQUIRE(d.n_instances() == 3);
  REQUIRE(d.n_classes() == 2);
  CHECK(d.schema().features[0].kind == FeatureKind::Numeric);
  CHECK(d.schema().features[1].kind == FeatureKind::Nominal);
  CHECK(d[0].values[0] == 5.1);
  CHECK(d[0].values[1] == 0.0);  // "x"
  CHECK(d[0].class_label == 0);
  CHECK(d[1].class_label == 1);
  CHECK(is_missing(d[2].values[0]));
  for (const auto& inst : d.instances()) CHECK(inst.provenance == Provenance::Original);
}

TEST_CASE("ARFF with an empty data section yields zero instances", "[dataset]") {
  Dataset d = parse_arff("@relation e\n@attribute a numeric\n@attribute c {p,q}\n@data\n");
  CHECK(d.n_instances() == 0);
  CHECK(d.n_features() == 1);
}

TEST_CASE("ARFF errors carry line numbers", "[dataset]") {
  SECTION("row arity mismatch") {
    try {
      parse_arff("@relation e\n@attribute a numeric\n@attribute c {p}\n@data\n1.0\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SECTION("unknown nominal value") {
    try {
      parse_arff("@relation e\n@attribute a {u,v}\n@attribute c {p}\n@data\nw,p\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("unknown nominal value") != std::string::npos);
    }
  }
  SECTION("numeric parse failure") {
    CHECK_THROWS_AS(
        parse_arff("@relation e\n@attribute a numeric\n@attribute c {p}\n@data\nzz,p\n"),
        ParseError);
  }
  SECTION("sparse rows rejected") {
    CHECK_THROWS_AS(
        parse_arff("@relation e\n@attribute a numeric\n@attribute c {p}\n@data\n{0 1},p\n"),
        ParseError);
  }
}

TEST_CASE("CSV loading sniffs column types and class labels", "[dataset]") {
  std::istringstream in("a,b,label\n1.5,red,yes\n2.5,blue,no\n,red,yes\n");
  Dataset d = load_csv(in);
  REQUIRE(d.n_features() == 2);
  CHECK(d.schema().features[0].kind == FeatureKind::Numeric);
  CHECK(d.schema().features[1].kind == FeatureKind::Nominal);
  CHECK(d.schema().class_values == std::vector<std::string>{"yes", "no"});
  CHECK(is_missing(d[2].values[0]));
  CHECK(d[2].values[1] == 0.0);  // red

  SECTION("class column by name") {
    std::istringstream in2("label,v\nyes,1\nno,2\n");
    Dataset d2 = load_csv(in2, LoadOptions{"label"});
    CHECK(d2.schema().class_name == "label");
    CHECK(d2.schema().features[0].name == "v");
  }
}

TEST_CASE("serialize then reload round-trips exactly", "[dataset]") {
  Dataset d = parse_arff(kSmallArff);
  std::ostringstream out;
  save_arff(d, out);
  Dataset back = parse_arff(out.str());
  CHECK(datasets_equal(d, back));

  // and through CSV for a numeric-only dataset with awkward doubles
  Dataset nd = numeric_dataset({{0.1, 1.0 / 3.0}, {2.5e-17, 7.0}}, {0, 1}, 2);
  std::ostringstream csv;
  save_csv(nd, csv);
  std::istringstream csv_in(csv.str());
  Dataset nback = load_csv(csv_in);
  REQUIRE(nback.n_instances() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t f = 0; f < 2; ++f) CHECK(nback[i].values[f] == nd[i].values[f]);
}

TEST_CASE("mean-mode imputation", "[dataset]") {
  SECTION("numeric mean") {
    auto d = numeric_dataset({{2.0}, {missing_value()}, {4.0}}, {0, 0, 1}, 2);
    Dataset imputed = impute_missing(d, ImputePolicy::MeanMode);
    CHECK(imputed[1].values[0] == 3.0);
  }
  SECTION("identity on complete data") {
    auto d = numeric_dataset({{1.0}, {2.0}}, {0, 1}, 2);
    CHECK(datasets_equal(impute_missing(d, ImputePolicy::MeanMode), d));
  }
  SECTION("nominal mode with low-index tie break") {
    FeatureSchema schema;
    schema.features.push_back({"x", FeatureKind::Nominal, {"a", "b"}});
    schema.class_values = {"c0"};
    std::vector<Instance> rows(4);
    rows[0].values = {0.0};
    rows[1].values = {0.0};
    rows[2].values = {1.0};
    rows[3].values = {missing_value()};
    Dataset d(schema, rows);
    Dataset imputed = impute_missing(d, ImputePolicy::MeanMode);
    CHECK(imputed[3].values[0] == 0.0);  // mode 'a'

    // exact tie: two a's, two b's -> lowest value index wins
    rows[2].values = {1.0};
    rows[3].values = {1.0};
    rows.push_back(Instance{{missing_value()}, 0, Provenance::Original});
    Dataset tie(schema, rows);
    CHECK(impute_missing(tie, ImputePolicy::MeanMode)[4].values[0] == 0.0);
  }
  SECTION("idempotence") {
    auto d = numeric_dataset({{2.0}, {missing_value()}, {4.0}}, {0, 0, 1}, 2);
    Dataset once = impute_missing(d, ImputePolicy::MeanMode);
    Dataset twice = impute_missing(once, ImputePolicy::MeanMode);
    CHECK(datasets_equal(once, twice));
  }
  SECTION("drop-row removes exactly the incomplete instances") {
    auto d = numeric_dataset({{2.0}, {missing_value()}, {4.0}}, {0, 0, 1}, 2);
    Dataset dropped = impute_missing(d, ImputePolicy::DropRow);
    REQUIRE(dropped.n_instances() == 2);
    CHECK(dropped[0].values[0] == 2.0);
    CHECK(dropped[1].values[0] == 4.0);
  }
  SECTION("entirely missing feature is an error under mean-mode") {
    auto d = numeric_dataset({{missing_value()}, {missing_value()}}, {0, 1}, 2);
    CHECK_THROWS(impute_missing(d, ImputePolicy::MeanMode));
  }
}

TEST_CASE("projection keeps order, class column and row count", "[dataset]") {
  auto d = numeric_dataset({{1, 2, 3}, {4, 5, 6}}, {0, 1}, 2);
  SECTION("full mask is the identity") {
    CHECK(datasets_equal(project(d, FeatureSubset::all(3)), d));
  }
  SECTION("empty mask keeps only the class column") {
    Dataset p = project(d, FeatureSubset::none(3));
    CHECK(p.n_features() == 0);
    CHECK(p.n_instances() == 2);
    CHECK(p[1].class_label == 1);
  }
  SECTION("selected features stay in schema order") {
    Dataset p = project(d, FeatureSubset::from_indices(3, {2, 0}));
    REQUIRE(p.n_features() == 2);
    CHECK(p.schema().features[0].name == "f0");
    CHECK(p.schema().features[1].name == "f2");
    CHECK(p[1].values[0] == 4.0);
    CHECK(p[1].values[1] == 6.0);
  }
  SECTION("length mismatch is an error") {
    CHECK_THROWS(project(d, FeatureSubset::all(2)));
  }
  SECTION("composition equals intersection") {
    auto s1 = FeatureSubset::from_indices(3, {0, 2});
    Dataset p1 = project(d, s1);
    // restrict s2 = {f2} expressed on p1's index space
    Dataset p2 = project(p1, FeatureSubset::from_indices(2, {1}));
    Dataset direct = project(d, FeatureSubset::from_indices(3, {2}));
    CHECK(datasets_equal(p2, direct));
  }
}

TEST_CASE("stratified folds balance classes and are deterministic", "[dataset]") {
  SECTION("exact divisibility gives one per class per fold") {
    std::vector<std::vector<double>> rows(10, {0.0});
    std::vector<int> labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i][0] = static_cast<double>(i);
    auto d = numeric_dataset(rows, labels, 2);
    FoldPlan plan = stratified_folds(d, 5, 7);
    std::vector<std::vector<int>> per_fold(5, std::vector<int>(2, 0));
    for (std::size_t i = 0; i < labels.size(); ++i)
      per_fold[static_cast<std::size_t>(plan.assignments[i])]
              [static_cast<std::size_t>(labels[i])]++;
    for (const auto& f : per_fold) {
      CHECK(f[0] == 1);
      CHECK(f[1] == 1);
    }
  }
  SECTION("same seed twice yields the same plan") {
    auto d = numeric_dataset({{1}, {2}, {3}, {4}, {5}}, {0, 1, 0, 1, 0}, 2);
    FoldPlan a = stratified_folds(d, 2, 99);
    FoldPlan b = stratified_folds(d, 2, 99);
    CHECK(a.assignments == b.assignments);
  }
  SECTION("7 instances of one class over 3 folds split 3/2/2") {
    std::vector<std::vector<double>> rows(7, {0.0});
    auto d = numeric_dataset(rows, std::vector<int>(7, 0), 1);
    FoldPlan plan = stratified_folds(d, 3, 1);
    std::vector<int> counts(3, 0);
    for (int a : plan.assignments) counts[static_cast<std::size_t>(a)]++;
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<int>{2, 2, 3});
  }
  SECTION("stratification property on random labelings") {
    Rng rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 5 + rng.next_index(40);
      const std::size_t nc = 1 + rng.next_index(4);
      std::vector<std::vector<double>> rows(n, {0.0});
      std::vector<int> labels(n);
      for (auto& l : labels) l = static_cast<int>(rng.next_index(nc));
      auto d = numeric_dataset(rows, labels, nc);
      const int k = 2 + static_cast<int>(rng.next_index(std::min<std::size_t>(n - 1, 6)));
      FoldPlan plan = stratified_folds(d, k, rng.next_u64());
      for (std::size_t c = 0; c < nc; ++c) {
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i)
          if (labels[i] == static_cast<int>(c))
            counts[static_cast<std::size_t>(plan.assignments[i])]++;
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        CHECK(*hi - *lo <= 1);
      }
      // no fold empty while k <= n
      std::vector<int> sizes(static_cast<std::size_t>(k), 0);
      for (int a : plan.assignments) sizes[static_cast<std::size_t>(a)]++;
      CHECK(*std::min_element(sizes.begin(), sizes.end()) >= 1);
    }
  }
  SECTION("k out of range") {
    auto d = numeric_dataset({{1}, {2}}, {0, 1}, 2);
    CHECK_THROWS(stratified_folds(d, 3, 1));
    CHECK_THROWS(stratified_folds(d, 1, 1));
  }
}
