#pragma once

// Entropy-based attribute scoring: entropy, conditional entropy, information
// gain and symmetrical uncertainty over discrete columns, supervised MDL
// discretization for numeric features, and threshold-based ranking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsel/dataset.hpp"

namespace fsel {

// H = -sum p*log2(p) over non-zero counts.
inline double entropy(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw std::invalid_argument("negative count");
    total += c;
  }
  if (total <= 0.0) throw std::invalid_argument("entropy of an all-zero distribution");
  double h = 0.0;
  for (double c : counts) {
    if (c == 0.0) continue;
    double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

namespace detail {

// Cell counts of the (x, y) contingency table plus marginals.
struct Contingency {
  std::vector<std::vector<double>> cells;  // [x][y]
  std::vector<double> x_marginal;
  std::vector<double> y_marginal;
  double total = 0.0;
};

inline Contingency contingency(const std::vector<int>& x, const std::vector<int>& y,
                               std::size_t x_card, std::size_t y_card) {
  if (x.size() != y.size()) throw std::invalid_argument("column length mismatch");
  if (x.empty()) throw std::invalid_argument("empty columns");
  Contingency t;
  t.cells.assign(x_card, std::vector<double>(y_card, 0.0));
  t.x_marginal.assign(x_card, 0.0);
  t.y_marginal.assign(y_card, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xi = static_cast<std::size_t>(x[i]);
    auto yi = static_cast<std::size_t>(y[i]);
    if (xi >= x_card || yi >= y_card) throw std::out_of_range("column value out of range");
    t.cells[xi][yi] += 1.0;
    t.x_marginal[xi] += 1.0;
    t.y_marginal[yi] += 1.0;
    t.total += 1.0;
  }
  return t;
}

}  // namespace detail

// H(Y|X) = sum_x p(x) H(Y | X=x).
inline double conditional_entropy(const std::vector<int>& x, const std::vector<int>& y,
                                  std::size_t x_card, std::size_t y_card) {
  const auto t = detail::contingency(x, y, x_card, y_card);
  double h = 0.0;
  for (std::size_t xi = 0; xi < x_card; ++xi) {
    if (t.x_marginal[xi] == 0.0) continue;
    h += (t.x_marginal[xi] / t.total) * entropy(t.cells[xi]);
  }
  return h;
}

// IG = H(Y) - H(Y|X).
inline double information_gain(const std::vector<int>& x, const std::vector<int>& y,
                               std::size_t x_card, std::size_t y_card) {
  const auto t = detail::contingency(x, y, x_card, y_card);
  double hy = entropy(t.y_marginal);
  double hyx = 0.0;
  for (std::size_t xi = 0; xi < x_card; ++xi) {
    if (t.x_marginal[xi] == 0.0) continue;
    hyx += (t.x_marginal[xi] / t.total) * entropy(t.cells[xi]);
  }
  return hy - hyx;
}

// SU = 2*IG / (H(X) + H(Y)); 0 when both entropies vanish.
inline double symmetrical_uncertainty(const std::vector<int>& x, const std::vector<int>& y,
                                      std::size_t x_card, std::size_t y_card) {
  const auto t = detail::contingency(x, y, x_card, y_card);
  double hx = entropy(t.x_marginal);
  double hy = entropy(t.y_marginal);
  if (hx + hy == 0.0) return 0.0;
  double hyx = 0.0;
  for (std::size_t xi = 0; xi < x_card; ++xi) {
    if (t.x_marginal[xi] == 0.0) continue;
    hyx += (t.x_marginal[xi] / t.total) * entropy(t.cells[xi]);
  }
  return 2.0 * (hy - hyx) / (hx + hy);
}

// Ascending cut points per numeric feature; nominal features have none.
struct Discretization {
  std::vector<std::vector<double>> cuts;

  // Bin index of value v for feature f.
  int bin(std::size_t f, double v) const {
    const auto& c = cuts[f];
    return static_cast<int>(std::upper_bound(c.begin(), c.end(), v) - c.begin());
  }
  std::size_t n_bins(std::size_t f) const { return cuts[f].size() + 1; }
};

enum class DiscretizeMethod { Mdl, EqualWidth };

namespace detail {

inline double entropy_of_range(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c == 0.0) continue;
    double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline int distinct_classes(const std::vector<double>& counts) {
  int k = 0;
  for (double c : counts)
    if (c > 0.0) ++k;
  return k;
}

// Recursive binary entropy split with the Fayyad-Irani MDL stopping rule.
// `points` is sorted by value; [lo, hi) is the working range.
inline void mdl_split(const std::vector<std::pair<double, int>>& points, std::size_t lo,
                      std::size_t hi, std::size_t n_classes, std::vector<double>& cuts) {
  const double n = static_cast<double>(hi - lo);
  if (n < 2.0) return;

  std::vector<double> total_counts(n_classes, 0.0);
  for (std::size_t i = lo; i < hi; ++i)
    total_counts[static_cast<std::size_t>(points[i].second)] += 1.0;
  const double h_all = entropy_of_range(total_counts);
  if (h_all == 0.0) return;

  // Scan boundary candidates between distinct adjacent values.
  std::vector<double> left(n_classes, 0.0);
  double best_gain = -1.0, best_cut = 0.0;
  std::vector<double> best_left;
  std::size_t best_pos = lo;
  for (std::size_t i = lo; i + 1 < hi; ++i) {
    left[static_cast<std::size_t>(points[i].second)] += 1.0;
    if (points[i].first == points[i + 1].first) continue;
    const double nl = static_cast<double>(i + 1 - lo);
    const double nr = n - nl;
    std::vector<double> right(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) right[c] = total_counts[c] - left[c];
    const double gain =
        h_all - (nl / n) * entropy_of_range(left) - (nr / n) * entropy_of_range(right);
    if (gain > best_gain + 1e-15) {
      best_gain = gain;
      best_cut = (points[i].first + points[i + 1].first) / 2.0;
      best_left = left;
      best_pos = i + 1;
    }
  }
  if (best_gain <= 0.0) return;

  std::vector<double> right(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) right[c] = total_counts[c] - best_left[c];
  const int k = distinct_classes(total_counts);
  const int k1 = distinct_classes(best_left);
  const int k2 = distinct_classes(right);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * h_all - k1 * entropy_of_range(best_left) -
                        k2 * entropy_of_range(right));
  const double threshold = (std::log2(n - 1.0) + delta) / n;
  if (best_gain <= threshold) return;

  cuts.push_back(best_cut);
  mdl_split(points, lo, best_pos, n_classes, cuts);
  mdl_split(points, best_pos, hi, n_classes, cuts);
}

}  // namespace detail

// Cut points for every numeric feature. MDL features with no accepted split
// keep zero cut points (single bin).
inline Discretization discretize(const Dataset& d, DiscretizeMethod method,
                                 int equal_width_bins = 10) {
  if (method == DiscretizeMethod::EqualWidth && equal_width_bins < 1)
    throw std::invalid_argument("bin count must be positive");
  Discretization disc;
  disc.cuts.assign(d.n_features(), {});
  for (std::size_t f = 0; f < d.n_features(); ++f) {
    if (d.schema().features[f].kind != FeatureKind::Numeric) continue;
    if (d.n_instances() == 0) continue;
    if (method == DiscretizeMethod::EqualWidth) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& inst : d.instances()) {
        double v = inst.values[f];
        if (is_missing(v)) throw std::invalid_argument("discretize requires imputed data");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > lo) {
        auto& cuts = disc.cuts[f];
        for (int b = 1; b < equal_width_bins; ++b) {
          double cut = lo + (hi - lo) * static_cast<double>(b) /
                                static_cast<double>(equal_width_bins);
          if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
        }
      }
    } else {
      std::vector<std::pair<double, int>> points;
      points.reserve(d.n_instances());
      for (const auto& inst : d.instances()) {
        double v = inst.values[f];
        if (is_missing(v)) throw std::invalid_argument("discretize requires imputed data");
        points.push_back({v, inst.class_label});
      }
      std::sort(points.begin(), points.end());
      detail::mdl_split(points, 0, points.size(), d.n_classes(), disc.cuts[f]);
      std::sort(disc.cuts[f].begin(), disc.cuts[f].end());
    }
  }
  return disc;
}

// Discrete column of feature f (bin index for numeric, value index for
// nominal) plus its cardinality.
inline std::pair<std::vector<int>, std::size_t> discrete_column(
    const Dataset& d, std::size_t f, const Discretization& disc) {
  std::vector<int> col(d.n_instances());
  const bool numeric = d.schema().features[f].kind == FeatureKind::Numeric;
  for (std::size_t i = 0; i < d.n_instances(); ++i) {
    double v = d[i].values[f];
    if (is_missing(v)) throw std::invalid_argument("scoring requires imputed data");
    col[i] = numeric ? disc.bin(f, v) : static_cast<int>(v);
  }
  std::size_t card = numeric ? disc.n_bins(f) : d.schema().features[f].values.size();
  return {std::move(col), card};
}

inline std::vector<int> class_column(const Dataset& d) {
  std::vector<int> y(d.n_instances());
  for (std::size_t i = 0; i < d.n_instances(); ++i) y[i] = d[i].class_label;
  return y;
}

enum class FeatureScorer { InfoGain, SymmetricalUncertainty };

struct FeatureRanking {
  std::vector<double> scores;        // per feature, in schema order
  std::vector<std::size_t> order;    // feature indices by descending score
};

struct ThresholdPolicy {
  enum class Kind { Positive, Mean, TopFraction, Absolute };
  Kind kind = Kind::Mean;
  double parameter = 0.0;  // fraction for TopFraction, threshold for Absolute

  static ThresholdPolicy positive() { return {Kind::Positive, 0.0}; }
  static ThresholdPolicy mean() { return {Kind::Mean, 0.0}; }
  static ThresholdPolicy top_fraction(double f) { return {Kind::TopFraction, f}; }
  static ThresholdPolicy absolute(double t) { return {Kind::Absolute, t}; }
};

struct RankResult {
  FeatureRanking ranking;
  FeatureSubset subset;
};

// Scores every feature against the class and keeps those passing the policy.
// An empty selection falls back to the single top-ranked feature.
inline RankResult rank_and_threshold(const Dataset& d, const ThresholdPolicy& policy,
                                     DiscretizeMethod method = DiscretizeMethod::Mdl,
                                     FeatureScorer scorer = FeatureScorer::InfoGain,
                                     int equal_width_bins = 10) {
  if (d.n_features() == 0) throw std::invalid_argument("no features to rank");
  const auto disc = discretize(d, method, equal_width_bins);
  const auto y = class_column(d);
  const std::size_t y_card = d.n_classes();

  FeatureRanking ranking;
  ranking.scores.resize(d.n_features());
  for (std::size_t f = 0; f < d.n_features(); ++f) {
    auto [x, x_card] = discrete_column(d, f, disc);
    ranking.scores[f] = scorer == FeatureScorer::InfoGain
                            ? information_gain(x, y, x_card, y_card)
                            : symmetrical_uncertainty(x, y, x_card, y_card);
  }
  ranking.order.resize(d.n_features());
  for (std::size_t f = 0; f < d.n_features(); ++f) ranking.order[f] = f;
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (ranking.scores[a] != ranking.scores[b])
                       return ranking.scores[a] > ranking.scores[b];
                     return a < b;
                   });

  std::vector<std::size_t> kept;
  switch (policy.kind) {
    case ThresholdPolicy::Kind::Positive:
      for (std::size_t f : ranking.order)
        if (ranking.scores[f] > 1e-12) kept.push_back(f);
      break;
    case ThresholdPolicy::Kind::Mean: {
      double mean = 0.0;
      for (double s : ranking.scores) mean += s;
      mean /= static_cast<double>(ranking.scores.size());
      for (std::size_t f : ranking.order)
        if (ranking.scores[f] > mean) kept.push_back(f);
      break;
    }
    case ThresholdPolicy::Kind::TopFraction: {
      if (policy.parameter <= 0.0 || policy.parameter > 1.0)
        throw std::invalid_argument("top-fraction parameter must be in (0, 1]");
      auto m = static_cast<std::size_t>(
          std::ceil(policy.parameter * static_cast<double>(d.n_features())));
      for (std::size_t i = 0; i < m && i < ranking.order.size(); ++i)
        kept.push_back(ranking.order[i]);
      break;
    }
    case ThresholdPolicy::Kind::Absolute:
      for (std::size_t f : ranking.order)
        if (ranking.scores[f] > policy.parameter) kept.push_back(f);
      break;
  }
  if (kept.empty()) kept.push_back(ranking.order[0]);

  return RankResult{std::move(ranking),
                    FeatureSubset::from_indices(d.n_features(), kept)};
}

}  // namespace fsel
