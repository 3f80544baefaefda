#pragma once

// Best-first decision tree: nodes are expanded in order of Gini-impurity
// reduction, splits are binary (numeric thresholds at midpoints between
// class-boundary values, nominal one-vs-rest), expansion stops at min-leaf 2
// or zero gain. Leaf probabilities are Laplace-smoothed class frequencies.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "fsel/dataset.hpp"
#include "fsel/naive_bayes.hpp"  // ProbPrediction

namespace fsel {

struct TreeParams {
  int min_leaf = 2;
};

class BFTreeModel {
 public:
  static BFTreeModel fit(const Dataset& d, const TreeParams& params = {}) {
    if (d.n_instances() == 0) throw std::invalid_argument("cannot fit on an empty dataset");
    BFTreeModel m;
    m.n_classes_ = d.n_classes();
    m.params_ = params;

    std::vector<std::size_t> all(d.n_instances());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    const int root = m.make_leaf(d, all);
    std::priority_queue<Candidate> frontier;
    Candidate cand;
    if (m.best_split(d, all, cand)) {
      cand.node = root;
      cand.members = std::move(all);
      frontier.push(std::move(cand));
    }
    while (!frontier.empty()) {
      Candidate top = frontier.top();
      frontier.pop();
      m.expand(d, top, frontier);
    }
    return m;
  }

  ProbPrediction predict(const Instance& inst) const {
    int node = 0;
    while (!nodes_[static_cast<std::size_t>(node)].leaf) {
      const Node& nd = nodes_[static_cast<std::size_t>(node)];
      double v = inst.values[nd.feature];
      if (is_missing(v)) throw std::invalid_argument("missing value in tree input");
      bool left = nd.numeric ? (v <= nd.threshold)
                             : (static_cast<std::size_t>(v) == nd.value);
      node = left ? nd.left : nd.right;
    }
    ProbPrediction out;
    out.distribution = nodes_[static_cast<std::size_t>(node)].probs;
    out.predicted_label = argmax_lowest(out.distribution);
    return out;
  }

  std::size_t depth() const { return depth_of(0); }

 private:
  struct Node {
    bool leaf = true;
    std::size_t feature = 0;
    bool numeric = true;
    double threshold = 0.0;   // numeric: go left when value <= threshold
    std::size_t value = 0;    // nominal: go left when value == this index
    int left = -1, right = -1;
    std::vector<double> probs;
  };

  struct Split {
    std::size_t feature = 0;
    bool numeric = true;
    double threshold = 0.0;
    std::size_t value = 0;
    double gain = 0.0;  // impurity reduction weighted by node share
  };

  struct Candidate {
    int node = -1;
    std::vector<std::size_t> members;
    Split split;
    bool operator<(const Candidate& o) const { return split.gain < o.split.gain; }
  };

  static double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double g = 1.0;
    for (double c : counts) {
      double p = c / total;
      g -= p * p;
    }
    return g;
  }

  int make_leaf(const Dataset& d, const std::vector<std::size_t>& members) {
    Node node;
    node.probs.assign(n_classes_, 1.0);  // Laplace numerators
    for (std::size_t i : members)
      node.probs[static_cast<std::size_t>(d[i].class_label)] += 1.0;
    double total = static_cast<double>(members.size() + n_classes_);
    for (double& p : node.probs) p /= total;
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Finds the best admissible split of `members`; returns false when no split
  // with positive gain and both children >= min_leaf exists.
  bool best_split(const Dataset& d, const std::vector<std::size_t>& members,
                  Candidate& out) const {
    const double n = static_cast<double>(members.size());
    if (members.size() < 2 * static_cast<std::size_t>(params_.min_leaf)) return false;

    std::vector<double> parent_counts(n_classes_, 0.0);
    for (std::size_t i : members)
      parent_counts[static_cast<std::size_t>(d[i].class_label)] += 1.0;
    const double parent_gini = gini(parent_counts, n);
    if (parent_gini == 0.0) return false;

    Split best;
    bool found = false;
    auto consider = [&](const Split& s) {
      if (s.gain <= 1e-12) return;
      if (!found || s.gain > best.gain + 1e-15) {
        best = s;
        found = true;
      }
    };

    for (std::size_t f = 0; f < d.n_features(); ++f) {
      if (d.schema().features[f].kind == FeatureKind::Numeric) {
        std::vector<std::pair<double, int>> sorted;
        sorted.reserve(members.size());
        for (std::size_t i : members) sorted.push_back({d[i].values[f], d[i].class_label});
        std::sort(sorted.begin(), sorted.end());

        // Group equal values; a midpoint is a candidate only at a class
        // boundary (adjacent groups are not pure with the same class).
        struct Group {
          double value;
          double n = 0.0;
          int sole_class = -1;  // -1 when mixed
          std::vector<double> counts;
        };
        std::vector<Group> groups;
        for (const auto& [v, c] : sorted) {
          if (groups.empty() || groups.back().value != v) {
            Group g;
            g.value = v;
            g.sole_class = c;
            g.counts.assign(n_classes_, 0.0);
            groups.push_back(std::move(g));
          }
          Group& g = groups.back();
          g.counts[static_cast<std::size_t>(c)] += 1.0;
          g.n += 1.0;
          if (g.sole_class != c) g.sole_class = -1;
        }

        std::vector<double> left(n_classes_, 0.0);
        double nl = 0.0;
        for (std::size_t gi = 0; gi + 1 < groups.size(); ++gi) {
          const Group& g = groups[gi];
          for (std::size_t c = 0; c < n_classes_; ++c) left[c] += g.counts[c];
          nl += g.n;
          const Group& next_g = groups[gi + 1];
          if (g.sole_class >= 0 && g.sole_class == next_g.sole_class) continue;
          double nr = n - nl;
          if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
          std::vector<double> right(n_classes_);
          for (std::size_t c = 0; c < n_classes_; ++c) right[c] = parent_counts[c] - left[c];
          double child = (nl / n) * gini(left, nl) + (nr / n) * gini(right, nr);
          Split s;
          s.feature = f;
          s.numeric = true;
          s.threshold = (g.value + next_g.value) / 2.0;
          s.gain = parent_gini - child;
          consider(s);
        }
      } else {
        const std::size_t nv = d.schema().features[f].values.size();
        std::vector<std::vector<double>> per_value(nv, std::vector<double>(n_classes_, 0.0));
        std::vector<double> value_n(nv, 0.0);
        for (std::size_t i : members) {
          auto v = static_cast<std::size_t>(d[i].values[f]);
          per_value[v][static_cast<std::size_t>(d[i].class_label)] += 1.0;
          value_n[v] += 1.0;
        }
        for (std::size_t v = 0; v < nv; ++v) {
          double nl = value_n[v];
          double nr = n - nl;
          if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
          std::vector<double> right(n_classes_);
          for (std::size_t c = 0; c < n_classes_; ++c)
            right[c] = parent_counts[c] - per_value[v][c];
          double child = (nl / n) * gini(per_value[v], nl) + (nr / n) * gini(right, nr);
          Split s;
          s.feature = f;
          s.numeric = false;
          s.value = v;
          s.gain = parent_gini - child;
          consider(s);
        }
      }
    }
    if (found) out.split = best;
    return found;
  }

  void expand(const Dataset& d, const Candidate& cand,
              std::priority_queue<Candidate>& frontier) {
    std::vector<std::size_t> left_members, right_members;
    const Split& s = cand.split;
    for (std::size_t i : cand.members) {
      double v = d[i].values[s.feature];
      bool left = s.numeric ? (v <= s.threshold) : (static_cast<std::size_t>(v) == s.value);
      (left ? left_members : right_members).push_back(i);
    }
    const int left = make_leaf(d, left_members);
    const int right = make_leaf(d, right_members);
    Node& node = nodes_[static_cast<std::size_t>(cand.node)];
    node.leaf = false;
    node.feature = s.feature;
    node.numeric = s.numeric;
    node.threshold = s.threshold;
    node.value = s.value;
    node.left = left;
    node.right = right;

    Candidate next;
    if (best_split(d, left_members, next)) {
      next.node = left;
      next.members = std::move(left_members);
      frontier.push(std::move(next));
    }
    Candidate next2;
    if (best_split(d, right_members, next2)) {
      next2.node = right;
      next2.members = std::move(right_members);
      frontier.push(std::move(next2));
    }
  }

  std::size_t depth_of(int node) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (nd.leaf) return 0;
    return 1 + std::max(depth_of(nd.left), depth_of(nd.right));
  }

  std::size_t n_classes_ = 0;
  TreeParams params_;
  std::vector<Node> nodes_;
};

}  // namespace fsel
