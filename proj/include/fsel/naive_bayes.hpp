#pragma once

// Naive Bayes with Laplace add-1 smoothing for class priors and nominal
// likelihoods, and per-class Gaussian likelihoods (floored variance) for
// numeric features. Posteriors are computed in log space.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsel/dataset.hpp"

namespace fsel {

struct ProbPrediction {
  std::vector<double> distribution;  // sums to 1
  int predicted_label = 0;           // argmax, ties to the lowest class index
};

inline int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
  return best;
}

class NBModel {
 public:
  struct Gaussian {
    double mean = 0.0;
    double variance = 1.0;
  };

  static NBModel fit(const Dataset& d) {
    if (d.n_instances() == 0) throw std::invalid_argument("cannot fit on an empty dataset");
    NBModel m;
    m.n_features_ = d.n_features();
    m.kinds_.reserve(d.n_features());
    for (const auto& f : d.schema().features) m.kinds_.push_back(f.kind);

    const std::size_t nc = d.n_classes();
    const std::size_t n = d.n_instances();
    const auto counts = d.class_counts();

    m.priors_.resize(nc);
    for (std::size_t c = 0; c < nc; ++c)
      m.priors_[c] = (static_cast<double>(counts[c]) + 1.0) /
                     (static_cast<double>(n) + static_cast<double>(nc));

    m.nominal_.assign(d.n_features(), {});
    m.numeric_.assign(d.n_features(), {});

    for (std::size_t f = 0; f < d.n_features(); ++f) {
      if (d.schema().features[f].kind == FeatureKind::Nominal) {
        const std::size_t nv = d.schema().features[f].values.size();
        std::vector<std::vector<double>> table(nc, std::vector<double>(nv, 0.0));
        for (const auto& inst : d.instances()) {
          double v = inst.values[f];
          if (is_missing(v)) throw std::invalid_argument("missing value during NB fit");
          table[static_cast<std::size_t>(inst.class_label)][static_cast<std::size_t>(v)] +=
              1.0;
        }
        for (std::size_t c = 0; c < nc; ++c) {
          double rowsum = 0.0;
          for (double x : table[c]) rowsum += x;
          for (double& x : table[c])
            x = (x + 1.0) / (rowsum + static_cast<double>(nv));
        }
        m.nominal_[f] = std::move(table);
      } else {
        // Global moments give the variance floor and the fallback for classes
        // absent from the training split.
        double gsum = 0.0, gsq = 0.0;
        for (const auto& inst : d.instances()) {
          double v = inst.values[f];
          if (is_missing(v)) throw std::invalid_argument("missing value during NB fit");
          gsum += v;
          gsq += v * v;
        }
        const double gmean = gsum / static_cast<double>(n);
        const double gvar = std::max(0.0, gsq / static_cast<double>(n) - gmean * gmean);
        const double floor = 1e-9 * (gvar + 1.0);

        std::vector<double> sum(nc, 0.0), sq(nc, 0.0);
        for (const auto& inst : d.instances()) {
          auto c = static_cast<std::size_t>(inst.class_label);
          sum[c] += inst.values[f];
          sq[c] += inst.values[f] * inst.values[f];
        }
        std::vector<Gaussian> per_class(nc);
        for (std::size_t c = 0; c < nc; ++c) {
          if (counts[c] == 0) {
            per_class[c] = Gaussian{gmean, std::max(gvar, floor)};
            continue;
          }
          double mean = sum[c] / static_cast<double>(counts[c]);
          double var = std::max(0.0, sq[c] / static_cast<double>(counts[c]) - mean * mean);
          per_class[c] = Gaussian{mean, std::max(var, floor)};
        }
        m.numeric_[f] = std::move(per_class);
      }
    }
    return m;
  }

  ProbPrediction posterior(const Instance& x) const {
    if (x.values.size() != n_features_)
      throw std::invalid_argument("instance arity does not match the model schema");
    const std::size_t nc = priors_.size();
    std::vector<double> logp(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      double lp = std::log(priors_[c]);
      for (std::size_t f = 0; f < n_features_; ++f) {
        double v = x.values[f];
        if (is_missing(v))
          throw std::invalid_argument("missing value in posterior query");
        if (kinds_[f] == FeatureKind::Nominal) {
          lp += std::log(nominal_[f][c][static_cast<std::size_t>(v)]);
        } else {
          const Gaussian& g = numeric_[f][c];
          lp += -0.5 * std::log(2.0 * M_PI * g.variance) -
                (v - g.mean) * (v - g.mean) / (2.0 * g.variance);
        }
      }
      logp[c] = lp;
    }
    return normalize_log(logp);
  }

  static ProbPrediction normalize_log(const std::vector<double>& logp) {
    double mx = logp[0];
    for (double v : logp) mx = std::max(mx, v);
    ProbPrediction out;
    out.distribution.resize(logp.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < logp.size(); ++c) {
      out.distribution[c] = std::exp(logp[c] - mx);
      sum += out.distribution[c];
    }
    for (double& p : out.distribution) p /= sum;
    out.predicted_label = argmax_lowest(out.distribution);
    return out;
  }

  const std::vector<double>& priors() const { return priors_; }
  const std::vector<std::vector<double>>& nominal_likelihoods(std::size_t f) const {
    return nominal_[f];
  }
  const std::vector<Gaussian>& numeric_likelihoods(std::size_t f) const {
    return numeric_[f];
  }

 private:
  std::size_t n_features_ = 0;
  std::vector<FeatureKind> kinds_;
  std::vector<double> priors_;
  // per feature: [class][value] smoothed frequencies (nominal features)
  std::vector<std::vector<std::vector<double>>> nominal_;
  // per feature: per-class Gaussians (numeric features)
  std::vector<std::vector<Gaussian>> numeric_;
};

inline NBModel fit_naive_bayes(const Dataset& d) { return NBModel::fit(d); }

inline ProbPrediction nb_posterior(const NBModel& m, const Instance& x) {
  return m.posterior(x);
}

}  // namespace fsel
