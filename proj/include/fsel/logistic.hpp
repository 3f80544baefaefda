#pragma once

// Multinomial softmax regression trained by full-batch gradient descent with
// step halving on loss increase. Numeric features are standardized and nominal
// features one-hot encoded internally, so training is deterministic and
// dependency-free.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fsel/dataset.hpp"
#include "fsel/naive_bayes.hpp"  // ProbPrediction

namespace fsel {

struct LogisticParams {
  int max_iters = 500;
  double initial_step = 0.1;
  double l2 = 1e-8;
};

class LogisticModel {
 public:
  static LogisticModel fit(const Dataset& d, const LogisticParams& params = {}) {
    if (d.n_instances() == 0) throw std::invalid_argument("cannot fit on an empty dataset");
    LogisticModel m;
    m.build_encoding(d.schema());
    const std::size_t n = d.n_instances();
    const std::size_t dim = m.encoded_dim_;
    const std::size_t nc = d.n_classes();

    std::vector<std::vector<double>> x(n, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) m.encode_raw(d[i], x[i]);
    m.fit_standardization(x);
    for (auto& row : x) m.standardize(row);

    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i].class_label;

    // weights[c] has dim+1 entries; the last is the bias (not regularized)
    m.weights_.assign(nc, std::vector<double>(dim + 1, 0.0));

    double step = params.initial_step;
    double loss = m.mean_loss(x, y, params.l2);
    std::vector<std::vector<double>> grad(nc, std::vector<double>(dim + 1, 0.0));
    for (int iter = 0; iter < params.max_iters && step > 1e-12; ++iter) {
      m.gradient(x, y, params.l2, grad);
      const auto saved = m.weights_;
      while (step > 1e-12) {
        for (std::size_t c = 0; c < nc; ++c)
          for (std::size_t j = 0; j <= dim; ++j)
            m.weights_[c][j] = saved[c][j] - step * grad[c][j];
        double next = m.mean_loss(x, y, params.l2);
        if (next <= loss) {
          loss = next;
          break;
        }
        m.weights_ = saved;
        step *= 0.5;
      }
      m.loss_history_.push_back(loss);
    }
    return m;
  }

  ProbPrediction predict(const Instance& inst) const {
    std::vector<double> x(encoded_dim_, 0.0);
    encode_raw(inst, x);
    standardize(x);
    std::vector<double> logits(weights_.size());
    for (std::size_t c = 0; c < weights_.size(); ++c) {
      double z = weights_[c][encoded_dim_];
      for (std::size_t j = 0; j < encoded_dim_; ++j) z += weights_[c][j] * x[j];
      logits[c] = z;
    }
    return NBModel::normalize_log(logits);
  }

  const std::vector<double>& loss_history() const { return loss_history_; }

 private:
  void build_encoding(const FeatureSchema& schema) {
    offsets_.clear();
    kinds_.clear();
    cards_.clear();
    std::size_t off = 0;
    for (const auto& f : schema.features) {
      offsets_.push_back(off);
      kinds_.push_back(f.kind);
      if (f.kind == FeatureKind::Numeric) {
        cards_.push_back(1);
        off += 1;
      } else {
        cards_.push_back(f.values.size());
        off += f.values.size();
      }
    }
    encoded_dim_ = off;
  }

  void encode_raw(const Instance& inst, std::vector<double>& out) const {
    if (inst.values.size() != kinds_.size())
      throw std::invalid_argument("instance arity does not match the model schema");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t f = 0; f < kinds_.size(); ++f) {
      double v = inst.values[f];
      if (is_missing(v)) throw std::invalid_argument("missing value in logistic input");
      if (kinds_[f] == FeatureKind::Numeric)
        out[offsets_[f]] = v;
      else
        out[offsets_[f] + static_cast<std::size_t>(v)] = 1.0;
    }
  }

  void fit_standardization(const std::vector<std::vector<double>>& x) {
    const std::size_t n = x.size();
    mean_.assign(encoded_dim_, 0.0);
    scale_.assign(encoded_dim_, 1.0);
    for (const auto& row : x)
      for (std::size_t j = 0; j < encoded_dim_; ++j) mean_[j] += row[j];
    for (double& v : mean_) v /= static_cast<double>(n);
    std::vector<double> var(encoded_dim_, 0.0);
    for (const auto& row : x)
      for (std::size_t j = 0; j < encoded_dim_; ++j)
        var[j] += (row[j] - mean_[j]) * (row[j] - mean_[j]);
    for (std::size_t j = 0; j < encoded_dim_; ++j) {
      double sd = std::sqrt(var[j] / static_cast<double>(n));
      scale_[j] = sd > 0.0 ? sd : 1.0;
    }
  }

  void standardize(std::vector<double>& row) const {
    for (std::size_t j = 0; j < encoded_dim_; ++j)
      row[j] = (row[j] - mean_[j]) / scale_[j];
  }

  void softmax_row(const std::vector<double>& x, std::vector<double>& probs) const {
    const std::size_t nc = weights_.size();
    probs.resize(nc);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < nc; ++c) {
      double z = weights_[c][encoded_dim_];
      for (std::size_t j = 0; j < encoded_dim_; ++j) z += weights_[c][j] * x[j];
      probs[c] = z;
      mx = std::max(mx, z);
    }
    double sum = 0.0;
    for (double& p : probs) {
      p = std::exp(p - mx);
      sum += p;
    }
    for (double& p : probs) p /= sum;
  }

  double mean_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   double l2) const {
    double loss = 0.0;
    std::vector<double> probs;
    for (std::size_t i = 0; i < x.size(); ++i) {
      softmax_row(x[i], probs);
      loss += -std::log(std::max(probs[static_cast<std::size_t>(y[i])], 1e-300));
    }
    loss /= static_cast<double>(x.size());
    double reg = 0.0;
    for (const auto& w : weights_)
      for (std::size_t j = 0; j < encoded_dim_; ++j) reg += w[j] * w[j];
    return loss + 0.5 * l2 * reg;
  }

  void gradient(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                double l2, std::vector<std::vector<double>>& grad) const {
    const std::size_t nc = weights_.size();
    for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
    std::vector<double> probs;
    for (std::size_t i = 0; i < x.size(); ++i) {
      softmax_row(x[i], probs);
      for (std::size_t c = 0; c < nc; ++c) {
        double err = probs[c] - (static_cast<int>(c) == y[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < encoded_dim_; ++j) grad[c][j] += err * x[i][j];
        grad[c][encoded_dim_] += err;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t j = 0; j < encoded_dim_; ++j)
        grad[c][j] = grad[c][j] * inv_n + l2 * weights_[c][j];
      grad[c][encoded_dim_] *= inv_n;
    }
  }

  std::size_t encoded_dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<FeatureKind> kinds_;
  std::vector<std::size_t> cards_;
  std::vector<double> mean_, scale_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> loss_history_;
};

}  // namespace fsel
