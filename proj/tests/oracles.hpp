#pragma once

// Independent brute-force oracles used by the unit and acceptance suites.
// These deliberately take different algebraic routes than the library:
// entropies come from an explicit joint distribution map and the identities
// H(Y|X) = H(X,Y) - H(X) and IG = H(X) + H(Y) - H(X,Y).

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

inline double plogp_sum(const std::map<int, double>& dist, double total) {
  double h = 0.0;
  for (const auto& [key, count] : dist) {
    if (count == 0.0) continue;
    double p = count / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double joint_entropy(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < x.size(); ++i) joint[{x[i], y[i]}] += 1.0;
  double h = 0.0;
  const double total = static_cast<double>(x.size());
  for (const auto& [key, count] : joint) {
    double p = count / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double marginal_entropy(const std::vector<int>& x) {
  std::map<int, double> dist;
  for (int v : x) dist[v] += 1.0;
  return plogp_sum(dist, static_cast<double>(x.size()));
}

inline double conditional_entropy(const std::vector<int>& x, const std::vector<int>& y) {
  return joint_entropy(x, y) - marginal_entropy(x);
}

inline double information_gain(const std::vector<int>& x, const std::vector<int>& y) {
  return marginal_entropy(x) + marginal_entropy(y) - joint_entropy(x, y);
}

inline double symmetrical_uncertainty(const std::vector<int>& x,
                                      const std::vector<int>& y) {
  double hx = marginal_entropy(x);
  double hy = marginal_entropy(y);
  if (hx + hy == 0.0) return 0.0;
  return 2.0 * information_gain(x, y) / (hx + hy);
}

}  // namespace oracle
