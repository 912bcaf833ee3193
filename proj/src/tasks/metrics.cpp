#include "qhdc/tasks/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhdc/error.hpp"

namespace qhdc::tasks {

Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                           const std::array<int, 2>& classes) {
  if (truth.size() != predicted.size()) throw InvalidArgument("confusion_matrix: length mismatch");
  auto index = [&](int label) -> std::size_t {
    if (label == classes[0]) return 0;
    if (label == classes[1]) return 1;
    throw InvalidArgument("confusion_matrix: label " + std::to_string(label) + " outside class pair");
  };
  Confusion c{};
  for (std::size_t i = 0; i < truth.size(); ++i) ++c[index(truth[i])][index(predicted[i])];
  return c;
}

double weighted_f1(const Confusion& c) {
  double total = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double tp = static_cast<double>(c[k][k]);
    const double support = static_cast<double>(c[k][0] + c[k][1]);
    const double predicted = static_cast<double>(c[0][k] + c[1][k]);
    const double denom = support + predicted;
    const double f1 = denom > 0 ? 2.0 * tp / denom : 0.0;
    acc += support * f1;
    total += support;
  }
  return total > 0 ? acc / total : 0.0;
}

double roc_auc(std::span<const double> scores, std::span<const int> truth, int positive) {
  if (scores.size() != truth.size()) throw InvalidArgument("roc_auc: length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks over tie groups, then Mann-Whitney U
  std::vector<double> rank(scores.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  double n_pos = 0, n_neg = 0, rank_sum = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == positive) {
      ++n_pos;
      rank_sum += rank[i];
    } else {
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) throw InvalidArgument("roc_auc: both classes must be present");
  return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
}

double roc_auc_bruteforce(std::span<const double> scores, std::span<const int> truth, int positive) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth[i] != positive) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j] == positive) continue;
      pairs += 1;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  if (pairs == 0) throw InvalidArgument("roc_auc: both classes must be present");
  return wins / pairs;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace qhdc::tasks
