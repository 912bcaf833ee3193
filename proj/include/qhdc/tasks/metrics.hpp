#pragma once

#include <array>
#include <span>
#include <vector>

namespace qhdc::tasks {

/// Rows: true class, columns: predicted class, both in the order of `classes`.
using Confusion = std::array<std::array<std::size_t, 2>, 2>;

Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                           const std::array<int, 2>& classes);

/// Per-class F1 averaged with support (true count) weights. Classes with no
/// predictions contribute F1 = 0.
double weighted_f1(const Confusion& c);

/// Mann-Whitney estimate of P(score_pos > score_neg), ties counted as one half.
/// Throws InvalidArgument when either class is absent.
double roc_auc(std::span<const double> scores, std::span<const int> truth, int positive);

/// O(n^2) pairwise reference for roc_auc.
double roc_auc_bruteforce(std::span<const double> scores, std::span<const int> truth, int positive);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> v);

}  // namespace qhdc::tasks
