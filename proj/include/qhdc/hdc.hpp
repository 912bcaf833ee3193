#pragma once

// Classical MAP (multiply-add-permute) hyperdimensional algebra.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qhdc/error.hpp"
#include "qhdc/rng.hpp"

namespace qhdc::hdc {

using Index = Eigen::Index;

/// Raw element-wise bundle sum. Retraining keeps it integral.
using BundleVector = Eigen::VectorXi;

/// Dense vector of +1/-1 components.
class BipolarHypervector {
 public:
  /// Throws InvalidArgument if any component is not +1 or -1, or if empty.
  explicit BipolarHypervector(Eigen::VectorXi components);

  static BipolarHypervector ones(Index dim);

  Index dim() const noexcept { return components_.size(); }
  const Eigen::VectorXi& components() const noexcept { return components_; }
  int operator[](Index i) const { return components_[i]; }

  /// Components as doubles, for mixing with real-valued arithmetic.
  Eigen::VectorXd as_real() const { return components_.cast<double>(); }

  BipolarHypervector operator-() const { return BipolarHypervector(Eigen::VectorXi(-components_)); }

  friend bool operator==(const BipolarHypervector& a, const BipolarHypervector& b) {
    return a.components_ == b.components_;
  }

 private:
  Eigen::VectorXi components_;
};

BipolarHypervector random_hypervector(Index dim, Rng& rng);

/// Element-wise product of two equal-length vectors.
template <typename A, typename B>
auto bind(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) throw InvalidArgument("bind: dimension mismatch");
  return a.cwiseProduct(b).eval();
}

BipolarHypervector bind(const BipolarHypervector& a, const BipolarHypervector& b);

/// Raw integer sum, no thresholding.
BundleVector bundle(std::span<const BipolarHypervector> vs);

/// +1 where s > 0, -1 where s < 0, ties (s == 0) map to +1.
BipolarHypervector sign_normalize(const BundleVector& s);

/// Cyclic shift moving component i to (i + shift) mod D; negative shifts wrap.
template <typename Derived>
typename Derived::PlainObject permute(const Eigen::MatrixBase<Derived>& v, long shift) {
  const Index d = v.size();
  typename Derived::PlainObject out(d);
  if (d == 0) return out;
  const Index s = static_cast<Index>(((shift % static_cast<long>(d)) + static_cast<long>(d)) %
                                     static_cast<long>(d));
  out.tail(d - s) = v.head(d - s);
  out.head(s) = v.tail(s);
  return out;
}

BipolarHypervector permute(const BipolarHypervector& v, long shift);

/// Normalized dot product. Throws UndefinedSimilarity on a zero-norm operand.
template <typename A, typename B>
double cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine: dimension mismatch");
  const Eigen::VectorXd x = a.template cast<double>();
  const Eigen::VectorXd y = b.template cast<double>();
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw UndefinedSimilarity("cosine: zero-norm operand");
  return x.dot(y) / (nx * ny);
}

inline double cosine(const BipolarHypervector& a, const BipolarHypervector& b) {
  return cosine(a.components(), b.components());
}

/// Index of the prototype most similar to `v`; the lowest index wins ties.
template <typename Derived>
std::size_t nearest_prototype(std::span<const BundleVector> prototypes,
                              const Eigen::MatrixBase<Derived>& v) {
  if (prototypes.empty()) throw InvalidArgument("nearest_prototype: no prototypes");
  std::size_t best = 0;
  double best_sim = cosine(prototypes[0], v);
  for (std::size_t k = 1; k < prototypes.size(); ++k) {
    const double sim = cosine(prototypes[k], v);
    if (sim > best_sim) {
      best = k;
      best_sim = sim;
    }
  }
  return best;
}

struct LabeledVector {
  BundleVector vector;
  std::size_t label;  // index into the prototype list
};

struct RetrainResult {
  std::vector<BundleVector> prototypes;
  std::size_t misclassified = 0;
};

/// One perceptron-style pass: every misclassified sample is subtracted from the
/// predicted prototype and added to the true one. Prototypes are updated in
/// sample order, so later predictions see earlier corrections.
RetrainResult retrain_epoch(std::vector<BundleVector> prototypes,
                            std::span<const LabeledVector> samples);

/// Named random hypervectors. Entry k is drawn from stream k of `seed`, so the
/// book is reproducible from (seed, dim, ordered names).
class Codebook {
 public:
  Codebook(std::uint64_t seed, Index dim, std::vector<std::string> names);
  Codebook(std::uint64_t seed, Index dim, std::vector<std::string> names,
           std::vector<BipolarHypervector> entries);

  const BipolarHypervector& at(const std::string& name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<BipolarHypervector>& entries() const noexcept { return entries_; }
  Index dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Replace one entry (used to build degenerate test books).
  void set(const std::string& name, BipolarHypervector v);

 private:
  std::uint64_t seed_;
  Index dim_;
  std::vector<std::string> names_;
  std::vector<BipolarHypervector> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace qhdc::hdc
