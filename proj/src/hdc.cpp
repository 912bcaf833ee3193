#include "qhdc/hdc.hpp"

#include <utility>

namespace qhdc::hdc {

BipolarHypervector::BipolarHypervector(Eigen::VectorXi components)
    : components_(std::move(components)) {
  if (components_.size() == 0) throw InvalidArgument("bipolar hypervector must be non-empty");
  for (Index i = 0; i < components_.size(); ++i) {
    if (components_[i] != 1 && components_[i] != -1) {
      throw InvalidArgument("bipolar component " + std::to_string(i) + " is " +
                            std::to_string(components_[i]));
    }
  }
}

BipolarHypervector BipolarHypervector::ones(Index dim) {
  return BipolarHypervector(Eigen::VectorXi::Ones(dim));
}

BipolarHypervector random_hypervector(Index dim, Rng& rng) {
  if (dim < 2) throw InvalidDimension("hypervector dimension must be >= 2, got " + std::to_string(dim));
  Eigen::VectorXi v(dim);
  // 64 components per engine draw.
  std::uint64_t bits = 0;
  for (Index i = 0; i < dim; ++i) {
    if (i % 64 == 0) bits = rng.next();
    v[i] = (bits & 1U) ? -1 : 1;
    bits >>= 1;
  }
  return BipolarHypervector(std::move(v));
}

BipolarHypervector bind(const BipolarHypervector& a, const BipolarHypervector& b) {
  return BipolarHypervector(bind(a.components(), b.components()));
}

BundleVector bundle(std::span<const BipolarHypervector> vs) {
  if (vs.empty()) throw InvalidArgument("bundle: empty list");
  BundleVector sum = vs.front().components();
  for (std::size_t k = 1; k < vs.size(); ++k) {
    if (vs[k].dim() != sum.size()) throw InvalidArgument("bundle: dimension mismatch");
    sum += vs[k].components();
  }
  return sum;
}

BipolarHypervector sign_normalize(const BundleVector& s) {
  return BipolarHypervector(s.unaryExpr([](int x) { return x < 0 ? -1 : 1; }).eval());
}

BipolarHypervector permute(const BipolarHypervector& v, long shift) {
  return BipolarHypervector(permute(v.components(), shift));
}

RetrainResult retrain_epoch(std::vector<BundleVector> prototypes,
                            std::span<const LabeledVector> samples) {
  if (samples.empty()) throw InvalidArgument("retrain_epoch: empty sample set");
  RetrainResult result{std::move(prototypes), 0};
  auto& protos = result.prototypes;
  for (const auto& s : samples) {
    if (s.label >= protos.size()) throw InvalidArgument("retrain_epoch: label out of range");
    if (s.vector.size() != protos[s.label].size()) throw InvalidArgument("retrain_epoch: dimension mismatch");
    const std::size_t predicted = nearest_prototype(std::span<const BundleVector>(protos), s.vector);
    if (predicted != s.label) {
      protos[predicted] -= s.vector;
      protos[s.label] += s.vector;
      ++result.misclassified;
    }
  }
  return result;
}

Codebook::Codebook(std::uint64_t seed, Index dim, std::vector<std::string> names)
    : seed_(seed), dim_(dim), names_(std::move(names)) {
  entries_.reserve(names_.size());
  for (std::size_t k = 0; k < names_.size(); ++k) {
    Rng rng(derive_seed(seed, k));
    entries_.push_back(random_hypervector(dim, rng));
    if (!index_.emplace(names_[k], k).second) throw InvalidArgument("codebook: duplicate name " + names_[k]);
  }
}

Codebook::Codebook(std::uint64_t seed, Index dim, std::vector<std::string> names,
                   std::vector<BipolarHypervector> entries)
    : seed_(seed), dim_(dim), names_(std::move(names)), entries_(std::move(entries)) {
  if (names_.size() != entries_.size()) throw InvalidArgument("codebook: names/entries size mismatch");
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (entries_[k].dim() != dim_) throw InvalidArgument("codebook: entry dimension mismatch");
    if (!index_.emplace(names_[k], k).second) throw InvalidArgument("codebook: duplicate name " + names_[k]);
  }
}

const BipolarHypervector& Codebook::at(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw InvalidArgument("codebook: unknown symbol " + name);
  return entries_[it->second];
}

void Codebook::set(const std::string& name, BipolarHypervector v) {
  const auto it = index_.find(name);
  if (it == index_.end()) throw InvalidArgument("codebook: unknown symbol " + name);
  if (v.dim() != dim_) throw InvalidArgument("codebook: entry dimension mismatch");
  entries_[it->second] = std::move(v);
}

}  // namespace qhdc::hdc
