#include "qhdc/tasks/reasoning.hpp"

#include "qhdc/error.hpp"

namespace qhdc::tasks {

namespace {

struct Records {
  std::array<const hdc::BipolarHypervector*, 3> roles, usa, mex;
};

Records records(const hdc::Codebook& book) {
  return {{&book.at("country"), &book.at("currency"), &book.at("capital")},
          {&book.at("USA"), &book.at("Dollar"), &book.at("WashingtonDC")},
          {&book.at("Mexico"), &book.at("Peso"), &book.at("MexicoCity")}};
}

hdc::BundleVector record(const Records& r, const std::array<const hdc::BipolarHypervector*, 3>& fillers) {
  hdc::BundleVector v = hdc::BundleVector::Zero(r.roles[0]->dim());
  for (std::size_t i = 0; i < 3; ++i) v += hdc::bind(r.roles[i]->components(), fillers[i]->components());
  return v;
}

std::string first_argmax(const std::vector<SimilarityRow>& table) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    // exact ties are common at small D; keep the earlier entity despite rounding
    if (table[i].similarity > table[best].similarity + 1e-9) best = i;
  }
  return table[best].entity;
}

}  // namespace

hdc::Codebook reasoning_codebook(hdc::Index dim, std::uint64_t seed) {
  return hdc::Codebook(seed, dim, std::vector<std::string>(kReasoningSymbols.begin(), kReasoningSymbols.end()));
}

std::string to_string(BundleMode m) { return m == BundleMode::Raw ? "raw" : "sign"; }

hdc::BundleVector reasoning_query(const hdc::Codebook& book, BundleMode mode) {
  const auto r = records(book);
  hdc::BundleVector v_usa = record(r, r.usa);
  hdc::BundleVector v_mex = record(r, r.mex);
  if (mode == BundleMode::Sign) {
    v_usa = hdc::sign_normalize(v_usa).components();
    v_mex = hdc::sign_normalize(v_mex).components();
  }
  return hdc::bind(book.at("Dollar").components(), hdc::bind(v_usa, v_mex));
}

std::vector<hdc::BipolarHypervector> reasoning_cross_terms(const hdc::Codebook& book) {
  const auto r = records(book);
  const auto& dollar = book.at("Dollar");
  std::vector<hdc::BipolarHypervector> out;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.push_back(hdc::bind(dollar, hdc::bind(hdc::bind(*r.roles[i], *r.usa[i]), hdc::bind(*r.roles[j], *r.mex[j]))));
    }
  }
  return out;
}

ReasoningResult reasoning_query_classical(const hdc::Codebook& book, BundleMode mode) {
  const auto q = reasoning_query(book, mode);
  ReasoningResult res;
  for (const auto& e : kReasoningEntities) res.table.push_back({e, hdc::cosine(q, book.at(e).components())});
  res.argmax = first_argmax(res.table);
  return res;
}

ReasoningResult reasoning_query_quantum(const hdc::Codebook& book, std::uint64_t shots, std::uint64_t shot_seed,
                                        ops::LcuOptions options) {
  std::vector<ops::StatePrep> preps;
  for (const auto& t : reasoning_cross_terms(book)) preps.push_back(ops::prepare_state(ops::oracle_from_bipolar(t)));
  const auto bundle = ops::bundle_states(std::move(preps), {}, options);
  const auto query = ops::heralded_prep(bundle.prep);

  ReasoningResult res;
  res.quantum = true;
  res.shots = shots;
  res.alpha = bundle.alpha;
  res.rounds = bundle.rounds;
  res.success_probability = bundle.success_probability;
  res.ancillas = bundle.m;
  Rng rng(shot_seed);
  for (const auto& e : kReasoningEntities) {
    const auto est = ops::hadamard_test(query, ops::prepare_state(ops::oracle_from_bipolar(book.at(e))),
                                        {shots, shots > 0 ? &rng : nullptr, 0.0});
    res.table.push_back({e, est.value, est.std_error});
  }
  res.argmax = first_argmax(res.table);
  return res;
}

}  // namespace qhdc::tasks
