#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qhdc/hdc.hpp"
#include "qhdc/ops.hpp"

namespace qhdc::tasks {

/// Canonical codebook order; entry k comes from stream k of the seed.
inline const std::array<std::string, 9> kReasoningSymbols{
    "country", "currency", "capital", "USA", "Dollar", "WashingtonDC", "Mexico", "Peso", "MexicoCity"};
inline const std::array<std::string, 6> kReasoningEntities{"USA",    "Dollar", "WashingtonDC",
                                                           "Mexico", "Peso",   "MexicoCity"};

hdc::Codebook reasoning_codebook(hdc::Index dim, std::uint64_t seed);

enum class BundleMode { Raw, Sign };
std::string to_string(BundleMode m);

/// Dollar * (V_USA * V_Mexico), with each record a bundle of three role-filler binds.
hdc::BundleVector reasoning_query(const hdc::Codebook& book, BundleMode mode);

/// The nine bipolar cross terms Dollar * (role_i * usa_i) * (role_j * mex_j);
/// their raw sum is the raw-mode query.
std::vector<hdc::BipolarHypervector> reasoning_cross_terms(const hdc::Codebook& book);

struct SimilarityRow {
  std::string entity;
  double similarity;
  double std_error = 0.0;
};

struct ReasoningResult {
  std::vector<SimilarityRow> table;  // order of kReasoningEntities
  std::string argmax;                // first entity on ties
  bool quantum = false;
  std::uint64_t shots = 0;
  double alpha = 0.0;
  int rounds = 0;
  double success_probability = 0.0;
  int ancillas = 0;
};

ReasoningResult reasoning_query_classical(const hdc::Codebook& book, BundleMode mode = BundleMode::Raw);

/// LCU+OAA bundle of the nine composed oracles, compared with each entity by the
/// Hadamard test. shots == 0 is exact; otherwise an Rng seeded with `shot_seed`.
ReasoningResult reasoning_query_quantum(const hdc::Codebook& book, std::uint64_t shots = 0,
                                        std::uint64_t shot_seed = 0, ops::LcuOptions options = {});

}  // namespace qhdc::tasks
