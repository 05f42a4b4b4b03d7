#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "entrokey/corpus.hpp"

namespace entrokey {

/// Desk-scale stand-in for a labeled review corpus: positive and negative
/// sentences draw from their own planted vocabulary plus a shared one.
struct SyntheticSpec {
  std::size_t num_pos_docs = 200;
  std::size_t num_neg_docs = 200;
  std::size_t num_unlabeled = 100;
  std::vector<std::string> planted_pos_vocab;
  std::vector<std::string> planted_neg_vocab;
  std::vector<std::string> shared_vocab;
  std::size_t doc_length = 12;
  double noise_rate = 0.1;  // fraction of tokens drawn from all vocabularies
  std::uint64_t seed = 42;

  /// Fills the three vocabularies with generated words ("posw00", "negw00",
  /// "shrw00", ...).
  static SyntheticSpec with_generated_vocab(std::size_t planted_per_polarity, std::size_t shared);

  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// True polarity of every unlabeled document, keyed by document id.
  std::vector<std::pair<std::string, Label>> truth;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

/// Sidecar TSV with header "id\tpolarity".
void save_truth(const std::vector<std::pair<std::string, Label>>& truth, const std::filesystem::path& path);
std::vector<std::pair<std::string, Label>> load_truth(const std::filesystem::path& path);

}  // namespace entrokey
