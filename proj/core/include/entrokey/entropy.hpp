#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entrokey/corpus.hpp"

namespace entrokey {

/// Sparse occurrence counts of each word across the positive and negative
/// documents of a labeled corpus, stored column-wise (one column per word).
struct CountTable {
  struct Entry {
    std::uint32_t doc = 0;    // index into doc_ids_pos / doc_ids_neg
    std::uint32_t count = 0;  // > 0
    bool operator==(const Entry&) const = default;
  };
  using Column = std::vector<Entry>;  // sorted by doc

  std::vector<std::string> vocabulary;  // lexicographic
  std::vector<std::string> doc_ids_pos;
  std::vector<std::string> doc_ids_neg;
  std::vector<Column> pos;  // pos[j]: nonzero counts of word j, positive docs
  std::vector<Column> neg;

  std::size_t num_pos_docs() const noexcept { return doc_ids_pos.size(); }
  std::size_t num_neg_docs() const noexcept { return doc_ids_neg.size(); }

  std::uint32_t count_pos(std::size_t doc, std::size_t word) const;
  std::uint32_t count_neg(std::size_t doc, std::size_t word) const;

  /// Index of `word` in the vocabulary; data error when absent.
  std::size_t index_of(std::string_view word) const;
};

/// Counts every token of every labeled document (term frequency, not
/// presence). Requires at least one positive and one negative document, all
/// tokenized. Unlabeled documents are ignored.
CountTable build_count_table(const Corpus& corpus);

struct WordDistribution {
  std::vector<double> pos;  // length M_P
  std::vector<double> neg;  // length M_N
};

/// p[i] = N_ij / sum_i N_ij per class; an all-zero vector when the word never
/// occurs in that class.
WordDistribution word_probabilities(const CountTable& table, std::size_t word);
WordDistribution word_probabilities(const CountTable& table, std::string_view word);

/// Shannon entropy in bits with 0 log 0 = 0. The distribution must be
/// non-negative and sum to 0 or 1 (within 1e-12).
double word_entropy(std::span<const double> p);

struct KeywordStats {
  std::string word;
  double h_pos = 0.0;
  double h_neg = 0.0;
  std::size_t df_pos = 0;
  std::size_t df_neg = 0;
};

/// One entry per vocabulary word, in vocabulary order.
std::vector<KeywordStats> compute_stats(const CountTable& table);

struct ExtractionConfig {
  double alpha = 1.0;        // positive keyword coefficient
  double alpha_prime = 1.0;  // negative keyword coefficient

  void validate() const;
  bool operator==(const ExtractionConfig&) const = default;
};

enum class Polarity { Positive, Negative, Combined };

std::string_view to_string(Polarity polarity) noexcept;
Polarity parse_polarity(std::string_view name);

struct KeywordList {
  Polarity polarity = Polarity::Positive;
  std::vector<std::string> words;
  ExtractionConfig config;

  bool operator==(const KeywordList&) const = default;
};

/// Positive: h_pos > alpha * h_neg. Negative: h_neg > alpha_prime * h_pos.
/// Both tests are strict, so words with zero entropy in both classes are never
/// selected. Words keep the order of `stats`.
KeywordList select_keywords(std::span<const KeywordStats> stats, const ExtractionConfig& config,
                            Polarity polarity);

/// Inclusive grid min, min+step, ... <= max (with a small tolerance for
/// accumulated rounding).
std::vector<double> alpha_grid(double alpha_min, double alpha_max, double step);

struct SweepPoint {
  double alpha = 0.0;
  KeywordList positive;  // selected with alpha
  KeywordList negative;  // selected with alpha_prime = alpha
};

std::vector<SweepPoint> sweep_alphas(std::span<const KeywordStats> stats, double alpha_min = 1.0,
                                     double alpha_max = 3.75, double step = 0.25);

/// Positives first, then negatives not already present.
KeywordList combine_lists(const KeywordList& pos, const KeywordList& neg);

}  // namespace entrokey
