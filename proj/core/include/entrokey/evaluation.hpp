#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entrokey/corpus.hpp"
#include "entrokey/entropy.hpp"
#include "entrokey/svm.hpp"

namespace entrokey {

/// Stratified assignment of item indices to k folds.
struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // item index -> fold index

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Shuffles each class with the seed, then deals both classes round-robin
/// over the folds (the second class continues where the first stopped), so
/// total and per-class fold sizes each differ by at most one.
/// Requires k >= 2 and at least k members in each class.
FoldPlan make_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;

  bool operator==(const Metrics&) const = default;
};

/// +1 is the positive class. Zero denominators give a score of 0.
Metrics compute_metrics(std::span<const int> predicted, std::span<const int> gold);
Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

struct EvalReport {
  std::string list_name;
  Polarity polarity = Polarity::Combined;
  ExtractionConfig config;
  std::size_t vocabulary_size = 0;
  std::vector<Metrics> per_fold;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // sample standard deviation (n - 1)
  double f1_mean = 0.0;
  double f1_std = 0.0;
};

/// Label a keyword list's classifier predicts as +1: negative documents for
/// a Negative list, positive documents otherwise.
Label target_label(Polarity polarity) noexcept;

/// Vectorizes the labeled documents against the list's words, with +1 for
/// documents carrying the list's target label.
TrainingSet build_training_set(const Corpus& corpus, const KeywordList& list);

/// Human-readable list name, e.g. "Positive (alpha=2.75)".
std::string list_display_name(const KeywordList& list);

/// k-fold cross validation over the labeled documents of `corpus`, training
/// on k-1 folds and scoring the held-out fold each time.
EvalReport cross_validate(const Corpus& corpus, const KeywordList& vocabulary,
                          const TrainConfig& train_config, std::size_t k, std::uint64_t seed);

struct GridSettings {
  double alpha_min = 1.0;
  double alpha_max = 3.75;
  double alpha_step = 0.25;
};

/// One report per (polarity, alpha) list plus the combined list built from
/// the best positive and best negative list by f1_mean (ties: lower alpha).
/// Output is sorted by f1_mean, descending. Lists that select no words get
/// an empty report (no folds, zero scores).
std::vector<EvalReport> grid_report(const Corpus& corpus, std::span<const KeywordStats> stats,
                                    const GridSettings& grid, const TrainConfig& train_config,
                                    std::size_t k, std::uint64_t seed);

/// Best list of one polarity in a grid result (ties: lower alpha).
const EvalReport* best_report(std::span<const EvalReport> reports, Polarity polarity);

/// The best positive and best negative list of a grid result, re-selected
/// from `stats`. A polarity with no usable list falls back to the (empty)
/// selection at grid.alpha_min.
std::pair<KeywordList, KeywordList> best_lists(std::span<const EvalReport> reports,
                                               std::span<const KeywordStats> stats,
                                               const GridSettings& grid);

/// Report TSV: list_name, alpha, polarity, acc_mean, acc_std, f1_mean,
/// f1_std, folds (JSON array of per-fold metrics).
void write_report_tsv(std::span<const EvalReport> reports, std::ostream& out);
/// Aligned table in the style of a results table: list, accuracy mean/std,
/// F1 mean/std.
void write_report_text(std::span<const EvalReport> reports, std::ostream& out);
void save_reports(std::span<const EvalReport> reports, const std::filesystem::path& tsv_path,
                  const std::filesystem::path& text_path);

enum class ConsensusLabel { Positive, Neutral, Negative };

std::string_view to_string(ConsensusLabel label) noexcept;

/// pos_pred: +1 means "is positive"; neg_pred: +1 means "is negative".
/// Agreement gives a polarity; neither or both firing gives Neutral.
ConsensusLabel consensus_label(int pos_pred, int neg_pred) noexcept;

struct ConsensusCounts {
  std::size_t positive = 0;
  std::size_t neutral = 0;
  std::size_t negative = 0;

  std::size_t total() const noexcept { return positive + neutral + negative; }
  bool operator==(const ConsensusCounts&) const = default;
};

struct ConsensusAnnotation {
  std::size_t document = 0;  // index into the corpus
  ConsensusLabel label = ConsensusLabel::Neutral;
  double pos_score = 0.0;
  double neg_score = 0.0;
};

struct LabeledCorpus {
  Corpus corpus;
  std::vector<ConsensusAnnotation> annotations;  // one per unlabeled document, corpus order
  ConsensusCounts counts;
};

/// Runs both detectors over every unlabeled document. Each model vectorizes
/// with its own vocabulary.
LabeledCorpus label_corpus(const Corpus& corpus, const LinearModel& pos_model,
                           const LinearModel& neg_model);

/// JSONL with the corpus record fields plus "consensus" (null for documents
/// that were not annotated).
void save_labeled_corpus(const LabeledCorpus& labeled, const std::filesystem::path& path);

}  // namespace entrokey
