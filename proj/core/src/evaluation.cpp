#include "entrokey/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "entrokey/error.hpp"
#include "entrokey/rng.hpp"
#include "format.hpp"

namespace entrokey {
namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd sample_mean_std(const std::vector<double>& xs) {
  MeanStd r;
  if (xs.empty()) return r;
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (const double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return r;
}

double list_alpha(const EvalReport& r) {
  return r.polarity == Polarity::Negative ? r.config.alpha_prime : r.config.alpha;
}

std::string alpha_cell(const EvalReport& r) {
  switch (r.polarity) {
    case Polarity::Positive: return detail::shortest(r.config.alpha);
    case Polarity::Negative: return detail::shortest(r.config.alpha_prime);
    case Polarity::Combined:
      return detail::shortest(r.config.alpha) + "/" + detail::shortest(r.config.alpha_prime);
  }
  return {};
}

EvalReport empty_report(const KeywordList& list) {
  EvalReport r;
  r.list_name = list_display_name(list);
  r.polarity = list.polarity;
  r.config = list.config;
  return r;
}

}  // namespace

// --- folds ---------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw_config("k must be at least 2");
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      pos.push_back(i);
    } else if (labels[i] == -1) {
      neg.push_back(i);
    } else {
      throw_data("fold labels must be +1 or -1");
    }
  }
  if (pos.size() < k || neg.size() < k) {
    throw_data("each class needs at least k=" + std::to_string(k) + " members (have " +
               std::to_string(pos.size()) + " positive, " + std::to_string(neg.size()) + " negative)");
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);
  Rng rng(derive_seed(seed, "folds"));
  std::size_t next = 0;
  for (auto* members : {&pos, &neg}) {
    rng.shuffle(std::span<std::size_t>(*members));
    for (const std::size_t i : *members) {
      plan.assignments[i] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

// --- metrics -------------------------------------------------------------------

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  Metrics m{tp, fp, tn, fn};
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  m.accuracy = ratio(tp + tn, tp + fp + tn + fn);
  return m;
}

Metrics compute_metrics(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) throw_data("predicted and gold labels differ in length");
  if (predicted.empty()) throw_data("cannot compute metrics on zero predictions");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int p = predicted[i];
    const int g = gold[i];
    if ((p != 1 && p != -1) || (g != 1 && g != -1)) throw_data("labels must be +1 or -1");
    if (p == 1) {
      (g == 1 ? tp : fp)++;
    } else {
      (g == -1 ? tn : fn)++;
    }
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

// --- cross validation ------------------------------------------------------------

Label target_label(Polarity polarity) noexcept {
  return polarity == Polarity::Negative ? Label::Negative : Label::Positive;
}

TrainingSet build_training_set(const Corpus& corpus, const KeywordList& list) {
  const Label target = target_label(list.polarity);
  const Vectorizer vectorize_doc(list.words);
  TrainingSet data;
  data.vocabulary = list.words;
  for (const Document& doc : corpus.documents()) {
    if (doc.label == Label::Unlabeled) continue;
    data.vectors.push_back(vectorize_doc(doc));
    data.labels.push_back(doc.label == target ? 1 : -1);
  }
  return data;
}

std::string list_display_name(const KeywordList& list) {
  switch (list.polarity) {
    case Polarity::Positive: return "Positive (alpha=" + detail::shortest(list.config.alpha) + ")";
    case Polarity::Negative: return "Negative (alpha'=" + detail::shortest(list.config.alpha_prime) + ")";
    case Polarity::Combined:
      return "Combined (alpha=" + detail::shortest(list.config.alpha) +
             ", alpha'=" + detail::shortest(list.config.alpha_prime) + ")";
  }
  return {};
}

EvalReport cross_validate(const Corpus& corpus, const KeywordList& vocabulary,
                          const TrainConfig& train_config, std::size_t k, std::uint64_t seed) {
  train_config.validate();
  if (vocabulary.words.empty()) throw_data("cannot cross-validate with an empty keyword list");

  TrainingSet all = build_training_set(corpus, vocabulary);
  const std::vector<FeatureVector>& vectors = all.vectors;
  const std::vector<int>& labels = all.labels;

  const FoldPlan plan = make_folds(labels, k, seed);

  EvalReport report = empty_report(vocabulary);
  report.vocabulary_size = vocabulary.words.size();
  report.per_fold.reserve(k);
  std::vector<char> held_out(labels.size());
  for (std::size_t fold = 0; fold < k; ++fold) {
    const std::vector<std::size_t> test = plan.test_indices(fold);
    const std::vector<std::size_t> train_idx = plan.train_indices(fold);

    std::fill(held_out.begin(), held_out.end(), 0);
    for (const std::size_t i : test) held_out[i] = 1;
    TrainingSet data;
    data.vocabulary = vocabulary.words;
    for (const std::size_t i : train_idx) {
      if (held_out[i]) throw std::logic_error("cross_validate: held-out document in training fold");
      data.vectors.push_back(vectors[i]);
      data.labels.push_back(labels[i]);
    }

    TrainConfig fold_config = train_config;
    fold_config.seed = derive_seed(train_config.seed, static_cast<std::uint64_t>(fold));
    const LinearModel model = train(data, fold_config);

    std::vector<int> predicted;
    std::vector<int> gold;
    for (const std::size_t i : test) {
      predicted.push_back(classify(model, vectors[i]));
      gold.push_back(labels[i]);
    }
    report.per_fold.push_back(compute_metrics(predicted, gold));
  }

  std::vector<double> acc;
  std::vector<double> f1;
  for (const Metrics& m : report.per_fold) {
    acc.push_back(m.accuracy);
    f1.push_back(m.f1);
  }
  const MeanStd a = sample_mean_std(acc);
  const MeanStd f = sample_mean_std(f1);
  report.accuracy_mean = a.mean;
  report.accuracy_std = a.std;
  report.f1_mean = f.mean;
  report.f1_std = f.std;
  return report;
}

const EvalReport* best_report(std::span<const EvalReport> reports, Polarity polarity) {
  const EvalReport* best = nullptr;
  for (const EvalReport& r : reports) {
    if (r.polarity != polarity || r.vocabulary_size == 0) continue;
    if (best == nullptr || r.f1_mean > best->f1_mean ||
        (r.f1_mean == best->f1_mean && list_alpha(r) < list_alpha(*best))) {
      best = &r;
    }
  }
  return best;
}

std::pair<KeywordList, KeywordList> best_lists(std::span<const EvalReport> reports,
                                               std::span<const KeywordStats> stats,
                                               const GridSettings& grid) {
  const ExtractionConfig fallback{grid.alpha_min, grid.alpha_min};
  const EvalReport* best_pos = best_report(reports, Polarity::Positive);
  const EvalReport* best_neg = best_report(reports, Polarity::Negative);
  return {select_keywords(stats, best_pos ? best_pos->config : fallback, Polarity::Positive),
          select_keywords(stats, best_neg ? best_neg->config : fallback, Polarity::Negative)};
}

std::vector<EvalReport> grid_report(const Corpus& corpus, std::span<const KeywordStats> stats,
                                    const GridSettings& grid, const TrainConfig& train_config,
                                    std::size_t k, std::uint64_t seed) {
  const std::vector<SweepPoint> sweep = sweep_alphas(stats, grid.alpha_min, grid.alpha_max, grid.alpha_step);
  const auto evaluate = [&](const KeywordList& list) {
    return list.words.empty() ? empty_report(list) : cross_validate(corpus, list, train_config, k, seed);
  };

  std::vector<EvalReport> reports;
  reports.reserve(2 * sweep.size() + 1);
  for (const SweepPoint& p : sweep) reports.push_back(evaluate(p.positive));
  for (const SweepPoint& p : sweep) reports.push_back(evaluate(p.negative));

  const auto [pos_list, neg_list] = best_lists(reports, stats, grid);
  reports.push_back(evaluate(combine_lists(pos_list, neg_list)));

  std::stable_sort(reports.begin(), reports.end(),
                   [](const EvalReport& a, const EvalReport& b) { return a.f1_mean > b.f1_mean; });
  return reports;
}

// --- report files ------------------------------------------------------------------

void write_report_tsv(std::span<const EvalReport> reports, std::ostream& out) {
  out << "list_name\talpha\tpolarity\tacc_mean\tacc_std\tf1_mean\tf1_std\tfolds\n";
  for (const EvalReport& r : reports) {
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
      const Metrics& m = r.per_fold[f];
      folds.push_back({{"fold", f}, {"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn},
                       {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                       {"accuracy", m.accuracy}});
    }
    out << r.list_name << '\t' << alpha_cell(r) << '\t' << to_string(r.polarity) << '\t'
        << detail::fixed(r.accuracy_mean, 6) << '\t' << detail::fixed(r.accuracy_std, 6) << '\t'
        << detail::fixed(r.f1_mean, 6) << '\t' << detail::fixed(r.f1_std, 6) << '\t' << folds.dump() << '\n';
  }
}

void write_report_text(std::span<const EvalReport> reports, std::ostream& out) {
  std::size_t width = std::string_view("List").size();
  for (const EvalReport& r : reports) width = std::max(width, r.list_name.size());
  width += 2;

  const auto row = [&](std::string_view name, std::string_view a, std::string_view as,
                       std::string_view f, std::string_view fs) {
    out << std::left << std::setw(static_cast<int>(width)) << name << std::setw(18) << a
        << std::setw(8) << as << std::setw(12) << f << fs << '\n';
  };
  row("List", "Accuracy Average", "+/-", "F1 Average", "+/-");
  for (const EvalReport& r : reports) {
    if (r.per_fold.empty()) {
      row(r.list_name, "-", "-", "-", "-");
      continue;
    }
    row(r.list_name, detail::fixed(r.accuracy_mean, 2), detail::fixed(r.accuracy_std, 2),
        detail::fixed(r.f1_mean, 2), detail::fixed(r.f1_std, 2));
  }
}

void save_reports(std::span<const EvalReport> reports, const std::filesystem::path& tsv_path,
                  const std::filesystem::path& text_path) {
  std::ofstream tsv(tsv_path, std::ios::binary | std::ios::trunc);
  if (!tsv) throw_io("cannot write report " + tsv_path.string());
  write_report_tsv(reports, tsv);
  std::ofstream text(text_path, std::ios::binary | std::ios::trunc);
  if (!text) throw_io("cannot write report " + text_path.string());
  write_report_text(reports, text);
  if (!tsv || !text) throw_io("write failure on evaluation report");
}

// --- consensus -----------------------------------------------------------------------

std::string_view to_string(ConsensusLabel label) noexcept {
  switch (label) {
    case ConsensusLabel::Positive: return "positive";
    case ConsensusLabel::Neutral: return "neutral";
    case ConsensusLabel::Negative: return "negative";
  }
  return "neutral";
}

ConsensusLabel consensus_label(int pos_pred, int neg_pred) noexcept {
  const bool pos = pos_pred > 0;
  const bool neg = neg_pred > 0;
  if (pos && !neg) return ConsensusLabel::Positive;
  if (neg && !pos) return ConsensusLabel::Negative;
  return ConsensusLabel::Neutral;
}

LabeledCorpus label_corpus(const Corpus& corpus, const LinearModel& pos_model,
                           const LinearModel& neg_model) {
  for (const LinearModel* m : {&pos_model, &neg_model}) {
    if (m->weights.size() != m->vocabulary.size()) {
      throw_data("model vocabulary and weights differ in length");
    }
  }
  const Vectorizer pos_vec(pos_model.vocabulary);
  const Vectorizer neg_vec(neg_model.vocabulary);

  LabeledCorpus out{corpus, {}, {}};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus[i];
    if (doc.label != Label::Unlabeled) continue;
    ConsensusAnnotation a;
    a.document = i;
    a.pos_score = decision(pos_model, pos_vec(doc));
    a.neg_score = decision(neg_model, neg_vec(doc));
    a.label = consensus_label(a.pos_score >= 0.0 ? 1 : -1, a.neg_score >= 0.0 ? 1 : -1);
    switch (a.label) {
      case ConsensusLabel::Positive: ++out.counts.positive; break;
      case ConsensusLabel::Neutral: ++out.counts.neutral; break;
      case ConsensusLabel::Negative: ++out.counts.negative; break;
    }
    out.annotations.push_back(a);
  }
  return out;
}

void save_labeled_corpus(const LabeledCorpus& labeled, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write labeled corpus " + path.string());
  std::vector<const ConsensusAnnotation*> by_doc(labeled.corpus.size(), nullptr);
  for (const auto& a : labeled.annotations) by_doc.at(a.document) = &a;

  for (std::size_t i = 0; i < labeled.corpus.size(); ++i) {
    const Document& doc = labeled.corpus[i];
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    j["label"] = doc.label == Label::Unlabeled ? nlohmann::ordered_json(nullptr)
                                               : nlohmann::ordered_json(std::string(to_string(doc.label)));
    j["tokens"] = doc.tokens ? nlohmann::ordered_json(*doc.tokens) : nlohmann::ordered_json(nullptr);
    j["consensus"] = by_doc[i] ? nlohmann::ordered_json(std::string(to_string(by_doc[i]->label)))
                               : nlohmann::ordered_json(nullptr);
    out << j.dump(-1, ' ', false) << '\n';
  }
  if (!out) throw_io("write failure on " + path.string());
}

}  // namespace entrokey
