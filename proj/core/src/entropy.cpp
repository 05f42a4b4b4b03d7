#include "entrokey/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "entrokey/error.hpp"

namespace entrokey {
namespace {

std::uint32_t lookup(const CountTable::Column& column, std::size_t doc) {
  const auto it = std::lower_bound(
      column.begin(), column.end(), doc,
      [](const CountTable::Entry& e, std::size_t d) { return e.doc < d; });
  return (it != column.end() && it->doc == doc) ? it->count : 0;
}

std::vector<double> column_probabilities(const CountTable::Column& column, std::size_t num_docs) {
  std::vector<double> p(num_docs, 0.0);
  std::uint64_t total = 0;
  for (const auto& e : column) total += e.count;
  if (total == 0) return p;
  for (const auto& e : column) {
    p[e.doc] = static_cast<double>(e.count) / static_cast<double>(total);
  }
  return p;
}

// Same quantity as word_entropy(column_probabilities(...)) without
// materialising the zeros.
double column_entropy(const CountTable::Column& column) {
  std::uint64_t total = 0;
  for (const auto& e : column) total += e.count;
  if (column.size() <= 1 || total == 0) return 0.0;
  const double denom = static_cast<double>(total);
  double h = 0.0;
  for (const auto& e : column) {
    const double p = static_cast<double>(e.count) / denom;
    h -= p * std::log2(p);
  }
  return std::clamp(h, 0.0, std::log2(static_cast<double>(column.size())));
}

}  // namespace

std::uint32_t CountTable::count_pos(std::size_t doc, std::size_t word) const {
  return lookup(pos.at(word), doc);
}

std::uint32_t CountTable::count_neg(std::size_t doc, std::size_t word) const {
  return lookup(neg.at(word), doc);
}

std::size_t CountTable::index_of(std::string_view word) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), word);
  if (it == vocabulary.end() || *it != word) {
    throw_data("unknown word \"" + std::string(word) + "\"");
  }
  return static_cast<std::size_t>(it - vocabulary.begin());
}

CountTable build_count_table(const Corpus& corpus) {
  const LabelCounts counts = corpus.counts();
  if (counts.positive == 0 || counts.negative == 0) {
    throw_data("keyword extraction needs at least one positive and one negative document (have " +
               std::to_string(counts.positive) + " positive, " + std::to_string(counts.negative) +
               " negative)");
  }

  std::map<std::string, std::size_t, std::less<>> index;
  for (const Document& doc : corpus.documents()) {
    if (doc.label == Label::Unlabeled) continue;
    if (!doc.tokens) throw_data("document \"" + doc.id + "\" is not tokenized");
    for (const std::string& t : *doc.tokens) index.emplace(t, 0);
  }

  CountTable table;
  table.vocabulary.reserve(index.size());
  for (auto& [word, j] : index) {
    j = table.vocabulary.size();
    table.vocabulary.push_back(word);
  }
  table.pos.resize(table.vocabulary.size());
  table.neg.resize(table.vocabulary.size());

  std::map<std::size_t, std::uint32_t> doc_counts;
  for (const Document& doc : corpus.documents()) {
    if (doc.label == Label::Unlabeled) continue;
    const bool positive = doc.label == Label::Positive;
    auto& ids = positive ? table.doc_ids_pos : table.doc_ids_neg;
    auto& columns = positive ? table.pos : table.neg;
    const auto i = static_cast<std::uint32_t>(ids.size());
    ids.push_back(doc.id);

    doc_counts.clear();
    for (const std::string& t : *doc.tokens) ++doc_counts[index.find(t)->second];
    for (const auto& [j, c] : doc_counts) columns[j].push_back({i, c});
  }
  return table;
}

WordDistribution word_probabilities(const CountTable& table, std::size_t word) {
  if (word >= table.vocabulary.size()) {
    throw_data("word index " + std::to_string(word) + " out of range");
  }
  return {column_probabilities(table.pos[word], table.num_pos_docs()),
          column_probabilities(table.neg[word], table.num_neg_docs())};
}

WordDistribution word_probabilities(const CountTable& table, std::string_view word) {
  return word_probabilities(table, table.index_of(word));
}

double word_entropy(std::span<const double> p) {
  double sum = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0) || v > 1.0 + 1e-12) {
      throw_data("probability entry out of range: " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum) > 1e-12 && std::abs(sum - 1.0) > 1e-12) {
    throw_data("probabilities must sum to 0 or 1, got " + std::to_string(sum));
  }
  double h = 0.0;
  std::size_t support = 0;
  for (const double v : p) {
    if (v > 0.0) {
      h -= v * std::log2(v);
      ++support;
    }
  }
  if (support <= 1) return 0.0;
  return std::clamp(h, 0.0, std::log2(static_cast<double>(support)));
}

std::vector<KeywordStats> compute_stats(const CountTable& table) {
  std::vector<KeywordStats> stats(table.vocabulary.size());
  for (std::size_t j = 0; j < stats.size(); ++j) {
    stats[j].word = table.vocabulary[j];
    stats[j].h_pos = column_entropy(table.pos[j]);
    stats[j].h_neg = column_entropy(table.neg[j]);
    stats[j].df_pos = table.pos[j].size();
    stats[j].df_neg = table.neg[j].size();
  }
  return stats;
}

void ExtractionConfig::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw_config("alpha must be a positive finite number");
  }
  if (!std::isfinite(alpha_prime) || alpha_prime <= 0.0) {
    throw_config("alpha_prime must be a positive finite number");
  }
}

std::string_view to_string(Polarity polarity) noexcept {
  switch (polarity) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Combined: return "combined";
  }
  return "positive";
}

Polarity parse_polarity(std::string_view name) {
  if (name == "positive") return Polarity::Positive;
  if (name == "negative") return Polarity::Negative;
  if (name == "combined") return Polarity::Combined;
  throw_data("unknown polarity \"" + std::string(name) + "\"");
}

KeywordList select_keywords(std::span<const KeywordStats> stats, const ExtractionConfig& config,
                            Polarity polarity) {
  config.validate();
  if (polarity == Polarity::Combined) {
    throw_config("select_keywords takes Positive or Negative; use combine_lists for Combined");
  }
  KeywordList list{polarity, {}, config};
  for (const KeywordStats& s : stats) {
    const bool keep = polarity == Polarity::Positive ? s.h_pos > config.alpha * s.h_neg
                                                     : s.h_neg > config.alpha_prime * s.h_pos;
    if (keep) list.words.push_back(s.word);
  }
  return list;
}

std::vector<double> alpha_grid(double alpha_min, double alpha_max, double step) {
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || !std::isfinite(step)) {
    throw_config("alpha grid bounds must be finite");
  }
  if (alpha_min <= 0.0) throw_config("alpha grid must start above zero");
  if (alpha_min > alpha_max) throw_config("alpha grid minimum exceeds maximum");
  if (step <= 0.0) throw_config("alpha grid step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((alpha_max - alpha_min) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(alpha_min + static_cast<double>(k) * step);
  return grid;
}

std::vector<SweepPoint> sweep_alphas(std::span<const KeywordStats> stats, double alpha_min,
                                     double alpha_max, double step) {
  std::vector<SweepPoint> points;
  for (const double a : alpha_grid(alpha_min, alpha_max, step)) {
    const ExtractionConfig config{a, a};
    points.push_back({a, select_keywords(stats, config, Polarity::Positive),
                      select_keywords(stats, config, Polarity::Negative)});
  }
  return points;
}

KeywordList combine_lists(const KeywordList& pos, const KeywordList& neg) {
  if (pos.polarity != Polarity::Positive || neg.polarity != Polarity::Negative) {
    throw_config("combine_lists expects a positive list and a negative list");
  }
  KeywordList combined{Polarity::Combined, {}, {pos.config.alpha, neg.config.alpha_prime}};
  std::unordered_set<std::string_view> seen;
  for (const auto* list : {&pos, &neg}) {
    for (const std::string& w : list->words) {
      if (seen.insert(w).second) combined.words.push_back(w);
    }
  }
  return combined;
}

}  // namespace entrokey
