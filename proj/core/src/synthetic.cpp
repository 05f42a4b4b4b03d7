#include "entrokey/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "entrokey/error.hpp"
#include "entrokey/rng.hpp"
#include "format.hpp"

namespace entrokey {
namespace {

std::string zero_pad(std::size_t value, std::size_t width) {
  std::string num = std::to_string(value);
  if (num.size() < width) num.insert(0, width - num.size(), '0');
  return num;
}

std::vector<std::string> numbered(std::string_view prefix, std::size_t n) {
  const std::size_t width = n > 1 ? std::max<std::size_t>(2, std::to_string(n - 1).size()) : 2;
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) words.push_back(std::string(prefix) + zero_pad(i, width));
  return words;
}

std::string doc_id(char prefix, std::size_t i) { return std::string(1, prefix) + zero_pad(i, 4); }

}  // namespace

SyntheticSpec SyntheticSpec::with_generated_vocab(std::size_t planted_per_polarity, std::size_t shared) {
  SyntheticSpec spec;
  spec.planted_pos_vocab = numbered("posw", planted_per_polarity);
  spec.planted_neg_vocab = numbered("negw", planted_per_polarity);
  spec.shared_vocab = numbered("shrw", shared);
  return spec;
}

void SyntheticSpec::validate() const {
  if (doc_length < 1) throw_config("synthetic doc_length must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw_config("synthetic noise_rate must be in [0, 1)");
  if (planted_pos_vocab.empty() && shared_vocab.empty()) throw_config("synthetic positive vocabulary is empty");
  if (planted_neg_vocab.empty() && shared_vocab.empty()) throw_config("synthetic negative vocabulary is empty");
  std::unordered_set<std::string_view> seen;
  for (const auto* vocab : {&planted_pos_vocab, &planted_neg_vocab, &shared_vocab}) {
    for (const std::string& w : *vocab) {
      if (!seen.insert(w).second) throw_config("synthetic vocabularies must be pairwise disjoint (\"" + w + "\")");
    }
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();

  std::vector<std::string> pos_pool = spec.planted_pos_vocab;
  pos_pool.insert(pos_pool.end(), spec.shared_vocab.begin(), spec.shared_vocab.end());
  std::vector<std::string> neg_pool = spec.planted_neg_vocab;
  neg_pool.insert(neg_pool.end(), spec.shared_vocab.begin(), spec.shared_vocab.end());
  std::vector<std::string> all = pos_pool;
  all.insert(all.end(), spec.planted_neg_vocab.begin(), spec.planted_neg_vocab.end());

  Rng rng(spec.seed);
  const auto make_doc = [&](std::string id, Label polarity, Label stored) {
    const auto& pool = polarity == Label::Positive ? pos_pool : neg_pool;
    std::vector<std::string> tokens;
    tokens.reserve(spec.doc_length);
    std::string text;
    for (std::size_t t = 0; t < spec.doc_length; ++t) {
      const bool noisy = rng.uniform_real() < spec.noise_rate;
      const auto& source = noisy ? all : pool;
      tokens.push_back(source[rng.uniform_index(source.size())]);
      if (!text.empty()) text += ' ';
      text += tokens.back();
    }
    return Document{std::move(id), std::move(text), stored, std::move(tokens)};
  };

  std::vector<Document> docs;
  docs.reserve(spec.num_pos_docs + spec.num_neg_docs + spec.num_unlabeled);
  SyntheticCorpus out;
  for (std::size_t i = 0; i < spec.num_pos_docs; ++i) {
    docs.push_back(make_doc(doc_id('p', i), Label::Positive, Label::Positive));
  }
  for (std::size_t i = 0; i < spec.num_neg_docs; ++i) {
    docs.push_back(make_doc(doc_id('n', i), Label::Negative, Label::Negative));
  }
  for (std::size_t i = 0; i < spec.num_unlabeled; ++i) {
    const Label truth = rng.uniform_index(2) == 0 ? Label::Positive : Label::Negative;
    docs.push_back(make_doc(doc_id('u', i), truth, Label::Unlabeled));
    out.truth.emplace_back(docs.back().id, truth);
  }
  out.corpus = Corpus(std::move(docs));
  return out;
}

void save_truth(const std::vector<std::pair<std::string, Label>>& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write truth sidecar " + path.string());
  out << "id\tpolarity\n";
  for (const auto& [id, label] : truth) out << id << '\t' << to_string(label) << '\n';
  if (!out) throw_io("write failure on " + path.string());
}

std::vector<std::pair<std::string, Label>> load_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read truth sidecar " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "id\tpolarity") throw_data("truth sidecar: missing header");
  std::vector<std::pair<std::string, Label>> truth;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split(line, '\t');
    if (cells.size() != 2) throw_data("truth sidecar: expected 2 columns");
    truth.emplace_back(std::string(cells[0]), parse_label(cells[1]));
  }
  return truth;
}

}  // namespace entrokey
