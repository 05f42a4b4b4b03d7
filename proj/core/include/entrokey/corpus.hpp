#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entrokey {

enum class Label { Positive, Negative, Unlabeled };

std::string_view to_string(Label label) noexcept;

/// Parses "positive"/"negative" case-insensitively; anything else is
/// Unlabeled.
Label parse_label(std::string_view text);

/// One review sentence. `tokens` stays empty until segmentation.
struct Document {
  std::string id;
  std::string text;
  Label label = Label::Unlabeled;
  std::optional<std::vector<std::string>> tokens;

  bool operator==(const Document&) const = default;
};

struct LabelCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t unlabeled = 0;

  std::size_t total() const noexcept { return positive + negative + unlabeled; }
  bool operator==(const LabelCounts&) const = default;
};

/// Ordered, validated document collection. Ids are unique and every text is
/// non-blank; the constructor enforces both.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  LabelCounts counts() const noexcept { return counts_; }

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  LabelCounts counts_;
};

enum class CorpusFormat { Jsonl, Tsv };

CorpusFormat parse_corpus_format(std::string_view name);

/// Reads a corpus. Malformed records are reported with their 1-based line
/// number; duplicate ids name the offending id.
Corpus read_corpus(std::istream& in, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::Jsonl);

/// JSONL is the only written format.
void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Splits on 。！？!?.；; and absorbs runs of terminators and closing
/// quotes/brackets into the preceding sentence. Children are named
/// "<id>#<n>" (1-based) and inherit the label. Tokens survive only when the
/// document is not actually split.
std::vector<Document> split_sentences(const Document& doc);
Corpus split_sentences(const Corpus& corpus);

/// Drops tokens made only of punctuation, numbers, separators, symbols or
/// white space.
std::vector<std::string> filter_noise(std::span<const std::string> tokens);
bool is_noise_token(std::string_view token);

}  // namespace entrokey
