#include "entrokey/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "entrokey/error.hpp"
#include "entrokey/unicode.hpp"

namespace entrokey {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_terminator(char32_t cp) {
  switch (cp) {
    case U'。': case U'！': case U'？': case U'!': case U'?':
    case U'.': case U'；': case U';':
      return true;
    default:
      return false;
  }
}

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U'”': case U'’': case U'）': case U')':
    case U'」': case U'』': case U'】': case U'》': case U'〉': case U']':
    case U'}': case U'］': case U'｝':
      return true;
    default:
      return false;
  }
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw_data("malformed record at line " + std::to_string(line) + ": " + what);
}

Document parse_jsonl_record(const std::string& line, std::size_t line_no) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(line_no, e.what());
  }
  if (!j.is_object()) malformed(line_no, "expected a JSON object");

  Document doc;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) malformed(line_no, "missing string field \"id\"");
  doc.id = id->get<std::string>();
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) malformed(line_no, "missing string field \"text\"");
  doc.text = text->get<std::string>();

  if (const auto label = j.find("label"); label != j.end() && !label->is_null()) {
    if (!label->is_string()) malformed(line_no, "\"label\" must be a string or null");
    doc.label = parse_label(label->get_ref<const std::string&>());
  }
  if (const auto tokens = j.find("tokens"); tokens != j.end() && !tokens->is_null()) {
    if (!tokens->is_array()) malformed(line_no, "\"tokens\" must be an array or null");
    std::vector<std::string> list;
    list.reserve(tokens->size());
    for (const auto& t : *tokens) {
      if (!t.is_string()) malformed(line_no, "\"tokens\" entries must be strings");
      list.push_back(t.get<std::string>());
    }
    doc.tokens = std::move(list);
  }
  return doc;
}

Document parse_tsv_record(const std::string& line, std::size_t line_no) {
  const auto tab1 = line.find('\t');
  if (tab1 == std::string::npos) malformed(line_no, "expected id<TAB>label<TAB>text");
  const auto tab2 = line.find('\t', tab1 + 1);
  if (tab2 == std::string::npos) malformed(line_no, "expected id<TAB>label<TAB>text");
  Document doc;
  doc.id = line.substr(0, tab1);
  doc.label = parse_label(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1));
  doc.text = line.substr(tab2 + 1);
  return doc;
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::Positive: return "positive";
    case Label::Negative: return "negative";
    case Label::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  const std::string l = lower_ascii(unicode::trim(text));
  if (l == "positive") return Label::Positive;
  if (l == "negative") return Label::Negative;
  return Label::Unlabeled;
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const Document& doc : documents_) {
    if (doc.id.empty()) throw_data("document with empty id");
    if (!seen.insert(doc.id).second) throw_data("duplicate document id \"" + doc.id + "\"");
    if (unicode::trim(doc.text).empty()) throw_data("document \"" + doc.id + "\" has blank text");
    switch (doc.label) {
      case Label::Positive: ++counts_.positive; break;
      case Label::Negative: ++counts_.negative; break;
      case Label::Unlabeled: ++counts_.unlabeled; break;
    }
  }
}

CorpusFormat parse_corpus_format(std::string_view name) {
  const std::string l = lower_ascii(name);
  if (l == "jsonl") return CorpusFormat::Jsonl;
  if (l == "tsv") return CorpusFormat::Tsv;
  throw_config("unknown corpus format \"" + std::string(name) + "\" (expected jsonl or tsv)");
}

Corpus read_corpus(std::istream& in, CorpusFormat format) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim(line).empty()) continue;
    Document doc = format == CorpusFormat::Jsonl ? parse_jsonl_record(line, line_no)
                                                 : parse_tsv_record(line, line_no);
    if (doc.id.empty()) malformed(line_no, "empty id");
    if (unicode::trim(doc.text).empty()) malformed(line_no, "blank text");
    if (!ids.insert(doc.id).second) {
      throw_data("duplicate document id \"" + doc.id + "\" at line " + std::to_string(line_no));
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw_io("read failure while loading corpus");
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read corpus file " + path.string());
  return read_corpus(in, format);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    ordered_json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    if (doc.label == Label::Unlabeled) {
      j["label"] = nullptr;
    } else {
      j["label"] = std::string(to_string(doc.label));
    }
    if (doc.tokens) {
      j["tokens"] = *doc.tokens;
    } else {
      j["tokens"] = nullptr;
    }
    out << j.dump(-1, ' ', false) << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write corpus file " + path.string());
  write_corpus(corpus, out);
  out.flush();
  if (!out) throw_io("write failure on " + path.string());
}

std::vector<Document> split_sentences(const Document& doc) {
  const std::string_view text = doc.text;
  std::vector<std::string> pieces;

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = unicode::next_code_point(text, i);
    if (!is_terminator(cp)) continue;
    // Absorb the rest of the terminator run and any closing marks.
    while (i < text.size()) {
      std::size_t peek = i;
      const char32_t next = unicode::next_code_point(text, peek);
      if (!is_terminator(next) && !is_closer(next)) break;
      i = peek;
    }
    pieces.emplace_back(text.substr(start, i - start));
    start = i;
  }
  if (start < text.size()) {
    std::string tail(text.substr(start));
    // Trailing white space belongs to the last sentence.
    if (unicode::trim(tail).empty() && !pieces.empty()) {
      pieces.back() += tail;
    } else {
      pieces.push_back(std::move(tail));
    }
  }

  std::vector<Document> out;
  out.reserve(pieces.size());
  for (auto& piece : pieces) {
    if (unicode::trim(piece).empty()) continue;
    Document child;
    child.id = doc.id + "#" + std::to_string(out.size() + 1);
    child.text = std::move(piece);
    child.label = doc.label;
    out.push_back(std::move(child));
  }
  if (out.size() == 1) out.front().tokens = doc.tokens;
  return out;
}

Corpus split_sentences(const Corpus& corpus) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const Document& doc : corpus.documents()) {
    for (Document& child : split_sentences(doc)) docs.push_back(std::move(child));
  }
  return Corpus(std::move(docs));
}

bool is_noise_token(std::string_view token) {
  for (std::size_t i = 0; i < token.size();) {
    if (!unicode::is_noise(unicode::next_code_point(token, i))) return false;
  }
  return true;
}

std::vector<std::string> filter_noise(std::span<const std::string> tokens) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (!is_noise_token(t)) kept.push_back(t);
  }
  return kept;
}

}  // namespace entrokey
