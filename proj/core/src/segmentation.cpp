#include "entrokey/segmentation.hpp"

#include <algorithm>
#include <fstream>

#include "entrokey/error.hpp"
#include "entrokey/unicode.hpp"

namespace entrokey {

std::string_view to_string(SegmenterMode mode) noexcept {
  switch (mode) {
    case SegmenterMode::Pretokenized: return "pretokenized";
    case SegmenterMode::Whitespace: return "whitespace";
    case SegmenterMode::MaxMatch: return "max_match";
  }
  return "pretokenized";
}

SegmenterMode parse_segmenter_mode(std::string_view name) {
  if (name == "pretokenized") return SegmenterMode::Pretokenized;
  if (name == "whitespace") return SegmenterMode::Whitespace;
  if (name == "max_match") return SegmenterMode::MaxMatch;
  throw_config("unknown segmenter mode \"" + std::string(name) +
               "\" (expected pretokenized, whitespace or max_match)");
}

Dictionary::Dictionary(WordSet words) : words_(std::move(words)) {
  if (words_.empty()) throw_config("empty dictionary");
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read dictionary " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view word = unicode::trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.emplace(word);
  }
  if (words.empty()) throw_config("empty dictionary: " + path.string());
  return Dictionary(std::move(words));
}

Segmenter::Segmenter(SegmenterConfig config) : config_(std::move(config)) {
  if (config_.max_word_len < 1) throw_config("max_word_len must be >= 1");
  if (config_.mode == SegmenterMode::MaxMatch) {
    if (!config_.dictionary_path) throw_config("max_match segmentation requires a dictionary");
    dictionary_ = load_dictionary(*config_.dictionary_path);
  }
}

Segmenter::Segmenter(SegmenterConfig config, Dictionary dictionary)
    : config_(std::move(config)), dictionary_(std::move(dictionary)) {
  if (config_.max_word_len < 1) throw_config("max_word_len must be >= 1");
}

std::vector<std::string> Segmenter::segment(std::string_view text) const {
  std::vector<std::string> chunks = unicode::split_whitespace(text);
  if (config_.mode != SegmenterMode::MaxMatch) return chunks;

  std::vector<std::string> tokens;
  for (const std::string& chunk : chunks) {
    std::vector<std::string> part = max_match(chunk);
    tokens.insert(tokens.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return tokens;
}

std::vector<std::string> Segmenter::max_match(std::string_view chunk) const {
  const std::vector<std::size_t> offsets = unicode::code_point_offsets(chunk);
  const std::size_t n = offsets.size() - 1;
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t take = 1;
    for (std::size_t len = std::min(config_.max_word_len, n - pos); len > 1; --len) {
      const std::string_view candidate =
          chunk.substr(offsets[pos], offsets[pos + len] - offsets[pos]);
      if (dictionary_->contains(candidate)) {
        take = len;
        break;
      }
    }
    tokens.emplace_back(chunk.substr(offsets[pos], offsets[pos + take] - offsets[pos]));
    pos += take;
  }
  return tokens;
}

std::vector<std::string> segment(std::string_view text, const SegmenterConfig& config) {
  return Segmenter(config).segment(text);
}

}  // namespace entrokey
