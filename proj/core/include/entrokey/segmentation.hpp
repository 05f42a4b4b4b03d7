#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace entrokey {

enum class SegmenterMode { Pretokenized, Whitespace, MaxMatch };

std::string_view to_string(SegmenterMode mode) noexcept;
SegmenterMode parse_segmenter_mode(std::string_view name);

struct SegmenterConfig {
  SegmenterMode mode = SegmenterMode::Pretokenized;
  std::optional<std::filesystem::path> dictionary_path;  // required for MaxMatch
  std::size_t max_word_len = 6;                          // in code points
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using WordSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

/// Word list for maximum matching. Never empty.
class Dictionary {
 public:
  explicit Dictionary(WordSet words);

  bool contains(std::string_view word) const { return words_.contains(word); }
  std::size_t size() const noexcept { return words_.size(); }
  const WordSet& words() const noexcept { return words_; }

 private:
  WordSet words_;
};

/// One word per line; blank lines and '#' comments are skipped.
Dictionary load_dictionary(const std::filesystem::path& path);

class Segmenter {
 public:
  /// Loads the dictionary named by the config when mode is MaxMatch.
  explicit Segmenter(SegmenterConfig config);
  Segmenter(SegmenterConfig config, Dictionary dictionary);

  std::vector<std::string> segment(std::string_view text) const;

  const SegmenterConfig& config() const noexcept { return config_; }

 private:
  std::vector<std::string> max_match(std::string_view chunk) const;

  SegmenterConfig config_;
  std::optional<Dictionary> dictionary_;
};

std::vector<std::string> segment(std::string_view text, const SegmenterConfig& config);

}  // namespace entrokey
