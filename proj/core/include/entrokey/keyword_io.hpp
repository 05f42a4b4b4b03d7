#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entrokey/entropy.hpp"

namespace entrokey {

/// Keyword list files are UTF-8 TSV with the header
/// `word	polarity	h_pos	h_neg	alpha`; entropies use six decimals. Rows of a
/// combined list carry polarity "combined" and alpha "<alpha>/<alpha_prime>".
void write_keyword_list(const KeywordList& list, std::span<const KeywordStats> stats,
                        std::ostream& out);
void save_keyword_list(const KeywordList& list, std::span<const KeywordStats> stats,
                       const std::filesystem::path& path);

KeywordList read_keyword_list(std::istream& in);
KeywordList load_keyword_list(const std::filesystem::path& path);

/// Per-word statistics table: word, h_pos, h_neg, df_pos, df_neg.
void save_keyword_stats(std::span<const KeywordStats> stats, const std::filesystem::path& path);
std::vector<KeywordStats> load_keyword_stats(const std::filesystem::path& path);

/// File name used for sweep outputs, e.g. "positive_a2.75.tsv".
std::string keyword_list_filename(const KeywordList& list);

}  // namespace entrokey
