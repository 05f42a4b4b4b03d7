#include "entrokey/keyword_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "entrokey/error.hpp"
#include "format.hpp"

namespace entrokey {
namespace {

constexpr std::string_view kListHeader = "word\tpolarity\th_pos\th_neg\talpha";
constexpr std::string_view kStatsHeader = "word\th_pos\th_neg\tdf_pos\tdf_neg";

std::string alpha_cell(const KeywordList& list) {
  switch (list.polarity) {
    case Polarity::Positive: return detail::shortest(list.config.alpha);
    case Polarity::Negative: return detail::shortest(list.config.alpha_prime);
    case Polarity::Combined:
      return detail::shortest(list.config.alpha) + "/" + detail::shortest(list.config.alpha_prime);
  }
  return {};
}

ExtractionConfig parse_alpha_cell(std::string_view cell, Polarity polarity) {
  if (polarity == Polarity::Combined) {
    const auto parts = detail::split(cell, '/');
    if (parts.size() != 2) throw_data("combined alpha must look like a/a', got \"" + std::string(cell) + "\"");
    return {detail::parse_double(parts[0], "alpha"), detail::parse_double(parts[1], "alpha_prime")};
  }
  const double a = detail::parse_double(cell, "alpha");
  return {a, a};
}

}  // namespace

std::string keyword_list_filename(const KeywordList& list) {
  if (list.polarity == Polarity::Combined) {
    return "combined_a" + detail::fixed(list.config.alpha, 2) + "_n" +
           detail::fixed(list.config.alpha_prime, 2) + ".tsv";
  }
  const double a = list.polarity == Polarity::Positive ? list.config.alpha : list.config.alpha_prime;
  return std::string(to_string(list.polarity)) + "_a" + detail::fixed(a, 2) + ".tsv";
}

void write_keyword_list(const KeywordList& list, std::span<const KeywordStats> stats,
                        std::ostream& out) {
  std::unordered_map<std::string_view, const KeywordStats*> by_word;
  by_word.reserve(stats.size());
  for (const auto& s : stats) by_word.emplace(s.word, &s);

  out << "# polarity=" << to_string(list.polarity) << " alpha=" << detail::shortest(list.config.alpha)
      << " alpha_prime=" << detail::shortest(list.config.alpha_prime) << '\n';
  out << kListHeader << '\n';
  const std::string alpha = alpha_cell(list);
  for (const std::string& w : list.words) {
    const auto it = by_word.find(w);
    if (it == by_word.end()) throw_data("keyword \"" + w + "\" has no entropy statistics");
    out << w << '\t' << to_string(list.polarity) << '\t' << detail::fixed(it->second->h_pos, 6)
        << '\t' << detail::fixed(it->second->h_neg, 6) << '\t' << alpha << '\n';
  }
}

void save_keyword_list(const KeywordList& list, std::span<const KeywordStats> stats,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write keyword list " + path.string());
  write_keyword_list(list, stats, out);
  if (!out) throw_io("write failure on " + path.string());
}

KeywordList read_keyword_list(std::istream& in) {
  KeywordList list;
  bool have_meta = false;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (const auto field : detail::split(std::string_view(line).substr(1), ' ')) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "polarity") {
          list.polarity = parse_polarity(value);
          have_meta = true;
        } else if (key == "alpha") {
          list.config.alpha = detail::parse_double(value, "alpha");
        } else if (key == "alpha_prime") {
          list.config.alpha_prime = detail::parse_double(value, "alpha_prime");
        }
      }
      continue;
    }
    if (!have_header) {
      if (line != kListHeader) throw_data("keyword list: unexpected header at line " + std::to_string(line_no));
      have_header = true;
      continue;
    }
    const auto cells = detail::split(line, '\t');
    if (cells.size() != 5) {
      throw_data("keyword list: expected 5 columns at line " + std::to_string(line_no));
    }
    const Polarity p = parse_polarity(cells[1]);
    const ExtractionConfig config = parse_alpha_cell(cells[4], p);
    if (!have_meta) {
      list.polarity = p;
      list.config = config;
      have_meta = true;
    } else if (p != list.polarity) {
      throw_data("keyword list: mixed polarities at line " + std::to_string(line_no));
    }
    list.words.emplace_back(cells[0]);
  }
  if (!have_header) throw_data("keyword list: missing header");
  list.config.validate();
  return list;
}

KeywordList load_keyword_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read keyword list " + path.string());
  return read_keyword_list(in);
}

void save_keyword_stats(std::span<const KeywordStats> stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write keyword statistics " + path.string());
  out << kStatsHeader << '\n';
  for (const auto& s : stats) {
    out << s.word << '\t' << detail::significant17(s.h_pos) << '\t' << detail::significant17(s.h_neg)
        << '\t' << s.df_pos << '\t' << s.df_neg << '\n';
  }
  if (!out) throw_io("write failure on " + path.string());
}

std::vector<KeywordStats> load_keyword_stats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read keyword statistics " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kStatsHeader) {
    throw_data("keyword statistics: missing header in " + path.string());
  }
  std::vector<KeywordStats> stats;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split(line, '\t');
    if (cells.size() != 5) throw_data("keyword statistics: expected 5 columns");
    stats.push_back({std::string(cells[0]), detail::parse_double(cells[1], "h_pos"),
                     detail::parse_double(cells[2], "h_neg"),
                     detail::parse_int<std::size_t>(cells[3], "df_pos"),
                     detail::parse_int<std::size_t>(cells[4], "df_neg")});
  }
  return stats;
}

}  // namespace entrokey
