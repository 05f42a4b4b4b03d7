#include "entrokey/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "entrokey/error.hpp"
#include "entrokey/unicode.hpp"
#include "format.hpp"

namespace entrokey {
namespace {

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

template <typename T>
T as_int(std::string_view key, std::string_view value) {
  try {
    return detail::parse_int<T>(value, key);
  } catch (const Error& e) {
    throw_config(e.what());
  }
}

double as_double(std::string_view key, std::string_view value) {
  try {
    return detail::parse_double(value, key);
  } catch (const Error& e) {
    throw_config(e.what());
  }
}

bool as_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw_config("expected true/false for " + std::string(key));
}

std::size_t planted_count(const RunConfig& c) { return c.synthetic.planted_pos_vocab.size(); }

void regenerate_vocab(RunConfig& c, std::size_t planted, std::size_t shared) {
  SyntheticSpec fresh = SyntheticSpec::with_generated_vocab(planted, shared);
  c.synthetic.planted_pos_vocab = std::move(fresh.planted_pos_vocab);
  c.synthetic.planted_neg_vocab = std::move(fresh.planted_neg_vocab);
  c.synthetic.shared_vocab = std::move(fresh.shared_vocab);
}

}  // namespace

void RunConfig::validate() const {
  if (k < 2) throw_config("eval.k must be >= 2");
  train.validate();
  alpha_grid(grid.alpha_min, grid.alpha_max, grid.alpha_step);
  ExtractionConfig{negative_detector_alpha, negative_detector_alpha}.validate();
  if (segmenter.max_word_len < 1) throw_config("segmenter.max_word_len must be >= 1");
  if (!input) synthetic.validate();
  if (out_dir.empty()) throw_config("output directory is empty");
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = unquote(raw);
  if (key == "seed") {
    c.seed = as_int<std::uint64_t>(key, value);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "quiet") {
    c.quiet = as_bool(key, value);
  } else if (key == "input") {
    if (value.empty()) {
      c.input.reset();
    } else {
      c.input = value;
    }
  } else if (key == "input_format") {
    c.input_format = parse_corpus_format(value);
  } else if (key == "segmenter.mode") {
    c.segmenter.mode = parse_segmenter_mode(value);
  } else if (key == "segmenter.dictionary") {
    c.segmenter.dictionary_path = value;
  } else if (key == "segmenter.max_word_len") {
    c.segmenter.max_word_len = as_int<std::size_t>(key, value);
  } else if (key == "keywords.alpha_min") {
    c.grid.alpha_min = as_double(key, value);
  } else if (key == "keywords.alpha_max") {
    c.grid.alpha_max = as_double(key, value);
  } else if (key == "keywords.alpha_step") {
    c.grid.alpha_step = as_double(key, value);
  } else if (key == "train.trainer") {
    c.train.trainer = parse_trainer(value);
  } else if (key == "train.c") {
    c.train.c = as_double(key, value);
  } else if (key == "train.epochs") {
    c.train.epochs = as_int<int>(key, value);
  } else if (key == "train.learning_rate") {
    c.train.learning_rate = as_double(key, value);
  } else if (key == "train.tolerance") {
    c.train.tolerance = as_double(key, value);
  } else if (key == "eval.k") {
    c.k = as_int<std::size_t>(key, value);
  } else if (key == "predict.negative_alpha") {
    c.negative_detector_alpha = as_double(key, value);
  } else if (key == "report.top_n") {
    c.report_top_n = as_int<std::size_t>(key, value);
  } else if (key == "synthetic.num_pos") {
    c.synthetic.num_pos_docs = as_int<std::size_t>(key, value);
  } else if (key == "synthetic.num_neg") {
    c.synthetic.num_neg_docs = as_int<std::size_t>(key, value);
  } else if (key == "synthetic.num_unlabeled") {
    c.synthetic.num_unlabeled = as_int<std::size_t>(key, value);
  } else if (key == "synthetic.planted_words") {
    regenerate_vocab(c, as_int<std::size_t>(key, value), c.synthetic.shared_vocab.size());
  } else if (key == "synthetic.shared_words") {
    regenerate_vocab(c, planted_count(c), as_int<std::size_t>(key, value));
  } else if (key == "synthetic.doc_length") {
    c.synthetic.doc_length = as_int<std::size_t>(key, value);
  } else if (key == "synthetic.noise_rate") {
    c.synthetic.noise_rate = as_double(key, value);
  } else {
    throw_config("unknown configuration key \"" + std::string(key) + "\"");
  }
}

void apply_config(RunConfig& config, std::istream& in) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      // '#' inside a quoted value is kept.
      const auto quote = view.find('"');
      if (quote == std::string_view::npos || hash < quote) view = view.substr(0, hash);
    }
    view = unicode::trim(view);
    if (view.empty()) continue;
    if (view.front() == '[') {
      if (view.back() != ']') throw_config("config line " + std::to_string(line_no) + ": bad section header");
      section = std::string(unicode::trim(view.substr(1, view.size() - 2)));
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw_config("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = unicode::trim(view.substr(0, eq));
    const std::string_view value = unicode::trim(view.substr(eq + 1));
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    set_config_value(config, full, value);
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_config("cannot read config file " + path.string());
  apply_config(config, in);
}

std::string describe(const RunConfig& c) {
  std::ostringstream out;
  out << "seed = " << c.seed << '\n';
  out << "input = \"" << (c.input ? c.input->string() : std::string()) << "\"\n";
  out << "input_format = " << (c.input_format == CorpusFormat::Jsonl ? "jsonl" : "tsv") << '\n';
  out << "segmenter.mode = " << to_string(c.segmenter.mode) << '\n';
  out << "segmenter.dictionary = \""
      << (c.segmenter.dictionary_path ? c.segmenter.dictionary_path->string() : std::string()) << "\"\n";
  out << "segmenter.max_word_len = " << c.segmenter.max_word_len << '\n';
  out << "keywords.alpha_min = " << detail::shortest(c.grid.alpha_min) << '\n';
  out << "keywords.alpha_max = " << detail::shortest(c.grid.alpha_max) << '\n';
  out << "keywords.alpha_step = " << detail::shortest(c.grid.alpha_step) << '\n';
  out << "train.trainer = " << to_string(c.train.trainer) << '\n';
  out << "train.c = " << detail::shortest(c.train.c) << '\n';
  out << "train.epochs = " << c.train.epochs << '\n';
  out << "train.learning_rate = " << detail::shortest(c.train.learning_rate) << '\n';
  out << "train.tolerance = " << detail::shortest(c.train.tolerance) << '\n';
  out << "eval.k = " << c.k << '\n';
  out << "predict.negative_alpha = " << detail::shortest(c.negative_detector_alpha) << '\n';
  out << "report.top_n = " << c.report_top_n << '\n';
  if (!c.input) {
    out << "synthetic.num_pos = " << c.synthetic.num_pos_docs << '\n';
    out << "synthetic.num_neg = " << c.synthetic.num_neg_docs << '\n';
    out << "synthetic.num_unlabeled = " << c.synthetic.num_unlabeled << '\n';
    out << "synthetic.planted_words = " << c.synthetic.planted_pos_vocab.size() << '\n';
    out << "synthetic.shared_words = " << c.synthetic.shared_vocab.size() << '\n';
    out << "synthetic.doc_length = " << c.synthetic.doc_length << '\n';
    out << "synthetic.noise_rate = " << detail::shortest(c.synthetic.noise_rate) << '\n';
  }
  return out.str();
}

}  // namespace entrokey
