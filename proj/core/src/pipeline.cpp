#include "entrokey/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>

#include <openssl/evp.h>

#include "entrokey/error.hpp"
#include "entrokey/keyword_io.hpp"
#include "entrokey/rng.hpp"
#include "format.hpp"

namespace entrokey {
namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw_io("SHA-256 init failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

// --- Manifest -------------------------------------------------------------------

Manifest::Manifest(fs::path root) : root_(std::move(root)) {}

void Manifest::begin_stage(std::string name) {
  current_stage_ = std::move(name);
  pending_.clear();
}

fs::path Manifest::output(const std::string& relative) {
  const fs::path p = root_ / relative;
  fs::create_directories(p.parent_path());
  pending_.push_back(relative);
  return p;
}

fs::path Manifest::input(const std::string& relative) const {
  const auto it = std::find_if(artifacts_.begin(), artifacts_.end(),
                               [&](const ArtifactRecord& a) { return a.path == relative; });
  if (it == artifacts_.end()) {
    throw_data("stage " + current_stage_ + " requested undeclared input " + relative);
  }
  const fs::path p = root_ / relative;
  if (sha256_file(p) != it->sha256) {
    throw_data("artifact " + relative + " changed after stage " + it->stage + " wrote it");
  }
  return p;
}

void Manifest::end_stage(bool ok, std::string message) {
  for (const std::string& rel : pending_) {
    const fs::path p = root_ / rel;
    if (!fs::exists(p)) continue;
    artifacts_.push_back({current_stage_, rel, sha256_file(p), fs::file_size(p)});
  }
  pending_.clear();
  stages_.push_back({current_stage_, ok, std::move(message)});
}

fs::path Manifest::write() const {
  const fs::path path = root_ / "manifest.tsv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write manifest " + path.string());
  out << "# entrokey manifest v1\n";
  bool all_ok = true;
  for (const StageRecord& s : stages_) {
    all_ok = all_ok && s.ok;
    out << "stage\t" << s.name << '\t' << (s.ok ? "OK" : "FAILED");
    if (!s.message.empty()) out << '\t' << s.message;
    out << '\n';
    for (const ArtifactRecord& a : artifacts_) {
      if (a.stage == s.name) out << "artifact\t" << a.stage << '\t' << a.path << '\t' << a.sha256 << '\t' << a.bytes << '\n';
    }
  }
  out << "status\t" << (all_ok ? "OK" : "FAILED") << '\n';
  if (!out) throw_io("write failure on " + path.string());
  return path;
}

// --- OutputLock ------------------------------------------------------------------

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".entrokey.lock") {
  fs::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) throw_config("output directory " + dir.string() + " is locked by another run");
    throw_io("cannot create lockfile " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// --- keyword report ----------------------------------------------------------------

std::vector<RankedKeyword> rank_keywords(std::span<const KeywordStats> stats, const KeywordList& list,
                                         std::size_t top_n) {
  std::map<std::string_view, const KeywordStats*> by_word;
  for (const auto& s : stats) by_word.emplace(s.word, &s);

  const auto ratio = [](double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };

  std::vector<RankedKeyword> ranked;
  for (const std::string& w : list.words) {
    const auto it = by_word.find(w);
    if (it == by_word.end()) throw_data("keyword \"" + w + "\" has no entropy statistics");
    const KeywordStats& s = *it->second;
    double r = 0.0;
    switch (list.polarity) {
      case Polarity::Positive: r = ratio(s.h_pos, s.h_neg); break;
      case Polarity::Negative: r = ratio(s.h_neg, s.h_pos); break;
      case Polarity::Combined: r = std::max(ratio(s.h_pos, s.h_neg), ratio(s.h_neg, s.h_pos)); break;
    }
    ranked.push_back({s.word, s.h_pos, s.h_neg, r});
  }
  // Ratio first, then the entropy of the list's own class, then the word.
  const bool negative = list.polarity == Polarity::Negative;
  std::sort(ranked.begin(), ranked.end(), [negative](const RankedKeyword& a, const RankedKeyword& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    const double ha = negative ? a.h_neg : std::max(a.h_pos, a.h_neg);
    const double hb = negative ? b.h_neg : std::max(b.h_pos, b.h_neg);
    if (ha != hb) return ha > hb;
    return a.word < b.word;
  });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

void report_keywords(std::span<const KeywordStats> stats, std::span<const KeywordList> lists,
                     std::size_t top_n, const fs::path& tsv_path, const fs::path& text_path) {
  std::ofstream tsv(tsv_path, std::ios::binary | std::ios::trunc);
  std::ofstream text(text_path, std::ios::binary | std::ios::trunc);
  if (!tsv || !text) throw_io("cannot write keyword report");

  const auto ratio_text = [](double r) { return std::isinf(r) ? std::string("inf") : detail::fixed(r, 6); };

  tsv << "list\tpolarity\trank\tword\th_pos\th_neg\tratio\n";
  for (const KeywordList& list : lists) {
    const std::string name = list_display_name(list);
    const std::vector<RankedKeyword> ranked = rank_keywords(stats, list, top_n);

    std::size_t width = std::string_view("Word").size();
    for (const auto& r : ranked) width = std::max(width, r.word.size());
    width += 2;
    text << name << '\n';
    text << std::left << std::setw(6) << "Rank" << std::setw(static_cast<int>(width)) << "Word"
         << std::setw(12) << "H_pos" << std::setw(12) << "H_neg" << "Ratio" << '\n';
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const auto& r = ranked[i];
      tsv << name << '\t' << to_string(list.polarity) << '\t' << i + 1 << '\t' << r.word << '\t'
          << detail::fixed(r.h_pos, 6) << '\t' << detail::fixed(r.h_neg, 6) << '\t' << ratio_text(r.ratio) << '\n';
      text << std::left << std::setw(6) << i + 1 << std::setw(static_cast<int>(width)) << r.word
           << std::setw(12) << detail::fixed(r.h_pos, 4) << std::setw(12) << detail::fixed(r.h_neg, 4)
           << (std::isinf(r.ratio) ? std::string("inf") : detail::fixed(r.ratio, 3)) << '\n';
    }
    text << '\n';
  }
  if (!tsv || !text) throw_io("write failure on keyword report");
}

// --- pipeline --------------------------------------------------------------------------

namespace {

class Logger {
 public:
  explicit Logger(bool quiet) : quiet_(quiet) {}
  void operator()(const std::string& stage, const std::string& message) const {
    if (!quiet_) std::clog << "[" << stage << "] " << message << '\n';
  }

 private:
  bool quiet_;
};

std::string parent_id(const std::string& id) {
  const auto hash = id.rfind('#');
  return hash == std::string::npos ? id : id.substr(0, hash);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write " + path.string());
  out << content;
  if (!out) throw_io("write failure on " + path.string());
}

struct Stage {
  const char* name;
  std::function<void(Manifest&)> body;
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  const fs::path root = config.out_dir;
  OutputLock lock(root);
  Manifest manifest(root);
  const Logger log(config.quiet);

  const std::uint64_t fold_seed = derive_seed(config.seed, "folds");
  TrainConfig train_config = config.train;
  train_config.seed = derive_seed(config.seed, "train");

  const std::vector<Stage> stages = {
      {"ingest",
       [&](Manifest& m) {
         write_text_file(m.output("config.txt"), describe(config));
         Corpus raw;
         std::vector<std::pair<std::string, Label>> truth;
         if (config.input) {
           raw = load_corpus(*config.input, config.input_format);
         } else {
           SyntheticSpec spec = config.synthetic;
           spec.seed = derive_seed(config.seed, "synthetic");
           SyntheticCorpus synth = generate_synthetic(spec);
           raw = std::move(synth.corpus);
           truth = std::move(synth.truth);
         }
         const Corpus corpus = split_sentences(raw);
         save_corpus(corpus, m.output("corpus.jsonl"));
         if (!config.input) {
           std::map<std::string, Label> by_parent(truth.begin(), truth.end());
           std::vector<std::pair<std::string, Label>> sentence_truth;
           for (const Document& d : corpus.documents()) {
             if (const auto it = by_parent.find(parent_id(d.id)); it != by_parent.end()) {
               sentence_truth.emplace_back(d.id, it->second);
             }
           }
           save_truth(sentence_truth, m.output("truth.tsv"));
         }
         const LabelCounts c = corpus.counts();
         log("ingest", std::to_string(corpus.size()) + " sentences (" + std::to_string(c.positive) +
                           " positive, " + std::to_string(c.negative) + " negative, " +
                           std::to_string(c.unlabeled) + " unlabeled)");
       }},
      {"segment",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("corpus.jsonl"));
         const Segmenter segmenter(config.segmenter);
         std::vector<Document> docs;
         docs.reserve(corpus.size());
         for (Document doc : corpus.documents()) {
           std::vector<std::string> tokens =
               (config.segmenter.mode == SegmenterMode::Pretokenized && doc.tokens) ? *doc.tokens
                                                                                   : segmenter.segment(doc.text);
           doc.tokens = filter_noise(tokens);
           docs.push_back(std::move(doc));
         }
         save_corpus(Corpus(std::move(docs)), m.output("segmented.jsonl"));
         log("segment", "mode " + std::string(to_string(config.segmenter.mode)));
       }},
      {"keywords",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("segmented.jsonl"));
         const std::vector<KeywordStats> stats = compute_stats(build_count_table(corpus));
         save_keyword_stats(stats, m.output("keyword_stats.tsv"));
         for (const SweepPoint& p :
              sweep_alphas(stats, config.grid.alpha_min, config.grid.alpha_max, config.grid.alpha_step)) {
           save_keyword_list(p.positive, stats, m.output("keywords/" + keyword_list_filename(p.positive)));
           save_keyword_list(p.negative, stats, m.output("keywords/" + keyword_list_filename(p.negative)));
         }
         log("keywords", std::to_string(stats.size()) + " words scored");
       }},
      {"grid",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("segmented.jsonl"));
         const std::vector<KeywordStats> stats = load_keyword_stats(m.input("keyword_stats.tsv"));
         const std::vector<EvalReport> reports =
             grid_report(corpus, stats, config.grid, train_config, config.k, fold_seed);
         save_reports(reports, m.output("grid_report.tsv"), m.output("grid_report.txt"));
         const auto [pos, neg] = best_lists(reports, stats, config.grid);
         save_keyword_list(pos, stats, m.output("keywords/best_positive.tsv"));
         save_keyword_list(neg, stats, m.output("keywords/best_negative.tsv"));
         save_keyword_list(combine_lists(pos, neg), stats, m.output("keywords/combined.tsv"));
         log("grid", std::to_string(reports.size()) + " keyword lists evaluated");
       }},
      {"train",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("segmented.jsonl"));
         const std::vector<KeywordStats> stats = load_keyword_stats(m.input("keyword_stats.tsv"));
         const KeywordList combined = load_keyword_list(m.input("keywords/combined.tsv"));
         const ExtractionConfig neg_config{config.negative_detector_alpha, config.negative_detector_alpha};
         const KeywordList negative = select_keywords(stats, neg_config, Polarity::Negative);
         save_keyword_list(negative, stats, m.output("keywords/negative_detector.tsv"));
         if (combined.words.empty()) throw_data("combined keyword list is empty");
         if (negative.words.empty()) {
           throw_data("negative keyword list at alpha'=" + detail::shortest(config.negative_detector_alpha) +
                      " is empty");
         }
         save_model(train(build_training_set(corpus, combined), train_config), m.output("models/positive_detector.txt"));
         save_model(train(build_training_set(corpus, negative), train_config), m.output("models/negative_detector.txt"));
         log("train", "positive detector on " + std::to_string(combined.words.size()) +
                          " keywords, negative detector on " + std::to_string(negative.words.size()));
       }},
      {"eval",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("segmented.jsonl"));
         const KeywordList combined = load_keyword_list(m.input("keywords/combined.tsv"));
         const KeywordList negative = load_keyword_list(m.input("keywords/negative_detector.tsv"));
         const std::vector<EvalReport> reports = {
             cross_validate(corpus, combined, train_config, config.k, fold_seed),
             cross_validate(corpus, negative, train_config, config.k, fold_seed)};
         save_reports(reports, m.output("eval_report.tsv"), m.output("eval_report.txt"));
         log("eval", "combined list f1 " + detail::fixed(reports[0].f1_mean, 3) + ", accuracy " +
                         detail::fixed(reports[0].accuracy_mean, 3));
       }},
      {"predict",
       [&](Manifest& m) {
         const Corpus corpus = load_corpus(m.input("segmented.jsonl"));
         const LinearModel pos_model = load_model(m.input("models/positive_detector.txt"));
         const LinearModel neg_model = load_model(m.input("models/negative_detector.txt"));
         const LabeledCorpus labeled = label_corpus(corpus, pos_model, neg_model);
         save_labeled_corpus(labeled, m.output("labeled.jsonl"));
         write_text_file(m.output("consensus_summary.tsv"),
                         "category\tcount\npositive\t" + std::to_string(labeled.counts.positive) + "\nneutral\t" +
                             std::to_string(labeled.counts.neutral) + "\nnegative\t" +
                             std::to_string(labeled.counts.negative) + "\n");
         log("predict", std::to_string(labeled.counts.positive) + " positive, " +
                            std::to_string(labeled.counts.neutral) + " neutral, " +
                            std::to_string(labeled.counts.negative) + " negative");
       }},
      {"report",
       [&](Manifest& m) {
         const std::vector<KeywordStats> stats = load_keyword_stats(m.input("keyword_stats.tsv"));
         const std::vector<KeywordList> lists = {load_keyword_list(m.input("keywords/best_positive.tsv")),
                                                 load_keyword_list(m.input("keywords/negative_detector.tsv"))};
         report_keywords(stats, lists, config.report_top_n, m.output("keyword_report.tsv"),
                         m.output("keyword_report.txt"));
       }},
  };

  PipelineResult result;
  result.ok = true;
  for (const Stage& stage : stages) {
    manifest.begin_stage(stage.name);
    try {
      stage.body(manifest);
      manifest.end_stage(true);
    } catch (const std::exception& e) {
      const std::string message = std::string(stage.name) + ": " + e.what();
      manifest.end_stage(false, e.what());
      log(stage.name, std::string("FAILED: ") + e.what());
      result.ok = false;
      result.failed_stage = stage.name;
      result.message = message;
      break;
    }
  }
  result.manifest_path = manifest.write();
  result.stages = manifest.stages();
  result.artifacts = manifest.artifacts();
  return result;
}

}  // namespace entrokey
