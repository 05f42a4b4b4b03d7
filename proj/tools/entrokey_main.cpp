// entrokey: entropy keyword extraction, linear SVM sentiment training and
// consensus labeling from the command line.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrokey/config.hpp"
#include "entrokey/error.hpp"
#include "entrokey/evaluation.hpp"
#include "entrokey/keyword_io.hpp"
#include "entrokey/pipeline.hpp"
#include "entrokey/rng.hpp"
#include "entrokey/synthetic.hpp"

namespace fs = std::filesystem;
using namespace entrokey;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitStage = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Data:
    case ErrorKind::Io: return kExitData;
    case ErrorKind::Stage: return kExitStage;
  }
  return kExitData;
}

// Flag values are kept as strings and routed through set_config_value so
// that flags and config files share one parser; flags are applied last.
struct Overrides {
  std::map<std::string, std::string> values;

  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    return app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

struct Globals {
  std::string config_path;
  std::string out_dir;
  std::string seed;
  bool quiet = false;
};

RunConfig resolve(const Globals& g, const Overrides& o) {
  RunConfig config;
  if (!g.config_path.empty()) apply_config_file(config, g.config_path);
  if (!g.seed.empty()) set_config_value(config, "seed", g.seed);
  if (!g.out_dir.empty()) config.out_dir = g.out_dir;
  if (const char* env = std::getenv("ENTROKEY_OUT"); env != nullptr && *env != '\0') config.out_dir = env;
  if (g.quiet) config.quiet = true;
  for (const auto& [key, value] : o.values) set_config_value(config, key, value);
  return config;
}

void say(const RunConfig& c, const std::string& message) {
  if (!c.quiet) std::cout << message << '\n';
}

fs::path out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return c.out_dir / name;
}

TrainConfig seeded_train(const RunConfig& c) {
  TrainConfig t = c.train;
  t.seed = derive_seed(c.seed, "train");
  return t;
}

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw_config("missing required option " + flag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entrokey: entropy keyword extraction and linear SVM sentiment labeling"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--seed", g.seed, "global seed");
  app.add_option("--out-dir", g.out_dir, "output directory (ENTROKEY_OUT overrides)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  Overrides o;
  std::string input;
  std::string keywords;
  std::string out;
  std::string pos_model;
  std::string neg_model;
  std::string stats_path;
  std::string text;
  std::vector<std::string> keyword_files;

  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
  o.add(synth, "--num-pos", "synthetic.num_pos", "positive sentences");
  o.add(synth, "--num-neg", "synthetic.num_neg", "negative sentences");
  o.add(synth, "--num-unlabeled", "synthetic.num_unlabeled", "unlabeled sentences");
  o.add(synth, "--planted-words", "synthetic.planted_words", "planted words per polarity");
  o.add(synth, "--shared-words", "synthetic.shared_words", "shared words");
  o.add(synth, "--doc-length", "synthetic.doc_length", "tokens per sentence");
  o.add(synth, "--noise-rate", "synthetic.noise_rate", "fraction of tokens drawn from all vocabularies");

  auto* ingest = app.add_subcommand("ingest", "load a corpus and split it into sentences");
  ingest->add_option("--input", input, "corpus file")->required();
  o.add(ingest, "--format", "input_format", "jsonl or tsv");

  auto* seg = app.add_subcommand("segment", "segment corpus text into tokens and drop noise tokens");
  seg->add_option("--input", input, "corpus JSONL");
  seg->add_option("--text", text, "segment one string and print the tokens");
  o.add(seg, "--mode", "segmenter.mode", "pretokenized, whitespace or max_match");
  o.add(seg, "--dict", "segmenter.dictionary", "dictionary for max_match");
  o.add(seg, "--max-word-len", "segmenter.max_word_len", "longest dictionary word in code points");

  auto* kw = app.add_subcommand("keywords", "score words by entropy and write keyword lists over an alpha grid");
  kw->add_option("--input", input, "segmented corpus JSONL")->required();
  o.add(kw, "--alpha-min", "keywords.alpha_min", "first alpha");
  o.add(kw, "--alpha-max", "keywords.alpha_max", "last alpha");
  o.add(kw, "--alpha-step", "keywords.alpha_step", "alpha step");

  auto* tr = app.add_subcommand("train", "train a linear classifier on a keyword list");
  tr->add_option("--input", input, "segmented corpus JSONL")->required();
  tr->add_option("--keywords", keywords, "keyword list TSV")->required();
  tr->add_option("--out", out, "model file")->required();
  o.add(tr, "--trainer", "train.trainer", "hinge_sgd or perceptron");
  o.add(tr, "--c", "train.c", "soft-margin penalty");
  o.add(tr, "--epochs", "train.epochs", "epoch cap");
  o.add(tr, "--learning-rate", "train.learning_rate", "perceptron step");

  auto* ev = app.add_subcommand("eval", "k-fold cross validation of one keyword list");
  ev->add_option("--input", input, "segmented corpus JSONL")->required();
  ev->add_option("--keywords", keywords, "keyword list TSV")->required();
  o.add(ev, "--k", "eval.k", "number of folds");
  o.add(ev, "--trainer", "train.trainer", "hinge_sgd or perceptron");
  o.add(ev, "--c", "train.c", "soft-margin penalty");

  auto* grid = app.add_subcommand("grid", "cross-validate every keyword list of an alpha grid");
  grid->add_option("--input", input, "segmented corpus JSONL")->required();
  o.add(grid, "--alpha-min", "keywords.alpha_min", "first alpha");
  o.add(grid, "--alpha-max", "keywords.alpha_max", "last alpha");
  o.add(grid, "--alpha-step", "keywords.alpha_step", "alpha step");
  o.add(grid, "--k", "eval.k", "number of folds");
  o.add(grid, "--c", "train.c", "soft-margin penalty");

  auto* pr = app.add_subcommand("predict", "label unlabeled sentences positive/neutral/negative");
  pr->add_option("--input", input, "segmented corpus JSONL")->required();
  pr->add_option("--pos-model", pos_model, "positive detector model")->required();
  pr->add_option("--neg-model", neg_model, "negative detector model")->required();
  pr->add_option("--out", out, "labeled JSONL output");

  auto* rep = app.add_subcommand("report", "rank keywords by entropy ratio");
  rep->add_option("--stats", stats_path, "keyword_stats.tsv")->required();
  rep->add_option("--keywords", keyword_files, "keyword list TSV (repeatable)")->required();
  o.add(rep, "--top-n", "report.top_n", "rows per list");

  auto* run = app.add_subcommand("run", "run the whole pipeline");
  o.add(run, "--input", "input", "corpus file (synthetic corpus when omitted)");
  o.add(run, "--format", "input_format", "jsonl or tsv");
  o.add(run, "--mode", "segmenter.mode", "segmenter mode");
  o.add(run, "--dict", "segmenter.dictionary", "dictionary for max_match");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const RunConfig config = resolve(g, o);

    if (*synth) {
      SyntheticSpec spec = config.synthetic;
      spec.seed = derive_seed(config.seed, "synthetic");
      const SyntheticCorpus corpus = generate_synthetic(spec);
      save_corpus(corpus.corpus, out_path(config, "synthetic.jsonl"));
      save_truth(corpus.truth, out_path(config, "truth.tsv"));
      say(config, "wrote " + (config.out_dir / "synthetic.jsonl").string());
    } else if (*ingest) {
      const Corpus corpus = split_sentences(load_corpus(input, config.input_format));
      save_corpus(corpus, out_path(config, "corpus.jsonl"));
      const LabelCounts c = corpus.counts();
      say(config, std::to_string(corpus.size()) + " sentences: " + std::to_string(c.positive) + " positive, " +
                      std::to_string(c.negative) + " negative, " + std::to_string(c.unlabeled) + " unlabeled");
    } else if (*seg) {
      const Segmenter segmenter(config.segmenter);
      if (!text.empty()) {
        for (const std::string& t : segmenter.segment(text)) std::cout << t << '\n';
        return kExitOk;
      }
      require(input, "--input or --text");
      const Corpus corpus = load_corpus(input);
      std::vector<Document> docs;
      for (Document doc : corpus.documents()) {
        std::vector<std::string> tokens =
            (config.segmenter.mode == SegmenterMode::Pretokenized && doc.tokens) ? *doc.tokens
                                                                                : segmenter.segment(doc.text);
        doc.tokens = filter_noise(tokens);
        docs.push_back(std::move(doc));
      }
      save_corpus(Corpus(std::move(docs)), out_path(config, "segmented.jsonl"));
      say(config, "wrote " + (config.out_dir / "segmented.jsonl").string());
    } else if (*kw) {
      const std::vector<KeywordStats> stats = compute_stats(build_count_table(load_corpus(input)));
      save_keyword_stats(stats, out_path(config, "keyword_stats.tsv"));
      fs::create_directories(config.out_dir / "keywords");
      for (const SweepPoint& p : sweep_alphas(stats, config.grid.alpha_min, config.grid.alpha_max,
                                              config.grid.alpha_step)) {
        for (const KeywordList* list : {&p.positive, &p.negative}) {
          save_keyword_list(*list, stats, config.out_dir / "keywords" / keyword_list_filename(*list));
          say(config, list_display_name(*list) + ": " + std::to_string(list->words.size()) + " words");
        }
      }
    } else if (*tr) {
      const Corpus corpus = load_corpus(input);
      const KeywordList list = load_keyword_list(keywords);
      TrainingTrace trace;
      const LinearModel model = train(build_training_set(corpus, list), seeded_train(config), &trace);
      save_model(model, out);
      say(config, "trained " + std::string(to_string(config.train.trainer)) + " on " +
                      std::to_string(list.words.size()) + " keywords, " + std::to_string(trace.epochs_run) +
                      " epochs; wrote " + out);
    } else if (*ev) {
      const EvalReport report = cross_validate(load_corpus(input), load_keyword_list(keywords),
                                               seeded_train(config), config.k, derive_seed(config.seed, "folds"));
      const std::vector<EvalReport> reports{report};
      save_reports(reports, out_path(config, "eval_report.tsv"), out_path(config, "eval_report.txt"));
      if (!config.quiet) write_report_text(reports, std::cout);
    } else if (*grid) {
      const Corpus corpus = load_corpus(input);
      const std::vector<KeywordStats> stats = compute_stats(build_count_table(corpus));
      const std::vector<EvalReport> reports =
          grid_report(corpus, stats, config.grid, seeded_train(config), config.k, derive_seed(config.seed, "folds"));
      save_reports(reports, out_path(config, "grid_report.tsv"), out_path(config, "grid_report.txt"));
      if (!config.quiet) write_report_text(reports, std::cout);
    } else if (*pr) {
      const LabeledCorpus labeled = label_corpus(load_corpus(input), load_model(pos_model), load_model(neg_model));
      const fs::path dest = out.empty() ? out_path(config, "labeled.jsonl") : fs::path(out);
      save_labeled_corpus(labeled, dest);
      say(config, "positive " + std::to_string(labeled.counts.positive) + ", neutral " +
                      std::to_string(labeled.counts.neutral) + ", negative " +
                      std::to_string(labeled.counts.negative));
    } else if (*rep) {
      const std::vector<KeywordStats> stats = load_keyword_stats(stats_path);
      std::vector<KeywordList> lists;
      for (const std::string& f : keyword_files) lists.push_back(load_keyword_list(f));
      report_keywords(stats, lists, config.report_top_n, out_path(config, "keyword_report.tsv"),
                      out_path(config, "keyword_report.txt"));
      say(config, "wrote " + (config.out_dir / "keyword_report.txt").string());
    } else if (*run) {
      const PipelineResult result = run_pipeline(config);
      if (!result.ok) {
        std::cerr << "entrokey: stage " << result.failed_stage << " failed: " << result.message << '\n';
        return kExitStage;
      }
      say(config, "manifest: " + result.manifest_path.string());
    }
  } catch (const Error& e) {
    std::cerr << "entrokey: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "entrokey: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitOk;
}
