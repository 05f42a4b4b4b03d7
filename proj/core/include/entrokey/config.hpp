#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "entrokey/corpus.hpp"
#include "entrokey/evaluation.hpp"
#include "entrokey/segmentation.hpp"
#include "entrokey/svm.hpp"
#include "entrokey/synthetic.hpp"

namespace entrokey {

/// Everything one end-to-end run needs. When `input` is unset the run uses
/// a generated corpus described by `synthetic`.
struct RunConfig {
  std::optional<std::filesystem::path> input;
  CorpusFormat input_format = CorpusFormat::Jsonl;
  SyntheticSpec synthetic = SyntheticSpec::with_generated_vocab(30, 40);
  SegmenterConfig segmenter;
  GridSettings grid;
  TrainConfig train;
  std::size_t k = 10;
  double negative_detector_alpha = 3.75;
  std::size_t report_top_n = 20;
  std::filesystem::path out_dir = "entrokey_out";
  std::uint64_t seed = 42;
  bool quiet = false;

  /// Numeric and enum sanity checks (paths are checked by the stages that
  /// read them).
  void validate() const;
};

/// Applies `key = value` lines to `config`. `[section]` headers prefix the
/// following keys with "section.". '#' starts a comment; string values may be
/// double-quoted. Unknown keys are config errors.
void apply_config(RunConfig& config, std::istream& in);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Sets a single dotted key, e.g. "train.c" or "synthetic.noise_rate".
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Canonical key = value rendering of a config.
std::string describe(const RunConfig& config);

}  // namespace entrokey
