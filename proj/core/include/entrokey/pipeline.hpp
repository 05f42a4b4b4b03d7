#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "entrokey/config.hpp"
#include "entrokey/entropy.hpp"

namespace entrokey {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct ArtifactRecord {
  std::string stage;
  std::string path;  // relative to the output directory, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct StageRecord {
  std::string name;
  bool ok = false;
  std::string message;
};

/// Tracks what each pipeline stage wrote and lets later stages read only
/// artifacts that earlier stages declared (verified against their hashes).
class Manifest {
 public:
  explicit Manifest(std::filesystem::path root);

  void begin_stage(std::string name);
  /// Declares an output of the current stage and returns its absolute path.
  std::filesystem::path output(const std::string& relative);
  /// Resolves an artifact written by an earlier stage; throws if it was never
  /// declared or its content changed since.
  std::filesystem::path input(const std::string& relative) const;
  void end_stage(bool ok, std::string message = {});

  /// Writes manifest.tsv under the root and returns its path.
  std::filesystem::path write() const;

  const std::vector<ArtifactRecord>& artifacts() const noexcept { return artifacts_; }
  const std::vector<StageRecord>& stages() const noexcept { return stages_; }
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
  std::string current_stage_;
  std::vector<std::string> pending_;
  std::vector<ArtifactRecord> artifacts_;
  std::vector<StageRecord> stages_;
};

struct PipelineResult {
  bool ok = false;
  std::string failed_stage;
  std::string message;
  std::filesystem::path manifest_path;
  std::vector<StageRecord> stages;
  std::vector<ArtifactRecord> artifacts;
};

/// Runs ingest, segment, keywords, grid, train, eval, predict and report in
/// order under config.out_dir. A stage error stops the run; the manifest
/// then marks that stage FAILED and keeps whatever was written. Invalid
/// configs and a locked output directory throw config errors instead.
PipelineResult run_pipeline(const RunConfig& config);

/// Ranks each list's words by entropy ratio (h_pos/h_neg for positive lists,
/// h_neg/h_pos for negative; the larger of the two for combined) and writes
/// the top `top_n` of each as TSV and as an aligned text table.
void report_keywords(std::span<const KeywordStats> stats, std::span<const KeywordList> lists,
                     std::size_t top_n, const std::filesystem::path& tsv_path,
                     const std::filesystem::path& text_path);

struct RankedKeyword {
  std::string word;
  double h_pos = 0.0;
  double h_neg = 0.0;
  double ratio = 0.0;  // +inf when the other class has zero entropy
};

std::vector<RankedKeyword> rank_keywords(std::span<const KeywordStats> stats, const KeywordList& list,
                                         std::size_t top_n);

/// Exclusive lock on an output directory (a lockfile created with O_EXCL).
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace entrokey
