#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entrokey/corpus.hpp"
#include "entrokey/entropy.hpp"
#include "entrokey/segmentation.hpp"

namespace entrokey {

/// Sparse feature vector. Indices strictly increase and stay below
/// `dimension`; stored values are nonzero and finite (counts for vectors built
/// by vectorize()).
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  static FeatureVector from_dense(std::span<const double> dense);
  std::vector<double> to_dense() const;
  double dot(std::span<const double> dense) const;
  double dot(const FeatureVector& other) const;
  double squared_norm() const;

  /// Throws a data error if the invariants above do not hold.
  void validate() const;

  bool operator==(const FeatureVector&) const = default;
};

/// Counts vocabulary words among the document's tokens; other tokens are
/// ignored and an all-zero vector is fine.
FeatureVector vectorize(const Document& doc, std::span<const std::string> vocabulary);

/// Reusable word -> index lookup for vectorizing many documents against one
/// vocabulary.
class Vectorizer {
 public:
  explicit Vectorizer(std::span<const std::string> vocabulary);

  FeatureVector operator()(const Document& doc) const;
  FeatureVector operator()(std::span<const std::string> tokens) const;

  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
  std::size_t dimension_ = 0;
};

struct TrainingSet {
  std::vector<FeatureVector> vectors;
  std::vector<int> labels;  // +1 / -1
  std::vector<std::string> vocabulary;

  std::size_t size() const noexcept { return vectors.size(); }
  std::size_t dimension() const noexcept { return vocabulary.size(); }
};

enum class Trainer { HingeSgd, Perceptron };

std::string_view to_string(Trainer trainer) noexcept;
Trainer parse_trainer(std::string_view name);

struct TrainConfig {
  Trainer trainer = Trainer::HingeSgd;
  double c = 3.0;               // soft-margin penalty
  int epochs = 50;
  double learning_rate = 1.0;   // perceptron step
  std::uint64_t seed = 0;       // perceptron visiting order
  double tolerance = 1e-6;      // hinge early stop on the relative duality gap

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<std::string> vocabulary;
  TrainConfig config;

  std::size_t dimension() const noexcept { return weights.size(); }
  bool operator==(const LinearModel&) const = default;
};

/// What a trainer did. `dual_coefficients[i]` expands the returned weights
/// as w = sum_i coef_i * y_i * x_i (zero-initialised runs only).
struct TrainingTrace {
  std::vector<double> epoch_objectives;  // hinge trainer: accepted objective after each epoch
  std::vector<double> dual_coefficients;
  std::size_t epochs_run = 0;
  std::size_t updates = 0;
  std::size_t final_mistakes = 0;        // perceptron: mistakes in the last epoch
  double final_objective = 0.0;
};

/// w.x + b
double decision(const LinearModel& model, const FeatureVector& x);

/// +1 when decision(model, x) >= 0, otherwise -1.
int classify(const LinearModel& model, const FeatureVector& x);

/// (1/2)||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)).
double hinge_objective(const LinearModel& model, const TrainingSet& data, double c);
double hinge_loss_sum(const LinearModel& model, const TrainingSet& data);

/// Mistake-driven perceptron: on every misclassified x_i,
/// w += learning_rate * y_i * x_i and b += learning_rate * y_i. Stops after
/// an epoch without mistakes or when epochs run out.
LinearModel train_perceptron(const TrainingSet& data, const TrainConfig& config,
                             TrainingTrace* trace = nullptr);
LinearModel train_perceptron_from(LinearModel initial, const TrainingSet& data,
                                  const TrainConfig& config, TrainingTrace* trace = nullptr);

/// Soft-margin linear SVM: minimizes (1/2)||w||^2 + C * sum of hinge losses
/// with an unregularized bias. Runs epochs of dual pair updates, sets the
/// bias exactly after each epoch and keeps the best primal point, so the
/// recorded objective never increases. Stops when the duality gap falls
/// within tolerance * (1 + |objective|) or epochs run out. The dual
/// coefficients in the trace are the alphas of that point.
LinearModel train_hinge(const TrainingSet& data, const TrainConfig& config,
                        TrainingTrace* trace = nullptr);

/// Dispatches on config.trainer.
LinearModel train(const TrainingSet& data, const TrainConfig& config, TrainingTrace* trace = nullptr);

/// sum_i alpha_i y_i (x_i . x) + b
double dual_decision(std::span<const double> alphas, std::span<const int> labels,
                     std::span<const FeatureVector> support_vectors, double bias,
                     const FeatureVector& x);

/// Text format:
///   ENTROKEY-MODEL v1
///   trainer=... c=... epochs=... seed=... learning_rate=... tolerance=... features=N
///   <bias>
///   word<TAB>weight     (N lines, 17 significant digits)
void write_model(const LinearModel& model, std::ostream& out);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel read_model(std::istream& in);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace entrokey
