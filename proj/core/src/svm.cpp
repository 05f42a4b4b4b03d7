#include "entrokey/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "entrokey/error.hpp"
#include "entrokey/rng.hpp"
#include "format.hpp"

namespace entrokey {
namespace {

constexpr std::string_view kModelMagic = "ENTROKEY-MODEL";
constexpr std::string_view kModelVersion = "v1";

void check_dimension(const LinearModel& model, const FeatureVector& x) {
  if (x.dimension != model.weights.size()) {
    throw_data("feature dimension " + std::to_string(x.dimension) + " does not match model dimension " +
               std::to_string(model.weights.size()));
  }
}

void validate_training_set(const TrainingSet& data) {
  if (data.vectors.empty()) throw_data("training set is empty");
  if (data.vectors.size() != data.labels.size()) {
    throw_data("training set has " + std::to_string(data.vectors.size()) + " vectors but " +
               std::to_string(data.labels.size()) + " labels");
  }
  if (data.vocabulary.empty()) throw_data("cannot train on an empty vocabulary");
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.labels[i];
    if (y != 1 && y != -1) throw_data("training labels must be +1 or -1");
    has_pos |= y == 1;
    has_neg |= y == -1;
    const FeatureVector& x = data.vectors[i];
    if (x.dimension != data.dimension()) {
      throw_data("training vector " + std::to_string(i) + " has dimension " +
                 std::to_string(x.dimension) + ", vocabulary has " + std::to_string(data.dimension()));
    }
    x.validate();
  }
  if (!has_pos || !has_neg) throw_data("training set needs both +1 and -1 examples");
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

void axpy(double a, const FeatureVector& x, std::vector<double>& y) {
  for (std::size_t k = 0; k < x.indices.size(); ++k) y[x.indices[k]] += a * x.values[k];
}

}  // namespace

// --- FeatureVector -----------------------------------------------------------

FeatureVector FeatureVector::from_dense(std::span<const double> dense) {
  FeatureVector v;
  v.dimension = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      v.indices.push_back(static_cast<std::uint32_t>(i));
      v.values.push_back(dense[i]);
    }
  }
  return v;
}

std::vector<double> FeatureVector::to_dense() const {
  std::vector<double> d(dimension, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) d[indices[k]] = values[k];
  return d;
}

double FeatureVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * dense[indices[k]];
  return s;
}

double FeatureVector::dot(const FeatureVector& other) const {
  double s = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < indices.size() && b < other.indices.size()) {
    if (indices[a] < other.indices[b]) {
      ++a;
    } else if (indices[a] > other.indices[b]) {
      ++b;
    } else {
      s += values[a++] * other.values[b++];
    }
  }
  return s;
}

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for (const double v : values) s += v * v;
  return s;
}

void FeatureVector::validate() const {
  if (indices.size() != values.size()) throw_data("feature vector indices/values length mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dimension) throw_data("feature index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) throw_data("feature indices must strictly increase");
    if (!std::isfinite(values[k])) throw_data("non-finite feature value");
    if (values[k] == 0.0) throw_data("explicit zero stored in sparse feature vector");
  }
}

// --- vectorization -----------------------------------------------------------

Vectorizer::Vectorizer(std::span<const std::string> vocabulary) : dimension_(vocabulary.size()) {
  index_.reserve(vocabulary.size());
  for (std::size_t j = 0; j < vocabulary.size(); ++j) {
    if (!index_.emplace(vocabulary[j], static_cast<std::uint32_t>(j)).second) {
      throw_data("duplicate vocabulary word \"" + vocabulary[j] + "\"");
    }
  }
}

FeatureVector Vectorizer::operator()(std::span<const std::string> tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const std::string& t : tokens) {
    if (const auto it = index_.find(t); it != index_.end()) counts[it->second] += 1.0;
  }
  FeatureVector v;
  v.dimension = dimension_;
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  for (const auto& [j, c] : counts) {
    v.indices.push_back(j);
    v.values.push_back(c);
  }
  return v;
}

FeatureVector Vectorizer::operator()(const Document& doc) const {
  if (!doc.tokens) throw_data("document \"" + doc.id + "\" is not tokenized");
  return (*this)(std::span<const std::string>(*doc.tokens));
}

FeatureVector vectorize(const Document& doc, std::span<const std::string> vocabulary) {
  return Vectorizer(vocabulary)(doc);
}

// --- config ------------------------------------------------------------------

std::string_view to_string(Trainer trainer) noexcept {
  return trainer == Trainer::HingeSgd ? "hinge_sgd" : "perceptron";
}

Trainer parse_trainer(std::string_view name) {
  if (name == "hinge_sgd") return Trainer::HingeSgd;
  if (name == "perceptron") return Trainer::Perceptron;
  throw_config("unknown trainer \"" + std::string(name) + "\" (expected hinge_sgd or perceptron)");
}

void TrainConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw_config("C must be a positive finite number");
  if (epochs < 1) throw_config("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw_config("learning_rate must be a positive finite number");
  }
  if (!(tolerance >= 0.0)) throw_config("tolerance must be non-negative");
}

// --- scoring -----------------------------------------------------------------

double decision(const LinearModel& model, const FeatureVector& x) {
  check_dimension(model, x);
  return x.dot(model.weights) + model.bias;
}

int classify(const LinearModel& model, const FeatureVector& x) {
  return decision(model, x) >= 0.0 ? 1 : -1;
}

double hinge_loss_sum(const LinearModel& model, const TrainingSet& data) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    loss += std::max(0.0, 1.0 - data.labels[i] * decision(model, data.vectors[i]));
  }
  return loss;
}

double hinge_objective(const LinearModel& model, const TrainingSet& data, double c) {
  double norm = 0.0;
  for (const double w : model.weights) norm += w * w;
  return 0.5 * norm + c * hinge_loss_sum(model, data);
}

double dual_decision(std::span<const double> alphas, std::span<const int> labels,
                     std::span<const FeatureVector> support_vectors, double bias,
                     const FeatureVector& x) {
  if (alphas.size() != labels.size() || alphas.size() != support_vectors.size()) {
    throw_data("dual_decision: alphas, labels and support vectors differ in length");
  }
  double s = bias;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] == 0.0) continue;
    if (support_vectors[i].dimension != x.dimension) throw_data("dual_decision: dimension mismatch");
    s += alphas[i] * labels[i] * support_vectors[i].dot(x);
  }
  return s;
}

// --- perceptron --------------------------------------------------------------

LinearModel train_perceptron_from(LinearModel model, const TrainingSet& data,
                                  const TrainConfig& config, TrainingTrace* trace) {
  config.validate();
  validate_training_set(data);
  if (model.weights.size() != data.dimension()) {
    throw_data("initial model dimension does not match the training vocabulary");
  }
  model.vocabulary = data.vocabulary;
  model.config = config;

  TrainingTrace local;
  local.dual_coefficients.assign(data.size(), 0.0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::size_t mistakes = 0;
    for (const std::size_t i : epoch_order(data.size(), config.seed, static_cast<std::size_t>(epoch))) {
      const int y = data.labels[i];
      if (classify(model, data.vectors[i]) == y) continue;
      axpy(config.learning_rate * y, data.vectors[i], model.weights);
      model.bias += config.learning_rate * y;
      local.dual_coefficients[i] += config.learning_rate;
      ++mistakes;
      ++local.updates;
    }
    local.epochs_run = static_cast<std::size_t>(epoch) + 1;
    local.final_mistakes = mistakes;
    if (mistakes == 0) break;
  }
  local.final_objective = hinge_objective(model, data, config.c);
  if (trace) *trace = std::move(local);
  return model;
}

LinearModel train_perceptron(const TrainingSet& data, const TrainConfig& config,
                             TrainingTrace* trace) {
  LinearModel zero;
  zero.weights.assign(data.dimension(), 0.0);
  return train_perceptron_from(std::move(zero), data, config, trace);
}

// --- hinge-loss training ------------------------------------------------------

namespace {

// Bias minimizing C * sum_i max(0, 1 - y_i (f_i + b)) for fixed scores f.
// Each point contributes a breakpoint b_i = y_i - f_i and the slope rises by
// C at every breakpoint, starting from -C * (#positives); the minimizers are
// therefore exactly the interval between the P-th and (P+1)-th smallest
// breakpoints. Its midpoint is returned.
double optimal_bias(std::span<const double> scores, std::span<const int> labels) {
  std::vector<double> breaks(scores.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    breaks[i] = labels[i] - scores[i];
    positives += labels[i] > 0 ? 1 : 0;
  }
  const auto hi_it = breaks.begin() + static_cast<std::ptrdiff_t>(positives);
  std::nth_element(breaks.begin(), hi_it, breaks.end());
  const double hi = *hi_it;
  const double lo = *std::max_element(breaks.begin(), hi_it);
  return 0.5 * (lo + hi);
}

struct Snapshot {
  std::vector<double> alphas;
  double bias = 0.0;
};

}  // namespace

// Solves the dual (min 1/2 a'Qa - sum a, 0 <= a <= C, y'a = 0) by SMO pair
// steps with second-order working-set selection. An epoch is n pair steps;
// after each one the bias is set to its exact optimum for the current w and
// the primal objective is evaluated. The best primal point seen so far is
// kept, so the recorded objective never increases. Training stops once the
// duality gap is within tolerance * (1 + |objective|).
LinearModel train_hinge(const TrainingSet& data, const TrainConfig& config, TrainingTrace* trace) {
  config.validate();
  validate_training_set(data);

  const std::size_t n = data.size();
  const double c = config.c;
  const auto& xs = data.vectors;
  const auto& ys = data.labels;

  // Kernel rows come from a precomputed Gram matrix unless n is large.
  constexpr std::size_t kMaxCached = 4096;
  std::vector<double> gram;
  if (n <= kMaxCached) {
    gram.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = i; t < n; ++t) gram[i * n + t] = gram[t * n + i] = xs[i].dot(xs[t]);
    }
  }
  const auto fill_row = [&](std::size_t i, std::vector<double>& row) {
    if (!gram.empty()) {
      std::copy_n(gram.begin() + static_cast<std::ptrdiff_t>(i * n), n, row.begin());
    } else {
      for (std::size_t t = 0; t < n; ++t) row[t] = xs[i].dot(xs[t]);
    }
  };

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = gram.empty() ? xs[i].squared_norm() : gram[i * n + i];

  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(data.dimension(), 0.0);
  std::vector<double> score(n, 0.0);  // w . x_i
  std::vector<double> row_i(n);
  std::vector<double> row_j(n);

  const auto gradient = [&](std::size_t t) { return ys[t] * score[t] - 1.0; };
  const auto in_up = [&](std::size_t t) { return ys[t] > 0 ? alpha[t] < c : alpha[t] > 0.0; };
  const auto in_low = [&](std::size_t t) { return ys[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c; };

  LinearModel model;
  model.vocabulary = data.vocabulary;
  model.config = config;
  model.weights = w;
  model.bias = optimal_bias(score, ys);

  TrainingTrace local;
  double best = hinge_objective(model, data, c);
  Snapshot best_point{alpha, model.bias};

  constexpr double kTau = 1e-12;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    bool optimal = false;
    for (std::size_t step = 0; step < n; ++step) {
      // i: maximal violator from the "up" set.
      std::size_t i = n;
      double m = -INFINITY;
      for (std::size_t t = 0; t < n; ++t) {
        if (in_up(t) && -ys[t] * gradient(t) > m) {
          m = -ys[t] * gradient(t);
          i = t;
        }
      }
      if (i == n) {
        optimal = true;
        break;
      }
      fill_row(i, row_i);

      // j: largest second-order decrease among "low" violators.
      std::size_t j = n;
      double big_m = INFINITY;
      double best_gain = INFINITY;
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double v = -ys[t] * gradient(t);
        big_m = std::min(big_m, v);
        const double b = m - v;
        if (b <= 0.0) continue;
        const double a = std::max(diag[i] + diag[t] - 2.0 * row_i[t], kTau);
        if (-b * b / a < best_gain) {
          best_gain = -b * b / a;
          j = t;
        }
      }
      if (j == n || m - big_m < 1e-12) {
        optimal = true;
        break;
      }
      fill_row(j, row_j);

      // Move alpha_i by y_i * s and alpha_j by -y_j * s (keeps y'a fixed).
      const double a = std::max(diag[i] + diag[j] - 2.0 * row_i[j], kTau);
      double s = (m + ys[j] * gradient(j)) / a;
      s = std::min(s, ys[i] > 0 ? c - alpha[i] : alpha[i]);
      s = std::min(s, ys[j] > 0 ? alpha[j] : c - alpha[j]);
      alpha[i] = std::clamp(alpha[i] + ys[i] * s, 0.0, c);
      alpha[j] = std::clamp(alpha[j] - ys[j] * s, 0.0, c);
      axpy(s, xs[i], w);
      axpy(-s, xs[j], w);
      for (std::size_t t = 0; t < n; ++t) score[t] += s * (row_i[t] - row_j[t]);
      ++local.updates;
    }

    model.weights = w;
    model.bias = optimal_bias(score, ys);
    const double objective = hinge_objective(model, data, c);
    local.epochs_run = static_cast<std::size_t>(epoch) + 1;
    if (objective <= best) {
      best = objective;
      best_point = {alpha, model.bias};
    }
    local.epoch_objectives.push_back(best);

    double wnorm = 0.0;
    for (const double v : w) wnorm += v * v;
    const double dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * wnorm;
    if (optimal || objective - dual <= config.tolerance * (1.0 + std::abs(objective))) break;
  }

  // Rebuild w from the kept coefficients so that it is exactly their expansion.
  model.weights.assign(data.dimension(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (best_point.alphas[i] != 0.0) axpy(best_point.alphas[i] * ys[i], xs[i], model.weights);
  }
  model.bias = best_point.bias;
  local.dual_coefficients = std::move(best_point.alphas);
  local.final_objective = hinge_objective(model, data, c);
  if (trace) *trace = std::move(local);
  return model;
}

LinearModel train(const TrainingSet& data, const TrainConfig& config, TrainingTrace* trace) {
  return config.trainer == Trainer::Perceptron ? train_perceptron(data, config, trace)
                                               : train_hinge(data, config, trace);
}

// --- persistence ---------------------------------------------------------------

void write_model(const LinearModel& model, std::ostream& out) {
  if (model.weights.size() != model.vocabulary.size()) {
    throw_data("model has " + std::to_string(model.weights.size()) + " weights but " +
               std::to_string(model.vocabulary.size()) + " vocabulary words");
  }
  const TrainConfig& c = model.config;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "trainer=" << to_string(c.trainer) << " c=" << detail::shortest(c.c) << " epochs=" << c.epochs
      << " seed=" << c.seed << " learning_rate=" << detail::shortest(c.learning_rate)
      << " tolerance=" << detail::shortest(c.tolerance) << " features=" << model.weights.size() << '\n';
  out << detail::significant17(model.bias) << '\n';
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    out << model.vocabulary[j] << '\t' << detail::significant17(model.weights[j]) << '\n';
  }
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write model file " + path.string());
  write_model(model, out);
  if (!out) throw_io("write failure on " + path.string());
}

LinearModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw_data("unrecognized model file (empty)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected = std::string(kModelMagic) + " " + std::string(kModelVersion);
  if (line != expected) {
    if (line.starts_with(std::string(kModelMagic) + " ")) {
      throw_data("unsupported model version \"" + line.substr(kModelMagic.size() + 1) + "\"");
    }
    throw_data("unrecognized model file");
  }

  LinearModel model;
  if (!std::getline(in, line)) throw_data("corrupt model file: missing parameter line");
  std::map<std::string, std::string, std::less<>> params;
  for (const auto field : detail::split(line, ' ')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw_data("corrupt model file: bad parameter \"" + std::string(field) + "\"");
    params.emplace(std::string(field.substr(0, eq)), std::string(field.substr(eq + 1)));
  }
  const auto require = [&](std::string_view key) -> const std::string& {
    const auto it = params.find(key);
    if (it == params.end()) throw_data("corrupt model file: missing parameter " + std::string(key));
    return it->second;
  };
  model.config.trainer = parse_trainer(require("trainer"));
  model.config.c = detail::parse_double(require("c"), "c");
  model.config.epochs = detail::parse_int<int>(require("epochs"), "epochs");
  model.config.seed = detail::parse_int<std::uint64_t>(require("seed"), "seed");
  if (const auto it = params.find("learning_rate"); it != params.end()) {
    model.config.learning_rate = detail::parse_double(it->second, "learning_rate");
  }
  if (const auto it = params.find("tolerance"); it != params.end()) {
    model.config.tolerance = detail::parse_double(it->second, "tolerance");
  }
  const auto features = detail::parse_int<std::size_t>(require("features"), "features");

  if (!std::getline(in, line)) throw_data("corrupt model file: missing bias line");
  model.bias = detail::parse_double(line, "bias");
  if (!std::isfinite(model.bias)) throw_data("corrupt model file: non-finite bias");

  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw_data("model integrity error: feature line without a weight");
    }
    std::string word = line.substr(0, tab);
    const double w = detail::parse_double(std::string_view(line).substr(tab + 1), "weight");
    if (!std::isfinite(w)) throw_data("model integrity error: non-finite weight for \"" + word + "\"");
    if (!seen.insert(word).second) throw_data("model integrity error: duplicate word \"" + word + "\"");
    model.vocabulary.push_back(std::move(word));
    model.weights.push_back(w);
  }
  if (model.weights.size() != features) {
    throw_data("model integrity error: header declares " + std::to_string(features) + " features, file has " +
               std::to_string(model.weights.size()));
  }
  return model;
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot read model file " + path.string());
  return read_model(in);
}

}  // namespace entrokey
