#include "entrokey/svm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "entrokey/error.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace entrokey {
namespace {

using Tokens = std::vector<std::string>;

TrainingSet dense_set(const std::vector<std::vector<double>>& points, const std::vector<int>& labels) {
  TrainingSet set;
  for (const auto& p : points) set.vectors.push_back(FeatureVector::from_dense(p));
  set.labels = labels;
  const std::size_t dims = points.empty() ? 0 : points.front().size();
  for (std::size_t d = 0; d < dims; ++d) set.vocabulary.push_back("f" + std::to_string(d));
  return set;
}

double training_accuracy(const LinearModel& m, const TrainingSet& s) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < s.size(); ++i) ok += classify(m, s.vectors[i]) == s.labels[i] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(s.size());
}

TEST(Vectorize, CountsVocabularyWords) {
  const Document d{"d", "t", Label::Positive, Tokens{"好", "好", "服务"}};
  const Tokens vocab{"好", "服务", "差"};
  EXPECT_EQ(vectorize(d, vocab).to_dense(), (std::vector<double>{2, 1, 0}));
  const Document other{"e", "t", Label::Positive, Tokens{"其他"}};
  EXPECT_EQ(vectorize(other, vocab).to_dense(), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(vectorize(other, vocab).indices.size(), 0u);
  const Document untokenized{"u", "t", Label::Positive, std::nullopt};
  EXPECT_THROW(vectorize(untokenized, vocab), Error);
}

TEST(Vectorize, VectorizerMatchesFreeFunction) {
  const Tokens vocab{"a", "b", "c"};
  const Vectorizer v(vocab);
  const Document d{"d", "t", Label::Negative, Tokens{"c", "a", "c", "z"}};
  EXPECT_EQ(v(d), vectorize(d, vocab));
  EXPECT_EQ(v.dimension(), 3u);
  EXPECT_THROW(Vectorizer(Tokens{"a", "a"}), Error);
}

TEST(FeatureVector, DenseRoundTripAndDots) {
  const std::vector<double> a{0, 3, 0, -1.5};
  const std::vector<double> b{2, 1, 0, 2};
  const FeatureVector fa = FeatureVector::from_dense(a);
  EXPECT_EQ(fa.indices, (std::vector<std::uint32_t>{1, 3}));
  EXPECT_EQ(fa.to_dense(), a);
  EXPECT_EQ(fa.dot(b), 0.0);
  EXPECT_EQ(fa.dot(FeatureVector::from_dense(b)), 0.0);
  EXPECT_EQ(fa.squared_norm(), 11.25);
  FeatureVector broken = fa;
  broken.indices = {3, 1};
  EXPECT_THROW(broken.validate(), Error);
}

TEST(Decision, WorkedExample) {
  LinearModel m;
  m.weights = {1.0, -2.0};
  m.bias = 0.5;
  m.vocabulary = {"a", "b"};
  const auto x = FeatureVector::from_dense(std::vector<double>{3, 1});
  EXPECT_EQ(decision(m, x), 1.5);
  EXPECT_EQ(classify(m, x), 1);
  EXPECT_THROW(decision(m, FeatureVector::from_dense(std::vector<double>{1, 1, 1})), Error);
}

TEST(Decision, ZeroScoreIsPositive) {
  LinearModel m;
  m.weights = {0.0, 0.0};
  m.vocabulary = {"a", "b"};
  EXPECT_EQ(classify(m, FeatureVector::from_dense(std::vector<double>{4, 2})), 1);
}

TEST(Perceptron, OneDimensionalExample) {
  const TrainingSet s = dense_set({{1}, {2}, {-1}, {-3}}, {1, 1, -1, -1});
  TrainConfig cfg;
  cfg.trainer = Trainer::Perceptron;
  TrainingTrace trace;
  const LinearModel m = train_perceptron(s, cfg, &trace);
  EXPECT_EQ(training_accuracy(m, s), 1.0);
  EXPECT_EQ(trace.final_mistakes, 0u);
}

TEST(Perceptron, SeparatingModelIsAFixedPoint) {
  const TrainingSet s = dense_set({{1, 0}, {0, 1}, {-1, 0}}, {1, 1, -1});
  LinearModel init;
  init.weights = {1.0, 1.0};
  init.bias = 0.5;
  init.vocabulary = s.vocabulary;
  TrainConfig cfg;
  cfg.trainer = Trainer::Perceptron;
  TrainingTrace trace;
  const LinearModel m = train_perceptron_from(init, s, cfg, &trace);
  EXPECT_EQ(m.weights, init.weights);
  EXPECT_EQ(m.bias, init.bias);
  EXPECT_EQ(trace.updates, 0u);
}

TEST(Perceptron, NonSeparableStopsAtEpochCap) {
  const TrainingSet s = dense_set({{1}, {1}}, {1, -1});
  TrainConfig cfg;
  cfg.trainer = Trainer::Perceptron;
  cfg.epochs = 7;
  TrainingTrace trace;
  train_perceptron(s, cfg, &trace);
  EXPECT_EQ(trace.epochs_run, 7u);
  EXPECT_GT(trace.final_mistakes, 0u);
}

TEST(Perceptron, ConvergesOnRandomSeparableSets) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sep = oracle::random_separable_set(gen, 20, 4, 0.3);
    ASSERT_TRUE(oracle::witness_separates(sep));
    TrainConfig cfg;
    cfg.trainer = Trainer::Perceptron;
    cfg.epochs = 1000;
    cfg.seed = static_cast<std::uint64_t>(trial);
    TrainingTrace trace;
    const TrainingSet s = dense_set(sep.points, sep.labels);
    const LinearModel m = train_perceptron(s, cfg, &trace);
    EXPECT_EQ(trace.final_mistakes, 0u);
    EXPECT_EQ(training_accuracy(m, s), 1.0);
  }
}

TEST(Hinge, SeparableToyReachesFullAccuracyAndMargin) {
  const std::vector<std::vector<double>> pts{{2, 2}, {3, 1}, {3, 3}, {0, 0}, {1, 0}, {0, 1}};
  const std::vector<int> labels{1, 1, 1, -1, -1, -1};
  ASSERT_TRUE(oracle::separable_2d(pts, labels));
  const TrainingSet s = dense_set(pts, labels);
  TrainConfig cfg;
  cfg.c = 1000.0;
  cfg.epochs = 500;
  cfg.tolerance = 0.0;
  TrainingTrace trace;
  const LinearModel m = train_hinge(s, cfg, &trace);
  EXPECT_EQ(training_accuracy(m, s), 1.0);
  EXPECT_LT(hinge_loss_sum(m, s), 1e-3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GE(s.labels[i] * decision(m, s.vectors[i]), 1.0 - 1e-3) << i;
  }
}

TEST(Hinge, ObjectiveNeverIncreases) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sep = oracle::random_separable_set(gen, 16, 3, 0.2);
    const TrainingSet s = dense_set(sep.points, sep.labels);
    TrainConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    TrainingTrace trace;
    train_hinge(s, cfg, &trace);
    ASSERT_FALSE(trace.epoch_objectives.empty());
    for (std::size_t e = 1; e < trace.epoch_objectives.size(); ++e) {
      const double prev = trace.epoch_objectives[e - 1];
      EXPECT_LE(trace.epoch_objectives[e], prev + 1e-9 * (1.0 + std::abs(prev)));
    }
  }
}

TEST(Hinge, DuplicatedDataKeepsSignPattern) {
  const std::vector<std::vector<double>> pts{{2, 2}, {3, 1}, {0, 0}, {1, 0}};
  const std::vector<int> labels{1, 1, -1, -1};
  std::vector<std::vector<double>> twice = pts;
  twice.insert(twice.end(), pts.begin(), pts.end());
  std::vector<int> twice_labels = labels;
  twice_labels.insert(twice_labels.end(), labels.begin(), labels.end());
  TrainConfig cfg;
  cfg.epochs = 200;
  const LinearModel a = train_hinge(dense_set(pts, labels), cfg);
  const LinearModel b = train_hinge(dense_set(twice, twice_labels), cfg);
  for (double x = 0; x <= 3; x += 1.0) {
    for (double y = 0; y <= 3; y += 1.0) {
      const double fa = decision(a, FeatureVector::from_dense(std::vector<double>{x, y}));
      if (std::abs(fa) < 0.5) continue;  // only probes clear of the boundary
      const auto probe = FeatureVector::from_dense(std::vector<double>{x, y});
      EXPECT_EQ(classify(a, probe), classify(b, probe)) << x << "," << y;
    }
  }
}

TEST(Hinge, DeterministicForFixedSeed) {
  std::mt19937_64 gen(3);
  const auto sep = oracle::random_separable_set(gen, 20, 5, 0.2);
  const TrainingSet s = dense_set(sep.points, sep.labels);
  TrainConfig cfg;
  cfg.seed = 17;
  EXPECT_EQ(train_hinge(s, cfg), train_hinge(s, cfg));
}

TEST(DualDecision, SingleSupportVector) {
  const auto x = FeatureVector::from_dense(std::vector<double>{0, 2});
  const std::vector<double> alphas{1.0};
  const std::vector<int> labels{1};
  const std::vector<FeatureVector> sv{x};
  EXPECT_EQ(dual_decision(alphas, labels, sv, 0.0, x), 4.0);
  EXPECT_EQ(dual_decision(alphas, std::vector<int>{-1}, sv, 1.0, x), -3.0);
}

void expect_primal_dual_agree(const TrainingSet& s, const LinearModel& m, const TrainingTrace& trace) {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> coord(0, 5);
  for (int probe = 0; probe < 100; ++probe) {
    std::vector<double> p(s.dimension());
    for (auto& v : p) v = coord(gen);
    const auto x = FeatureVector::from_dense(p);
    const double primal = decision(m, x);
    const double dual = dual_decision(trace.dual_coefficients, s.labels, s.vectors, m.bias, x);
    EXPECT_NEAR(primal, dual, 1e-9 * std::max(1.0, std::abs(primal)));
  }
}

TEST(DualDecision, AgreesWithPrimalForBothTrainers) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sep = oracle::random_separable_set(gen, 15, 4, 0.3);
    const TrainingSet s = dense_set(sep.points, sep.labels);
    for (const Trainer t : {Trainer::HingeSgd, Trainer::Perceptron}) {
      TrainConfig cfg;
      cfg.trainer = t;
      cfg.seed = static_cast<std::uint64_t>(trial);
      TrainingTrace trace;
      const LinearModel m = train(s, cfg, &trace);
      ASSERT_EQ(trace.dual_coefficients.size(), s.size());
      expect_primal_dual_agree(s, m, trace);
    }
  }
}

LinearModel sample_model() {
  LinearModel m;
  m.vocabulary = {"好", "差", "服务"};
  m.weights = {0.1, -2.5e-7, 1.0 / 3.0};
  m.bias = -0.125;
  m.config.c = 2.5;
  m.config.seed = 99;
  return m;
}

TEST(ModelIo, RoundTripIsExact) {
  testing_support::TempDir dir;
  const LinearModel m = sample_model();
  save_model(m, dir / "m.txt");
  EXPECT_EQ(load_model(dir / "m.txt"), m);
  save_model(load_model(dir / "m.txt"), dir / "m2.txt");
  EXPECT_EQ(testing_support::read_file(dir / "m.txt"), testing_support::read_file(dir / "m2.txt"));
}

TEST(ModelIo, RejectsCorruptFiles) {
  std::ostringstream good;
  write_model(sample_model(), good);
  const std::string text = good.str();

  const auto load = [](const std::string& s) {
    std::istringstream in(s);
    return read_model(in);
  };
  try {
    load("NOT-A-MODEL\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unrecognized model file"), std::string::npos);
  }
  EXPECT_THROW(load("ENTROKEY-MODEL v9\n"), Error);
  // Drop the last weight line: the feature count no longer matches.
  const std::string truncated = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  try {
    load(truncated);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("model integrity error"), std::string::npos);
  }
  std::string nan_weight = text;
  nan_weight.replace(nan_weight.rfind('\t') + 1, std::string::npos, "nan\n");
  EXPECT_THROW(load(nan_weight), Error);
}

TEST(Train, VocabularyPermutationPermutesWeights) {
  // Perceptron with a fixed visiting order is exactly equivariant.
  const std::vector<std::vector<double>> pts{{2, 0, 1}, {3, 1, 0}, {0, 2, 0}, {0, 3, 1}};
  const std::vector<int> labels{1, 1, -1, -1};
  TrainConfig cfg;
  cfg.trainer = Trainer::Perceptron;
  const LinearModel a = train(dense_set(pts, labels), cfg);
  std::vector<std::vector<double>> permuted;
  for (const auto& p : pts) permuted.push_back({p[2], p[0], p[1]});
  const LinearModel b = train(dense_set(permuted, labels), cfg);
  EXPECT_EQ(b.weights, (std::vector<double>{a.weights[2], a.weights[0], a.weights[1]}));
  EXPECT_EQ(a.bias, b.bias);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  cfg.c = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_trainer("perceptron"), Trainer::Perceptron);
  EXPECT_THROW(parse_trainer("rbf"), Error);
}

}  // namespace
}  // namespace entrokey
