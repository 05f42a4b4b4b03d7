#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "entrokey/entropy.hpp"
#include "entrokey/evaluation.hpp"
#include "entrokey/segmentation.hpp"
#include "entrokey/svm.hpp"
#include "entrokey/synthetic.hpp"

namespace {

using namespace entrokey;

Corpus synthetic_corpus(std::size_t per_class) {
  SyntheticSpec spec = SyntheticSpec::with_generated_vocab(30, 40);
  spec.num_pos_docs = per_class;
  spec.num_neg_docs = per_class;
  spec.num_unlabeled = 0;
  return generate_synthetic(spec).corpus;
}

void BM_ComputeStats(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_stats(build_count_table(corpus)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(corpus.size()));
}
BENCHMARK(BM_ComputeStats)->Arg(200)->Arg(2000);

void BM_TrainHinge(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  const auto stats = compute_stats(build_count_table(corpus));
  const KeywordList pos = select_keywords(stats, {2.0, 2.0}, Polarity::Positive);
  const KeywordList neg = select_keywords(stats, {2.0, 2.0}, Polarity::Negative);
  const TrainingSet data = build_training_set(corpus, combine_lists(pos, neg));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_hinge(data, TrainConfig{}));
  }
}
BENCHMARK(BM_TrainHinge)->Arg(200)->Arg(2000);

void BM_MaxMatch(benchmark::State& state) {
  const Dictionary dict({"酒店", "服务", "房间", "干净", "北京", "北京大学", "大学", "大学生", "早餐", "不错"});
  const Segmenter seg({SegmenterMode::MaxMatch, std::nullopt, 6}, dict);
  std::string text;
  for (int i = 0; i < 100; ++i) text += "酒店服务不错房间干净北京大学生早餐很好";
  for (auto _ : state) {
    benchmark::DoNotOptimize(seg.segment(text));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_MaxMatch);

}  // namespace

BENCHMARK_MAIN();
