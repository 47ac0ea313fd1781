#include <benchmark/benchmark.h>

#include <numeric>
#include <string>
#include <vector>

#include "whguard/knn.hpp"
#include "whguard/neural.hpp"
#include "whguard/random.hpp"
#include "whguard/trees.hpp"
#include "whguard/url_features.hpp"

namespace wg = whguard;

namespace {

wg::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  wg::Rng rng(seed);
  wg::Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform01();
  return m;
}

std::vector<int> random_labels(std::size_t n, std::uint64_t seed) {
  wg::Rng rng(seed);
  std::vector<int> y(n);
  for (auto& v : y) v = static_cast<int>(rng.below(2));
  return y;
}

void BM_ExtractFeatures(benchmark::State& state) {
  const wg::FeatureSpec spec;
  const std::vector<std::string> urls = {
      "http://192.168.0.1/login",
      "https://en.wikipedia.org/wiki/Watering_hole_attack",
      "paypal-secure-verify.xyz/account/update.php?id=123456&session=98765432",
      "www.newsblog.com/index.php?option=com_content&view=article&id=42:news-sports&catid=7&Itemid=9",
  };
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wg::extract_features(urls[i++ % urls.size()], spec));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExtractFeatures);

void BM_KnnQuery(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = wg::make_knn(random_matrix(n, 8, 1), random_labels(n, 2), 5);
  const auto queries = random_matrix(64, 8, 3);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wg::predict_knn(model, queries.row(q++ % 64)));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KnnQuery)->Arg(1000)->Arg(10000)->Arg(40000);

void BM_BestSplit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 8, 4);
  const auto y = random_labels(n, 5);
  const std::vector<double> yd(y.begin(), y.end());
  std::vector<std::size_t> rows(n), feats(8);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::iota(feats.begin(), feats.end(), std::size_t{0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(wg::best_split(x, rows, {yd, {}}, feats, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_BestSplit)->Arg(1000)->Arg(40000);

void BM_MlpEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 8, 6);
  const auto y = random_labels(n, 7);
  auto cfg = wg::TrainConfig::mlp_defaults();
  cfg.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wg::train_mlp(x, y, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MlpEpoch)->Arg(1000)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
