#include "eabandit/bandit.hpp"
#include "eabandit/environment.hpp"

#include <benchmark/benchmark.h>

using namespace eabandit;

namespace {

ItemCatalog make_catalog(std::size_t items, std::size_t dim) {
  Rng rng(5);
  return ItemCatalog(sample_features(items, dim, rng), std::vector<double>(items, 1.0));
}

void BM_Recommend(benchmark::State& state) {
  const auto items = static_cast<std::size_t>(state.range(0));
  const ItemCatalog catalog = make_catalog(items, 10);
  PolicyConfig config;
  config.list_size = 10;
  BanditState bandit(10, 1.0);
  Rng rng(7);
  const UserGroundTruth user = UserGroundTruth::synthetic(sample_theta_star(10, rng), catalog);
  for (int i = 0; i < 20; ++i) {
    const auto list = recommend(bandit, catalog, config);
    update(bandit, list, simulate_click(user, list, rng), config, catalog);
  }
  for (auto _ : state) {
    const auto list = recommend(bandit, catalog, config);
    benchmark::DoNotOptimize(list.items.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items));
}
BENCHMARK(BM_Recommend)->Arg(100)->Arg(1000)->Arg(4000);

void BM_RoundTrip(benchmark::State& state) {
  const ItemCatalog catalog = make_catalog(1000, 10);
  PolicyConfig config;
  config.list_size = 10;
  config.weight_fn = WeightFunction::log();
  config.gamma = 0.01;
  BanditState bandit(10, 1.0);
  Rng rng(11);
  const UserGroundTruth user = UserGroundTruth::synthetic(sample_theta_star(10, rng), catalog);
  for (auto _ : state) {
    const auto list = recommend(bandit, catalog, config);
    update(bandit, list, simulate_click(user, list, rng), config, catalog);
  }
}
BENCHMARK(BM_RoundTrip);

}  // namespace

BENCHMARK_MAIN();
