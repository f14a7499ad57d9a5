#include "eabandit/linalg.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace eabandit;

namespace {

Vec random_vec(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec x(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
  return x.normalized();
}

void BM_ShermanMorrison(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  IncrementalInverse inc(d, 1.0);
  const Vec x = random_vec(d, rng);
  for (auto _ : state) {
    inc.add(x, 1e-3);
    benchmark::DoNotOptimize(inc.inverse().dense().data());
  }
}
BENCHMARK(BM_ShermanMorrison)->Arg(10)->Arg(20)->Arg(64);

void BM_CholeskyInverse(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  SymMatrix m = SymMatrix::identity(d);
  for (int i = 0; i < 50; ++i) m = rank1_update(m, random_vec(d, rng), 1.0);
  for (auto _ : state) {
    SymMatrix inv = spd_inverse(m);
    benchmark::DoNotOptimize(inv.dense().data());
  }
}
BENCHMARK(BM_CholeskyInverse)->Arg(10)->Arg(20)->Arg(64);

void BM_QuadForm(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  const SymMatrix minv = SymMatrix::identity(d, 0.5);
  const Vec x = random_vec(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(quad_form(minv, x));
}
BENCHMARK(BM_QuadForm)->Arg(10)->Arg(20);

}  // namespace
