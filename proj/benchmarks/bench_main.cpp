#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "synthetic.hpp"
#include "topicmine/cluster.hpp"
#include "topicmine/coherence.hpp"
#include "topicmine/embed.hpp"
#include "topicmine/plsa.hpp"

using namespace topicmine;

namespace {

const synth::Counts& counts_for(std::size_t n) {
  static std::map<std::size_t, synth::Counts> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::mt19937_64 rng(n);
    it = cache.emplace(n, synth::random_counts(rng, n, 2000, 0.02, 4)).first;
  }
  return it->second;
}

void BM_PlsaIterate(benchmark::State& state) {
  const auto& counts = counts_for(static_cast<std::size_t>(state.range(0)));
  PlsaConfig cfg;
  cfg.k = 6;
  auto model = plsa_init(cfg, counts.sparse.n_rows, counts.sparse.n_cols, counts.sparse);
  for (auto _ : state) {
    auto [next, ll] = plsa_iterate(model, counts.sparse, static_cast<unsigned>(state.range(1)));
    benchmark::DoNotOptimize(ll);
    model = std::move(next);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(counts.sparse.nnz()));
}
BENCHMARK(BM_PlsaIterate)->Args({1000, 1})->Args({4000, 1})->Args({4000, 4})->Unit(benchmark::kMillisecond);

void BM_LsaEmbed(benchmark::State& state) {
  const auto& counts = counts_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lsa_embed(counts.sparse, 50, 0).vectors.data());
}
BENCHMARK(BM_LsaEmbed)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Hdbscan(benchmark::State& state) {
  const auto pts = synth::two_blobs(1, 5, static_cast<std::size_t>(state.range(0)) / 2, 10.0);
  ClusterParams p;
  for (auto _ : state) benchmark::DoNotOptimize(hdbscan_fit(pts, p).n_clusters);
}
BENCHMARK(BM_Hdbscan)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_CvCoherence(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto docs = synth::block_documents(rng, static_cast<std::size_t>(state.range(0)), 300, 6, 50, 250);
  std::vector<std::vector<std::string>> topics;
  for (int t = 0; t < 6; ++t) {
    topics.emplace_back();
    for (int i = 0; i < 10; ++i) topics.back().push_back("w" + std::to_string(t * 50 + i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(cv_coherence(topics, docs, CoherenceConfig{}).mean);
}
BENCHMARK(BM_CvCoherence)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
