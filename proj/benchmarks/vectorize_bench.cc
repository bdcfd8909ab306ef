#include <benchmark/benchmark.h>

#include "evcoref/vectorize.h"
#include "fixtures.h"

namespace evcoref {
namespace {

void BM_Vectorize(benchmark::State& state) {
  SynthCorpus s = bench::MakeCorpus(static_cast<size_t>(state.range(0)), 20);
  FeatureSpace space = FeatureSpace::Build(s.corpus);
  CorefMap coref = CorefMap::Identity(s.corpus.num_entities());
  for (auto _ : state) {
    Vectorizer vectorize(space, coref, FusionConfig{});
    for (const Document& d : s.corpus.documents()) benchmark::DoNotOptimize(vectorize(d));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(s.corpus.num_documents()));
}
BENCHMARK(BM_Vectorize)->Arg(10)->Arg(50)->Arg(200);

void BM_Cosine(benchmark::State& state) {
  SynthCorpus s = bench::MakeCorpus(10, 20);
  FeatureSpace space = FeatureSpace::Build(s.corpus);
  CorefMap coref = CorefMap::Identity(s.corpus.num_entities());
  Vectorizer vectorize(space, coref, FusionConfig{});
  std::vector<FeatureVector> vectors;
  for (const Document& d : s.corpus.documents()) vectors.push_back(vectorize(d));
  size_t i = 0;
  for (auto _ : state) {
    const FeatureVector& a = vectors[i % vectors.size()];
    const FeatureVector& b = vectors[(i * 7 + 3) % vectors.size()];
    benchmark::DoNotOptimize(Cosine(a, b));
    ++i;
  }
}
BENCHMARK(BM_Cosine);

}  // namespace
}  // namespace evcoref
