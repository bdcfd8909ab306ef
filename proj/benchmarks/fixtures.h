// Synthetic inputs shared by the benchmark suites.
#ifndef EVCOREF_BENCHMARKS_FIXTURES_H_
#define EVCOREF_BENCHMARKS_FIXTURES_H_

#include "evcoref/synth.h"

namespace evcoref::bench {

inline SynthCorpus MakeCorpus(size_t events, size_t docs_per_event) {
  SynthConfig config;
  config.num_events = events;
  config.docs_per_event = docs_per_event;
  config.seed = 17;
  return Generate(config);
}

}  // namespace evcoref::bench

#endif  // EVCOREF_BENCHMARKS_FIXTURES_H_
