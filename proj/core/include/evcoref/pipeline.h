#ifndef EVCOREF_PIPELINE_H_
#define EVCOREF_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <vector>

#include "evcoref/cluster.h"
#include "evcoref/coref.h"
#include "evcoref/coref_map.h"
#include "evcoref/corpus.h"
#include "evcoref/eval.h"
#include "evcoref/vectorize.h"
#include "evcoref/word_similarity.h"

namespace evcoref {

struct RunConfig {
  ClusterConfig cluster;
  CorefConfig coref;
  FusionConfig fusion;
  size_t max_iterations = 10;
  bool record_history = true;

  void Validate() const;
};

// Optional references used to score each iteration.
struct GoldStandard {
  const EventGold* events = nullptr;
  const CorefGold* coref = nullptr;
  // Required with `coref`; pairs are usually CandidatePairs::Build(...).
  const CandidatePairs* candidates = nullptr;
};

struct IterationMetrics {
  size_t num_clusters = 0;
  size_t num_coref_classes = 0;
  // Entities sharing their class with at least one other entity.
  size_t merged_entities = 0;
  std::optional<PrfScore> clustering;
  std::optional<PrfScore> coref;
  // Best pairwise F1 over thresholds on this iteration's similarities.
  std::optional<SweepResult> coref_sweep;
};

struct IterationState {
  size_t iteration = 0;  // 1-based
  Partition partition;   // clustering under the previous iteration's map
  CorefMap coref;        // coreference computed on `partition`
  IterationMetrics metrics;
};

struct RunHistory {
  // Every iteration when recording history, otherwise only the last.
  std::vector<IterationState> iterations;
  // First iteration t >= 2 whose map equals that of iteration t - 1.
  std::optional<size_t> converged_at;
  size_t iterations_run = 0;

  const IterationState& last() const { return iterations.back(); }
};

// True iff both relations have identical classes.
bool Converged(const CorefMap& prev, const CorefMap& curr);

// Alternates single-pass clustering and coreference, starting from the
// identity map, until two consecutive maps agree or the iteration cap is
// reached. Every iteration re-clusters the whole stream.
RunHistory RunJoint(const Corpus& corpus, const WordSimMatrix& y,
                    const RunConfig& config, const GoldStandard& gold = {});

// Writes iter_<t>_partition.tsv, iter_<t>_clusters.tsv, iter_<t>_coref.tsv
// and iter_<t>_metrics.tsv per recorded iteration, plus curve.tsv with one
// row per iteration.
void WriteRunArtifacts(const RunHistory& history, const Corpus& corpus,
                       const std::filesystem::path& dir);

}  // namespace evcoref

#endif  // EVCOREF_PIPELINE_H_
