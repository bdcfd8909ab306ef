#ifndef EVCOREF_EVAL_H_
#define EVCOREF_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "evcoref/cluster.h"
#include "evcoref/coref_map.h"
#include "evcoref/corpus.h"

namespace evcoref {

// Micro-averaged precision/recall/F1 with their supporting counts.
struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  // A ratio with a zero denominator is 0, except that the all-zero case
  // (nothing predicted, nothing to find) scores 1 across the board.
  static PrfScore FromCounts(std::uint64_t tp, std::uint64_t fp,
                             std::uint64_t fn);
};

// Maximum-weight one-to-one assignment between rows and columns of a
// non-negative weight matrix (Hungarian algorithm). Returns, per row, the
// matched column or -1.
std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<std::int64_t>>& weights);

// Clustering quality on the gold-labeled documents under the one-to-one
// cluster-to-event mapping that maximizes matched documents. Documents of
// unmapped clusters count as false positives; gold documents left unmatched
// (including any missing from the partition) count as false negatives.
PrfScore ClusteringPrf(const Partition& partition, const EventGold& gold);

// Unordered entity pairs that co-occur in at least one gold event, i.e.
// both are mentioned in documents labeled with the same event.
class CandidatePairs {
 public:
  static CandidatePairs Build(const Corpus& corpus, const EventGold& gold);
  static CandidatePairs FromPairs(size_t num_entities,
                                  std::vector<std::pair<EntityId, EntityId>> pairs);

  std::span<const std::pair<EntityId, EntityId>> pairs() const { return pairs_; }
  std::span<const EntityId> Neighbors(EntityId e) const { return adjacency_[e]; }
  size_t size() const { return pairs_.size(); }
  size_t num_entities() const { return adjacency_.size(); }

 private:
  std::vector<std::pair<EntityId, EntityId>> pairs_;  // first < second, sorted
  std::vector<std::vector<EntityId>> adjacency_;
};

// Pairwise coreference quality over the candidate pairs of a fixed relation.
PrfScore CorefPrf(const CorefMap& coref, const CorefGold& gold,
                  const CandidatePairs& candidates);

struct ScoredPair {
  EntityId first = 0;
  EntityId second = 0;
  double score = 0.0;
};

struct SweepResult {
  double best_threshold = 0.0;
  PrfScore best_score;
  // (threshold, score), ascending by threshold.
  std::vector<std::pair<double, PrfScore>> curve;
};

// For each distinct score t, predicts the transitive closure of the pairs
// scoring >= t and evaluates it like CorefPrf. Ties on F1 go to the higher
// threshold. With no scored pairs the best point is "merge nothing" at an
// infinite threshold and the curve is empty.
SweepResult CorefSweep(std::span<const ScoredPair> scores, const CorefGold& gold,
                       const CandidatePairs& candidates);

// "metric<TAB>value" rows.
void WritePrf(const PrfScore& score, std::string_view prefix, std::ostream& out);

}  // namespace evcoref

#endif  // EVCOREF_EVAL_H_
