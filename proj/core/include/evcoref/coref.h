#ifndef EVCOREF_COREF_H_
#define EVCOREF_COREF_H_

#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evcoref/cluster.h"
#include "evcoref/coref_map.h"
#include "evcoref/corpus.h"
#include "evcoref/word_similarity.h"

namespace evcoref {

struct CorefConfig {
  double alpha = 0.75;  // weight of content vs. context similarity
  double theta = 0.8;   // merge threshold on the combined similarity
  double y_min = 0.7;   // sparsification cutoff of the word matrix
  // Only score class pairs whose event profiles intersect.
  bool restrict_to_shared_cluster = false;
  unsigned threads = 1;  // pair scoring workers; output does not depend on it

  void Validate() const;
};

// Entity-word idf: ln(m / ef(v)) with m entities and ef(v) the number of
// distinct entities whose canonical string contains v.
class EntityWordIdf {
 public:
  static EntityWordIdf Build(std::span<const Entity> entities);

  double Idf(std::string_view word) const;
  size_t num_entities() const { return num_entities_; }

 private:
  size_t num_entities_ = 0;
  std::unordered_map<std::string, double> idf_;
};

// L2-normalized tf-idf vector over an entity's canonical words, as
// (word, weight) pairs sorted by word. Empty if every weight is zero.
std::vector<std::pair<std::string, double>> EntityWordVector(
    const Entity& entity, const EntityWordIdf& idf);

// w(e1)^T Y w(e2), clamped to [0, 1]. When either word vector vanishes
// (all its words occur in every entity) the similarity is 1 for identical
// word multisets and 0 otherwise.
double ContentSimilarity(const Entity& e1, const Entity& e2,
                         const WordSimMatrix& y, const EntityWordIdf& idf);

// Precomputed word vectors for scoring many entity pairs.
class ContentModel {
 public:
  // `y` must outlive the model.
  ContentModel(std::span<const Entity> entities, const WordSimMatrix& y);
  ContentModel(std::span<const Entity>, WordSimMatrix&&) = delete;

  double Similarity(EntityId a, EntityId b) const;
  // The bilinear form before clamping; can exceed 1 when Y has
  // off-diagonal mass.
  double RawSimilarity(EntityId a, EntityId b) const;
  // Pairs a < b whose raw similarity exceeds 1, sorted by (a, b).
  std::vector<std::tuple<EntityId, EntityId, double>> Overflows() const;
  size_t num_entities() const { return vectors_.size(); }

 private:
  const WordSimMatrix* y_;
  std::vector<std::vector<std::pair<WordId, double>>> vectors_;
  // Sorted word counts, for the vanishing-vector fallback.
  std::vector<std::vector<std::string>> bags_;
};

// Sorted ids of clusters containing a document that mentions the entity or,
// under `coref`, any member of its class.
using EventProfile = std::vector<ClusterId>;

EventProfile BuildEventProfile(EntityId entity, const Partition& partition,
                               std::span<const Document> docs,
                               const CorefMap& coref);
// Profiles of every class, indexed by entity id (members share a profile).
std::vector<EventProfile> BuildClassProfiles(const Partition& partition,
                                             std::span<const Document> docs,
                                             const CorefMap& coref);

// Dot product of the L2-normalized binary cluster-indicator vectors:
// |p1 n p2| / sqrt(|p1| |p2|), 0 if either is empty.
double ContextSimilarity(const EventProfile& p1, const EventProfile& p2);

// alpha * content + (1 - alpha) * context.
double CombinedSimilarity(double content, double context, double alpha);

struct ClassPairScore {
  EntityId first = 0;   // class representatives, first < second
  EntityId second = 0;
  double content = 0.0;
  double context = 0.0;
  double combined = 0.0;
};

// Scores every unordered pair of classes of `prev`. Class content
// similarity is the max over cross-class entity pairs; class context
// similarity compares class profiles. Pairs with a combined score below
// `min_combined` are not returned. Sorted by (first, second).
std::vector<ClassPairScore> ScoreClassPairs(const ContentModel& content,
                                            const Partition& partition,
                                            std::span<const Document> docs,
                                            const CorefMap& prev,
                                            const CorefConfig& config,
                                            double min_combined = 0.0);

// One coreference step: merges classes of `prev` whose combined similarity
// reaches theta and closes the relation transitively. The result always
// contains `prev`.
CorefMap CoreferencePass(const ContentModel& content, const Partition& partition,
                         std::span<const Document> docs, const CorefMap& prev,
                         const CorefConfig& config);
CorefMap CoreferencePass(std::span<const Entity> entities,
                         const Partition& partition, const CorefMap& prev,
                         const CorefConfig& config, const WordSimMatrix& y,
                         std::span<const Document> docs);

// One class per line for multi-member classes, members as sorted
// "KIND:canonical" keys, lines sorted.
void WriteCorefMap(const CorefMap& coref, std::span<const Entity> entities,
                   std::ostream& out);
CorefMap ReadCorefMap(std::istream& in, const Corpus& corpus);

}  // namespace evcoref

#endif  // EVCOREF_COREF_H_
