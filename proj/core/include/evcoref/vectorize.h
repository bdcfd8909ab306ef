#ifndef EVCOREF_VECTORIZE_H_
#define EVCOREF_VECTORIZE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evcoref/coref_map.h"
#include "evcoref/corpus.h"

namespace evcoref {

using FeatureIndex = std::uint32_t;

// Sparse non-negative vector, entries sorted by index with no explicit zeros.
struct FeatureVector {
  std::vector<std::pair<FeatureIndex, double>> entries;
  double norm = 0.0;

  // Drops zero weights, sorts by index and caches the L2 norm. Indices must
  // be unique.
  static FeatureVector FromEntries(
      std::vector<std::pair<FeatureIndex, double>> entries);

  bool empty() const { return entries.empty(); }
};

// L2 norm accumulated in index order.
double L2Norm(std::span<const std::pair<FeatureIndex, double>> entries);
double Dot(std::span<const std::pair<FeatureIndex, double>> a,
           std::span<const std::pair<FeatureIndex, double>> b);
// dot(a, b) / (|a| |b|), clamped to [0, 1]; 0 when either norm is 0.
double Cosine(const FeatureVector& a, const FeatureVector& b);

struct FusionConfig {
  // Scale of the entity block relative to the word block after both are
  // normalized independently.
  double entity_weight = 1.0;
  bool use_words = true;
  bool use_entities = true;

  void Validate() const;
};

// Vocabulary and document frequencies. Word features occupy indices
// [0, num_words) and entity features [num_words, num_words + num_entities).
class FeatureSpace {
 public:
  FeatureSpace() = default;

  // idf(f) = ln(n / df(f)) over the given documents.
  static FeatureSpace Build(std::span<const Document> docs,
                            size_t num_entities);
  static FeatureSpace Build(const Corpus& corpus) {
    return Build(corpus.documents(), corpus.num_entities());
  }

  size_t num_documents() const { return num_documents_; }
  size_t num_words() const { return word_idf_.size(); }
  size_t num_entities() const { return entity_postings_.size(); }

  std::optional<FeatureIndex> WordIndex(std::string_view word) const;
  FeatureIndex EntityIndex(EntityId entity) const {
    return static_cast<FeatureIndex>(num_words() + entity);
  }
  double WordIdf(FeatureIndex word) const { return word_idf_[word]; }
  double WordIdf(std::string_view word) const;
  // Per-entity idf with the identity relation.
  double EntityIdf(EntityId entity) const;
  size_t EntityDocumentFrequency(EntityId entity) const {
    return entity_postings_[entity].size();
  }

  // idf of each entity's class under `coref`: ln(n / df_class), where
  // df_class counts documents mentioning any member. Indexed by entity id;
  // members of one class share a value. Classes never seen get 0.
  std::vector<double> ClassIdf(const CorefMap& coref) const;

 private:
  size_t num_documents_ = 0;
  std::unordered_map<std::string, FeatureIndex> word_index_;
  std::vector<double> word_idf_;
  // Sorted document ordinals mentioning each entity.
  std::vector<std::vector<std::uint32_t>> entity_postings_;
};

// Maps documents to fused tf-idf vectors under a fixed coreference relation.
// Mentions of entities in one class are summed into the representative's
// feature before weighting, which equals the generalized vector space
// product x^T S y for the 0/1 equivalence matrix S.
class Vectorizer {
 public:
  // `space` and `coref` must outlive the vectorizer.
  Vectorizer(const FeatureSpace& space, const CorefMap& coref,
             FusionConfig fusion);
  Vectorizer(FeatureSpace&&, const CorefMap&, FusionConfig) = delete;
  Vectorizer(const FeatureSpace&, CorefMap&&, FusionConfig) = delete;

  // Features unknown to the space are dropped. A document without active
  // features yields the zero vector.
  FeatureVector operator()(const Document& doc) const;

  const FusionConfig& fusion() const { return fusion_; }

 private:
  const FeatureSpace* space_;
  const CorefMap* coref_;
  FusionConfig fusion_;
  std::vector<double> class_idf_;
};

FeatureVector Vectorize(const Document& doc, const FeatureSpace& space,
                        const CorefMap& coref, const FusionConfig& fusion);

}  // namespace evcoref

#endif  // EVCOREF_VECTORIZE_H_
