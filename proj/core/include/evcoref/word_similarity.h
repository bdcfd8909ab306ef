#ifndef EVCOREF_WORD_SIMILARITY_H_
#define EVCOREF_WORD_SIMILARITY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/edit_distance.h"

namespace evcoref {

using WordId = std::uint32_t;

// y(u, v) = max(0, 1 - wed(u, v) / max(|u|, |v|)).
double WordSimilarity(std::string_view u, std::string_view v,
                      const EditWeights& weights);

// Sparse symmetric word-to-word similarity. Only off-diagonal pairs with
// y >= y_min are stored; the diagonal is implicitly 1.
class WordSimMatrix {
 public:
  WordSimMatrix() = default;

  // `vocab` is deduplicated and sorted; word ids follow that order.
  // `threads` bounds parallelism of the pairwise scan.
  static WordSimMatrix Build(std::vector<std::string> vocab,
                             const EditWeights& weights, double y_min,
                             unsigned threads = 1);
  // Vocabulary = all canonical words of the entity table.
  static WordSimMatrix Build(std::span<const Entity> entities,
                             const EditWeights& weights, double y_min,
                             unsigned threads = 1);

  std::optional<WordId> Find(std::string_view word) const;
  double Get(WordId u, WordId v) const;
  // Words outside the vocabulary only match themselves.
  double Get(std::string_view u, std::string_view v) const;

  std::span<const std::string> vocabulary() const { return vocab_; }
  std::span<const std::pair<WordId, double>> Neighbors(WordId word) const {
    return neighbors_[word];
  }
  // Number of stored unordered pairs.
  size_t num_entries() const;
  double y_min() const { return y_min_; }

 private:
  double y_min_ = 0.0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, WordId> index_;
  // Sorted by neighbor id.
  std::vector<std::vector<std::pair<WordId, double>>> neighbors_;
};

}  // namespace evcoref

#endif  // EVCOREF_WORD_SIMILARITY_H_
