#include "evcoref/word_similarity.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <tuple>

#include "evcoref/text_io.h"

namespace evcoref {

double WordSimilarity(std::string_view u, std::string_view v,
                      const EditWeights& weights) {
  size_t longest = std::max(u.size(), v.size());
  if (longest == 0) return 1.0;
  double distance = WeightedEditDistance(u, v, weights);
  return std::max(0.0, 1.0 - distance / static_cast<double>(longest));
}

WordSimMatrix WordSimMatrix::Build(std::vector<std::string> vocab,
                                   const EditWeights& weights, double y_min,
                                   unsigned threads) {
  if (!(y_min > 0.0 && y_min < 1.0)) throw ConfigError("y_min must lie in (0, 1)");
  if (vocab.empty()) throw DataError("empty word vocabulary");
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  WordSimMatrix matrix;
  matrix.y_min_ = y_min;
  matrix.vocab_ = std::move(vocab);
  const size_t n = matrix.vocab_.size();
  for (WordId i = 0; i < n; ++i) matrix.index_.emplace(matrix.vocab_[i], i);
  matrix.neighbors_.resize(n);

  // Each character of length difference costs at least the cheapest indel,
  // so wed(u, v) >= gap * min_indel and pairs whose gap alone pushes y below
  // y_min can be skipped. Along a length-sorted row the bound only tightens
  // when min_indel exceeds 1 - y_min, which is when the scan may stop early.
  const double min_indel = weights.MinIndelCost();
  const bool gap_grows = min_indel > 1.0 - y_min;
  std::vector<WordId> by_length(n);
  for (WordId i = 0; i < n; ++i) by_length[i] = i;
  std::stable_sort(by_length.begin(), by_length.end(), [&](WordId a, WordId b) {
    return matrix.vocab_[a].size() < matrix.vocab_[b].size();
  });

  // Worker k scans rows k, k + T, k + 2T, ... of the length-sorted order and
  // records pairs (shorter-or-equal, longer).
  unsigned workers = std::max(1u, threads);
  std::vector<std::vector<std::tuple<WordId, WordId, double>>> found(workers);
  auto scan = [&](unsigned worker) {
    for (size_t a = worker; a < n; a += workers) {
      const std::string& u = matrix.vocab_[by_length[a]];
      for (size_t b = a + 1; b < n; ++b) {
        const std::string& v = matrix.vocab_[by_length[b]];
        double longest = static_cast<double>(v.size());
        double gap = static_cast<double>(v.size() - u.size());
        if (gap * min_indel > (1.0 - y_min) * longest) {
          if (gap_grows) break;
          continue;
        }
        double y = WordSimilarity(u, v, weights);
        if (y >= y_min) found[worker].emplace_back(by_length[a], by_length[b], y);
      }
    }
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
  }

  for (const auto& list : found) {
    for (const auto& [u, v, y] : list) {
      matrix.neighbors_[u].emplace_back(v, y);
      matrix.neighbors_[v].emplace_back(u, y);
    }
  }
  for (auto& list : matrix.neighbors_) std::sort(list.begin(), list.end());
  return matrix;
}

WordSimMatrix WordSimMatrix::Build(std::span<const Entity> entities,
                                   const EditWeights& weights, double y_min,
                                   unsigned threads) {
  std::vector<std::string> vocab;
  for (const Entity& e : entities) {
    vocab.insert(vocab.end(), e.words.begin(), e.words.end());
  }
  if (vocab.empty()) {
    if (!(y_min > 0.0 && y_min < 1.0)) throw ConfigError("y_min must lie in (0, 1)");
    WordSimMatrix matrix;
    matrix.y_min_ = y_min;
    return matrix;
  }
  return Build(std::move(vocab), weights, y_min, threads);
}

std::optional<WordId> WordSimMatrix::Find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WordSimMatrix::Get(WordId u, WordId v) const {
  if (u == v) return 1.0;
  const auto& list = neighbors_[u];
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const std::pair<WordId, double>& entry, WordId id) {
        return entry.first < id;
      });
  if (it == list.end() || it->first != v) return 0.0;
  return it->second;
}

double WordSimMatrix::Get(std::string_view u, std::string_view v) const {
  if (u == v) return 1.0;
  auto a = Find(u);
  auto b = Find(v);
  if (!a || !b) return 0.0;
  return Get(*a, *b);
}

size_t WordSimMatrix::num_entries() const {
  size_t total = 0;
  for (const auto& list : neighbors_) total += list.size();
  return total / 2;
}

}  // namespace evcoref
