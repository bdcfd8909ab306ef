#include "evcoref/eval.h"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

// Hungarian algorithm (potentials, O(n^2 m)) minimizing cost for n <= m.
// Returns the column assigned to each row.
std::vector<int> MinCostAssignment(
    const std::vector<std::vector<std::int64_t>>& cost) {
  const size_t n = cost.size();
  const size_t m = cost.empty() ? 0 : cost[0].size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<size_t> p(m + 1, 0), way(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<std::int64_t> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      size_t i0 = p[j0];
      size_t j1 = 0;
      std::int64_t delta = kInf;
      for (size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

PrfScore PrfScore::FromCounts(std::uint64_t tp, std::uint64_t fp,
                              std::uint64_t fn) {
  PrfScore s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  if (tp == 0 && fp == 0 && fn == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<std::int64_t>>& weights) {
  const size_t rows = weights.size();
  if (rows == 0) return {};
  const size_t cols = weights[0].size();
  if (cols == 0) return std::vector<int>(rows, -1);
  bool transpose = rows > cols;
  size_t n = transpose ? cols : rows;
  size_t m = transpose ? rows : cols;
  std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(m));
  for (size_t r = 0; r < rows; ++r) {
    if (weights[r].size() != cols) throw DataError("ragged weight matrix");
    for (size_t c = 0; c < cols; ++c) {
      if (transpose) {
        cost[c][r] = -weights[r][c];
      } else {
        cost[r][c] = -weights[r][c];
      }
    }
  }
  std::vector<int> assigned = MinCostAssignment(cost);
  if (!transpose) return assigned;
  std::vector<int> row_to_col(rows, -1);
  for (size_t c = 0; c < cols; ++c) {
    if (assigned[c] >= 0) row_to_col[assigned[c]] = static_cast<int>(c);
  }
  return row_to_col;
}

PrfScore ClusteringPrf(const Partition& partition, const EventGold& gold) {
  if (gold.labels.empty()) throw DataError("empty event gold");
  std::map<ClusterId, size_t> cluster_row;
  std::map<std::string_view, size_t> event_col;
  for (const auto& [doc, event] : gold.labels) {
    event_col.emplace(event, 0);
  }
  size_t next = 0;
  for (auto& [event, col] : event_col) col = next++;

  std::vector<std::pair<size_t, size_t>> labeled;  // (row, col)
  for (size_t i = 0; i < partition.doc_ids.size(); ++i) {
    auto it = gold.labels.find(partition.doc_ids[i]);
    if (it == gold.labels.end()) continue;
    auto [row, inserted] =
        cluster_row.emplace(partition.assignment[i], cluster_row.size());
    labeled.emplace_back(row->second, event_col.at(it->second));
  }
  if (labeled.empty()) {
    throw DataError("no gold-labeled document appears in the partition");
  }

  std::vector<std::vector<std::int64_t>> table(
      cluster_row.size(), std::vector<std::int64_t>(event_col.size(), 0));
  for (auto [row, col] : labeled) ++table[row][col];
  std::vector<int> mapping = MaxWeightAssignment(table);
  std::uint64_t matched = 0;
  for (size_t r = 0; r < mapping.size(); ++r) {
    if (mapping[r] >= 0) matched += static_cast<std::uint64_t>(table[r][mapping[r]]);
  }
  std::uint64_t retrieved = labeled.size();
  std::uint64_t relevant = gold.labels.size();
  return PrfScore::FromCounts(matched, retrieved - matched, relevant - matched);
}

CandidatePairs CandidatePairs::Build(const Corpus& corpus, const EventGold& gold) {
  std::map<std::string_view, std::set<EntityId>> by_event;
  for (const Document& doc : corpus.documents()) {
    auto it = gold.labels.find(doc.id);
    if (it == gold.labels.end()) continue;
    auto& entities = by_event[it->second];
    for (const Mention& m : doc.mentions) entities.insert(m.entity);
  }
  std::vector<std::pair<EntityId, EntityId>> pairs;
  for (const auto& [event, entities] : by_event) {
    std::vector<EntityId> list(entities.begin(), entities.end());
    for (size_t i = 0; i < list.size(); ++i) {
      for (size_t j = i + 1; j < list.size(); ++j) pairs.emplace_back(list[i], list[j]);
    }
  }
  return FromPairs(corpus.num_entities(), std::move(pairs));
}

CandidatePairs CandidatePairs::FromPairs(
    size_t num_entities, std::vector<std::pair<EntityId, EntityId>> pairs) {
  CandidatePairs result;
  for (auto& [a, b] : pairs) {
    if (a == b || a >= num_entities || b >= num_entities) {
      throw DataError("invalid candidate pair");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  result.adjacency_.resize(num_entities);
  for (auto [a, b] : pairs) {
    result.adjacency_[a].push_back(b);
    result.adjacency_[b].push_back(a);
  }
  result.pairs_ = std::move(pairs);
  return result;
}

namespace {

std::vector<std::int64_t> GoldClassOf(const CorefGold& gold, size_t num_entities) {
  std::vector<std::int64_t> klass(num_entities, -1);
  for (size_t c = 0; c < gold.classes.size(); ++c) {
    for (EntityId e : gold.classes[c]) {
      if (e >= num_entities) throw DataError("gold entity outside the entity table");
      klass[e] = static_cast<std::int64_t>(c);
    }
  }
  return klass;
}

}  // namespace

PrfScore CorefPrf(const CorefMap& coref, const CorefGold& gold,
                  const CandidatePairs& candidates) {
  if (candidates.size() == 0) throw DataError("empty candidate pair set");
  if (coref.num_entities() != candidates.num_entities()) {
    throw DataError("coreference map and candidate pairs differ in size");
  }
  auto klass = GoldClassOf(gold, candidates.num_entities());
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (auto [a, b] : candidates.pairs()) {
    bool predicted = coref.Same(a, b);
    bool actual = klass[a] >= 0 && klass[a] == klass[b];
    if (predicted && actual) {
      ++tp;
    } else if (predicted) {
      ++fp;
    } else if (actual) {
      ++fn;
    }
  }
  return PrfScore::FromCounts(tp, fp, fn);
}

SweepResult CorefSweep(std::span<const ScoredPair> scores, const CorefGold& gold,
                       const CandidatePairs& candidates) {
  if (candidates.size() == 0) throw DataError("empty candidate pair set");
  const size_t m = candidates.num_entities();
  auto klass = GoldClassOf(gold, m);
  auto is_positive = [&](EntityId a, EntityId b) {
    return klass[a] >= 0 && klass[a] == klass[b];
  };
  std::uint64_t positives = 0;
  for (auto [a, b] : candidates.pairs()) positives += is_positive(a, b) ? 1 : 0;

  std::vector<ScoredPair> edges(scores.begin(), scores.end());
  for (const ScoredPair& e : edges) {
    if (e.first >= m || e.second >= m) throw DataError("scored pair outside the entity table");
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const ScoredPair& a, const ScoredPair& b) {
                     return a.score > b.score;
                   });

  // Union-find with explicit member lists; merging the smaller component
  // into the larger one visits each candidate pair at most once.
  std::vector<EntityId> root(m);
  std::vector<std::vector<EntityId>> members(m);
  for (EntityId e = 0; e < m; ++e) {
    root[e] = e;
    members[e] = {e};
  }
  std::uint64_t tp = 0, fp = 0;

  SweepResult result;
  result.best_threshold = std::numeric_limits<double>::infinity();
  result.best_score = PrfScore::FromCounts(0, 0, positives);
  bool have_best = false;

  size_t i = 0;
  while (i < edges.size()) {
    double threshold = edges[i].score;
    for (; i < edges.size() && edges[i].score == threshold; ++i) {
      EntityId a = root[edges[i].first];
      EntityId b = root[edges[i].second];
      if (a == b) continue;
      if (members[a].size() < members[b].size()) std::swap(a, b);
      for (EntityId x : members[b]) {
        for (EntityId y : candidates.Neighbors(x)) {
          if (root[y] != a) continue;
          if (is_positive(x, y)) {
            ++tp;
          } else {
            ++fp;
          }
        }
      }
      for (EntityId x : members[b]) root[x] = a;
      members[a].insert(members[a].end(), members[b].begin(), members[b].end());
      members[b].clear();
    }
    PrfScore score = PrfScore::FromCounts(tp, fp, positives - tp);
    result.curve.emplace_back(threshold, score);
    if (!have_best || score.f1 > result.best_score.f1) {
      have_best = true;
      result.best_threshold = threshold;
      result.best_score = score;
    }
  }
  std::reverse(result.curve.begin(), result.curve.end());
  return result;
}

void WritePrf(const PrfScore& score, std::string_view prefix, std::ostream& out) {
  out << prefix << "precision\t" << FormatDouble(score.precision) << '\n'
      << prefix << "recall\t" << FormatDouble(score.recall) << '\n'
      << prefix << "f1\t" << FormatDouble(score.f1) << '\n'
      << prefix << "tp\t" << score.tp << '\n'
      << prefix << "fp\t" << score.fp << '\n'
      << prefix << "fn\t" << score.fn << '\n';
}

}  // namespace evcoref
