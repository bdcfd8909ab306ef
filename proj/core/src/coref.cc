#include "evcoref/coref.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

std::vector<std::string> SortedWords(const Entity& entity) {
  std::vector<std::string> words = entity.words;
  std::sort(words.begin(), words.end());
  return words;
}

// Runs `visit(i, j)` for all class index pairs i < j, with the outer index
// striped across workers; each worker gets its own output slot.
template <typename Result, typename Visit>
std::vector<Result> ForEachClassPair(size_t num_classes, unsigned threads,
                                     Visit visit) {
  unsigned workers = std::max(1u, threads);
  std::vector<std::vector<Result>> found(workers);
  auto scan = [&](unsigned worker) {
    for (size_t i = worker; i < num_classes; i += workers) {
      for (size_t j = i + 1; j < num_classes; ++j) visit(i, j, found[worker]);
    }
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
  }
  std::vector<Result> merged;
  for (auto& list : found) merged.insert(merged.end(), list.begin(), list.end());
  return merged;
}

double ClassContent(const ContentModel& content,
                    const std::vector<EntityId>& a,
                    const std::vector<EntityId>& b) {
  double best = 0.0;
  for (EntityId x : a) {
    for (EntityId y : b) best = std::max(best, content.Similarity(x, y));
  }
  return best;
}

}  // namespace

void CorefConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!std::isfinite(theta) || theta < 0.0) {
    throw ConfigError("theta must be a finite non-negative number");
  }
  if (!(y_min > 0.0 && y_min < 1.0)) throw ConfigError("y_min must lie in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

EntityWordIdf EntityWordIdf::Build(std::span<const Entity> entities) {
  EntityWordIdf result;
  result.num_entities_ = entities.size();
  std::unordered_map<std::string, size_t> ef;
  for (const Entity& e : entities) {
    std::vector<std::string> words = SortedWords(e);
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (const std::string& w : words) ++ef[w];
  }
  for (const auto& [word, count] : ef) {
    result.idf_[word] = std::log(static_cast<double>(entities.size()) /
                                 static_cast<double>(count));
  }
  return result;
}

double EntityWordIdf::Idf(std::string_view word) const {
  auto it = idf_.find(std::string(word));
  return it == idf_.end() ? 0.0 : it->second;
}

std::vector<std::pair<std::string, double>> EntityWordVector(
    const Entity& entity, const EntityWordIdf& idf) {
  std::map<std::string, double> tf;
  for (const std::string& w : entity.words) tf[w] += 1.0;
  std::vector<std::pair<std::string, double>> vector;
  double norm = 0.0;
  for (const auto& [word, count] : tf) {
    double weight = count * idf.Idf(word);
    if (weight <= 0.0) continue;
    vector.emplace_back(word, weight);
    norm += weight * weight;
  }
  norm = std::sqrt(norm);
  for (auto& entry : vector) entry.second /= norm;
  return vector;
}

double ContentSimilarity(const Entity& e1, const Entity& e2,
                         const WordSimMatrix& y, const EntityWordIdf& idf) {
  auto w1 = EntityWordVector(e1, idf);
  auto w2 = EntityWordVector(e2, idf);
  if (w1.empty() || w2.empty()) return SortedWords(e1) == SortedWords(e2) ? 1.0 : 0.0;
  double sum = 0.0;
  for (const auto& [u, a] : w1) {
    for (const auto& [v, b] : w2) sum += a * y.Get(u, v) * b;
  }
  return std::clamp(sum, 0.0, 1.0);
}

ContentModel::ContentModel(std::span<const Entity> entities,
                           const WordSimMatrix& y)
    : y_(&y) {
  EntityWordIdf idf = EntityWordIdf::Build(entities);
  // Words missing from Y get private ids past its vocabulary; they only
  // match themselves.
  std::unordered_map<std::string, WordId> extra;
  auto id_of = [&](const std::string& word) {
    if (auto id = y.Find(word)) return *id;
    auto [it, inserted] = extra.emplace(
        word, static_cast<WordId>(y.vocabulary().size() + extra.size()));
    return it->second;
  };
  vectors_.reserve(entities.size());
  bags_.reserve(entities.size());
  for (EntityId e = 0; e < entities.size(); ++e) {
    if (entities[e].id != e) throw DataError("entity table ids are not dense");
    std::vector<std::pair<WordId, double>> vector;
    for (const auto& [word, weight] : EntityWordVector(entities[e], idf)) {
      vector.emplace_back(id_of(word), weight);
    }
    vectors_.push_back(std::move(vector));
    bags_.push_back(SortedWords(entities[e]));
  }
}

double ContentModel::RawSimilarity(EntityId a, EntityId b) const {
  const auto& wa = vectors_[a];
  const auto& wb = vectors_[b];
  if (wa.empty() || wb.empty()) return bags_[a] == bags_[b] ? 1.0 : 0.0;
  const WordId vocab = static_cast<WordId>(y_->vocabulary().size());
  double sum = 0.0;
  for (const auto& [u, x] : wa) {
    for (const auto& [v, z] : wb) {
      double yuv;
      if (u == v) {
        yuv = 1.0;
      } else if (u >= vocab || v >= vocab) {
        yuv = 0.0;
      } else {
        yuv = y_->Get(u, v);
      }
      sum += x * yuv * z;
    }
  }
  return sum;
}

std::vector<std::tuple<EntityId, EntityId, double>> ContentModel::Overflows() const {
  // Only entities sharing a word or a similar word can score above 1.
  std::unordered_map<WordId, std::vector<EntityId>> holders;
  for (EntityId e = 0; e < vectors_.size(); ++e) {
    for (const auto& [word, weight] : vectors_[e]) holders[word].push_back(e);
  }
  const WordId vocab = static_cast<WordId>(y_->vocabulary().size());
  std::vector<std::tuple<EntityId, EntityId, double>> out;
  std::vector<EntityId> partners;
  for (EntityId a = 0; a < vectors_.size(); ++a) {
    partners.clear();
    auto collect = [&](WordId word) {
      auto it = holders.find(word);
      if (it == holders.end()) return;
      for (EntityId b : it->second) {
        if (b > a) partners.push_back(b);
      }
    };
    for (const auto& [word, weight] : vectors_[a]) {
      collect(word);
      if (word < vocab) {
        for (const auto& [other, y] : y_->Neighbors(word)) collect(other);
      }
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (EntityId b : partners) {
      double raw = RawSimilarity(a, b);
      if (raw > 1.0) out.emplace_back(a, b, raw);
    }
  }
  return out;
}

double ContentModel::Similarity(EntityId a, EntityId b) const {
  return std::clamp(RawSimilarity(a, b), 0.0, 1.0);
}

EventProfile BuildEventProfile(EntityId entity, const Partition& partition,
                               std::span<const Document> docs,
                               const CorefMap& coref) {
  if (partition.assignment.size() != docs.size()) {
    throw DataError("partition does not cover the document stream");
  }
  EventProfile profile;
  EntityId rep = coref.Representative(entity);
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const Mention& m : docs[d].mentions) {
      if (coref.Representative(m.entity) == rep) {
        profile.push_back(partition.assignment[d]);
        break;
      }
    }
  }
  std::sort(profile.begin(), profile.end());
  profile.erase(std::unique(profile.begin(), profile.end()), profile.end());
  return profile;
}

std::vector<EventProfile> BuildClassProfiles(const Partition& partition,
                                             std::span<const Document> docs,
                                             const CorefMap& coref) {
  if (partition.assignment.size() != docs.size()) {
    throw DataError("partition does not cover the document stream");
  }
  const size_t m = coref.num_entities();
  std::vector<EventProfile> profiles(m);
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const Mention& mention : docs[d].mentions) {
      if (mention.entity >= m) throw DataError("mention outside the coreference map");
      profiles[coref.Representative(mention.entity)].push_back(
          partition.assignment[d]);
    }
  }
  for (EntityId e = 0; e < m; ++e) {
    if (coref.Representative(e) != e) continue;
    auto& p = profiles[e];
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  for (EntityId e = 0; e < m; ++e) {
    EntityId rep = coref.Representative(e);
    if (rep != e) profiles[e] = profiles[rep];
  }
  return profiles;
}

double ContextSimilarity(const EventProfile& p1, const EventProfile& p2) {
  if (p1.empty() || p2.empty()) return 0.0;
  size_t shared = 0;
  auto i = p1.begin();
  auto j = p2.begin();
  while (i != p1.end() && j != p2.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(shared) /
         std::sqrt(static_cast<double>(p1.size()) * static_cast<double>(p2.size()));
}

double CombinedSimilarity(double content, double context, double alpha) {
  return alpha * content + (1.0 - alpha) * context;
}

std::vector<ClassPairScore> ScoreClassPairs(const ContentModel& content,
                                            const Partition& partition,
                                            std::span<const Document> docs,
                                            const CorefMap& prev,
                                            const CorefConfig& config,
                                            double min_combined) {
  config.Validate();
  if (prev.num_entities() != content.num_entities()) {
    throw DataError("coreference map and entity table differ in size");
  }
  auto classes = prev.Classes();
  auto profiles = BuildClassProfiles(partition, docs, prev);
  auto scores = ForEachClassPair<ClassPairScore>(
      classes.size(), config.threads,
      [&](size_t i, size_t j, std::vector<ClassPairScore>& out) {
        const auto& pa = profiles[classes[i].front()];
        const auto& pb = profiles[classes[j].front()];
        ClassPairScore s;
        s.first = classes[i].front();
        s.second = classes[j].front();
        s.context = ContextSimilarity(pa, pb);
        if (config.restrict_to_shared_cluster && s.context == 0.0) return;
        s.content = ClassContent(content, classes[i], classes[j]);
        s.combined = CombinedSimilarity(s.content, s.context, config.alpha);
        if (s.combined >= min_combined) out.push_back(s);
      });
  std::sort(scores.begin(), scores.end(),
            [](const ClassPairScore& a, const ClassPairScore& b) {
              return std::tie(a.first, a.second) < std::tie(b.first, b.second);
            });
  return scores;
}

CorefMap CoreferencePass(const ContentModel& content, const Partition& partition,
                         std::span<const Document> docs, const CorefMap& prev,
                         const CorefConfig& config) {
  config.Validate();
  if (prev.num_entities() != content.num_entities()) {
    throw DataError("coreference map and entity table differ in size");
  }
  auto classes = prev.Classes();
  auto profiles = BuildClassProfiles(partition, docs, prev);
  auto merges = ForEachClassPair<std::pair<EntityId, EntityId>>(
      classes.size(), config.threads,
      [&](size_t i, size_t j, std::vector<std::pair<EntityId, EntityId>>& out) {
        double context = ContextSimilarity(profiles[classes[i].front()],
                                           profiles[classes[j].front()]);
        if (config.restrict_to_shared_cluster && context == 0.0) return;
        // Even a perfect content match cannot reach theta.
        if (CombinedSimilarity(1.0, context, config.alpha) < config.theta) return;
        double combined = CombinedSimilarity(
            ClassContent(content, classes[i], classes[j]), context, config.alpha);
        if (combined >= config.theta) {
          out.emplace_back(classes[i].front(), classes[j].front());
        }
      });
  std::sort(merges.begin(), merges.end());

  UnionFind forest(prev.num_entities());
  for (EntityId e = 0; e < prev.num_entities(); ++e) {
    forest.Union(prev.Representative(e), e);
  }
  for (const auto& [a, b] : merges) forest.Union(a, b);
  return CorefMap::FromUnionFind(forest);
}

CorefMap CoreferencePass(std::span<const Entity> entities,
                         const Partition& partition, const CorefMap& prev,
                         const CorefConfig& config, const WordSimMatrix& y,
                         std::span<const Document> docs) {
  ContentModel content(entities, y);
  return CoreferencePass(content, partition, docs, prev, config);
}

void WriteCorefMap(const CorefMap& coref, std::span<const Entity> entities,
                   std::ostream& out) {
  std::vector<std::string> lines;
  for (const auto& members : coref.Classes()) {
    if (members.size() < 2) continue;
    std::vector<std::string> keys;
    for (EntityId e : members) keys.push_back(EntityKey(entities[e]));
    std::sort(keys.begin(), keys.end());
    std::string line;
    for (size_t i = 0; i < keys.size(); ++i) {
      if (i > 0) line += '\t';
      line += keys[i];
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) out << line << '\n';
}

CorefMap ReadCorefMap(std::istream& in, const Corpus& corpus) {
  CorefGold classes = ParseCorefGold(in, corpus);
  return CorefMap::FromClasses(corpus.num_entities(), classes.classes);
}

}  // namespace evcoref
