#include "evcoref/vectorize.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

using Entries = std::vector<std::pair<FeatureIndex, double>>;

double Idf(size_t n, size_t df) {
  if (df == 0) return 0.0;
  return std::log(static_cast<double>(n) / static_cast<double>(df));
}

// Scales entries to unit L2 norm and multiplies by `scale`.
void NormalizeBlock(Entries& block, double scale) {
  double norm = L2Norm(block);
  if (norm == 0.0) {
    block.clear();
    return;
  }
  for (auto& entry : block) entry.second = entry.second / norm * scale;
}

}  // namespace

FeatureVector FeatureVector::FromEntries(Entries entries) {
  std::erase_if(entries, [](const auto& e) { return e.second == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FeatureVector v;
  v.entries = std::move(entries);
  v.norm = L2Norm(v.entries);
  return v;
}

double L2Norm(std::span<const std::pair<FeatureIndex, double>> entries) {
  double sum = 0.0;
  for (const auto& [index, value] : entries) sum += value * value;
  return std::sqrt(sum);
}

double Dot(std::span<const std::pair<FeatureIndex, double>> a,
           std::span<const std::pair<FeatureIndex, double>> b) {
  double sum = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double Cosine(const FeatureVector& a, const FeatureVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  double value = Dot(a.entries, b.entries) / (a.norm * b.norm);
  return std::clamp(value, 0.0, 1.0);
}

void FusionConfig::Validate() const {
  if (!use_words && !use_entities) {
    throw ConfigError("at least one of words or entities must be enabled");
  }
  if (!(entity_weight >= 0.0) || !std::isfinite(entity_weight)) {
    throw ConfigError("entity weight must be a finite non-negative number");
  }
}

FeatureSpace FeatureSpace::Build(std::span<const Document> docs,
                                 size_t num_entities) {
  if (docs.empty()) throw DataError("cannot build a feature space from no documents");
  FeatureSpace space;
  space.num_documents_ = docs.size();

  std::map<std::string_view, size_t> word_df;
  space.entity_postings_.resize(num_entities);
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const auto& [word, count] : docs[d].words) ++word_df[word];
    for (const Mention& m : docs[d].mentions) {
      if (m.entity >= num_entities) {
        throw DataError("document '" + docs[d].id +
                        "' mentions an entity outside the entity table");
      }
      space.entity_postings_[m.entity].push_back(static_cast<std::uint32_t>(d));
    }
  }
  space.word_idf_.reserve(word_df.size());
  for (const auto& [word, df] : word_df) {
    space.word_index_.emplace(std::string(word),
                              static_cast<FeatureIndex>(space.word_idf_.size()));
    space.word_idf_.push_back(Idf(docs.size(), df));
  }
  return space;
}

std::optional<FeatureIndex> FeatureSpace::WordIndex(std::string_view word) const {
  auto it = word_index_.find(std::string(word));
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

double FeatureSpace::WordIdf(std::string_view word) const {
  auto index = WordIndex(word);
  return index ? word_idf_[*index] : 0.0;
}

double FeatureSpace::EntityIdf(EntityId entity) const {
  if (entity >= entity_postings_.size()) return 0.0;
  return Idf(num_documents_, entity_postings_[entity].size());
}

std::vector<double> FeatureSpace::ClassIdf(const CorefMap& coref) const {
  const size_t m = entity_postings_.size();
  if (coref.num_entities() < m) {
    throw DataError("coreference map does not cover the entity table");
  }
  // Count distinct documents per class; last_class[d] marks the class that
  // already counted document d.
  std::vector<size_t> class_df(m, 0);
  std::vector<std::vector<EntityId>> members(m);
  for (EntityId e = 0; e < m; ++e) members[coref.Representative(e)].push_back(e);
  std::vector<std::int64_t> last_class(num_documents_, -1);
  for (EntityId rep = 0; rep < m; ++rep) {
    for (EntityId e : members[rep]) {
      for (std::uint32_t d : entity_postings_[e]) {
        if (last_class[d] != rep) {
          last_class[d] = rep;
          ++class_df[rep];
        }
      }
    }
  }
  std::vector<double> idf(m, 0.0);
  for (EntityId e = 0; e < m; ++e) {
    idf[e] = Idf(num_documents_, class_df[coref.Representative(e)]);
  }
  return idf;
}

Vectorizer::Vectorizer(const FeatureSpace& space, const CorefMap& coref,
                       FusionConfig fusion)
    : space_(&space),
      coref_(&coref),
      fusion_(fusion),
      class_idf_(space.ClassIdf(coref)) {
  fusion_.Validate();
}

FeatureVector Vectorizer::operator()(const Document& doc) const {
  Entries words;
  if (fusion_.use_words) {
    for (const auto& [word, count] : doc.words) {
      auto index = space_->WordIndex(word);
      if (!index) continue;
      double weight = count * space_->WordIdf(*index);
      if (weight > 0.0) words.emplace_back(*index, weight);
    }
    std::sort(words.begin(), words.end());
    NormalizeBlock(words, 1.0);
  }

  Entries entities;
  if (fusion_.use_entities && fusion_.entity_weight > 0.0) {
    std::map<EntityId, double> class_tf;
    for (const Mention& m : doc.mentions) {
      if (m.entity >= space_->num_entities()) continue;
      class_tf[coref_->Representative(m.entity)] += m.count;
    }
    for (const auto& [rep, tf] : class_tf) {
      double weight = tf * class_idf_[rep];
      if (weight > 0.0) entities.emplace_back(space_->EntityIndex(rep), weight);
    }
    NormalizeBlock(entities, fusion_.entity_weight);
  }

  Entries fused = std::move(words);
  fused.insert(fused.end(), entities.begin(), entities.end());
  NormalizeBlock(fused, 1.0);
  FeatureVector v;
  v.entries = std::move(fused);
  v.norm = L2Norm(v.entries);
  return v;
}

FeatureVector Vectorize(const Document& doc, const FeatureSpace& space,
                        const CorefMap& coref, const FusionConfig& fusion) {
  return Vectorizer(space, coref, fusion)(doc);
}

}  // namespace evcoref
