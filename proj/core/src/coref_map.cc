#include "evcoref/coref_map.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "evcoref/text_io.h"

namespace evcoref {

UnionFind::UnionFind(size_t size) : parent_(size) {
  std::iota(parent_.begin(), parent_.end(), EntityId{0});
}

EntityId UnionFind::Find(EntityId x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::Union(EntityId a, EntityId b) {
  a = Find(a);
  b = Find(b);
  if (a == b) return false;
  if (a < b) {
    parent_[b] = a;
  } else {
    parent_[a] = b;
  }
  return true;
}

CorefMap CorefMap::Identity(size_t num_entities) {
  CorefMap map;
  map.representative_.resize(num_entities);
  std::iota(map.representative_.begin(), map.representative_.end(),
            EntityId{0});
  return map;
}

CorefMap CorefMap::FromUnionFind(UnionFind& forest) {
  CorefMap map;
  map.representative_.resize(forest.size());
  for (EntityId i = 0; i < forest.size(); ++i) {
    map.representative_[i] = forest.Find(i);
  }
  return map;
}

CorefMap CorefMap::FromClasses(
    size_t num_entities, const std::vector<std::vector<EntityId>>& classes) {
  UnionFind forest(num_entities);
  for (const auto& members : classes) {
    for (EntityId id : members) {
      if (id >= num_entities) {
        throw DataError("entity id " + std::to_string(id) + " out of range");
      }
      forest.Union(members.front(), id);
    }
  }
  return FromUnionFind(forest);
}

bool CorefMap::IsIdentity() const {
  for (EntityId i = 0; i < representative_.size(); ++i) {
    if (representative_[i] != i) return false;
  }
  return true;
}

std::vector<std::vector<EntityId>> CorefMap::Classes() const {
  std::vector<std::vector<EntityId>> classes;
  std::vector<size_t> slot(representative_.size(), 0);
  for (EntityId i = 0; i < representative_.size(); ++i) {
    EntityId rep = representative_[i];
    if (rep == i) {
      slot[i] = classes.size();
      classes.push_back({i});
    } else {
      classes[slot[rep]].push_back(i);
    }
  }
  return classes;
}

size_t CorefMap::num_classes() const {
  size_t count = 0;
  for (EntityId i = 0; i < representative_.size(); ++i) {
    if (representative_[i] == i) ++count;
  }
  return count;
}

bool CorefMap::Refines(const CorefMap& coarser) const {
  if (coarser.num_entities() != num_entities()) return false;
  // Each of our classes must map to exactly one coarser class.
  std::unordered_map<EntityId, EntityId> image;
  for (EntityId i = 0; i < representative_.size(); ++i) {
    auto [it, inserted] =
        image.emplace(representative_[i], coarser.representative_[i]);
    if (!inserted && it->second != coarser.representative_[i]) return false;
  }
  return true;
}

}  // namespace evcoref
