#ifndef EVCOREF_COREF_MAP_H_
#define EVCOREF_COREF_MAP_H_

#include <cstddef>
#include <vector>

#include "evcoref/corpus.h"

namespace evcoref {

// Disjoint-set forest with path halving. The root of every set is its
// smallest element, so representatives do not depend on union order.
class UnionFind {
 public:
  explicit UnionFind(size_t size);

  EntityId Find(EntityId x);
  // Returns true if a and b were in different sets.
  bool Union(EntityId a, EntityId b);
  size_t size() const { return parent_.size(); }

 private:
  std::vector<EntityId> parent_;
};

// An equivalence relation over entity ids: the entity-to-entity matrix S with
// S[i][j] = 1 iff i and j are merged. Stored as a fully compressed
// representative table where each class is represented by its lowest id.
class CorefMap {
 public:
  CorefMap() = default;

  static CorefMap Identity(size_t num_entities);
  static CorefMap FromUnionFind(UnionFind& forest);
  // Classes need not cover every entity; uncovered ids stay singletons.
  static CorefMap FromClasses(size_t num_entities,
                              const std::vector<std::vector<EntityId>>& classes);

  size_t num_entities() const { return representative_.size(); }
  EntityId Representative(EntityId entity) const {
    return representative_[entity];
  }
  bool Same(EntityId a, EntityId b) const {
    return representative_[a] == representative_[b];
  }
  bool IsIdentity() const;

  // All classes, each sorted ascending, ordered by representative.
  std::vector<std::vector<EntityId>> Classes() const;
  size_t num_classes() const;

  // True iff every class of *this is contained in a class of `coarser`.
  bool Refines(const CorefMap& coarser) const;

  // Equal maps describe identical equivalence classes.
  bool operator==(const CorefMap&) const = default;

 private:
  std::vector<EntityId> representative_;
};

}  // namespace evcoref

#endif  // EVCOREF_COREF_MAP_H_
