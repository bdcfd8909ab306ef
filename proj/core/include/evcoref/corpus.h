#ifndef EVCOREF_CORPUS_H_
#define EVCOREF_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace evcoref {

using EntityId = std::uint32_t;

enum class EntityKind : std::uint8_t {
  kPerson,
  kPlace,
  kOrganization,
  kEvent,  // linguistic event, e.g. "London Olympic Games"
};

// Codes used in files: PER, LOC, ORG, EVT.
std::string_view KindCode(EntityKind kind);
std::optional<EntityKind> ParseKindCode(std::string_view code);

struct Mention {
  EntityId entity = 0;
  std::uint32_t count = 0;

  bool operator==(const Mention&) const = default;
};

struct Document {
  std::string id;
  std::int64_t timestamp = 0;  // epoch seconds
  // Sorted by word, counts >= 1.
  std::vector<std::pair<std::string, std::uint32_t>> words;
  // Sorted by entity id, counts >= 1, one entry per entity.
  std::vector<Mention> mentions;

  bool operator==(const Document&) const = default;
};

struct Entity {
  EntityId id = 0;
  EntityKind kind = EntityKind::kPerson;
  std::string canonical;
  // Lowercased tokens of the canonical string, never empty.
  std::vector<std::string> words;

  bool operator==(const Entity&) const = default;
};

// "KIND:canonical", the key used by coreference gold and exports.
std::string EntityKey(EntityKind kind, std::string_view canonical);
std::string EntityKey(const Entity& entity);

// Splits on whitespace, strips ASCII punctuation at token edges and
// lowercases. Tokens that become empty are dropped.
std::vector<std::string> CanonicalWords(std::string_view canonical);

// One document as it appears in a corpus file, before entity interning.
struct RawMention {
  EntityKind kind = EntityKind::kPerson;
  std::string canonical;
  std::uint32_t count = 1;
};

struct RawDocument {
  std::string id;
  std::int64_t timestamp = 0;
  std::map<std::string, std::uint32_t> words;
  std::vector<RawMention> mentions;
};

// An immutable, chronologically ordered document collection together with
// its entity table. Entities are identified by (kind, canonical) and get ids
// in order of first mention along the sorted stream.
class Corpus {
 public:
  Corpus() = default;

  // Sorts by (timestamp, id), interns entities, validates counts and ids.
  static Corpus Build(std::vector<RawDocument> raw);

  std::span<const Document> documents() const { return documents_; }
  std::span<const Entity> entities() const { return entities_; }
  size_t num_documents() const { return documents_.size(); }
  size_t num_entities() const { return entities_.size(); }

  std::optional<size_t> FindDocument(std::string_view doc_id) const;
  std::optional<EntityId> FindEntity(EntityKind kind,
                                     std::string_view canonical) const;
  // Accepts "KIND:canonical".
  std::optional<EntityId> FindEntityKey(std::string_view key) const;

  bool operator==(const Corpus& other) const {
    return documents_ == other.documents_ && entities_ == other.entities_;
  }

 private:
  std::vector<Document> documents_;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, size_t> doc_index_;
  std::unordered_map<std::string, EntityId> entity_index_;
};

// Line-delimited JSON records:
//   {"id": "...", "ts": 1104537600, "words": {"tok": 2},
//    "entities": [{"kind": "PER", "canonical": "John Smith", "count": 1}]}
Corpus ParseCorpus(std::istream& in);
Corpus LoadCorpus(const std::filesystem::path& path);
void WriteCorpus(const Corpus& corpus, std::ostream& out);

// Gold event labels, possibly covering only part of the corpus.
struct EventGold {
  std::map<std::string, std::string> labels;  // doc_id -> event_id

  size_t num_events() const;
};

// TSV "doc_id<TAB>event_id". Doc ids must satisfy `known`.
EventGold ParseEventGold(std::istream& in,
                         const std::unordered_set<std::string>& known);
EventGold LoadEventGold(const std::filesystem::path& path,
                        const Corpus& corpus);
EventGold LoadEventGold(const std::filesystem::path& path,
                        const std::unordered_set<std::string>& known);
void WriteEventGold(const EventGold& gold, std::ostream& out);

// Gold alias classes. Each class is sorted, has >= 2 members, and classes
// are pairwise disjoint and ordered by their smallest member.
struct CorefGold {
  std::vector<std::vector<EntityId>> classes;
};

// TSV lines of >= 2 "KIND:canonical" keys; overlapping lines are merged.
CorefGold ParseCorefGold(std::istream& in, const Corpus& corpus);
CorefGold LoadCorefGold(const std::filesystem::path& path,
                        const Corpus& corpus);
void WriteCorefGold(const CorefGold& gold, const Corpus& corpus,
                    std::ostream& out);

// Name variants used to learn edit costs.
struct AliasPairs {
  std::vector<std::pair<std::string, std::string>> pairs;
  size_t warnings = 0;  // skipped lines with a blank or missing field
};

AliasPairs ParseAliasPairs(std::istream& in);
AliasPairs LoadAliasPairs(const std::filesystem::path& path);
void WriteAliasPairs(const AliasPairs& pairs, std::ostream& out);

}  // namespace evcoref

#endif  // EVCOREF_CORPUS_H_
