#include "evcoref/corpus.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "evcoref/text_io.h"
#include "json.hpp"

namespace evcoref {
namespace {

using nlohmann::json;

[[noreturn]] void LineError(size_t line_number, const std::string& message) {
  throw DataError("line " + std::to_string(line_number) + ": " + message);
}

std::uint32_t PositiveCount(const json& value, size_t line_number,
                            const char* what) {
  if (!value.is_number_integer()) {
    LineError(line_number, std::string(what) + " count is not an integer");
  }
  auto count = value.get<std::int64_t>();
  if (count < 1 || count > std::numeric_limits<std::uint32_t>::max()) {
    LineError(line_number, std::string(what) + " count must be >= 1");
  }
  return static_cast<std::uint32_t>(count);
}

RawDocument ParseRecord(std::string_view line, size_t line_number) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    LineError(line_number, std::string("malformed record: ") + e.what());
  }
  if (!record.is_object()) LineError(line_number, "record is not an object");

  RawDocument doc;
  auto id = record.find("id");
  if (id == record.end() || !id->is_string() ||
      id->get_ref<const std::string&>().empty()) {
    LineError(line_number, "missing or empty string field 'id'");
  }
  doc.id = id->get<std::string>();

  auto ts = record.find("ts");
  if (ts == record.end() || !ts->is_number_integer()) {
    LineError(line_number, "missing integer field 'ts'");
  }
  doc.timestamp = ts->get<std::int64_t>();

  auto words = record.find("words");
  if (words != record.end()) {
    if (!words->is_object()) LineError(line_number, "'words' is not an object");
    for (const auto& [word, count] : words->items()) {
      if (word.empty()) LineError(line_number, "empty word");
      doc.words[word] = PositiveCount(count, line_number, "word");
    }
  }

  auto entities = record.find("entities");
  if (entities != record.end()) {
    if (!entities->is_array()) {
      LineError(line_number, "'entities' is not an array");
    }
    for (const auto& item : *entities) {
      if (!item.is_object()) LineError(line_number, "entity is not an object");
      auto kind = item.find("kind");
      auto canonical = item.find("canonical");
      auto count = item.find("count");
      if (kind == item.end() || !kind->is_string()) {
        LineError(line_number, "entity without string 'kind'");
      }
      auto parsed = ParseKindCode(kind->get_ref<const std::string&>());
      if (!parsed) {
        LineError(line_number,
                  "unknown entity kind '" + kind->get<std::string>() + "'");
      }
      if (canonical == item.end() || !canonical->is_string()) {
        LineError(line_number, "entity without string 'canonical'");
      }
      if (count == item.end()) LineError(line_number, "entity without 'count'");
      RawMention mention;
      mention.kind = *parsed;
      mention.canonical = canonical->get<std::string>();
      mention.count = PositiveCount(*count, line_number, "entity");
      if (CanonicalWords(mention.canonical).empty()) {
        LineError(line_number, "entity canonical string has no words: '" +
                                   mention.canonical + "'");
      }
      doc.mentions.push_back(std::move(mention));
    }
  }
  return doc;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

std::string_view KindCode(EntityKind kind) {
  switch (kind) {
    case EntityKind::kPerson:
      return "PER";
    case EntityKind::kPlace:
      return "LOC";
    case EntityKind::kOrganization:
      return "ORG";
    case EntityKind::kEvent:
      return "EVT";
  }
  return "PER";
}

std::optional<EntityKind> ParseKindCode(std::string_view code) {
  if (code == "PER") return EntityKind::kPerson;
  if (code == "LOC") return EntityKind::kPlace;
  if (code == "ORG") return EntityKind::kOrganization;
  if (code == "EVT") return EntityKind::kEvent;
  return std::nullopt;
}

std::string EntityKey(EntityKind kind, std::string_view canonical) {
  std::string key(KindCode(kind));
  key += ':';
  key += canonical;
  return key;
}

std::string EntityKey(const Entity& entity) {
  return EntityKey(entity.kind, entity.canonical);
}

std::vector<std::string> CanonicalWords(std::string_view canonical) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < canonical.size()) {
    while (i < canonical.size() &&
           std::isspace(static_cast<unsigned char>(canonical[i]))) {
      ++i;
    }
    size_t start = i;
    while (i < canonical.size() &&
           !std::isspace(static_cast<unsigned char>(canonical[i]))) {
      ++i;
    }
    std::string_view token = canonical.substr(start, i - start);
    while (!token.empty() &&
           std::ispunct(static_cast<unsigned char>(token.front()))) {
      token.remove_prefix(1);
    }
    while (!token.empty() &&
           std::ispunct(static_cast<unsigned char>(token.back()))) {
      token.remove_suffix(1);
    }
    if (token.empty()) continue;
    std::string word(token);
    for (char& c : word) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    words.push_back(std::move(word));
  }
  return words;
}

Corpus Corpus::Build(std::vector<RawDocument> raw) {
  if (raw.empty()) throw DataError("empty corpus");
  std::sort(raw.begin(), raw.end(),
            [](const RawDocument& a, const RawDocument& b) {
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.id < b.id;
            });

  Corpus corpus;
  corpus.documents_.reserve(raw.size());
  for (RawDocument& r : raw) {
    if (r.id.empty()) throw DataError("document with empty id");
    if (!corpus.doc_index_.emplace(r.id, corpus.documents_.size()).second) {
      throw DataError("duplicate document id '" + r.id + "'");
    }
    Document doc;
    doc.id = std::move(r.id);
    doc.timestamp = r.timestamp;
    doc.words.reserve(r.words.size());
    for (auto& [word, count] : r.words) {
      if (word.empty() || count < 1) {
        throw DataError("document '" + doc.id + "': invalid word count");
      }
      doc.words.emplace_back(word, count);
    }

    std::map<EntityId, std::uint32_t> counts;
    for (RawMention& m : r.mentions) {
      if (m.count < 1) {
        throw DataError("document '" + doc.id + "': invalid entity count");
      }
      std::string key = EntityKey(m.kind, m.canonical);
      auto it = corpus.entity_index_.find(key);
      EntityId id;
      if (it == corpus.entity_index_.end()) {
        Entity entity;
        entity.id = static_cast<EntityId>(corpus.entities_.size());
        entity.kind = m.kind;
        entity.canonical = m.canonical;
        entity.words = CanonicalWords(m.canonical);
        if (entity.words.empty()) {
          throw DataError("entity '" + key + "' has no words");
        }
        id = entity.id;
        corpus.entity_index_.emplace(std::move(key), id);
        corpus.entities_.push_back(std::move(entity));
      } else {
        id = it->second;
      }
      counts[id] += m.count;
    }
    for (auto [entity, count] : counts) doc.mentions.push_back({entity, count});
    corpus.documents_.push_back(std::move(doc));
  }
  return corpus;
}

std::optional<size_t> Corpus::FindDocument(std::string_view doc_id) const {
  auto it = doc_index_.find(std::string(doc_id));
  if (it == doc_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> Corpus::FindEntity(EntityKind kind,
                                           std::string_view canonical) const {
  return FindEntityKey(EntityKey(kind, canonical));
}

std::optional<EntityId> Corpus::FindEntityKey(std::string_view key) const {
  auto it = entity_index_.find(std::string(key));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

Corpus ParseCorpus(std::istream& in) {
  std::vector<RawDocument> raw;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    raw.push_back(ParseRecord(line, line_number));
  }
  return Corpus::Build(std::move(raw));
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  try {
    return ParseCorpus(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    json record;
    record["id"] = doc.id;
    record["ts"] = doc.timestamp;
    json words = json::object();
    for (const auto& [word, count] : doc.words) words[word] = count;
    record["words"] = std::move(words);
    json entities = json::array();
    for (const Mention& m : doc.mentions) {
      const Entity& e = corpus.entities()[m.entity];
      entities.push_back({{"kind", KindCode(e.kind)},
                          {"canonical", e.canonical},
                          {"count", m.count}});
    }
    record["entities"] = std::move(entities);
    out << record.dump() << '\n';
  }
}

size_t EventGold::num_events() const {
  std::set<std::string_view> events;
  for (const auto& [doc, event] : labels) events.insert(event);
  return events.size();
}

EventGold ParseEventGold(std::istream& in,
                         const std::unordered_set<std::string>& known) {
  EventGold gold;
  std::vector<std::string> unknown;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = StripCarriageReturn(line);
    if (IsBlank(view)) continue;
    auto fields = SplitTabs(view);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      LineError(line_number, "expected doc_id<TAB>event_id");
    }
    std::string doc(fields[0]);
    std::string event(fields[1]);
    if (!known.contains(doc)) {
      unknown.push_back(doc);
      continue;
    }
    auto [it, inserted] = gold.labels.emplace(doc, event);
    if (!inserted && it->second != event) {
      LineError(line_number, "document '" + doc +
                                 "' labeled with conflicting events '" +
                                 it->second + "' and '" + event + "'");
    }
  }
  if (!unknown.empty()) {
    std::string message = "event gold references unknown documents:";
    for (size_t i = 0; i < unknown.size() && i < 20; ++i) {
      message += " " + unknown[i];
    }
    if (unknown.size() > 20) {
      message += " (+" + std::to_string(unknown.size() - 20) + " more)";
    }
    throw DataError(message);
  }
  return gold;
}

EventGold LoadEventGold(const std::filesystem::path& path,
                        const Corpus& corpus) {
  std::unordered_set<std::string> known;
  for (const Document& doc : corpus.documents()) known.insert(doc.id);
  return LoadEventGold(path, known);
}

EventGold LoadEventGold(const std::filesystem::path& path,
                        const std::unordered_set<std::string>& known) {
  auto in = OpenInput(path);
  try {
    return ParseEventGold(in, known);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteEventGold(const EventGold& gold, std::ostream& out) {
  for (const auto& [doc, event] : gold.labels) {
    out << doc << '\t' << event << '\n';
  }
}

CorefGold ParseCorefGold(std::istream& in, const Corpus& corpus) {
  // Union-find over entity ids touched by the annotation.
  std::vector<EntityId> parent(corpus.num_entities());
  for (EntityId i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](EntityId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<bool> annotated(corpus.num_entities(), false);

  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = StripCarriageReturn(line);
    if (IsBlank(view)) continue;
    std::set<EntityId> members;
    for (std::string_view key : SplitTabs(view)) {
      auto id = corpus.FindEntityKey(key);
      if (!id) LineError(line_number, "unknown entity '" + std::string(key) + "'");
      members.insert(*id);
    }
    if (members.size() < 2) {
      LineError(line_number, "a class needs at least two distinct entities");
    }
    EntityId first = *members.begin();
    for (EntityId id : members) {
      annotated[id] = true;
      EntityId a = find(first), b = find(id);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::map<EntityId, std::vector<EntityId>> grouped;
  for (EntityId id = 0; id < parent.size(); ++id) {
    if (annotated[id]) grouped[find(id)].push_back(id);
  }
  CorefGold gold;
  for (auto& [root, members] : grouped) gold.classes.push_back(std::move(members));
  return gold;
}

CorefGold LoadCorefGold(const std::filesystem::path& path,
                        const Corpus& corpus) {
  auto in = OpenInput(path);
  try {
    return ParseCorefGold(in, corpus);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteCorefGold(const CorefGold& gold, const Corpus& corpus,
                    std::ostream& out) {
  for (const auto& members : gold.classes) {
    for (size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out << '\t';
      out << EntityKey(corpus.entities()[members[i]]);
    }
    out << '\n';
  }
}

AliasPairs ParseAliasPairs(std::istream& in) {
  AliasPairs result;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = StripCarriageReturn(line);
    if (view.empty()) continue;
    auto fields = SplitTabs(view);
    if (fields.size() != 2 || IsBlank(fields[0]) || IsBlank(fields[1])) {
      ++result.warnings;
      continue;
    }
    result.pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return result;
}

AliasPairs LoadAliasPairs(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseAliasPairs(in);
}

void WriteAliasPairs(const AliasPairs& pairs, std::ostream& out) {
  for (const auto& [a, b] : pairs.pairs) out << a << '\t' << b << '\n';
}

}  // namespace evcoref
