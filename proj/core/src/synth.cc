#include "evcoref/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr size_t kMinEditableLength = 5;

// Pairs of letters that transliterations and misspellings tend to swap.
constexpr std::array<std::pair<char, char>, 10> kConfusions = {{
    {'g', 'k'}, {'c', 'k'}, {'i', 'y'}, {'s', 'z'}, {'e', 'a'},
    {'o', 'u'}, {'d', 't'}, {'f', 'v'}, {'b', 'p'}, {'m', 'n'},
}};

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  size_t Uniform(size_t n) { return static_cast<size_t>(engine_() % n); }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Chance(double p) { return Unit() < p; }

 private:
  std::mt19937_64 engine_;
};

struct Name {
  EntityKind kind;
  std::vector<std::string> tokens;  // lowercase
};

std::string Capitalize(std::string token) {
  if (!token.empty() && token[0] >= 'a' && token[0] <= 'z') token[0] -= 'a' - 'A';
  return token;
}

std::string Render(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += Capitalize(tokens[i]);
  }
  return out;
}

class NameFactory {
 public:
  explicit NameFactory(Random& rng) : rng_(rng) {
    for (int i = 0; i < 40; ++i) first_names_.push_back(Token(2));
  }

  Name Make() {
    Name name;
    switch (rng_.Uniform(4)) {
      case 0:
        name.kind = EntityKind::kPerson;
        name.tokens = {first_names_[rng_.Uniform(first_names_.size())], Token(3)};
        break;
      case 1:
        name.kind = EntityKind::kPlace;
        name.tokens = {Token(3)};
        break;
      case 2:
        name.kind = EntityKind::kOrganization;
        name.tokens = {Token(3), Token(2)};
        break;
      default:
        name.kind = EntityKind::kEvent;
        name.tokens = {Token(3), Token(3)};
        break;
    }
    return name;
  }

  // Applies `ops` character edits to tokens long enough to stay
  // recognizable.
  std::vector<std::string> Perturb(const std::vector<std::string>& tokens,
                                   size_t ops) {
    std::vector<std::string> out = tokens;
    std::vector<size_t> editable;
    for (size_t i = 0; i < out.size(); ++i) {
      if (out[i].size() >= kMinEditableLength) editable.push_back(i);
    }
    if (editable.empty()) return out;
    for (size_t op = 0; op < ops; ++op) {
      std::string& token = out[editable[rng_.Uniform(editable.size())]];
      size_t pos = 1 + rng_.Uniform(token.size() - 1);
      double kind = rng_.Unit();
      if (kind < 0.8) {
        token[pos] = Substitute(token[pos]);
      } else if (kind < 0.9) {
        token.insert(token.begin() + static_cast<std::ptrdiff_t>(pos), Letter());
      } else if (token.size() > kMinEditableLength) {
        token.erase(token.begin() + static_cast<std::ptrdiff_t>(pos));
      } else {
        token[pos] = Substitute(token[pos]);
      }
    }
    return out;
  }

 private:
  static constexpr char kConsonants[] = "bcdfghklmnprstvz";
  static constexpr char kVowels[] = "aeiou";

  std::string Token(size_t syllables) {
    std::string token;
    for (size_t s = 0; s < syllables; ++s) {
      token += kConsonants[rng_.Uniform(sizeof(kConsonants) - 1)];
      token += kVowels[rng_.Uniform(sizeof(kVowels) - 1)];
    }
    token += kConsonants[rng_.Uniform(sizeof(kConsonants) - 1)];
    return token;
  }

  char Letter() { return static_cast<char>('a' + rng_.Uniform(26)); }

  char Substitute(char c) {
    if (rng_.Chance(0.7)) {
      for (auto [a, b] : kConfusions) {
        if (c == a) return b;
        if (c == b) return a;
      }
    }
    char replacement = c;
    while (replacement == c) replacement = Letter();
    return replacement;
  }

  Random& rng_;
  std::vector<std::string> first_names_;
};

struct RealEntity {
  EntityKind kind;
  std::vector<std::string> aliases;  // rendered canonical strings
};

}  // namespace

void SynthConfig::Validate() const {
  if (num_events < 1) throw ConfigError("num_events must be positive");
  if (docs_per_event < 1) throw ConfigError("docs_per_event must be positive");
  if (aliases_per_entity < 1) throw ConfigError("aliases_per_entity must be positive");
  if (num_sources < 1) throw ConfigError("num_sources must be positive");
  if (topic_words_per_event > vocab_size || shared_noise_words > vocab_size) {
    throw ConfigError("topic and noise word sets must fit in the vocabulary");
  }
  auto probability = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(what) + " must lie in [0, 1]");
    }
  };
  probability(topic_word_fraction, "topic_word_fraction");
  probability(mention_probability, "mention_probability");
  probability(recurring_mention_probability, "recurring_mention_probability");
  probability(source_fidelity, "source_fidelity");
  if (!(event_duration_days >= 0.0) || !(event_gap_days >= 0.0)) {
    throw ConfigError("event durations and gaps must be non-negative");
  }
  bool has_words = words_per_doc > 0 &&
                   (topic_words_per_event > 0 || shared_noise_words > 0);
  if (has_words && topic_words_per_event == 0 && topic_word_fraction > 0.0 &&
      shared_noise_words == 0) {
    has_words = false;
  }
  bool has_entities = entities_per_event > 0 ||
                      (recurring_entities > 0 && recurring_mention_probability > 0.0);
  if (!has_words && !has_entities) {
    throw ConfigError("configuration produces empty documents");
  }
}

SynthCorpus Generate(const SynthConfig& config) {
  config.Validate();
  Random rng(config.seed);
  NameFactory names(rng);

  // Every rendered alias (with its kind) must be unique across entities,
  // otherwise two real entities would collapse into one corpus entity.
  std::set<std::string> taken;
  auto make_entity = [&]() {
    while (true) {
      Name base = names.Make();
      RealEntity entity{base.kind, {}};
      std::set<std::string> local;
      local.insert(EntityKey(base.kind, Render(base.tokens)));
      entity.aliases.push_back(Render(base.tokens));
      for (size_t a = 1; a < config.aliases_per_entity; ++a) {
        std::string alias;
        for (int attempt = 0; attempt < 50; ++attempt) {
          std::string candidate =
              Render(names.Perturb(base.tokens, config.alias_edit_ops));
          if (config.alias_edit_ops == 0 ||
              !local.contains(EntityKey(base.kind, candidate))) {
            alias = candidate;
            break;
          }
        }
        if (alias.empty()) break;
        local.insert(EntityKey(base.kind, alias));
        entity.aliases.push_back(alias);
      }
      bool clash = std::any_of(local.begin(), local.end(),
                               [&](const std::string& key) { return taken.contains(key); });
      if (clash || (config.alias_edit_ops > 0 &&
                    entity.aliases.size() < config.aliases_per_entity)) {
        continue;
      }
      taken.insert(local.begin(), local.end());
      return entity;
    }
  };

  std::vector<RealEntity> recurring;
  for (size_t i = 0; i < config.recurring_entities; ++i) recurring.push_back(make_entity());

  std::vector<std::string> vocab;
  vocab.reserve(config.vocab_size);
  for (size_t i = 0; i < config.vocab_size; ++i) {
    vocab.push_back("w" + std::to_string(i));
  }
  auto sample_words = [&](size_t count) {
    std::vector<size_t> ids(vocab.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (size_t i = 0; i < count; ++i) std::swap(ids[i], ids[i + rng.Uniform(ids.size() - i)]);
    ids.resize(count);
    return ids;
  };
  const std::vector<size_t> noise = sample_words(config.shared_noise_words);

  std::vector<RawDocument> raw;
  std::vector<std::pair<std::string, std::string>> labels;
  // Alias keys mentioned per real entity (recurring actors first, then each
  // event's cast); only mentioned aliases make it into the gold classes.
  std::vector<std::set<std::string>> mentioned_aliases(recurring.size());
  std::vector<std::vector<RealEntity>> casts(config.num_events);

  size_t doc_counter = 0;
  for (size_t event = 0; event < config.num_events; ++event) {
    std::string event_id = "event" + std::to_string(event);
    std::vector<size_t> topic = sample_words(config.topic_words_per_event);
    std::vector<RealEntity>& cast = casts[event];
    for (size_t i = 0; i < config.entities_per_event; ++i) cast.push_back(make_entity());
    size_t cast_offset = mentioned_aliases.size();
    mentioned_aliases.resize(cast_offset + cast.size());

    const std::int64_t event_start =
        config.start_timestamp +
        static_cast<std::int64_t>(std::llround(static_cast<double>(event) *
                                               config.event_gap_days * kSecondsPerDay));
    const auto duration = static_cast<std::int64_t>(
        std::llround(config.event_duration_days * kSecondsPerDay));

    for (size_t d = 0; d < config.docs_per_event; ++d) {
      RawDocument doc;
      char id[32];
      std::snprintf(id, sizeof(id), "d%06zu", doc_counter++);
      doc.id = id;
      doc.timestamp = event_start + (duration > 0 ? static_cast<std::int64_t>(
                                                        rng.Uniform(duration + 1))
                                                  : 0);
      for (size_t w = 0; w < config.words_per_doc; ++w) {
        bool from_topic = !topic.empty() &&
                          (noise.empty() || rng.Chance(config.topic_word_fraction));
        size_t word = from_topic ? topic[rng.Uniform(topic.size())]
                                 : noise[rng.Uniform(noise.size())];
        ++doc.words[vocab[word]];
      }

      size_t source = rng.Uniform(config.num_sources);
      auto mention = [&](const RealEntity& entity, size_t index) {
        size_t alias = source % entity.aliases.size();
        if (!rng.Chance(config.source_fidelity)) alias = rng.Uniform(entity.aliases.size());
        RawMention m;
        m.kind = entity.kind;
        m.canonical = entity.aliases[alias];
        m.count = static_cast<std::uint32_t>(1 + rng.Uniform(3));
        mentioned_aliases[index].insert(EntityKey(entity.kind, m.canonical));
        doc.mentions.push_back(std::move(m));
      };
      for (size_t i = 0; i < cast.size(); ++i) {
        if (rng.Chance(config.mention_probability)) mention(cast[i], cast_offset + i);
      }
      if (doc.mentions.empty() && !cast.empty()) {
        size_t i = rng.Uniform(cast.size());
        mention(cast[i], cast_offset + i);
      }
      for (size_t i = 0; i < recurring.size(); ++i) {
        if (rng.Chance(config.recurring_mention_probability)) mention(recurring[i], i);
      }
      if (doc.words.empty() && doc.mentions.empty()) {
        throw ConfigError("configuration produced an empty document");
      }
      labels.emplace_back(doc.id, event_id);
      raw.push_back(std::move(doc));
    }
  }

  SynthCorpus synth;
  synth.corpus = Corpus::Build(std::move(raw));
  for (auto& [doc, event] : labels) synth.events.labels.emplace(doc, event);

  for (const auto& keys : mentioned_aliases) {
    if (keys.size() < 2) continue;
    std::vector<EntityId> members;
    for (const std::string& key : keys) members.push_back(*synth.corpus.FindEntityKey(key));
    std::sort(members.begin(), members.end());
    synth.coref.classes.push_back(std::move(members));
  }
  std::sort(synth.coref.classes.begin(), synth.coref.classes.end());

  // Training pairs come from names that never occur in the corpus.
  for (size_t i = 0; i < config.alias_training_pairs; ++i) {
    Name base = names.Make();
    std::vector<std::string> variant = names.Perturb(base.tokens, 1 + rng.Uniform(2));
    if (variant == base.tokens) continue;
    synth.alias_training.pairs.emplace_back(Render(base.tokens), Render(variant));
  }
  return synth;
}

void WriteSynthCorpus(const SynthCorpus& synth, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = OpenOutput(dir / "corpus.jsonl");
    WriteCorpus(synth.corpus, out);
  }
  {
    auto out = OpenOutput(dir / "events.tsv");
    WriteEventGold(synth.events, out);
  }
  {
    auto out = OpenOutput(dir / "coref.tsv");
    WriteCorefGold(synth.coref, synth.corpus, out);
  }
  {
    auto out = OpenOutput(dir / "aliases.tsv");
    WriteAliasPairs(synth.alias_training, out);
  }
}

}  // namespace evcoref
