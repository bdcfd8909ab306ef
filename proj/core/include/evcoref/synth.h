#ifndef EVCOREF_SYNTH_H_
#define EVCOREF_SYNTH_H_

#include <cstdint>
#include <filesystem>

#include "evcoref/corpus.h"

namespace evcoref {

// Knobs of the synthetic news stream. Each event has a topic vocabulary, a
// time window and a cast of entities; every entity has several spelling
// variants ("aliases"), and each simulated news source sticks to one of
// them, so one real entity shows up under different strings inside an event.
struct SynthConfig {
  size_t num_events = 10;
  size_t docs_per_event = 20;
  size_t vocab_size = 3000;
  size_t topic_words_per_event = 30;
  size_t shared_noise_words = 400;
  size_t words_per_doc = 40;
  double topic_word_fraction = 0.25; // share of tokens drawn from the topic
  size_t entities_per_event = 5;
  double mention_probability = 0.6;  // per event entity and document
  // Actors that may appear in any event.
  size_t recurring_entities = 3;
  double recurring_mention_probability = 0.15;
  size_t aliases_per_entity = 2;
  size_t alias_edit_ops = 1;  // character edits separating an alias from the base name
  size_t num_sources = 2;
  double source_fidelity = 0.9;  // chance a source uses its own alias
  double event_duration_days = 10.0;
  double event_gap_days = 4.0;    // offset between consecutive event starts
  std::int64_t start_timestamp = 1104537600;  // 2005-01-01
  size_t alias_training_pairs = 300;  // extra name pairs for edit-cost training
  std::uint64_t seed = 1;

  void Validate() const;
};

struct SynthCorpus {
  Corpus corpus;
  EventGold events;
  CorefGold coref;
  AliasPairs alias_training;
};

SynthCorpus Generate(const SynthConfig& config);

// corpus.jsonl, events.tsv, coref.tsv and aliases.tsv in `dir`.
void WriteSynthCorpus(const SynthCorpus& synth, const std::filesystem::path& dir);

}  // namespace evcoref

#endif  // EVCOREF_SYNTH_H_
