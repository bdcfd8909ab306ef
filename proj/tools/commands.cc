#include "commands.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "CLI11.hpp"
#include "evcoref/cluster.h"
#include "evcoref/coref.h"
#include "evcoref/corpus.h"
#include "evcoref/edit_distance.h"
#include "evcoref/eval.h"
#include "evcoref/pipeline.h"
#include "evcoref/synth.h"
#include "evcoref/text_io.h"
#include "evcoref/word_similarity.h"

namespace evcoref::cli {
namespace {

namespace fs = std::filesystem;

// Options shared by run and sweep.
struct ModelFlags {
  std::string corpus;
  std::string alias_pairs;
  std::string weights;
  std::string events_gold;
  std::string coref_gold;
  std::string out;
  double tau = 0.1;
  double theta = 0.8;
  double alpha = 0.75;
  double window_days = 12.0;
  double entity_weight = 1.0;
  double y_min = 0.7;
  std::string features = "words+ne";
  bool restrict_to_shared_cluster = false;
  size_t max_iterations = 10;
  unsigned threads = 1;
  bool debug_content = false;
};

struct SweepFlags {
  std::string thetas = "0.7,0.75,0.8,0.85,0.9";
  std::string alphas = "0.75";
  std::string feature_sets = "words+ne";
};

struct EvalFlags {
  std::string partition;
  std::string gold;
  std::string corpus;
  std::string coref;
  std::string coref_gold;
  std::string out;
};

struct TrainFlags {
  std::string pairs;
  std::string out;
};

struct SynthFlags {
  SynthConfig config;
  std::string out;
};

std::string Trim(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

// Reads a flat "key=value" file ('#' starts a comment) into "--key=value"
// tokens.
std::vector<std::string> ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_number) +
                        ": expected key=value");
    }
    std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") {
      throw ConfigError(path + ":" + std::to_string(line_number) + ": bad key");
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Places config-file settings right after the subcommand so that explicit
// flags, which come later, take precedence.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty() || args.empty()) return args;
  std::vector<std::string> expanded = {args[0]};
  auto from_file = ReadConfigFile(config_path);
  expanded.insert(expanded.end(), from_file.begin(), from_file.end());
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = Trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> ParseNumberList(const std::string& text, const char* what) {
  std::vector<double> values;
  for (const std::string& item : SplitList(text)) {
    try {
      values.push_back(ParseDouble(item));
    } catch (const DataError&) {
      throw ConfigError(std::string("bad value in --") + what + ": " + item);
    }
  }
  if (values.empty()) throw ConfigError(std::string("--") + what + " is empty");
  return values;
}

FusionConfig ParseFeatures(const std::string& name, double entity_weight) {
  FusionConfig fusion;
  fusion.entity_weight = entity_weight;
  if (name == "words+ne") {
    fusion.use_words = fusion.use_entities = true;
  } else if (name == "words") {
    fusion.use_words = true;
    fusion.use_entities = false;
  } else if (name == "ne") {
    fusion.use_words = false;
    fusion.use_entities = true;
  } else {
    throw ConfigError("unknown feature set '" + name + "' (words+ne, words, ne)");
  }
  return fusion;
}

RunConfig MakeRunConfig(const ModelFlags& flags) {
  RunConfig config;
  config.cluster.tau = flags.tau;
  config.cluster.window_days = flags.window_days;
  config.coref.alpha = flags.alpha;
  config.coref.theta = flags.theta;
  config.coref.y_min = flags.y_min;
  config.coref.restrict_to_shared_cluster = flags.restrict_to_shared_cluster;
  config.coref.threads = flags.threads;
  config.fusion = ParseFeatures(flags.features, flags.entity_weight);
  config.max_iterations = flags.max_iterations;
  config.Validate();
  return config;
}

void AddModelFlags(CLI::App* app, ModelFlags& flags) {
  app->add_option("--corpus", flags.corpus, "Corpus file (JSON lines)")->required();
  app->add_option("--out", flags.out, "Output directory")->required();
  app->add_option("--alias-pairs", flags.alias_pairs,
                  "Name variant pairs (TSV) to learn edit costs from");
  app->add_option("--weights", flags.weights,
                  "Edit cost table to use instead of training");
  app->add_option("--events-gold", flags.events_gold, "Gold events (TSV)");
  app->add_option("--coref-gold", flags.coref_gold,
                  "Gold alias classes (TSV); needs --events-gold");
  app->add_option("--tau", flags.tau, "Clustering threshold")->capture_default_str();
  app->add_option("--theta", flags.theta, "Coreference merge threshold")
      ->capture_default_str();
  app->add_option("--alpha", flags.alpha, "Content vs. context weight")
      ->capture_default_str();
  app->add_option("--window-days", flags.window_days,
                  "Cluster activity window in days")
      ->capture_default_str();
  app->add_option("--entity-weight", flags.entity_weight,
                  "Weight of the entity block in document vectors")
      ->capture_default_str();
  app->add_option("--features", flags.features, "words+ne, words or ne")
      ->capture_default_str();
  app->add_option("--y-min", flags.y_min, "Word similarity cutoff")
      ->capture_default_str();
  app->add_flag("--restrict-shared-cluster", flags.restrict_to_shared_cluster,
                "Only compare entities that share a cluster");
  app->add_option("--max-iter", flags.max_iterations, "Iteration cap")
      ->capture_default_str();
  app->add_option("--threads", flags.threads, "Worker threads for pair scoring")
      ->capture_default_str();
}

EditWeights ResolveWeights(const ModelFlags& flags) {
  if (!flags.weights.empty() && !flags.alias_pairs.empty()) {
    throw ConfigError("--weights and --alias-pairs are mutually exclusive");
  }
  if (!flags.weights.empty()) {
    auto in = OpenInput(flags.weights);
    return EditWeights::Read(in);
  }
  if (!flags.alias_pairs.empty()) {
    return TrainEditWeights(LoadAliasPairs(flags.alias_pairs));
  }
  return EditWeights();
}

void WriteEffectiveConfig(const RunConfig& config, std::ostream& out) {
  auto features = [&] {
    if (config.fusion.use_words && config.fusion.use_entities) return "words+ne";
    return config.fusion.use_words ? "words" : "ne";
  };
  out << "tau\t" << FormatDouble(config.cluster.tau) << '\n'
      << "window_days\t" << FormatDouble(config.cluster.window_days) << '\n'
      << "alpha\t" << FormatDouble(config.coref.alpha) << '\n'
      << "theta\t" << FormatDouble(config.coref.theta) << '\n'
      << "y_min\t" << FormatDouble(config.coref.y_min) << '\n'
      << "restrict_shared_cluster\t"
      << (config.coref.restrict_to_shared_cluster ? "true" : "false") << '\n'
      << "features\t" << features() << '\n'
      << "entity_weight\t" << FormatDouble(config.fusion.entity_weight) << '\n'
      << "max_iterations\t" << config.max_iterations << '\n';
}

// Loaded inputs shared by run and sweep.
struct Inputs {
  Corpus corpus;
  EditWeights weights;
  std::optional<EventGold> events;
  std::optional<CorefGold> coref;
  std::optional<CandidatePairs> candidates;

  GoldStandard Gold() const {
    GoldStandard gold;
    if (events) gold.events = &*events;
    if (coref) {
      gold.coref = &*coref;
      gold.candidates = &*candidates;
    }
    return gold;
  }
};

Inputs LoadInputs(const ModelFlags& flags) {
  if (!flags.coref_gold.empty() && flags.events_gold.empty()) {
    throw ConfigError("--coref-gold needs --events-gold to define candidate pairs");
  }
  Inputs inputs;
  inputs.corpus = LoadCorpus(flags.corpus);
  inputs.weights = ResolveWeights(flags);
  if (!flags.events_gold.empty()) {
    inputs.events = LoadEventGold(flags.events_gold, inputs.corpus);
  }
  if (!flags.coref_gold.empty()) {
    inputs.coref = LoadCorefGold(flags.coref_gold, inputs.corpus);
    inputs.candidates = CandidatePairs::Build(inputs.corpus, *inputs.events);
  }
  return inputs;
}

RunHistory RunOnce(const Inputs& inputs, const WordSimMatrix& y,
                   const RunConfig& config, const fs::path& dir) {
  RunHistory history = RunJoint(inputs.corpus, y, config, inputs.Gold());
  WriteRunArtifacts(history, inputs.corpus, dir);
  auto out = OpenOutput(dir / "config.tsv");
  WriteEffectiveConfig(config, out);
  return history;
}

int CmdRun(const ModelFlags& flags, std::ostream& out) {
  RunConfig config = MakeRunConfig(flags);
  Inputs inputs = LoadInputs(flags);
  WordSimMatrix y = WordSimMatrix::Build(inputs.corpus.entities(), inputs.weights,
                                         config.coref.y_min, flags.threads);
  fs::path dir(flags.out);
  fs::create_directories(dir);
  {
    auto weights_out = OpenOutput(dir / "weights.tsv");
    inputs.weights.Write(weights_out);
  }
  RunHistory history = RunOnce(inputs, y, config, dir);
  if (flags.debug_content) {
    // Raw content scores above 1, which the model clamps.
    auto overflows = ContentModel(inputs.corpus.entities(), y).Overflows();
    auto file = OpenOutput(dir / "content_raw.tsv");
    for (const auto& [a, b, raw] : overflows) {
      file << EntityKey(inputs.corpus.entities()[a]) << '\t'
           << EntityKey(inputs.corpus.entities()[b]) << '\t' << FormatDouble(raw) << '\n';
    }
    out << "content_overflows\t" << overflows.size() << '\n';
  }
  out << "iterations\t" << history.iterations_run << '\n'
      << "converged_at\t"
      << (history.converged_at ? std::to_string(*history.converged_at) : "NA")
      << '\n'
      << "clusters\t" << history.last().metrics.num_clusters << '\n'
      << "coref_classes\t" << history.last().metrics.num_coref_classes << '\n';
  if (history.last().metrics.clustering) {
    out << "clustering_f1\t" << FormatDouble(history.last().metrics.clustering->f1)
        << '\n';
  }
  if (history.last().metrics.coref) {
    out << "coref_f1\t" << FormatDouble(history.last().metrics.coref->f1) << '\n';
  }
  return kSuccess;
}

std::string F1OrNa(const std::optional<PrfScore>& score) {
  return score ? FormatDouble(score->f1) : std::string("NA");
}

int CmdSweep(const ModelFlags& flags, const SweepFlags& sweep, std::ostream& out) {
  std::vector<double> thetas = ParseNumberList(sweep.thetas, "thetas");
  std::vector<double> alphas = ParseNumberList(sweep.alphas, "alphas");
  std::vector<std::string> feature_sets = SplitList(sweep.feature_sets);
  if (feature_sets.empty()) throw ConfigError("--feature-sets is empty");
  if (flags.events_gold.empty()) throw ConfigError("sweep needs --events-gold");

  // Validate the whole grid before doing any work.
  std::vector<RunConfig> grid;
  for (const std::string& features : feature_sets) {
    for (double alpha : alphas) {
      for (double theta : thetas) {
        ModelFlags point = flags;
        point.features = features;
        point.alpha = alpha;
        point.theta = theta;
        grid.push_back(MakeRunConfig(point));
      }
    }
  }

  Inputs inputs = LoadInputs(flags);
  WordSimMatrix y = WordSimMatrix::Build(inputs.corpus.entities(), inputs.weights,
                                         flags.y_min, flags.threads);
  fs::path dir(flags.out);
  fs::create_directories(dir);
  auto table = OpenOutput(dir / "sweep.tsv");
  auto curves = OpenOutput(dir / "sweep_curves.tsv");
  table << "grid_id\tfeatures\talpha\ttheta\titerations\tconverged_at"
           "\tfirst_clustering_f1\tfinal_clustering_f1\tfinal_coref_f1"
           "\tclustering_f1_by_iteration\n";
  curves << "grid_id\titeration\tclustering_f1\tcoref_f1\tcoref_best_f1\n";
  for (size_t g = 0; g < grid.size(); ++g) {
    const RunConfig& config = grid[g];
    RunHistory history = RunOnce(inputs, y, config, dir / ("grid_" + std::to_string(g)));
    std::string trajectory;
    for (const IterationState& state : history.iterations) {
      if (!trajectory.empty()) trajectory += ',';
      trajectory += F1OrNa(state.metrics.clustering);
      curves << g << '\t' << state.iteration << '\t'
             << F1OrNa(state.metrics.clustering) << '\t'
             << F1OrNa(state.metrics.coref) << '\t'
             << (state.metrics.coref_sweep
                     ? FormatDouble(state.metrics.coref_sweep->best_score.f1)
                     : std::string("NA"))
             << '\n';
    }
    const char* features = config.fusion.use_words && config.fusion.use_entities
                               ? "words+ne"
                               : (config.fusion.use_words ? "words" : "ne");
    table << g << '\t' << features << '\t' << FormatDouble(config.coref.alpha)
          << '\t' << FormatDouble(config.coref.theta) << '\t'
          << history.iterations_run << '\t'
          << (history.converged_at ? std::to_string(*history.converged_at) : "NA")
          << '\t' << F1OrNa(history.iterations.front().metrics.clustering) << '\t'
          << F1OrNa(history.last().metrics.clustering) << '\t'
          << F1OrNa(history.last().metrics.coref) << '\t' << trajectory << '\n';
  }
  out << "grid_points\t" << grid.size() << '\n';
  return kSuccess;
}

int CmdEval(const EvalFlags& flags, std::ostream& out) {
  Partition partition;
  {
    auto in = OpenInput(flags.partition);
    partition = ReadPartition(in);
  }
  std::optional<Corpus> corpus;
  if (!flags.corpus.empty()) corpus = LoadCorpus(flags.corpus);

  EventGold gold;
  if (corpus) {
    gold = LoadEventGold(flags.gold, *corpus);
  } else {
    std::unordered_set<std::string> known(partition.doc_ids.begin(),
                                          partition.doc_ids.end());
    gold = LoadEventGold(flags.gold, known);
  }

  std::ostringstream report;
  WritePrf(ClusteringPrf(partition, gold), "clustering_", report);
  report << "clustering_fp_convention\tunmapped_clusters_count_as_fp\n";

  if (!flags.coref.empty() || !flags.coref_gold.empty()) {
    if (flags.coref.empty() || flags.coref_gold.empty() || !corpus) {
      throw ConfigError("coreference scoring needs --coref, --coref-gold and --corpus");
    }
    CorefMap coref;
    {
      auto in = OpenInput(flags.coref);
      coref = ReadCorefMap(in, *corpus);
    }
    CorefGold coref_gold = LoadCorefGold(flags.coref_gold, *corpus);
    CandidatePairs candidates = CandidatePairs::Build(*corpus, gold);
    WritePrf(CorefPrf(coref, coref_gold, candidates), "coref_", report);
  }

  if (flags.out.empty()) {
    out << report.str();
  } else {
    auto file = OpenOutput(flags.out);
    file << report.str();
  }
  return kSuccess;
}

int CmdTrainWeights(const TrainFlags& flags, std::ostream& out) {
  AliasPairs pairs = LoadAliasPairs(flags.pairs);
  EditWeights weights = TrainEditWeights(pairs);
  auto file = OpenOutput(flags.out);
  weights.Write(file);
  out << "pairs\t" << pairs.pairs.size() << '\n'
      << "skipped_lines\t" << pairs.warnings << '\n'
      << "uniform\t" << (weights.IsUniform() ? "true" : "false") << '\n';
  return kSuccess;
}

int CmdSynth(const SynthFlags& flags, std::ostream& out) {
  SynthCorpus synth = Generate(flags.config);
  WriteSynthCorpus(synth, flags.out);
  out << "documents\t" << synth.corpus.num_documents() << '\n'
      << "entities\t" << synth.corpus.num_entities() << '\n'
      << "events\t" << synth.events.num_events() << '\n'
      << "alias_classes\t" << synth.coref.classes.size() << '\n';
  return kSuccess;
}

void AddSynthFlags(CLI::App* app, SynthFlags& flags) {
  SynthConfig& c = flags.config;
  app->add_option("--out", flags.out, "Output directory")->required();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--num-events", c.num_events)->capture_default_str();
  app->add_option("--docs-per-event", c.docs_per_event)->capture_default_str();
  app->add_option("--vocab-size", c.vocab_size)->capture_default_str();
  app->add_option("--topic-words", c.topic_words_per_event)->capture_default_str();
  app->add_option("--noise-words", c.shared_noise_words)->capture_default_str();
  app->add_option("--words-per-doc", c.words_per_doc)->capture_default_str();
  app->add_option("--topic-fraction", c.topic_word_fraction)->capture_default_str();
  app->add_option("--entities-per-event", c.entities_per_event)->capture_default_str();
  app->add_option("--mention-prob", c.mention_probability)->capture_default_str();
  app->add_option("--recurring-entities", c.recurring_entities)->capture_default_str();
  app->add_option("--recurring-prob", c.recurring_mention_probability)
      ->capture_default_str();
  app->add_option("--aliases-per-entity", c.aliases_per_entity)->capture_default_str();
  app->add_option("--alias-edit-ops", c.alias_edit_ops)->capture_default_str();
  app->add_option("--sources", c.num_sources)->capture_default_str();
  app->add_option("--source-fidelity", c.source_fidelity)->capture_default_str();
  app->add_option("--event-days", c.event_duration_days)->capture_default_str();
  app->add_option("--event-gap-days", c.event_gap_days)->capture_default_str();
  app->add_option("--start-ts", c.start_timestamp)->capture_default_str();
  app->add_option("--training-pairs", c.alias_training_pairs)->capture_default_str();
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  std::vector<std::string> expanded;
  try {
    expanded = ExpandConfig(args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App app{"Joint event clustering and cross-document entity coreference",
               "evcoref"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_file;

  ModelFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Alternate clustering and coreference");
  AddModelFlags(run, run_flags);
  run->add_option("--config", config_file, "Flat key=value defaults file");
  run->add_flag("--debug-content", run_flags.debug_content,
                "Write entity pairs whose raw content score exceeds 1");

  ModelFlags sweep_flags;
  SweepFlags sweep_grid;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  AddModelFlags(sweep, sweep_flags);
  sweep->add_option("--thetas", sweep_grid.thetas, "Comma-separated theta values")
      ->capture_default_str();
  sweep->add_option("--alphas", sweep_grid.alphas, "Comma-separated alpha values")
      ->capture_default_str();
  sweep->add_option("--feature-sets", sweep_grid.feature_sets,
                    "Comma-separated feature sets")
      ->capture_default_str();
  sweep->add_option("--config", config_file, "Flat key=value defaults file");

  EvalFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "Score a partition (and coreference)");
  eval->add_option("--partition", eval_flags.partition, "doc_id<TAB>cluster_id file")
      ->required();
  eval->add_option("--gold", eval_flags.gold, "Gold events (TSV)")->required();
  eval->add_option("--corpus", eval_flags.corpus, "Corpus, needed for coreference");
  eval->add_option("--coref", eval_flags.coref, "Coreference classes to score");
  eval->add_option("--coref-gold", eval_flags.coref_gold, "Gold alias classes");
  eval->add_option("--out", eval_flags.out, "Write metrics here instead of stdout");
  eval->add_option("--config", config_file, "Flat key=value defaults file");

  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand("train-weights", "Learn edit costs from name pairs");
  train->add_option("--pairs", train_flags.pairs, "Name variant pairs (TSV)")->required();
  train->add_option("--out", train_flags.out, "Edit cost table to write")->required();
  train->add_option("--config", config_file, "Flat key=value defaults file");

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  AddSynthFlags(synth, synth_flags);
  synth->add_option("--config", config_file, "Flat key=value defaults file");

  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*run) return CmdRun(run_flags, out);
    if (*sweep) return CmdSweep(sweep_flags, sweep_grid, out);
    if (*eval) return CmdEval(eval_flags, out);
    if (*train) return CmdTrainWeights(train_flags, out);
    if (*synth) return CmdSynth(synth_flags, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace evcoref::cli
