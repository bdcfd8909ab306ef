#include "evcoref/pipeline.h"

#include <ostream>
#include <string>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

IterationMetrics Measure(const Corpus& corpus, const Partition& partition,
                         const CorefMap& coref, const ContentModel& content,
                         const CorefMap& prev, const RunConfig& config,
                         const GoldStandard& gold) {
  IterationMetrics metrics;
  metrics.num_clusters = partition.num_clusters();
  for (const auto& members : coref.Classes()) {
    ++metrics.num_coref_classes;
    if (members.size() > 1) metrics.merged_entities += members.size();
  }
  if (gold.events != nullptr) {
    metrics.clustering = ClusteringPrf(partition, *gold.events);
  }
  if (gold.coref != nullptr) {
    if (gold.candidates == nullptr) {
      throw ConfigError("coreference gold needs candidate pairs");
    }
    metrics.coref = CorefPrf(coref, *gold.coref, *gold.candidates);
    // Pairs already merged before this pass stay merged at every threshold.
    std::vector<ScoredPair> edges;
    for (const auto& members : prev.Classes()) {
      for (size_t i = 1; i < members.size(); ++i) {
        edges.push_back({members.front(), members[i], 1.0});
      }
    }
    for (const ClassPairScore& s :
         ScoreClassPairs(content, partition, corpus.documents(), prev,
                         config.coref, /*min_combined=*/0.0)) {
      if (s.combined > 0.0) edges.push_back({s.first, s.second, s.combined});
    }
    metrics.coref_sweep = CorefSweep(edges, *gold.coref, *gold.candidates);
  }
  return metrics;
}

void WriteMetrics(const IterationState& state, std::ostream& out) {
  const IterationMetrics& m = state.metrics;
  out << "iteration\t" << state.iteration << '\n'
      << "num_clusters\t" << m.num_clusters << '\n'
      << "num_coref_classes\t" << m.num_coref_classes << '\n'
      << "merged_entities\t" << m.merged_entities << '\n';
  if (m.clustering) {
    WritePrf(*m.clustering, "clustering_", out);
    out << "clustering_fp_convention\tunmapped_clusters_count_as_fp\n";
  }
  if (m.coref) WritePrf(*m.coref, "coref_", out);
  if (m.coref_sweep) {
    out << "coref_best_threshold\t" << FormatDouble(m.coref_sweep->best_threshold)
        << '\n';
    WritePrf(m.coref_sweep->best_score, "coref_best_", out);
  }
}

std::string OptionalF1(const std::optional<PrfScore>& score) {
  return score ? FormatDouble(score->f1) : std::string("NA");
}

}  // namespace

void RunConfig::Validate() const {
  cluster.Validate();
  coref.Validate();
  fusion.Validate();
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
}

bool Converged(const CorefMap& prev, const CorefMap& curr) { return prev == curr; }

RunHistory RunJoint(const Corpus& corpus, const WordSimMatrix& y,
                    const RunConfig& config, const GoldStandard& gold) {
  config.Validate();
  const FeatureSpace space = FeatureSpace::Build(corpus);
  const ContentModel content(corpus.entities(), y);

  RunHistory history;
  CorefMap prev = CorefMap::Identity(corpus.num_entities());
  for (size_t t = 1; t <= config.max_iterations; ++t) {
    IterationState state;
    state.iteration = t;
    state.partition =
        ClusterStream(corpus.documents(), space, prev, config.fusion, config.cluster);
    state.coref = CoreferencePass(content, state.partition, corpus.documents(),
                                  prev, config.coref);
    state.metrics =
        Measure(corpus, state.partition, state.coref, content, prev, config, gold);
    history.iterations_run = t;

    // Iteration 1 compares against the seed identity, not a computed map,
    // so convergence is first checked at t = 2.
    bool done = t >= 2 && Converged(prev, state.coref);
    prev = state.coref;
    if (!config.record_history) history.iterations.clear();
    history.iterations.push_back(std::move(state));
    if (done) {
      history.converged_at = t;
      break;
    }
  }
  return history;
}

void WriteRunArtifacts(const RunHistory& history, const Corpus& corpus,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto curve = OpenOutput(dir / "curve.tsv");
  curve << "iteration\tnum_clusters\tnum_coref_classes\tclustering_f1\tcoref_f1"
           "\tcoref_best_f1\n";
  for (const IterationState& state : history.iterations) {
    std::string prefix = "iter_" + std::to_string(state.iteration) + "_";
    {
      auto out = OpenOutput(dir / (prefix + "partition.tsv"));
      WritePartition(state.partition, out);
    }
    {
      auto out = OpenOutput(dir / (prefix + "clusters.tsv"));
      WriteClusterSummary(state.partition, out);
    }
    {
      auto out = OpenOutput(dir / (prefix + "coref.tsv"));
      WriteCorefMap(state.coref, corpus.entities(), out);
    }
    {
      auto out = OpenOutput(dir / (prefix + "metrics.tsv"));
      WriteMetrics(state, out);
    }
    const IterationMetrics& m = state.metrics;
    curve << state.iteration << '\t' << m.num_clusters << '\t'
          << m.num_coref_classes << '\t' << OptionalF1(m.clustering) << '\t'
          << OptionalF1(m.coref) << '\t'
          << (m.coref_sweep ? FormatDouble(m.coref_sweep->best_score.f1)
                            : std::string("NA"))
          << '\n';
  }
  auto summary = OpenOutput(dir / "run.tsv");
  summary << "iterations_run\t" << history.iterations_run << '\n'
          << "converged_at\t"
          << (history.converged_at ? std::to_string(*history.converged_at)
                                   : std::string("NA"))
          << '\n';
  if (!history.iterations.empty()) {
    const IterationMetrics& m = history.last().metrics;
    summary << "final_iteration\t" << history.last().iteration << '\n'
            << "final_num_clusters\t" << m.num_clusters << '\n'
            << "final_num_coref_classes\t" << m.num_coref_classes << '\n'
            << "final_clustering_f1\t" << OptionalF1(m.clustering) << '\n'
            << "final_coref_f1\t" << OptionalF1(m.coref) << '\n';
  }
}

}  // namespace evcoref
