#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "evcoref/pipeline.h"
#include "evcoref/synth.h"
#include "evcoref/text_io.h"
#include "oracles.h"

namespace evcoref {
namespace {

struct SmallSynth {
  SynthCorpus synth;
  EditWeights weights;
  WordSimMatrix y;
  CandidatePairs candidates;

  explicit SmallSynth(std::uint64_t seed, size_t events = 2, size_t docs = 20) {
    SynthConfig config;
    config.num_events = events;
    config.docs_per_event = docs;
    config.seed = seed;
    synth = Generate(config);
    weights = TrainEditWeights(synth.alias_training);
    y = WordSimMatrix::Build(synth.corpus.entities(), weights, 0.7);
    candidates = CandidatePairs::Build(synth.corpus, synth.events);
  }

  GoldStandard Gold() const { return {&synth.events, &synth.coref, &candidates}; }
};

TEST(ConvergedTest, Examples) {
  EXPECT_TRUE(Converged(CorefMap::Identity(4), CorefMap::Identity(4)));
  EXPECT_FALSE(Converged(CorefMap::Identity(4), CorefMap::FromClasses(4, {{1, 2}})));
  UnionFind a(5), b(5);
  a.Union(3, 1);
  a.Union(1, 4);
  b.Union(4, 3);
  b.Union(1, 4);
  EXPECT_TRUE(Converged(CorefMap::FromUnionFind(a), CorefMap::FromUnionFind(b)));
}

TEST(RunConfigTest, RejectsZeroIterations) {
  RunConfig config;
  config.max_iterations = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
}

TEST(RunJointTest, HighThetaConvergesAtTwoWithIdentity) {
  SmallSynth s(3);
  RunConfig config;
  config.coref.theta = 1.5;
  RunHistory h = RunJoint(s.synth.corpus, s.y, config, s.Gold());
  EXPECT_EQ(h.converged_at, 2u);
  EXPECT_EQ(h.iterations.size(), 2u);
  EXPECT_TRUE(h.last().coref.IsIdentity());
  EXPECT_EQ(h.iterations[0].partition.assignment, h.iterations[1].partition.assignment);
}

TEST(RunJointTest, AlphaOneConvergesAtTwo) {
  SmallSynth s(4);
  RunConfig config;
  config.coref.alpha = 1.0;
  RunHistory h = RunJoint(s.synth.corpus, s.y, config);
  EXPECT_EQ(h.converged_at, 2u);
  EXPECT_EQ(h.iterations[0].coref, h.iterations[1].coref);
}

TEST(RunJointTest, FirstIterationEqualsStandaloneClustering) {
  SmallSynth s(5);
  RunConfig config;
  config.coref.theta = 1.5;
  RunHistory h = RunJoint(s.synth.corpus, s.y, config);
  FeatureSpace space = FeatureSpace::Build(s.synth.corpus);
  Partition alone =
      ClusterStream(s.synth.corpus.documents(), space,
                    CorefMap::Identity(s.synth.corpus.num_entities()), config.fusion,
                    config.cluster);
  EXPECT_EQ(h.iterations[0].partition.assignment, alone.assignment);
}

TEST(RunJointTest, MergesAreMonotoneAndTerminate) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SmallSynth s(seed);
    for (double theta : {0.0, 0.5, 0.8}) {
      RunConfig config;
      config.coref.theta = theta;
      config.max_iterations = 50;
      RunHistory h = RunJoint(s.synth.corpus, s.y, config);
      ASSERT_TRUE(h.converged_at.has_value());
      EXPECT_LE(h.iterations_run, s.synth.corpus.num_entities() + 1);
      for (size_t t = 1; t < h.iterations.size(); ++t) {
        EXPECT_TRUE(h.iterations[t - 1].coref.Refines(h.iterations[t].coref));
        if (t + 1 < h.iterations.size()) {
          EXPECT_LT(h.iterations[t].coref.num_classes(),
                    h.iterations[t - 1].coref.num_classes());
        }
      }
    }
  }
}

TEST(RunJointTest, IterationCapIsRespected) {
  SmallSynth s(6);
  RunConfig config;
  config.max_iterations = 1;
  RunHistory h = RunJoint(s.synth.corpus, s.y, config);
  EXPECT_EQ(h.iterations_run, 1u);
  EXPECT_FALSE(h.converged_at.has_value());
}

TEST(RunJointTest, HistoryCanKeepOnlyTheLastState) {
  SmallSynth s(7);
  RunConfig config;
  RunHistory full = RunJoint(s.synth.corpus, s.y, config);
  config.record_history = false;
  RunHistory last = RunJoint(s.synth.corpus, s.y, config);
  ASSERT_EQ(last.iterations.size(), 1u);
  EXPECT_EQ(last.iterations_run, full.iterations_run);
  EXPECT_EQ(last.last().coref, full.last().coref);
  EXPECT_EQ(last.last().partition.assignment, full.last().partition.assignment);
}

TEST(RunJointTest, Reproducible) {
  SmallSynth s(8);
  RunConfig config;
  RunHistory a = RunJoint(s.synth.corpus, s.y, config, s.Gold());
  RunHistory b = RunJoint(s.synth.corpus, s.y, config, s.Gold());
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (size_t t = 0; t < a.iterations.size(); ++t) {
    EXPECT_EQ(a.iterations[t].partition.assignment, b.iterations[t].partition.assignment);
    EXPECT_EQ(a.iterations[t].coref, b.iterations[t].coref);
    EXPECT_EQ(a.iterations[t].metrics.clustering->f1, b.iterations[t].metrics.clustering->f1);
  }
}

// Forty documents with injected aliases: the second iteration clusters at
// least as well as the first.
TEST(RunJointTest, SecondIterationDoesNotLoseClusteringQuality) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SmallSynth s(seed, 2, 20);
    ASSERT_EQ(s.synth.corpus.num_documents(), 40u);
    RunConfig config;
    RunHistory h = RunJoint(s.synth.corpus, s.y, config, s.Gold());
    ASSERT_GE(h.iterations.size(), 2u);
    EXPECT_GE(h.iterations[1].metrics.clustering->f1, h.iterations[0].metrics.clustering->f1)
        << "seed " << seed;
  }
}

TEST(RunJointTest, MetricsNeedCandidatesWithCorefGold) {
  SmallSynth s(9);
  GoldStandard gold{&s.synth.events, &s.synth.coref, nullptr};
  EXPECT_THROW(RunJoint(s.synth.corpus, s.y, RunConfig{}, gold), ConfigError);
}

TEST(WriteRunArtifactsTest, WritesPerIterationFiles) {
  SmallSynth s(10);
  RunHistory h = RunJoint(s.synth.corpus, s.y, RunConfig{}, s.Gold());
  auto dir = std::filesystem::temp_directory_path() / "evcoref_pipeline_artifacts";
  std::filesystem::remove_all(dir);
  WriteRunArtifacts(h, s.synth.corpus, dir);
  for (size_t t = 1; t <= h.iterations_run; ++t) {
    for (const char* kind : {"partition", "clusters", "coref", "metrics"}) {
      EXPECT_TRUE(std::filesystem::exists(
          dir / ("iter_" + std::to_string(t) + "_" + kind + ".tsv")));
    }
  }
  std::ifstream curve(dir / "curve.tsv");
  std::string line;
  size_t rows = 0;
  while (std::getline(curve, line)) ++rows;
  EXPECT_EQ(rows, h.iterations_run + 1);
  std::ifstream partition(dir / "iter_1_partition.tsv");
  Partition back = ReadPartition(partition);
  EXPECT_EQ(ClusteringPrf(back, s.synth.events).f1, h.iterations[0].metrics.clustering->f1);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace evcoref
