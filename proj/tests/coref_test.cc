#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "evcoref/cluster.h"
#include "evcoref/coref.h"
#include "evcoref/text_io.h"
#include "oracles.h"

namespace evcoref {
namespace {

using testing::Doc;
using testing::Mention;
using testing::BruteForceCoref;
using testing::ManualPartition;

std::vector<Entity> Entities(std::vector<std::string> names) {
  std::vector<Entity> entities;
  for (size_t i = 0; i < names.size(); ++i) {
    entities.push_back(Entity{static_cast<EntityId>(i), EntityKind::kPerson, names[i],
                              CanonicalWords(names[i])});
  }
  return entities;
}

TEST(EntityWordIdfTest, CountsDistinctEntities) {
  auto entities = Entities({"John Smith", "John Smyth", "Mary Smith Smith", "Bob Ray"});
  EntityWordIdf idf = EntityWordIdf::Build(entities);
  EXPECT_NEAR(idf.Idf("john"), std::log(4.0 / 2.0), 1e-12);
  EXPECT_NEAR(idf.Idf("smith"), std::log(4.0 / 2.0), 1e-12);
  EXPECT_NEAR(idf.Idf("ray"), std::log(4.0), 1e-12);
  EXPECT_EQ(idf.Idf("absent"), 0.0);
}

TEST(ContentSimilarityTest, Examples) {
  auto entities = Entities({"John Smith", "John Smyth", "Bob Ray", "Ann Lee"});
  WordSimMatrix y = WordSimMatrix::Build(entities, EditWeights{}, 0.7);
  EntityWordIdf idf = EntityWordIdf::Build(entities);
  EXPECT_NEAR(ContentSimilarity(entities[0], entities[0], y, idf), 1.0, 1e-12);
  EXPECT_EQ(ContentSimilarity(entities[2], entities[3], y, idf), 0.0);
  double js = ContentSimilarity(entities[0], entities[1], y, idf);
  EXPECT_NEAR(js, testing::DenseContentSimilarity(entities, 0, 1, EditWeights{}, 0.7),
              1e-12);
  EXPECT_GT(js, 0.5);
  EXPECT_LT(js, 1.0);
  ContentModel model(entities, y);
  EXPECT_NEAR(model.Similarity(0, 1), js, 1e-12);
}

TEST(ContentSimilarityTest, MatchesDenseOracleOnRandomTables) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> names;
    size_t m = testing::Draw(rng, 2, 10);
    for (size_t i = 0; i < m; ++i) names.push_back(testing::RandomName(rng));
    auto entities = Entities(names);
    double y_min = testing::DrawReal(rng, 0.4, 0.9);
    WordSimMatrix y = WordSimMatrix::Build(entities, EditWeights{}, y_min);
    ContentModel model(entities, y);
    for (EntityId a = 0; a < m; ++a) {
      for (EntityId b = 0; b < m; ++b) {
        double expected = testing::DenseContentSimilarity(entities, a, b, EditWeights{}, y_min);
        ASSERT_NEAR(model.Similarity(a, b), expected, 1e-12);
        double value = model.Similarity(a, b);
        EXPECT_GE(value, 0.0);
        EXPECT_LE(value, 1.0);
      }
    }
  }
}

// With no off-diagonal entries Y is the identity and content similarity is a cosine.
TEST(ContentSimilarityTest, DiagonalMatrixGivesPlainCosine) {
  auto entities = Entities({"alpha beta", "beta gamma gamma", "delta", "alpha"});
  WordSimMatrix y = WordSimMatrix::Build(entities, EditWeights{}, 0.99);
  ASSERT_EQ(y.num_entries(), 0u);
  EntityWordIdf idf = EntityWordIdf::Build(entities);
  auto v0 = EntityWordVector(entities[0], idf);
  auto v1 = EntityWordVector(entities[1], idf);
  double dot = 0.0;
  for (auto& [w, a] : v0) {
    for (auto& [u, b] : v1) {
      if (w == u) dot += a * b;
    }
  }
  EXPECT_NEAR(ContentSimilarity(entities[0], entities[1], y, idf), dot, 1e-12);
  EXPECT_GT(dot, 0.0);
}

TEST(ContentModelTest, RawSimilarityCanExceedOne) {
  auto entities = Entities({"abcd abce", "abcd abce", "zzz"});
  WordSimMatrix y = WordSimMatrix::Build(entities, EditWeights{}, 0.7);
  ContentModel model(entities, y);
  EXPECT_GT(model.RawSimilarity(0, 1), 1.0);
  EXPECT_EQ(model.Similarity(0, 1), 1.0);
  ASSERT_EQ(model.Overflows().size(), 1u);
  EXPECT_EQ(std::get<2>(model.Overflows()[0]), model.RawSimilarity(0, 1));
}

TEST(ContentModelTest, OverflowsMatchFullScan) {
  testing::Rng rng(49);
  size_t found = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> names;
    size_t m = testing::Draw(rng, 1, 12);
    for (size_t i = 0; i < m; ++i) {
      std::string name = testing::RandomName(rng);
      for (size_t extra = testing::Draw(rng, 0, 2); extra > 0; --extra) {
        name += " " + testing::RandomName(rng);
      }
      names.push_back(name);
    }
    auto entities = Entities(names);
    WordSimMatrix y = WordSimMatrix::Build(entities, EditWeights{}, 0.5);
    ContentModel model(entities, y);
    std::vector<std::tuple<EntityId, EntityId, double>> expected;
    for (EntityId a = 0; a < m; ++a) {
      for (EntityId b = a + 1; b < m; ++b) {
        if (model.RawSimilarity(a, b) > 1.0) {
          expected.emplace_back(a, b, model.RawSimilarity(a, b));
        }
      }
    }
    EXPECT_EQ(model.Overflows(), expected);
    found += expected.size();
  }
  EXPECT_GT(found, 0u);
}

TEST(EventProfileTest, Examples) {
  Corpus corpus = Corpus::Build({Doc("a", 1, {}, {Mention("Ann Lee")}),
                                 Doc("b", 2, {}, {Mention("Ann Lee"), Mention("Bob Ray")}),
                                 Doc("c", 3, {}, {Mention("Ann Lee")}),
                                 Doc("d", 4, {}, {Mention("Ann Lee")}),
                                 Doc("e", 5, {}, {Mention("Cy Dee")}),
                                 Doc("f", 6, {{"x", 1}})});
  CorefMap identity = CorefMap::Identity(3);
  Partition p = ManualPartition(corpus, {2, 5, 5, 9, 1, 0});
  EXPECT_EQ(BuildEventProfile(0, p, corpus.documents(), identity),
            (EventProfile{2, 5, 9}));
  EXPECT_EQ(BuildEventProfile(1, p, corpus.documents(), identity), (EventProfile{5}));
  Partition single = ManualPartition(corpus, {0, 0, 0, 1, 2, 3});
  EXPECT_EQ(BuildEventProfile(0, single, corpus.documents(), identity),
            (EventProfile{0, 1}));
  CorefMap merged = CorefMap::FromClasses(3, {{1, 2}});
  auto profiles = BuildClassProfiles(p, corpus.documents(), merged);
  EXPECT_EQ(profiles[1], (EventProfile{1, 5}));
  EXPECT_EQ(profiles[2], profiles[1]);
  EXPECT_EQ(BuildEventProfile(2, p, corpus.documents(), merged), profiles[2]);
}

TEST(ContextSimilarityTest, Examples) {
  EXPECT_NEAR(ContextSimilarity({1, 2}, {2, 3, 4}), 1.0 / std::sqrt(6.0), 1e-12);
  EXPECT_EQ(ContextSimilarity({1, 2}, {1, 2}), 1.0);
  EXPECT_EQ(ContextSimilarity({1}, {2}), 0.0);
  EXPECT_EQ(ContextSimilarity({}, {1}), 0.0);
}

TEST(ContextSimilarityTest, MatchesDenseNormalizedIndicators) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    EventProfile p1, p2;
    std::vector<double> d1(10, 0.0), d2(10, 0.0);
    for (ClusterId c = 0; c < 10; ++c) {
      if (testing::Draw(rng, 0, 2) == 0) p1.push_back(c), d1[c] = 1.0;
      if (testing::Draw(rng, 0, 2) == 0) p2.push_back(c), d2[c] = 1.0;
    }
    double n1 = std::sqrt(std::inner_product(d1.begin(), d1.end(), d1.begin(), 0.0));
    double n2 = std::sqrt(std::inner_product(d2.begin(), d2.end(), d2.begin(), 0.0));
    double expected = 0.0;
    if (n1 > 0 && n2 > 0) {
      for (int c = 0; c < 10; ++c) expected += d1[c] / n1 * d2[c] / n2;
    }
    EXPECT_NEAR(ContextSimilarity(p1, p2), expected, 1e-12);
    EXPECT_EQ(ContextSimilarity(p1, p2), ContextSimilarity(p2, p1));
  }
}

TEST(CombinedSimilarityTest, Examples) {
  EXPECT_EQ(CombinedSimilarity(0.37, 0.9, 1.0), 0.37);
  EXPECT_NEAR(CombinedSimilarity(0.8, 0.4, 0.75), 0.7, 1e-12);
  for (double alpha : {0.0, 0.3, 0.75, 1.0}) {
    EXPECT_NEAR(CombinedSimilarity(0.6, 0.6, alpha), 0.6, 1e-15);
  }
}

TEST(CorefConfigTest, Validation) {
  EXPECT_THROW((CorefConfig{1.5, 0.8}.Validate()), ConfigError);
  EXPECT_THROW((CorefConfig{0.5, -0.1}.Validate()), ConfigError);
  EXPECT_THROW((CorefConfig{0.5, 0.8, 1.0}.Validate()), ConfigError);
  CorefConfig ok;
  ok.theta = 2.0;
  EXPECT_NO_THROW(ok.Validate());
}

// A fixture of six entities across two events: two alias pairs, a
// near-miss name, and an unrelated name.
struct SixEntities {
  Corpus corpus = Corpus::Build(
      {Doc("a", 1, {{"x", 1}}, {Mention("John Smith"), Mention("Ann Lee")}),
       Doc("b", 2, {{"x", 1}}, {Mention("John Smyth"), Mention("Ann Li")}),
       Doc("c", 3, {{"y", 1}}, {Mention("Jon Smith"), Mention("Bob Ray")}),
       Doc("d", 4, {{"y", 1}}, {Mention("Ann Lee"), Mention("Bob Ray")})});
  Partition partition = ManualPartition(corpus, {0, 0, 1, 1});
};

TEST(CoreferencePassTest, ThetaAboveOneKeepsPrevious) {
  SixEntities f;
  WordSimMatrix y = WordSimMatrix::Build(f.corpus.entities(), EditWeights{}, 0.7);
  CorefConfig config;
  config.theta = 1.01;
  CorefMap prev = CorefMap::FromClasses(f.corpus.num_entities(), {{0, 3}});
  EXPECT_EQ(CoreferencePass(f.corpus.entities(), f.partition, prev, config, y,
                            f.corpus.documents()),
            prev);
}

TEST(CoreferencePassTest, TransitiveClosure) {
  // smith~smyth and smyth~smeth, while smith and smeth differ by one letter
  // more than the threshold allows.
  Corpus corpus = Corpus::Build({Doc("a", 1, {}, {Mention("smith"), Mention("smyth"),
                                                  Mention("smeth"), Mention("other")})});
  Partition p = ManualPartition(corpus, {0});
  EditWeights w;
  w.SetSubstitution('i', 'y', 0.1);
  w.SetSubstitution('y', 'e', 0.1);
  WordSimMatrix y = WordSimMatrix::Build(corpus.entities(), w, 0.7);
  ContentModel content(corpus.entities(), y);
  CorefConfig config{1.0, 0.95};
  auto id = [&](const char* name) { return *corpus.FindEntity(EntityKind::kPerson, name); };
  ASSERT_GE(content.Similarity(id("smith"), id("smyth")), 0.95);
  ASSERT_GE(content.Similarity(id("smyth"), id("smeth")), 0.95);
  ASSERT_LT(content.Similarity(id("smith"), id("smeth")), 0.95);
  CorefMap out = CoreferencePass(content, p, corpus.documents(),
                                 CorefMap::Identity(corpus.num_entities()), config);
  EXPECT_TRUE(out.Same(id("smith"), id("smeth")));
  EXPECT_FALSE(out.Same(id("smith"), id("other")));
}

TEST(CoreferencePassTest, SixEntitiesMatchBruteForce) {
  SixEntities f;
  WordSimMatrix y = WordSimMatrix::Build(f.corpus.entities(), EditWeights{}, 0.7);
  for (double theta : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    for (double alpha : {0.5, 0.75, 1.0}) {
      CorefConfig config{alpha, theta};
      CorefMap prev = CorefMap::Identity(f.corpus.num_entities());
      CorefMap out = CoreferencePass(f.corpus.entities(), f.partition, prev, config, y,
                                     f.corpus.documents());
      EXPECT_EQ(out.Classes(), BruteForceCoref(f.corpus, f.partition, prev, config, EditWeights{}))
          << theta << " " << alpha;
    }
  }
}

TEST(CoreferencePassTest, RandomInstancesMatchBruteForce) {
  testing::Rng rng(43);
  testing::RandomCorpusOptions options;
  options.max_entities = 12;
  for (int trial = 0; trial < 100; ++trial) {
    Corpus corpus = testing::RandomCorpus(rng, options);
    Partition p = ManualPartition(corpus, [&] {
      std::vector<ClusterId> a;
      size_t k = testing::Draw(rng, 1, 4);
      for (size_t d = 0; d < corpus.num_documents(); ++d) {
        a.push_back(static_cast<ClusterId>(testing::Draw(rng, 0, k - 1)));
      }
      return a;
    }());
    CorefConfig config{testing::DrawReal(rng, 0, 1), testing::DrawReal(rng, 0.3, 1.0),
                       0.7, testing::Draw(rng, 0, 1) == 1};
    CorefMap prev = testing::Draw(rng, 0, 1) ? CorefMap::Identity(corpus.num_entities())
                                             : testing::RandomCorefMap(rng, corpus.num_entities());
    WordSimMatrix y = WordSimMatrix::Build(corpus.entities(), EditWeights{}, config.y_min);
    CorefMap out = CoreferencePass(corpus.entities(), p, prev, config, y, corpus.documents());
    ASSERT_EQ(out.Classes(), BruteForceCoref(corpus, p, prev, config, EditWeights{}));
    EXPECT_TRUE(prev.Refines(out));
  }
}

TEST(CoreferencePassTest, AlphaOneIgnoresPartition) {
  testing::Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    Corpus corpus = testing::RandomCorpus(rng);
    WordSimMatrix y = WordSimMatrix::Build(corpus.entities(), EditWeights{}, 0.7);
    CorefConfig config{1.0, testing::DrawReal(rng, 0.4, 1.0)};
    CorefMap identity = CorefMap::Identity(corpus.num_entities());
    std::vector<ClusterId> together(corpus.num_documents(), 0);
    std::vector<ClusterId> apart(corpus.num_documents());
    std::iota(apart.begin(), apart.end(), 0);
    EXPECT_EQ(CoreferencePass(corpus.entities(), ManualPartition(corpus, together), identity,
                              config, y, corpus.documents()),
              CoreferencePass(corpus.entities(), ManualPartition(corpus, apart), identity,
                              config, y, corpus.documents()));
  }
}

TEST(CoreferencePassTest, RestrictedModeRefinesUnrestricted) {
  testing::Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    Corpus corpus = testing::RandomCorpus(rng);
    std::vector<ClusterId> a;
    for (size_t d = 0; d < corpus.num_documents(); ++d) {
      a.push_back(static_cast<ClusterId>(testing::Draw(rng, 0, 5)));
    }
    Partition p = ManualPartition(corpus, a);
    WordSimMatrix y = WordSimMatrix::Build(corpus.entities(), EditWeights{}, 0.7);
    CorefConfig open{0.9, 0.6};
    CorefConfig restricted = open;
    restricted.restrict_to_shared_cluster = true;
    CorefMap identity = CorefMap::Identity(corpus.num_entities());
    CorefMap r = CoreferencePass(corpus.entities(), p, identity, restricted, y, corpus.documents());
    CorefMap o = CoreferencePass(corpus.entities(), p, identity, open, y, corpus.documents());
    EXPECT_TRUE(r.Refines(o));
  }
}

TEST(CoreferencePassTest, ThreadCountDoesNotChangeOutput) {
  testing::Rng rng(46);
  testing::RandomCorpusOptions options;
  options.max_entities = 40;
  options.max_docs = 30;
  for (int trial = 0; trial < 10; ++trial) {
    Corpus corpus = testing::RandomCorpus(rng, options);
    std::vector<ClusterId> a(corpus.num_documents());
    for (auto& c : a) c = static_cast<ClusterId>(testing::Draw(rng, 0, 3));
    Partition p = ManualPartition(corpus, a);
    WordSimMatrix y = WordSimMatrix::Build(corpus.entities(), EditWeights{}, 0.6);
    ContentModel content(corpus.entities(), y);
    CorefConfig one{0.75, 0.6};
    CorefConfig eight = one;
    eight.threads = 8;
    CorefMap identity = CorefMap::Identity(corpus.num_entities());
    EXPECT_EQ(CoreferencePass(content, p, corpus.documents(), identity, one),
              CoreferencePass(content, p, corpus.documents(), identity, eight));
    auto s1 = ScoreClassPairs(content, p, corpus.documents(), identity, one);
    auto s8 = ScoreClassPairs(content, p, corpus.documents(), identity, eight);
    ASSERT_EQ(s1.size(), s8.size());
    for (size_t i = 0; i < s1.size(); ++i) {
      EXPECT_EQ(s1[i].first, s8[i].first);
      EXPECT_EQ(s1[i].combined, s8[i].combined);
    }
  }
}

TEST(ScoreClassPairsTest, UsesMaxOverMembers) {
  SixEntities f;
  WordSimMatrix y = WordSimMatrix::Build(f.corpus.entities(), EditWeights{}, 0.7);
  ContentModel content(f.corpus.entities(), y);
  auto id = [&](const char* name) { return *f.corpus.FindEntity(EntityKind::kPerson, name); };
  CorefMap prev = CorefMap::FromClasses(
      f.corpus.num_entities(), {{id("John Smith"), id("Bob Ray")}});
  auto scores = ScoreClassPairs(content, f.partition, f.corpus.documents(), prev, CorefConfig{});
  EntityId a = std::min(id("John Smith"), id("Bob Ray"));
  EntityId b = id("John Smyth");
  bool found = false;
  for (const auto& s : scores) {
    if (s.first == std::min(a, b) && s.second == std::max(a, b)) {
      found = true;
      EXPECT_NEAR(s.content,
                  std::max(content.Similarity(id("John Smith"), b),
                           content.Similarity(id("Bob Ray"), b)),
                  1e-15);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CorefMapIoTest, RoundTrip) {
  SixEntities f;
  CorefMap coref = CorefMap::FromClasses(f.corpus.num_entities(), {{0, 2}, {1, 3, 4}});
  std::stringstream buffer;
  WriteCorefMap(coref, f.corpus.entities(), buffer);
  EXPECT_EQ(ReadCorefMap(buffer, f.corpus), coref);
}

}  // namespace
}  // namespace evcoref
