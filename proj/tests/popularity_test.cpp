#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "popmatch/election.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/proposal_engine.hpp"
#include "test_support.hpp"

using namespace popmatch;
using namespace popmatch::testing;

namespace {

struct Example : ::testing::Test {
  Instance g = load("example.inst");
  Matching m1 = load_matching(g, "example_m1.match");
  Matching m2 = load_matching(g, "example_m2.match");
  Matching m3 = load_matching(g, "example_m3.match");
  int v(const char* name) const { return g.id(name); }
};

std::vector<std::string> names(const Instance& g, const std::vector<int>& vs) {
  std::vector<std::string> out;
  for (int x : vs) out.push_back(g.name(x));
  return out;
}

}  // namespace

TEST_F(Example, Stability) {
  EXPECT_TRUE(is_stable(g, m1).stable);
  StabilityResult r2 = is_stable(g, m2);
  EXPECT_FALSE(r2.stable);
  ASSERT_TRUE(r2.blocking);
  EXPECT_EQ(format_edge(g, *r2.blocking), "(a1,b1)");
  EXPECT_FALSE(is_stable(g, Matching(g.size())).stable);
}

TEST_F(Example, Popularity) {
  EXPECT_TRUE(is_popular_weight(g, m1));
  EXPECT_TRUE(is_popular_weight(g, m2));
  EXPECT_FALSE(is_popular_weight(g, m3));
  EXPECT_TRUE(is_popular_structure(g, m1).popular);
  EXPECT_TRUE(is_popular_structure(g, m2).popular);
  StructureResult s3 = is_popular_structure(g, m3);
  EXPECT_FALSE(s3.popular);
  ASSERT_TRUE(s3.structure);
  EXPECT_FALSE(describe(g, *s3.structure).empty());
}

TEST_F(Example, MarginOfM3) {
  MarginResult r = max_margin_weight(g, m3);
  EXPECT_EQ(r.margin, 2);
  EXPECT_EQ(delta(g, r.better, m3), 2);
  EXPECT_EQ(max_margin_weight(g, m1).margin, 0);
  EXPECT_EQ(max_margin_weight(g, m2).margin, 0);
}

TEST_F(Example, Dominance) {
  DominanceResult d1 = check_dominant(g, m1);
  EXPECT_TRUE(d1.popular);
  EXPECT_FALSE(d1.dominant);
  EXPECT_EQ(names(g, d1.augmenting_path), (std::vector<std::string>{"b3", "a1", "b1", "a3"}));
  EXPECT_EQ(augmenting_path_in_gm(g, m1), d1.augmenting_path);
  EXPECT_TRUE(is_dominant(g, m2));
  EXPECT_TRUE(augmenting_path_in_gm(g, m2).empty());
  EXPECT_FALSE(is_dominant(g, m3));
}

TEST_F(Example, Witnesses) {
  Witness w = parse_witness(g, read_file(data_path("example_m2.witness")));
  EXPECT_TRUE(verify_witness(g, m2, w).ok);
  WitnessCheck zero = verify_witness(g, m2, Witness(g.size(), 0));
  EXPECT_FALSE(zero.ok);
  EXPECT_FALSE(zero.violations.empty());
  EXPECT_TRUE(verify_witness(g, m1, Witness(g.size(), 0)).ok);
  EXPECT_THROW(verify_witness(g, m1, Witness(2, 0)), ValidationError);

  auto found = find_witness_small(g, m2);
  ASSERT_TRUE(found);
  EXPECT_TRUE(verify_witness(g, m2, *found).ok);
  EXPECT_FALSE(find_witness_small(g, m3));
  EXPECT_THROW(find_witness_small(g, m2, 4), ValidationError);
}

TEST(Roommates, TriangleHasNoPopularMatching) {
  Instance tri = load("triangle.inst");
  for (const Matching& m : all_matchings(tri)) {
    EXPECT_FALSE(is_popular(tri, m)) << format_matching(tri, m);
    EXPECT_FALSE(is_popular_structure(tri, m).popular);
  }
}

TEST(Property, WitnessSumsToZero) {
  for (const Instance& g : random_corpus(300, 41)) {
    if (g.kind() != Kind::Marriage) continue;
    auto [d, w] = solve_dominant(g);
    ASSERT_EQ(std::accumulate(w.begin(), w.end(), 0), 0);
    for (int x = 0; x < g.size(); ++x)
      if (!d.matched(x)) ASSERT_EQ(w[x], 0);
  }
}

TEST(Property, WeightAndStructureAgreeOnMarriage) {
  Rng rng(42);
  for (const Instance& g : random_corpus(400, 42)) {
    if (g.kind() != Kind::Marriage) continue;
    for (int k = 0; k < 4; ++k) {
      Matching m = random_matching(rng, g);
      ASSERT_EQ(is_popular_weight(g, m), is_popular_structure(g, m).popular) << serialize_instance(g)
                                                                             << format_matching(g, m);
    }
  }
}

TEST(Property, WeightAndStructureAgreeOnLargerInstances) {
  Rng rng(47);
  std::uniform_int_distribution<int> side(7, 20);
  std::uniform_real_distribution<double> dens(0.1, 0.5);
  int popular = 0;
  for (int i = 0; i < 1000; ++i) {
    Instance g = random_marriage(rng, side(rng), side(rng), dens(rng));
    Matching m = i % 4 == 0 ? solve_stable(g) : random_matching(rng, g, 1.0);
    bool w = is_popular_weight(g, m);
    ASSERT_EQ(w, is_popular_structure(g, m).popular) << serialize_instance(g) << format_matching(g, m);
    popular += w;
  }
  EXPECT_GE(popular, 250);
}

TEST(Property, StructureAgreesWithOracleOnRoommates) {
  Rng rng(43);
  int checked = 0;
  while (checked < 150) {
    Instance g = random_roommates(rng, 3 + checked % 6, 0.5);
    ++checked;
    ExhaustiveReport r = classify_exhaustive(g);
    for (size_t i = 0; i < r.matchings.size(); ++i)
      ASSERT_EQ(is_popular_structure(g, r.matchings[i]).popular, static_cast<bool>(r.is_popular[i]))
          << serialize_instance(g) << format_matching(g, r.matchings[i]);
  }
}

TEST(Property, MaxMarginAttained) {
  Rng rng(44);
  for (const Instance& g : random_corpus(200, 44)) {
    if (g.kind() != Kind::Marriage || g.size() > 10) continue;
    Matching m = random_matching(rng, g);
    MarginResult r = max_margin_weight(g, m);
    long long best = 0;
    for (const Matching& n : all_matchings(g)) best = std::max<long long>(best, delta(g, n, m));
    ASSERT_EQ(r.margin, best);
    ASSERT_EQ(delta(g, r.better, m), best);
  }
}

TEST(Property, VertexSetContainments) {
  for (const Instance& g : random_corpus(300, 45)) {
    if (g.kind() != Kind::Marriage || g.size() > 10) continue;
    std::vector<int> vs = stable_vertex_set(g);
    std::vector<int> vd = matched_vertices(solve_dominant(g).first);
    ExhaustiveReport r = classify_exhaustive(g);
    for (int i : r.popular) {
      std::vector<int> vp = matched_vertices(r.matchings[i]);
      ASSERT_TRUE(std::includes(vp.begin(), vp.end(), vs.begin(), vs.end())) << serialize_instance(g);
      ASSERT_TRUE(std::includes(vd.begin(), vd.end(), vp.begin(), vp.end())) << serialize_instance(g);
    }
  }
}

TEST(Property, FoundWitnessesAreValid) {
  for (const Instance& g : random_corpus(200, 46)) {
    if (g.kind() != Kind::Marriage || g.size() > 10) continue;
    ExhaustiveReport r = classify_exhaustive(g);
    for (size_t i = 0; i < r.matchings.size(); ++i) {
      auto w = find_witness_small(g, r.matchings[i]);
      ASSERT_EQ(w.has_value(), static_cast<bool>(r.is_popular[i]));
      if (w) ASSERT_TRUE(verify_witness(g, r.matchings[i], *w).ok);
    }
  }
}
