#include <gtest/gtest.h>

#include "popmatch/classifier.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "test_support.hpp"

using namespace popmatch;
using namespace popmatch::testing;

namespace {

struct Example : ::testing::Test {
  Instance g = load("example.inst");
  Matching m1 = load_matching(g, "example_m1.match");
  Matching m2 = load_matching(g, "example_m2.match");
  Matching m3 = load_matching(g, "example_m3.match");
  Witness w2 = parse_witness(g, read_file(data_path("example_m2.witness")));
  int v(const char* name) const { return g.id(name); }
};

std::vector<Instance> small_marriage(int count, unsigned long long seed) {
  std::vector<Instance> out;
  for (auto& g : random_corpus(count, seed))
    if (g.kind() == Kind::Marriage && g.size() <= 10) out.push_back(std::move(g));
  return out;
}

}  // namespace

TEST_F(Example, UnstablePopularExists) {
  ClassifierStats stats;
  auto m = exists_unstable_popular(g, &stats);
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, m2);
  EXPECT_GE(stats.solver_runs, 1);
  auto p = exists_unstable_popular_pairwise(g);
  ASSERT_TRUE(p);
  EXPECT_TRUE(is_popular(g, *p));
  EXPECT_FALSE(is_stable(g, *p).stable);
}

TEST(Classifier, SingleEdgeHasNone) {
  Instance g = parse_instance("marriage\nA a\nB b\na: b\nb: a\n");
  EXPECT_FALSE(exists_unstable_popular(g));
  EXPECT_FALSE(exists_unstable_popular_pairwise(g));
  Instance empty = parse_instance("marriage\nA a\nB b\n");
  EXPECT_FALSE(exists_unstable_popular(empty));
}

TEST(Classifier, RoommatesRejected) {
  EXPECT_THROW(exists_unstable_popular(load("triangle.inst")), ValidationError);
  EXPECT_THROW(exists_unstable_popular_pairwise(load("triangle.inst")), ValidationError);
}

TEST_F(Example, Decompose) {
  WitnessDecomposition d = decompose(g, m2, w2);
  EXPECT_EQ(d.a1, (std::vector<int>{v("a1")}));
  EXPECT_EQ(d.b1, (std::vector<int>{v("b1")}));
  EXPECT_EQ(d.a_minus1, (std::vector<int>{v("a2")}));
  EXPECT_EQ(d.b_minus1, (std::vector<int>{v("b2")}));
  EXPECT_EQ(d.a0, (std::vector<int>{v("a3")}));
  EXPECT_EQ(d.b0, (std::vector<int>{v("b3")}));
  EXPECT_TRUE(d.m0.empty());
  EXPECT_EQ(d.m1.size(), 2u);

  WitnessDecomposition z = decompose(g, m1, Witness(g.size(), 0));
  EXPECT_EQ(z.m0.size(), 2u);
  EXPECT_TRUE(z.m1.empty());
  EXPECT_THROW(decompose(g, m2, Witness(g.size(), 0)), ValidationError);
}

TEST_F(Example, Transformations) {
  auto [dom, wd] = to_unstable_dominant(g, m2, w2);
  EXPECT_TRUE(is_dominant(g, dom));
  EXPECT_FALSE(is_stable(g, dom).stable);
  EXPECT_TRUE(verify_witness(g, dom, wd).ok);

  Matching s = to_nondominant_stable(g, m1, Witness(g.size(), 0));
  EXPECT_EQ(s, m1);
}

TEST_F(Example, TransformationErrors) {
  EXPECT_THROW(to_unstable_dominant(g, m1, Witness(g.size(), 0)), ValidationError);
  EXPECT_THROW(to_nondominant_stable(g, m2, w2), ValidationError);
  EXPECT_THROW(to_unstable_dominant(g, m3, Witness(g.size(), 0)), ValidationError);
}

TEST(Property, AgreesWithOracle) {
  int yes = 0, total = 0;
  for (const Instance& g : small_marriage(500, 51)) {
    ExhaustiveReport r = classify_exhaustive(g);
    bool want = false;
    for (int i : r.popular) want |= !r.is_stable[i];
    auto got = exists_unstable_popular(g);
    auto pairwise = exists_unstable_popular_pairwise(g);
    ASSERT_EQ(got.has_value(), want) << serialize_instance(g);
    ASSERT_EQ(pairwise.has_value(), want) << serialize_instance(g);
    for (const auto& m : {got, pairwise}) {
      if (!m) continue;
      int i = r.index_of(*m);
      ASSERT_GE(i, 0);
      ASSERT_TRUE(r.is_popular[i]);
      ASSERT_FALSE(r.is_stable[i]);
    }
    if (got) ASSERT_TRUE(r.is_dominant[r.index_of(*got)]);
    yes += want;
    ++total;
  }
  EXPECT_GT(yes, 0);
  EXPECT_LT(yes, total);
}

TEST(Property, TransformationsPreserveClass) {
  long long unstable = 0, nondominant = 0;
  for (const Instance& g : small_marriage(300, 52)) {
    ExhaustiveReport r = classify_exhaustive(g);
    for (int i : r.popular) {
      const Matching& m = r.matchings[i];
      for (const Witness& w : all_witnesses(g, m)) {
        if (!r.is_stable[i]) {
          auto [d, wd] = to_unstable_dominant(g, m, w);
          int j = r.index_of(d);
          ASSERT_TRUE(r.is_dominant[j]) << serialize_instance(g);
          ASSERT_FALSE(r.is_stable[j]);
          ASSERT_TRUE(verify_witness(g, d, wd).ok);
          ++unstable;
        }
        if (!r.is_dominant[i]) {
          int j = r.index_of(to_nondominant_stable(g, m, w));
          ASSERT_TRUE(r.is_stable[j]) << serialize_instance(g);
          ASSERT_FALSE(r.is_dominant[j]);
          ++nondominant;
        }
      }
    }
  }
  EXPECT_GT(unstable, 0);
  EXPECT_GT(nondominant, 0);
}
