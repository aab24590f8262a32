#include <gtest/gtest.h>

#include <algorithm>

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
  int v(const char* name) const { return g.id(name); }
};

std::vector<Instance> marriage_corpus(int count, unsigned long long seed) {
  std::vector<Instance> out;
  for (auto& g : random_corpus(count, seed))
    if (g.kind() == Kind::Marriage) out.push_back(std::move(g));
  return out;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_F(Example, StableMatching) {
  EXPECT_EQ(solve_stable(g), m1);
  EXPECT_EQ(gale_shapley(g, {}, Side::B), m1);
}

TEST_F(Example, DominantMatching) {
  auto [d, w] = solve_dominant(g);
  EXPECT_EQ(d, m2);
  EXPECT_TRUE(verify_witness(g, d, w).ok);
  EXPECT_EQ(w[v("a1")], 1);
  EXPECT_EQ(w[v("a2")], -1);
  EXPECT_EQ(w[v("b1")], 1);
  EXPECT_EQ(w[v("b2")], -1);
  EXPECT_EQ(w[v("a3")], 0);
}

TEST_F(Example, ForbiddenPair) {
  ProposalEngine e(g);
  e.forbid(v("a1"), v("b1"));
  e.run();
  EXPECT_EQ(e.matching(), m2);
  EXPECT_FALSE(e.stable_without_constraints());
  EXPECT_EQ(gale_shapley(g, {Matching(), {{v("a1"), v("b1")}}, {}}), m2);
}

TEST_F(Example, Cutoff) {
  ProposalEngine e(g);
  e.set_cutoff(v("b1"), 1);
  e.run();
  EXPECT_EQ(e.matching(), m1);
  e.clear();
  e.set_cutoff(v("b2"), 0);
  e.forbid(v("a1"), v("b1"));
  e.run();
  // a1 falls through to b3; a2 keeps b1.
  EXPECT_EQ(e.partner(v("a1")), v("b3"));
  EXPECT_EQ(e.partner(v("a2")), v("b1"));
  EXPECT_EQ(e.partner(v("b2")), kUnmatched);
}

TEST_F(Example, Seed) {
  ProposalEngine e(g);
  e.seed(v("a1"), v("b3"));
  e.run();
  EXPECT_EQ(e.partner(v("a1")), v("b3"));
  EXPECT_EQ(e.partner(v("a2")), v("b1"));
  EXPECT_FALSE(e.stable_without_constraints());
  e.clear();
  e.run();
  EXPECT_EQ(e.matching(), m1);
  EXPECT_TRUE(e.stable_without_constraints());
  EXPECT_EQ(e.runs(), 2);
}

TEST_F(Example, GPrime) {
  GPrime gp = build_gprime(g);
  EXPECT_EQ(gp.graph.size(), 3 * g.size());
  EXPECT_EQ(gp.graph.edge_count(), 2 * g.edge_count() + 2 * g.size());
  int a1 = v("a1");
  EXPECT_EQ(gp.graph.name(GPrime::plus(a1)), "a1+");
  EXPECT_EQ(gp.graph.name(GPrime::minus(a1)), "a1-");
  EXPECT_EQ(gp.graph.name(GPrime::dummy(a1)), "d(a1)");
  EXPECT_EQ(GPrime::original(GPrime::dummy(a1)), a1);
  EXPECT_EQ(GPrime::role(GPrime::minus(a1)), GPrime::Role::Minus);
  // u- ranks its dummy first, u+ ranks it last.
  EXPECT_EQ(gp.graph.prefs(GPrime::minus(a1)).front(), GPrime::dummy(a1));
  EXPECT_EQ(gp.graph.prefs(GPrime::plus(a1)).back(), GPrime::dummy(a1));

  Matching mp(gp.graph.size());
  mp.link(GPrime::plus(a1), GPrime::minus(v("b2")));
  mp.link(GPrime::minus(v("a2")), GPrime::plus(v("b1")));
  mp.link(GPrime::minus(a1), GPrime::dummy(a1));
  EXPECT_EQ(project(g, mp), m2);
  Witness w = gprime_witness(g, mp);
  EXPECT_EQ(w[a1], 1);
  EXPECT_EQ(w[v("b2")], -1);
  EXPECT_EQ(w[v("a2")], -1);
  EXPECT_EQ(w[v("b1")], 1);
}

TEST(Errors, RoommatesRejected) {
  Instance tri = load("triangle.inst");
  EXPECT_THROW(solve_stable(tri), ValidationError);
  EXPECT_THROW(solve_dominant(tri), ValidationError);
  EXPECT_THROW(build_gprime(tri), ValidationError);
  EXPECT_THROW(require_marriage(tri, "test"), ValidationError);
}

TEST(Property, GaleShapleyStableFromEitherSide) {
  for (const Instance& g : marriage_corpus(400, 31)) {
    Matching a = gale_shapley(g, {}, Side::A);
    Matching b = gale_shapley(g, {}, Side::B);
    ASSERT_TRUE(is_stable(g, a).stable) << serialize_instance(g);
    ASSERT_TRUE(is_stable(g, b).stable) << serialize_instance(g);
    ASSERT_EQ(matched_vertices(a), matched_vertices(b));
  }
}

TEST(Property, ProposerOptimal) {
  // Every stable matching gives each proposer a partner no better than GS.
  for (const Instance& g : marriage_corpus(200, 32)) {
    Matching gs = solve_stable(g);
    enumerate_stable_matchings(g, [&](const Matching& s) {
      for (int u = 0; u < g.size(); ++u)
        if (g.side(u) == Side::A) EXPECT_FALSE(g.prefers(u, s.partner(u), gs.partner(u)));
      return true;
    });
  }
}

TEST(Property, RuralHospitals) {
  for (const Instance& g : marriage_corpus(300, 33)) {
    std::vector<int> vs = stable_vertex_set(g);
    enumerate_stable_matchings(g, [&](const Matching& s) {
      EXPECT_EQ(matched_vertices(s), vs) << serialize_instance(g);
      return true;
    });
  }
}

TEST(Property, DominantMatchings) {
  for (const Instance& g : marriage_corpus(300, 34)) {
    auto [d, w] = solve_dominant(g);
    ASSERT_TRUE(verify_witness(g, d, w).ok) << serialize_instance(g);
    ASSERT_TRUE(is_popular(g, d));
    ASSERT_TRUE(subset(stable_vertex_set(g), matched_vertices(d)));
    if (g.size() <= 10) {
      ExhaustiveReport r = classify_exhaustive(g);
      int i = r.index_of(d);
      ASSERT_GE(i, 0);
      ASSERT_TRUE(r.is_dominant[i]) << serialize_instance(g);
      ASSERT_EQ(d.edge_count(), r.max_popular_size);
    }
  }
}

TEST(Property, FeasibleUnderConstraints) {
  // With random forbidden pairs the result is stable in the reduced instance.
  Rng rng(35);
  for (const Instance& g : marriage_corpus(200, 35)) {
    if (g.edge_count() == 0) continue;
    ProposalConstraints c;
    std::vector<std::vector<int>> prefs = g.all_prefs();
    std::bernoulli_distribution drop(0.3);
    for (Edge e : g.edges()) {
      if (!drop(rng)) continue;
      int a = g.side(e.u) == Side::A ? e.u : e.v, b = a == e.u ? e.v : e.u;
      c.forbidden.push_back({a, b});
      std::erase(prefs[a], b);
      std::erase(prefs[b], a);
    }
    Instance reduced = Instance::make(g.kind(), g.names(), g.sides(), prefs);
    Matching m = gale_shapley(g, c);
    ASSERT_TRUE(is_stable(reduced, m).stable) << serialize_instance(g);
    ASSERT_EQ(m, solve_stable(reduced));
  }
}
