#include <gtest/gtest.h>

#include <algorithm>

#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/proposal_engine.hpp"
#include "popmatch/reductions.hpp"
#include "test_support.hpp"

using namespace popmatch;
using namespace popmatch::testing;

namespace {

CnfFormula random_formula(Rng& rng, int max_vars, int max_clauses) {
  std::uniform_int_distribution<int> nv(1, max_vars), nc(1, max_clauses), arity(2, 3);
  std::bernoulli_distribution neg(0.5);
  CnfFormula f;
  f.num_vars = nv(rng);
  std::uniform_int_distribution<int> var(1, f.num_vars);
  for (int c = nc(rng); c > 0; --c) {
    std::vector<Literal> cl;
    for (int k = arity(rng); k > 0; --k) cl.push_back({var(rng), neg(rng)});
    f.clauses.push_back(cl);
  }
  return f;
}

std::vector<bool> bits(int n, unsigned mask) {
  std::vector<bool> a(n);
  for (int i = 0; i < n; ++i) a[i] = mask >> i & 1;
  return a;
}

CnfFormula x1_or_x2() { return parse_dimacs(read_file(data_path("x1_or_x2.cnf"))); }

}  // namespace

TEST(Dimacs, Parse) {
  CnfFormula f = parse_dimacs("c hello\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n");
  EXPECT_EQ(f.num_vars, 3);
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[0], (std::vector<Literal>{{1, false}, {2, true}}));
  EXPECT_EQ(f.clauses[1], (std::vector<Literal>{{2, false}, {3, false}, {1, true}}));
  CnfFormula g = parse_dimacs("p cnf 1 1\n1 0\n%\n0\n");
  EXPECT_EQ(g.clauses.size(), 1u);
  EXPECT_EQ(x1_or_x2().clauses.size(), 1u);
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("1 2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs(""), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
  try {
    parse_dimacs("p cnf 2 1\n1 3 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  try {
    parse_dimacs("p cnf 2 1\n1 y 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Dimacs, RoundTrip) {
  Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    CnfFormula f = random_formula(rng, 6, 8);
    CnfFormula g = parse_dimacs(to_dimacs(f));
    ASSERT_EQ(g.num_vars, f.num_vars);
    ASSERT_EQ(g.clauses, f.clauses);
  }
}

TEST(Normalize, SingleClause) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  EXPECT_EQ(nf.n, 2);
  EXPECT_EQ(nf.m, 1);
  EXPECT_EQ(nf.clause_count(), 5);
  EXPECT_EQ(nf.clauses, (std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 4}, {1, 3}, {2, 4}}));
  EXPECT_FALSE(nf.negative(2));
  EXPECT_TRUE(nf.negative(3));
  CnfFormula back = nf.as_cnf();
  ASSERT_EQ(back.num_vars, 4);
  EXPECT_EQ(back.clauses[3], (std::vector<Literal>{{1, true}, {3, true}}));
  EXPECT_EQ(back.clauses[1], (std::vector<Literal>{{1, false}, {3, false}}));
}

TEST(Normalize, NegatedLiteralsUseComplements) {
  NormalizedFormula nf = normalize_3sat(cnf(3, {{-1, 2, -3}}));
  EXPECT_EQ(nf.clauses[0], (std::vector<int>{4, 2, 6}));
  EXPECT_EQ(nf.clause_count(), 7);
}

TEST(Normalize, ArityErrors) {
  EXPECT_THROW(normalize_3sat(cnf(1, {{1}})), ValidationError);
  EXPECT_THROW(normalize_3sat(cnf(4, {{1, 2, 3, 4}})), ValidationError);
  EXPECT_THROW(normalize_3sat(cnf(2, {{1, 3}})), ValidationError);
  EXPECT_NO_THROW(normalize_3sat(cnf(1, {{1, 1}})));
}

TEST(Property, NormalizationPreservesSatisfiability) {
  Rng rng(72);
  for (int i = 0; i < 300; ++i) {
    CnfFormula f = random_formula(rng, 5, 10);
    NormalizedFormula nf = normalize_3sat(f);
    auto a = brute_sat(f);
    auto b = brute_sat(nf.as_cnf());
    ASSERT_EQ(a.has_value(), b.has_value()) << to_dimacs(f);
    if (a) ASSERT_TRUE(satisfies(nf.as_cnf(), expand_assignment(nf, *a)));
  }
}

TEST(Targets, Names) {
  for (Target t : {Target::G4, Target::G4Max, Target::G5, Target::HMin, Target::HRoom})
    EXPECT_EQ(parse_target(target_name(t)), t);
  EXPECT_THROW(parse_target("g6"), ValidationError);
}

TEST(Build, Sizes) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  const std::vector<std::pair<Target, int>> want = {
      {Target::G4, 54}, {Target::G5, 72}, {Target::G4Max, 58}, {Target::HMin, 76}, {Target::HRoom, 75}};
  for (auto [t, n] : want) {
    auto [inst, gm] = build_target(nf, t);
    EXPECT_EQ(inst.size(), n) << target_name(t);
    EXPECT_EQ(gm.gadgets.size(), 10u);
    EXPECT_EQ(gm.target, t);
    EXPECT_EQ(inst.kind(), t == Target::HRoom ? Kind::Roommates : Kind::Marriage);
  }
}

TEST(Build, NondominantGadgetStructure) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  auto [g, gm] = build_nondominant_gadget(nf);
  EXPECT_EQ(gm.basic.size(), static_cast<size_t>(nf.clause_count() + 1));
  for (Edge e : gm.basic) EXPECT_TRUE(g.adjacent(e.u, e.v));
  int s = gm.vertex("s"), t = gm.vertex("t");
  EXPECT_EQ(g.degree(s), 1);
  EXPECT_EQ(g.degree(t), 1);
  for (const LiteralGadget& lg : gm.gadgets) {
    EXPECT_EQ(lg.negative, nf.negative(lg.clause));
    EXPECT_EQ(lg.var, nf.clauses[lg.clause][lg.position]);
    EXPECT_TRUE(g.adjacent(lg.x, lg.y) && g.adjacent(lg.x2, lg.y2));
    EXPECT_TRUE(g.adjacent(lg.x, lg.y2) && g.adjacent(lg.x2, lg.y));
  }
  // Each consistency edge ties a positive gadget to the negative gadget of its variable.
  for (Edge e : gm.consistency) {
    bool ok = false;
    for (const LiteralGadget& lg : gm.gadgets) {
      if (lg.negative) continue;
      const LiteralGadget& ng = gm.gadgets[gm.negative_gadget[lg.var]];
      for (int p : {lg.x, lg.y})
        for (int q : {ng.x, ng.y, ng.x2, ng.y2}) ok |= Edge{std::min(p, q), std::max(p, q)} == e;
    }
    EXPECT_TRUE(ok) << format_edge(g, e);
  }
  EXPECT_FALSE(gm.consistency.empty());
}

TEST(Build, StableMatchingsUseBasicEdges) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  for (Target t : {Target::G4, Target::G5}) {
    auto [g, gm] = build_target(nf, t);
    EnumerationStatus st = enumerate_stable_matchings(g, [&](const Matching& m) {
      EXPECT_FALSE(m.matched(gm.vertex("s")));
      EXPECT_FALSE(m.matched(gm.vertex("t")));
      for (Edge e : gm.basic) EXPECT_TRUE(m.contains(e.u, e.v));
      for (Edge e : gm.consistency) EXPECT_FALSE(m.contains(e.u, e.v));
      return true;
    });
    EXPECT_TRUE(st.complete);
    EXPECT_GT(st.count, 0);
  }
}

TEST(Build, Augmentations) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  auto [g4, m4] = build_nondominant_gadget(nf);
  auto [g5, m5] = build_stable_dominant_gadget(nf);
  auto [gmax, mmax] = augment_max_size(g4, m4);
  EXPECT_EQ(gmax.size(), g4.size() + 4);
  for (const char* r : {"p0", "p1", "q0", "q1"}) EXPECT_NO_THROW(mmax.vertex(r));
  auto [gmin, mmin] = augment_min_size(g5, m5);
  EXPECT_EQ(gmin.size(), g5.size() + 4);
  for (const char* r : {"w", "t'", "r", "r'"}) EXPECT_NO_THROW(mmin.vertex(r));
  auto [groom, mroom] = augment_roommates(g5, m5);
  EXPECT_EQ(groom.size(), g5.size() + 3);
  EXPECT_EQ(groom.kind(), Kind::Roommates);
  int r = mroom.vertex("r"), r1 = mroom.vertex("r'"), r2 = mroom.vertex("r''");
  EXPECT_TRUE(groom.adjacent(r, r1) && groom.adjacent(r1, r2) && groom.adjacent(r2, r));

  EXPECT_THROW(augment_max_size(g5, m5), ValidationError);
  EXPECT_THROW(augment_min_size(g4, m4), ValidationError);
  EXPECT_THROW(augment_roommates(g4, m4), ValidationError);
}

TEST(Assignment, Expand) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  EXPECT_EQ(expand_assignment(nf, {true, false}), (std::vector<bool>{true, false, false, true}));
  EXPECT_EQ(expand_assignment(nf, {true, false, false, true}), (std::vector<bool>{true, false, false, true}));
  EXPECT_THROW(expand_assignment(nf, {true}), ValidationError);
  EXPECT_THROW(expand_assignment(nf, {true, false, true, true}), ValidationError);
}

TEST(Assignment, RoundTripAllTargets) {
  for (const auto& [name, f] : curated_formulas()) {
    NormalizedFormula nf = normalize_3sat(f);
    for (Target t : {Target::G4, Target::G5, Target::G4Max, Target::HMin, Target::HRoom}) {
      auto [g, gm] = build_target(nf, t);
      for (unsigned mask = 0; mask < (1u << nf.n); ++mask) {
        std::vector<bool> a = bits(nf.n, mask);
        if (!satisfies(f, a)) continue;
        Matching base = assignment_to_matching(g, nf, gm, a);
        Matching m = lift_matching(g, gm, base);
        std::string where = name + " " + target_name(t);
        switch (t) {
          case Target::G4:
          case Target::G5:
            ASSERT_TRUE(is_stable(g, m).stable) << where;
            ASSERT_EQ(matching_to_assignment(g, nf, gm, m), expand_assignment(nf, a)) << where;
            ASSERT_EQ(is_dominant(g, m), t == Target::G5) << where;
            break;
          case Target::G4Max:
            ASSERT_TRUE(is_popular(g, m)) << where;
            ASSERT_FALSE(is_dominant(g, m)) << where;
            ASSERT_EQ(m.edge_count(), solve_dominant(g).first.edge_count()) << where;
            break;
          case Target::HMin:
            ASSERT_TRUE(is_popular(g, m)) << where;
            ASSERT_FALSE(is_stable(g, m).stable) << where;
            ASSERT_EQ(m.edge_count(), solve_stable(g).edge_count()) << where;
            break;
          case Target::HRoom:
            ASSERT_TRUE(is_popular_structure(g, m).popular) << where;
            break;
        }
      }
    }
  }
}

TEST(Assignment, AllFalseOnG4IsStable) {
  CnfFormula f = parse_dimacs(read_file(data_path("contradiction.cnf")));
  NormalizedFormula nf = normalize_3sat(f);
  auto [g, gm] = build_nondominant_gadget(nf);
  Matching m = assignment_to_matching(g, nf, gm, std::vector<bool>(nf.n, false));
  EXPECT_TRUE(is_stable(g, m).stable);
  EXPECT_EQ(matching_to_assignment(g, nf, gm, m), expand_assignment(nf, std::vector<bool>(nf.n, false)));
}

TEST(Assignment, UnstableMatchingRejected) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  auto [g, gm] = build_nondominant_gadget(nf);
  EXPECT_THROW(matching_to_assignment(g, nf, gm, Matching(g.size())), ValidationError);
  EXPECT_THROW(matching_to_assignment(g, nf, gm, Matching(3)), ValidationError);
}

TEST(Property, StableAndDominantVertexSetsAgreeOnG4) {
  for (const auto& [name, f] : curated_formulas()) {
    auto [g, gm] = build_nondominant_gadget(normalize_3sat(f));
    EXPECT_EQ(stable_vertex_set(g), matched_vertices(solve_dominant(g).first)) << name;
  }
}

TEST(Property, SmallFormulasVerified) {
  Rng rng(73);
  for (int i = 0; i < 16; ++i) {
    CnfFormula f = random_formula(rng, 3, 4);
    for (Target t : {Target::G4, Target::G5}) {
      ReductionReport r = verify_reduction(f, t);
      ASSERT_EQ(r.satisfiable, brute_sat(f).has_value());
      ASSERT_TRUE(r.confirmed()) << to_dimacs(f) << format_report(r);
      for (const auto& c : r.checks) ASSERT_TRUE(c.exact) << c.statement;
    }
  }
}

TEST(Verify, ReportFormat) {
  ReductionReport r = verify_reduction(x1_or_x2(), Target::G5);
  std::string text = format_report(r);
  EXPECT_EQ(text.rfind("target g5: formula SAT, 72 vertices", 0), 0u);
  EXPECT_NE(text.find("CONFIRMED"), std::string::npos);
  EXPECT_EQ(text.find("FAILED"), std::string::npos);
}

TEST(Serialize, GadgetInstanceRoundTrip) {
  NormalizedFormula nf = normalize_3sat(x1_or_x2());
  for (Target t : {Target::G4, Target::HMin, Target::HRoom}) {
    auto [g, gm] = build_target(nf, t);
    EXPECT_EQ(parse_instance(serialize_gadget_instance(g, gm)), g);
    std::string map = serialize_gadget_map(g, gm);
    EXPECT_EQ(map.rfind(std::string("target ") + target_name(t) + "\n", 0), 0u);
    EXPECT_NE(map.find("\ns s\n"), std::string::npos);
    EXPECT_NE(map.find("a[X1@C1.1] a1_1"), std::string::npos);
  }
}
