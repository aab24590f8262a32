#include "popmatch/classifier.hpp"

#include "popmatch/popularity.hpp"
#include "popmatch/proposal_engine.hpp"

namespace popmatch {

WitnessDecomposition decompose(const Instance& inst, const Matching& m, const Witness& w) {
  require_marriage(inst, "witness decomposition");
  auto check = verify_witness(inst, m, w);
  if (!check.ok) throw ValidationError("invalid witness: " + check.violations.front());
  WitnessDecomposition d;
  for (int v = 0; v < inst.size(); ++v) {
    bool a = inst.side(v) == Side::A;
    switch (w[v]) {
      case 0: (a ? d.a0 : d.b0).push_back(v); break;
      case 1: (a ? d.a1 : d.b1).push_back(v); break;
      case -1: (a ? d.a_minus1 : d.b_minus1).push_back(v); break;
      default: throw ValidationError("witness value outside {-1,0,1}");
    }
  }
  for (Edge e : m.edges()) {
    if (w[e.u] + w[e.v] != 0) throw ValidationError("matching edge " + format_edge(inst, e) + " is not tight");
    (w[e.u] == 0 ? d.m0 : d.m1).push_back(e);
  }
  return d;
}

namespace {

std::vector<int> concat(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

}  // namespace

std::pair<Matching, Witness> to_unstable_dominant(const Instance& inst, const Matching& m,
                                                  const Witness& w) {
  require_marriage(inst, "to_unstable_dominant");
  if (!is_popular(inst, m)) throw ValidationError("matching is not popular");
  if (is_stable(inst, m).stable) throw ValidationError("matching is stable");
  WitnessDecomposition d = decompose(inst, m, w);

  std::vector<int> zero = concat(d.a0, d.b0);
  std::vector<int> to_sub;
  Instance g0 = induced_subinstance(inst, zero, &to_sub);
  std::vector<int> to_orig(g0.size());
  for (int v = 0; v < inst.size(); ++v)
    if (to_sub[v] >= 0) to_orig[to_sub[v]] = v;

  GPrime gp = build_gprime(g0);
  ProposalEngine eng(gp.graph);
  for (Edge e : d.m0) {
    int a = inst.side(e.u) == Side::A ? e.u : e.v;
    int b = a == e.u ? e.v : e.u;
    eng.seed(GPrime::plus(to_sub[a]), GPrime::minus(to_sub[b]));
  }
  eng.run();
  Matching dprime = eng.matching();
  Matching dsub = project(g0, dprime);
  Witness beta_sub = gprime_witness(g0, dprime);

  Matching star(inst.size());
  for (Edge e : d.m1) star.link(e.u, e.v);
  for (Edge e : dsub.edges()) star.link(to_orig[e.u], to_orig[e.v]);
  Witness beta = w;
  for (int i = 0; i < g0.size(); ++i) beta[to_orig[i]] = beta_sub[i];
  return {star, beta};
}

Matching to_nondominant_stable(const Instance& inst, const Matching& m, const Witness& w) {
  require_marriage(inst, "to_nondominant_stable");
  auto dom = check_dominant(inst, m);
  if (!dom.popular) throw ValidationError("matching is not popular");
  if (dom.dominant) throw ValidationError("matching is dominant");
  WitnessDecomposition d = decompose(inst, m, w);

  std::vector<int> rest = concat(concat(d.a1, d.a_minus1), concat(d.b1, d.b_minus1));
  std::vector<int> to_sub;
  Instance g1 = induced_subinstance(inst, rest, &to_sub);
  std::vector<int> to_orig(g1.size());
  for (int v = 0; v < inst.size(); ++v)
    if (to_sub[v] >= 0) to_orig[to_sub[v]] = v;

  ProposalEngine eng(g1);
  for (Edge e : d.m1) {
    int a = inst.side(e.u) == Side::A ? e.u : e.v;
    int b = a == e.u ? e.v : e.u;
    if (w[a] == -1 && w[b] == 1) eng.seed(to_sub[a], to_sub[b]);
  }
  eng.run();
  Matching n(inst.size());
  for (Edge e : d.m0) n.link(e.u, e.v);
  for (Edge e : eng.matching().edges()) n.link(to_orig[e.u], to_orig[e.v]);
  return n;
}

namespace {

bool is_real(int x) { return x != kUnmatched && GPrime::role(x) != GPrime::Role::Dummy; }

}  // namespace

std::optional<Matching> exists_unstable_popular(const Instance& inst, ClassifierStats* stats) {
  require_marriage(inst, "exists_unstable_popular");
  GPrime gp = build_gprime(inst);
  ProposalEngine eng(gp.graph);
  std::optional<Matching> found;
  for (Edge e : inst.edges()) {
    int a = inst.side(e.u) == Side::A ? e.u : e.v;
    int b = a == e.u ? e.v : e.u;
    const int rab = inst.rank(a, b), rba = inst.rank(b, a);
    eng.clear();
    eng.set_cutoff(GPrime::minus(b), 1);
    for (int i = 0; i < rab - 1; ++i) eng.forbid(GPrime::plus(a), GPrime::minus(inst.prefs(a)[i]));
    eng.run();
    if (!eng.stable_without_constraints()) continue;
    if (is_real(eng.partner(GPrime::minus(a)))) continue;
    int pa = eng.partner(GPrime::plus(a));
    if (!is_real(pa) || inst.rank(a, GPrime::original(pa)) <= rab) continue;
    int pb = eng.partner(GPrime::plus(b));
    if (!is_real(pb) || inst.rank(b, GPrime::original(pb)) <= rba) continue;
    found = project(inst, eng.matching());
    break;
  }
  if (stats) stats->solver_runs = eng.runs();
  return found;
}

std::optional<Matching> exists_unstable_popular_pairwise(const Instance& inst, ClassifierStats* stats) {
  require_marriage(inst, "exists_unstable_popular_pairwise");
  GPrime gp = build_gprime(inst);
  ProposalEngine eng(gp.graph);
  std::optional<Matching> found;
  for (Edge e : inst.edges()) {
    int a = inst.side(e.u) == Side::A ? e.u : e.v;
    int b = a == e.u ? e.v : e.u;
    const int rab = inst.rank(a, b), rba = inst.rank(b, a);
    for (int i = rab; i < inst.degree(a) && !found; ++i) {
      int v = inst.prefs(a)[i];
      for (int j = rba; j < inst.degree(b) && !found; ++j) {
        int u = inst.prefs(b)[j];
        eng.clear();
        eng.set_cutoff(GPrime::plus(b), gp.graph.rank(GPrime::plus(b), GPrime::minus(u)));
        eng.set_cutoff(GPrime::minus(v), gp.graph.rank(GPrime::minus(v), GPrime::plus(a)));
        eng.run();
        if (eng.partner(GPrime::plus(a)) != GPrime::minus(v)) continue;
        if (eng.partner(GPrime::plus(b)) != GPrime::minus(u)) continue;
        if (!eng.stable_without_constraints()) continue;
        found = project(inst, eng.matching());
      }
    }
    if (found) break;
  }
  if (stats) stats->solver_runs = eng.runs();
  return found;
}

}  // namespace popmatch
