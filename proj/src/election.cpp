#include "popmatch/election.hpp"

#include <algorithm>

namespace popmatch {

char vote_char(Vote v) { return v == Vote::Plus ? '+' : '-'; }

Vote vote(const Instance& inst, int u, int candidate, const Matching& m) {
  if (!inst.adjacent(u, candidate))
    throw ValidationError("vote on a non-adjacent pair (" + inst.name(u) + "," +
                          inst.name(candidate) + ")");
  if (m.partner(u) == candidate)
    throw ValidationError("vote on a matching edge (" + inst.name(u) + "," +
                          inst.name(candidate) + ")");
  return inst.prefers(u, candidate, m.partner(u)) ? Vote::Plus : Vote::Minus;
}

EdgeLabeling label_edges(const Instance& inst, const Matching& m) {
  EdgeLabeling out;
  for (const Edge& e : inst.edges()) {
    if (m.contains(e.u, e.v)) continue;
    out.push_back({e, vote(inst, e.u, e.v, m), vote(inst, e.v, e.u, m)});
  }
  return out;
}

bool Subgraph::contains(int u, int v) const {
  return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
}

Subgraph restricted_graph(const Instance& inst, const Matching& m) {
  Subgraph g;
  g.adj.resize(inst.size());
  for (const Edge& e : inst.edges()) {
    if (!m.contains(e.u, e.v) && !inst.prefers(e.u, e.v, m.partner(e.u)) &&
        !inst.prefers(e.v, e.u, m.partner(e.v)))
      continue;
    g.edges.push_back(e);
  }
  for (int u = 0; u < inst.size(); ++u)
    for (int v : inst.prefs(u))
      if (m.contains(u, v) || inst.prefers(u, v, m.partner(u)) || inst.prefers(v, u, m.partner(v)))
        g.adj[u].push_back(v);
  return g;
}

int edge_weight(const Instance& inst, const Matching& m, int u, int v) {
  if (m.contains(u, v)) return 0;
  int w = 0;
  w += inst.prefers(u, v, m.partner(u)) ? 1 : -1;
  w += inst.prefers(v, u, m.partner(v)) ? 1 : -1;
  return w;
}

EdgeWeighting weighting(const Instance& inst, const Matching& m) {
  EdgeWeighting w;
  w.edge.reserve(inst.edges().size());
  for (const Edge& e : inst.edges()) w.edge.push_back(edge_weight(inst, m, e.u, e.v));
  w.self.resize(inst.size());
  for (int v = 0; v < inst.size(); ++v) w.self[v] = m.matched(v) ? -1 : 0;
  return w;
}

long long EdgeWeighting::weight_of(const Instance& inst, const Matching& n) const {
  long long total = 0;
  const auto& es = inst.edges();
  for (size_t i = 0; i < es.size(); ++i)
    if (n.contains(es[i].u, es[i].v)) total += edge[i];
  for (int v = 0; v < inst.size(); ++v)
    if (!n.matched(v)) total += self[v];
  return total;
}

int phi(const Instance& inst, const Matching& m, const Matching& n) {
  int count = 0;
  for (int v = 0; v < inst.size(); ++v)
    if (inst.prefers(v, m.partner(v), n.partner(v))) ++count;
  return count;
}

int delta(const Instance& inst, const Matching& m, const Matching& n) {
  int d = 0;
  for (int v = 0; v < inst.size(); ++v) {
    int x = m.partner(v), y = n.partner(v);
    if (x == y) continue;
    if (inst.prefers(v, x, y))
      ++d;
    else
      --d;
  }
  return d;
}

}  // namespace popmatch
