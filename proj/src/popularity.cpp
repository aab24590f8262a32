#include "popmatch/popularity.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "boost_mwm/maximum_weighted_matching.hpp"
#include "popmatch/election.hpp"
#include "popmatch/proposal_engine.hpp"

namespace popmatch {

StabilityResult is_stable(const Instance& inst, const Matching& m) {
  for (const Edge& e : inst.edges()) {
    if (m.contains(e.u, e.v)) continue;
    if (inst.prefers(e.u, e.v, m.partner(e.u)) && inst.prefers(e.v, e.u, m.partner(e.v)))
      return {false, e};
  }
  return {true, std::nullopt};
}

namespace {

// Maximum-weight perfect assignment on a square matrix; row_to_col[i] is the
// column of row i.
long long hungarian_max(const std::vector<std::vector<long long>>& w,
                        std::vector<int>& row_to_col) {
  const int n = static_cast<int>(w.size());
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      long long d = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        long long cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < d) {
          d = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += d;
          v[j] -= d;
        } else {
          minv[j] -= d;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  row_to_col.assign(n, -1);
  long long total = 0;
  for (int j = 1; j <= n; ++j) {
    row_to_col[p[j] - 1] = j - 1;
    total += w[p[j] - 1][j - 1];
  }
  return total;
}

}  // namespace

MarginResult max_margin_weight(const Instance& inst, const Matching& m) {
  require_marriage(inst, "the weight-based popularity test");
  std::vector<int> as, bs;
  for (int v = 0; v < inst.size(); ++v) (inst.side(v) == Side::A ? as : bs).push_back(v);
  const int na = static_cast<int>(as.size()), nb = static_cast<int>(bs.size());
  const int n = na + nb;
  const long long neg = -(4LL * n + 8);
  std::vector<int> pos(inst.size());
  for (int i = 0; i < na; ++i) pos[as[i]] = i;
  for (int j = 0; j < nb; ++j) pos[bs[j]] = j;

  // Rows: A then B-hat; columns: B then A-hat.
  std::vector<std::vector<long long>> w(n, std::vector<long long>(n, neg));
  for (int i = 0; i < na; ++i) {
    int a = as[i];
    for (int b : inst.prefs(a)) w[i][pos[b]] = edge_weight(inst, m, a, b);
    w[i][nb + i] = m.matched(a) ? -1 : 0;
  }
  for (int j = 0; j < nb; ++j) {
    w[na + j][j] = m.matched(bs[j]) ? -1 : 0;
    for (int i = 0; i < na; ++i) w[na + j][nb + i] = 0;
  }
  std::vector<int> assign;
  long long best = n == 0 ? 0 : hungarian_max(w, assign);
  MarginResult r{best, Matching(inst.size())};
  for (int i = 0; i < na; ++i) {
    int c = assign.empty() ? -1 : assign[i];
    if (c >= 0 && c < nb) r.better.link(as[i], bs[c]);
  }
  return r;
}

bool is_popular_weight(const Instance& inst, const Matching& m) {
  return max_margin_weight(inst, m).margin <= 0;
}

namespace {

using Structure = ForbiddenStructure;

// Alternating reachability on (vertex, next-edge-kind) states. Exact for
// bipartite graphs, where a shortest state walk never repeats a vertex.
StructureResult structure_bipartite(const Instance& inst, const Matching& m) {
  const int n = inst.size();
  auto in_gm = [&](int u, int v) {
    return inst.prefers(u, v, m.partner(u)) || inst.prefers(v, u, m.partner(v));
  };
  auto blocks = [&](int u, int v) {
    return inst.prefers(u, v, m.partner(u)) && inst.prefers(v, u, m.partner(v));
  };
  std::vector<int> first_block(n, -1);
  for (int v = 0; v < n; ++v)
    for (int w : inst.prefs(v))
      if (w != m.partner(v) && blocks(v, w)) {
        first_block[v] = w;
        break;
      }

  // state 2v: next edge is a non-matching edge; 2v+1: next edge is v's matching edge.
  std::vector<int> parent(2 * n, -2);
  std::vector<int> origin(2 * n, -1);
  std::vector<int> queue;
  auto bfs = [&](auto&& is_target) -> int {
    for (size_t h = 0; h < queue.size(); ++h) {
      int s = queue[h];
      int v = s / 2;
      if (s % 2 == 0) {
        if (is_target(v)) return s;
        for (int w : inst.prefs(v)) {
          if (w == m.partner(v) || !in_gm(v, w)) continue;
          int t = 2 * w + 1;
          if (parent[t] != -2) continue;
          parent[t] = s;
          queue.push_back(t);
        }
      } else if (m.matched(v)) {
        int t = 2 * m.partner(v);
        if (parent[t] != -2) continue;
        parent[t] = s;
        queue.push_back(t);
      }
    }
    return -1;
  };
  auto trace = [&](int s) {
    std::vector<int> path;
    for (; s >= 0; s = parent[s]) path.push_back(s / 2);
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto close_or_path = [&](std::vector<int> path, int t, Structure::Kind open_kind) {
    auto it = std::find(path.begin(), path.end(), t);
    if (it != path.end()) return Structure{Structure::Kind::CycleWithBlockingEdge,
                                           std::vector<int>(it, path.end())};
    path.push_back(t);
    return Structure{open_kind, path};
  };

  for (int u = 0; u < n; ++u)
    if (!m.matched(u)) {
      parent[2 * u] = -1;
      queue.push_back(2 * u);
    }
  int hit = bfs([&](int v) { return first_block[v] >= 0; });
  if (hit >= 0) {
    int s = hit / 2;
    return {false, close_or_path(trace(hit), first_block[s], Structure::Kind::PathFromUnmatched)};
  }

  std::fill(parent.begin(), parent.end(), -2);
  queue.clear();
  for (int v = 0; v < n; ++v)
    for (int w : inst.prefs(v)) {
      if (w == m.partner(v) || !blocks(v, w)) continue;
      int t = 2 * w + 1;
      if (parent[t] != -2) continue;
      parent[t] = -1;
      origin[t] = v;
      queue.push_back(t);
    }
  hit = bfs([&](int v) { return first_block[v] >= 0; });
  if (hit < 0) return {};
  std::vector<int> path = trace(hit);
  int root = hit;
  while (parent[root] >= 0) root = parent[root];
  int s1 = origin[root];
  int t2 = first_block[hit / 2];
  if (std::find(path.begin(), path.end(), t2) != path.end())
    return {false, close_or_path(path, t2, Structure::Kind::PathWithTwoBlockingEdges)};
  auto it = std::find(path.begin(), path.end(), s1);
  if (it != path.end()) {
    std::vector<int> cyc{s1};
    cyc.insert(cyc.end(), path.begin(), it);
    return {false, Structure{Structure::Kind::CycleWithBlockingEdge, cyc}};
  }
  path.insert(path.begin(), s1);
  path.push_back(t2);
  return {false, Structure{Structure::Kind::PathWithTwoBlockingEdges, path}};
}

using WGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::no_property, boost::property<boost::edge_weight_t, long>>;
using UGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;

// Orders the vertices of the component of m xor n containing `start`.
std::vector<int> xor_component(const Matching& m, const Matching& n, int start,
                               std::vector<char>& seen) {
  auto step = [&](int v, int from) {
    for (int w : {m.partner(v), n.partner(v)})
      if (w != kUnmatched && w != from && m.partner(v) != n.partner(v)) return w;
    return kUnmatched;
  };
  // Walk to one end first so paths come out in order.
  int end = start, prev = kUnmatched;
  for (;;) {
    int nx = step(end, prev);
    if (nx == kUnmatched || nx == start) break;
    prev = end;
    end = nx;
  }
  bool cycle = step(end, prev) == start;
  int first = cycle ? start : end;
  std::vector<int> out{first};
  seen[first] = 1;
  prev = kUnmatched;
  int cur = first;
  for (;;) {
    int nx = step(cur, prev);
    if (nx == kUnmatched || seen[nx]) break;
    seen[nx] = 1;
    out.push_back(nx);
    prev = cur;
    cur = nx;
  }
  return out;
}

StructureResult structure_general(const Instance& inst, const Matching& m) {
  const int n = inst.size();
  WGraph g(n);
  for (const Edge& e : inst.edges()) {
    long w = edge_weight(inst, m, e.u, e.v) + (m.matched(e.u) ? 1 : 0) + (m.matched(e.v) ? 1 : 0);
    if (w > 0) boost::add_edge(e.u, e.v, w, g);
  }
  std::vector<boost::graph_traits<WGraph>::vertex_descriptor> mate(n);
  if (n > 0) boost::maximum_weighted_matching(g, &mate[0]);
  Matching best(n);
  long long total = 0;
  for (int v = 0; v < n; ++v) {
    auto w = mate[v];
    if (w == boost::graph_traits<WGraph>::null_vertex() || static_cast<int>(w) < v) continue;
    best.link(v, static_cast<int>(w));
    total += edge_weight(inst, m, v, static_cast<int>(w)) + (m.matched(v) ? 1 : 0) +
             (m.matched(static_cast<int>(w)) ? 1 : 0);
  }
  if (total <= 2LL * m.edge_count()) return {};
  std::vector<char> seen(n, 0);
  for (int v = 0; v < n; ++v) {
    if (seen[v] || m.partner(v) == best.partner(v)) continue;
    auto comp = xor_component(m, best, v, seen);
    int gain = 0;
    for (int x : comp) {
      if (inst.prefers(x, best.partner(x), m.partner(x))) ++gain;
      else if (inst.prefers(x, m.partner(x), best.partner(x))) --gain;
    }
    if (gain > 0) return {false, Structure{Structure::Kind::PositiveComponent, comp}};
  }
  return {false, std::nullopt};
}

}  // namespace

StructureResult is_popular_structure(const Instance& inst, const Matching& m) {
  return inst.bipartite() ? structure_bipartite(inst, m) : structure_general(inst, m);
}

std::string describe(const Instance& inst, const ForbiddenStructure& s) {
  std::string kind;
  switch (s.kind) {
    case ForbiddenStructure::Kind::CycleWithBlockingEdge: kind = "alternating cycle with a (+,+) edge"; break;
    case ForbiddenStructure::Kind::PathFromUnmatched: kind = "alternating path from an unmatched vertex with a (+,+) edge"; break;
    case ForbiddenStructure::Kind::PathWithTwoBlockingEdges: kind = "alternating path with two (+,+) edges"; break;
    case ForbiddenStructure::Kind::PositiveComponent: kind = "alternating component with positive margin"; break;
  }
  std::string out = kind + ": <";
  for (size_t i = 0; i < s.vertices.size(); ++i) out += (i ? "," : "") + inst.name(s.vertices[i]);
  return out + ">";
}

bool is_popular(const Instance& inst, const Matching& m) {
  return inst.bipartite() ? is_popular_weight(inst, m) : is_popular_structure(inst, m).popular;
}

std::vector<int> augmenting_path_in_gm(const Instance& inst, const Matching& m) {
  const int n = inst.size();
  auto in_gm = [&](int u, int v) {
    return inst.prefers(u, v, m.partner(u)) || inst.prefers(v, u, m.partner(v));
  };
  if (inst.bipartite()) {
    std::vector<int> parent(n, -2);
    std::vector<int> queue;
    for (int a = 0; a < n; ++a)
      if (inst.side(a) == Side::A && !m.matched(a)) {
        parent[a] = -1;
        queue.push_back(a);
      }
    for (size_t h = 0; h < queue.size(); ++h) {
      int a = queue[h];
      for (int b : inst.prefs(a)) {
        if (b == m.partner(a) || parent[b] != -2 || !in_gm(a, b)) continue;
        parent[b] = a;
        if (!m.matched(b)) {
          std::vector<int> path;
          for (int x = b; x >= 0; x = parent[x]) path.push_back(x);
          return path;
        }
        int a2 = m.partner(b);
        if (parent[a2] != -2) continue;
        parent[a2] = b;
        queue.push_back(a2);
      }
    }
    return {};
  }

  UGraph g(n);
  for (const Edge& e : inst.edges())
    if (m.contains(e.u, e.v) || in_gm(e.u, e.v)) boost::add_edge(e.u, e.v, g);
  std::vector<boost::graph_traits<UGraph>::vertex_descriptor> mate(n);
  if (n > 0) boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  Matching big(n);
  for (int v = 0; v < n; ++v) {
    auto w = mate[v];
    if (w != boost::graph_traits<UGraph>::null_vertex() && static_cast<int>(w) > v)
      big.link(v, static_cast<int>(w));
  }
  if (big.edge_count() <= m.edge_count()) return {};
  std::vector<char> seen(n, 0);
  for (int v = 0; v < n; ++v) {
    if (seen[v] || m.matched(v) || !big.matched(v)) continue;
    auto comp = xor_component(m, big, v, seen);
    if (comp.size() >= 2 && !m.matched(comp.front()) && !m.matched(comp.back())) return comp;
  }
  return {};
}

DominanceResult check_dominant(const Instance& inst, const Matching& m) {
  DominanceResult r;
  r.popular = is_popular(inst, m);
  if (!r.popular) return r;
  r.augmenting_path = augmenting_path_in_gm(inst, m);
  r.dominant = r.augmenting_path.empty();
  return r;
}

bool is_dominant(const Instance& inst, const Matching& m) { return check_dominant(inst, m).dominant; }

WitnessCheck verify_witness(const Instance& inst, const Matching& m, const Witness& w) {
  require_marriage(inst, "witness verification");
  if (static_cast<int>(w.size()) != inst.size()) throw ValidationError("witness size mismatch");
  for (int v = 0; v < inst.size(); ++v)
    if (w[v] == std::numeric_limits<int>::min())
      throw ValidationError("witness has no value for '" + inst.name(v) + "'");
  WitnessCheck r;
  long long sum = std::accumulate(w.begin(), w.end(), 0LL);
  if (sum != 0) {
    r.ok = false;
    r.violations.push_back("sum of values is " + std::to_string(sum) + ", not 0");
  }
  for (int v = 0; v < inst.size(); ++v) {
    int self = m.matched(v) ? -1 : 0;
    if (w[v] < self) {
      r.ok = false;
      r.violations.push_back("vertex " + inst.name(v) + ": " + std::to_string(w[v]) + " < " +
                             std::to_string(self));
    }
  }
  for (const Edge& e : inst.edges()) {
    int wt = edge_weight(inst, m, e.u, e.v);
    if (w[e.u] + w[e.v] < wt) {
      r.ok = false;
      r.violations.push_back("edge " + format_edge(inst, e) + ": " + std::to_string(w[e.u]) + " + " +
                             std::to_string(w[e.v]) + " < " + std::to_string(wt));
    }
  }
  return r;
}

std::optional<Witness> find_witness_small(const Instance& inst, const Matching& m, int bound) {
  require_marriage(inst, "witness search");
  const int n = inst.size();
  if (n > bound)
    throw ValidationError("witness search bound exceeded (" + std::to_string(n) + " > " +
                          std::to_string(bound) + ")");
  // Every witness of a matching has alpha = 0 off M and alpha_a = -alpha_b on M,
  // so only one value per matching edge is free.
  std::vector<std::vector<std::pair<int, int>>> cons(n);  // (neighbour, weight)
  for (const Edge& e : inst.edges()) {
    int wt = edge_weight(inst, m, e.u, e.v);
    cons[e.u].push_back({e.v, wt});
    cons[e.v].push_back({e.u, wt});
  }
  std::vector<Edge> medges = m.edges();
  std::stable_sort(medges.begin(), medges.end(), [&](Edge x, Edge y) {
    return inst.degree(x.u) + inst.degree(x.v) > inst.degree(y.u) + inst.degree(y.v);
  });
  Witness w(n, 0);
  std::vector<char> fixed(n, 0);
  for (int v = 0; v < n; ++v) fixed[v] = !m.matched(v);
  for (const Edge& e : inst.edges())
    if (fixed[e.u] && fixed[e.v] && edge_weight(inst, m, e.u, e.v) > 0) return std::nullopt;

  auto ok_at = [&](int x) {
    for (auto [y, wt] : cons[x])
      if (fixed[y] && w[x] + w[y] < wt) return false;
    return true;
  };
  auto rec = [&](auto&& self, size_t k) -> bool {
    if (k == medges.size()) return true;
    Edge e = medges[k];
    int a = inst.side(e.u) == Side::A ? e.u : e.v;
    int b = a == e.u ? e.v : e.u;
    fixed[a] = fixed[b] = 1;
    for (int val : {0, 1, -1}) {
      w[a] = val;
      w[b] = -val;
      if (ok_at(a) && ok_at(b) && self(self, k + 1)) return true;
    }
    fixed[a] = fixed[b] = 0;
    w[a] = w[b] = 0;
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return w;
}

}  // namespace popmatch
