#pragma once

#include <vector>

#include "popmatch/core_model.hpp"

namespace popmatch {

enum class Vote { Plus, Minus };

char vote_char(Vote v);

// u's vote for `candidate` against its partner in m; unmatched counts as worst.
Vote vote(const Instance& inst, int u, int candidate, const Matching& m);

struct EdgeLabel {
  Edge edge;  // edge.u < edge.v
  Vote vote_u;
  Vote vote_v;
  bool blocking() const { return vote_u == Vote::Plus && vote_v == Vote::Plus; }
  bool minus_minus() const { return vote_u == Vote::Minus && vote_v == Vote::Minus; }
};

// Labels for E \ M in edge order.
using EdgeLabeling = std::vector<EdgeLabel>;
EdgeLabeling label_edges(const Instance& inst, const Matching& m);

// G_M: every edge except the (-,-) ones. `adj` lists neighbours by u's order.
struct Subgraph {
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;
  bool contains(int u, int v) const;
};
Subgraph restricted_graph(const Instance& inst, const Matching& m);

struct EdgeWeighting {
  std::vector<int> edge;  // aligned with inst.edges()
  std::vector<int> self;  // per vertex
  // wt_M of n with unmatched vertices of n on their self-loops.
  long long weight_of(const Instance& inst, const Matching& n) const;
};
EdgeWeighting weighting(const Instance& inst, const Matching& m);

// Weight of a single pair for the weighting induced by m (edge assumed present).
int edge_weight(const Instance& inst, const Matching& m, int u, int v);

// Number of vertices preferring m to n.
int phi(const Instance& inst, const Matching& m, const Matching& n);
int delta(const Instance& inst, const Matching& m, const Matching& n);

}  // namespace popmatch
