#pragma once

#include <utility>
#include <vector>

#include "popmatch/core_model.hpp"

namespace popmatch {

struct ProposalConstraints {
  Matching seed;                           // empty or sized to the instance
  std::vector<Edge> forbidden;             // (proposer, responder): rejected outright
  std::vector<std::pair<int, int>> cutoff;  // (responder, worst acceptable rank, 1-based)
};

// Gale-Shapley with seeds and rejection rules, reusable across runs.
// Free proposers are served FIFO starting in vertex-id order; a seeded
// proposer who is displaced resumes right after its seed partner.
class ProposalEngine {
 public:
  explicit ProposalEngine(const Instance& inst, Side proposers = Side::A);

  void clear();  // drop constraints and results
  void forbid(int proposer, int responder);
  void set_cutoff(int responder, int worst_rank);
  void seed(int proposer, int responder);
  void apply(const ProposalConstraints& c);
  void run();

  int partner(int v) const { return mate_[v]; }
  Matching matching() const;
  // Stability with respect to the unconstrained instance.
  bool stable_without_constraints() const;

  const Instance& instance() const { return inst_; }
  long long runs() const { return runs_; }

 private:
  int slot(int proposer, int responder) const;

  const Instance& inst_;
  std::vector<char> is_proposer_;
  std::vector<int> proposers_;
  std::vector<int> offset_;
  std::vector<int> flat_pref_;
  std::vector<int> flat_rev_;
  std::vector<char> blocked_;
  std::vector<int> blocked_touched_;
  std::vector<int> cutoff_;
  std::vector<int> cutoff_touched_;
  std::vector<int> mate_;
  std::vector<int> mate_rank_;  // responders: rank of partner; proposers: list position
  std::vector<int> next_;
  std::vector<char> seeded_;
  std::vector<int> queue_;
  long long runs_ = 0;
};

// Stable w.r.t. the instance with the forbidden pairs and cutoffs removed;
// proposer-optimal among those.
Matching gale_shapley(const Instance& inst, const ProposalConstraints& c = {},
                      Side proposers = Side::A);

// Conventional 3-vertex expansion: u+ = 3u, u- = 3u+1, d(u) = 3u+2.
struct GPrime {
  enum class Role { Plus, Minus, Dummy };
  Instance graph;
  static int plus(int u) { return 3 * u; }
  static int minus(int u) { return 3 * u + 1; }
  static int dummy(int u) { return 3 * u + 2; }
  static int original(int x) { return x / 3; }
  static Role role(int x) { return static_cast<Role>(x % 3); }
};

GPrime build_gprime(const Instance& inst);

// (a,b) in M iff (a+,b-) or (a-,b+) is in the G' matching.
Matching project(const Instance& inst, const Matching& gprime_matching);
// +1 if matched via the proposing copy, -1 via the receiving copy, 0 otherwise.
Witness gprime_witness(const Instance& inst, const Matching& gprime_matching);

std::pair<Matching, Witness> solve_dominant(const Instance& inst);
Matching solve_stable(const Instance& inst);
std::vector<int> stable_vertex_set(const Instance& inst);

void require_marriage(const Instance& inst, const char* what);

}  // namespace popmatch
