#include "popmatch/proposal_engine.hpp"

#include <algorithm>
#include <limits>

namespace popmatch {

void require_marriage(const Instance& inst, const char* what) {
  if (inst.kind() != Kind::Marriage)
    throw ValidationError(std::string(what) + " requires a marriage instance");
}

ProposalEngine::ProposalEngine(const Instance& inst, Side proposers) : inst_(inst) {
  require_marriage(inst, "Gale-Shapley");
  const int n = inst.size();
  is_proposer_.assign(n, 0);
  offset_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    if (inst.side(v) == proposers) {
      is_proposer_[v] = 1;
      proposers_.push_back(v);
    }
    offset_[v + 1] = offset_[v] + inst.degree(v);
  }
  flat_pref_.resize(offset_[n]);
  flat_rev_.resize(offset_[n]);
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < inst.degree(v); ++i) {
      flat_pref_[offset_[v] + i] = inst.prefs(v)[i];
      flat_rev_[offset_[v] + i] = inst.reverse_rank(v, i);
    }
  }
  blocked_.assign(offset_[n], 0);
  cutoff_.assign(n, std::numeric_limits<int>::max());
  mate_.assign(n, kUnmatched);
  mate_rank_.assign(n, 0);
  next_.assign(n, 0);
  seeded_.assign(n, 0);
  queue_.reserve(n);
}

void ProposalEngine::clear() {
  for (int s : blocked_touched_) blocked_[s] = 0;
  blocked_touched_.clear();
  for (int r : cutoff_touched_) cutoff_[r] = std::numeric_limits<int>::max();
  cutoff_touched_.clear();
  std::fill(mate_.begin(), mate_.end(), kUnmatched);
  std::fill(seeded_.begin(), seeded_.end(), 0);
}

int ProposalEngine::slot(int proposer, int responder) const {
  int r = inst_.rank(proposer, responder);
  if (r == 0) throw ValidationError("constraint on a non-edge");
  return offset_[proposer] + r - 1;
}

void ProposalEngine::forbid(int proposer, int responder) {
  if (!is_proposer_[proposer]) throw ValidationError("forbidden pair must start at a proposer");
  int s = slot(proposer, responder);
  if (!blocked_[s]) {
    blocked_[s] = 1;
    blocked_touched_.push_back(s);
  }
}

void ProposalEngine::set_cutoff(int responder, int worst_rank) {
  if (cutoff_[responder] == std::numeric_limits<int>::max()) cutoff_touched_.push_back(responder);
  cutoff_[responder] = std::min(cutoff_[responder], worst_rank);
}

void ProposalEngine::seed(int proposer, int responder) {
  if (!is_proposer_[proposer] || is_proposer_[responder])
    throw ValidationError("seed edges join a proposer to a responder");
  if (!inst_.adjacent(proposer, responder)) throw ValidationError("seed uses a non-edge");
  mate_[proposer] = responder;
  mate_[responder] = proposer;
  seeded_[proposer] = 1;
}

void ProposalEngine::apply(const ProposalConstraints& c) {
  for (auto e : c.forbidden) forbid(e.u, e.v);
  for (auto [r, k] : c.cutoff) set_cutoff(r, k);
  if (c.seed.size() != 0) {
    if (c.seed.size() != inst_.size()) throw ValidationError("seed matching size mismatch");
    for (auto e : c.seed.edges()) {
      if (is_proposer_[e.u])
        seed(e.u, e.v);
      else
        seed(e.v, e.u);
    }
  }
}

void ProposalEngine::run() {
  ++runs_;
  const int n = inst_.size();
  queue_.clear();
  for (int v = 0; v < n; ++v) {
    if (is_proposer_[v]) {
      if (mate_[v] != kUnmatched) {
        int r = inst_.rank(v, mate_[v]);
        next_[v] = r;
        mate_rank_[v] = r - 1;
      } else {
        next_[v] = 0;
        mate_rank_[v] = inst_.degree(v);
      }
    } else {
      mate_rank_[v] = mate_[v] != kUnmatched ? inst_.rank(v, mate_[v])
                                             : std::numeric_limits<int>::max();
    }
  }
  for (int p : proposers_)
    if (mate_[p] == kUnmatched) queue_.push_back(p);

  for (size_t head = 0; head < queue_.size(); ++head) {
    int p = queue_[head];
    const int end = offset_[p + 1];
    int i = offset_[p] + next_[p];
    for (; i < end; ++i) {
      if (blocked_[i]) continue;
      int r = flat_pref_[i];
      int rr = flat_rev_[i];
      if (rr > cutoff_[r] || rr >= mate_rank_[r]) continue;
      int old = mate_[r];
      if (old != kUnmatched) {
        mate_[old] = kUnmatched;
        mate_rank_[old] = inst_.degree(old);
        queue_.push_back(old);
      }
      mate_[r] = p;
      mate_[p] = r;
      mate_rank_[r] = rr;
      mate_rank_[p] = i - offset_[p];
      break;
    }
    next_[p] = (i < end ? i + 1 : end) - offset_[p];
  }
}

Matching ProposalEngine::matching() const {
  Matching m(inst_.size());
  for (int p : proposers_)
    if (mate_[p] != kUnmatched) m.link(p, mate_[p]);
  return m;
}

bool ProposalEngine::stable_without_constraints() const {
  for (int p : proposers_) {
    const int limit = offset_[p] + mate_rank_[p];
    for (int i = offset_[p]; i < limit; ++i) {
      if (flat_rev_[i] < mate_rank_[flat_pref_[i]]) return false;
    }
  }
  return true;
}

Matching gale_shapley(const Instance& inst, const ProposalConstraints& c, Side proposers) {
  ProposalEngine eng(inst, proposers);
  eng.apply(c);
  eng.run();
  return eng.matching();
}

GPrime build_gprime(const Instance& inst) {
  require_marriage(inst, "G' construction");
  const int n = inst.size();
  std::vector<std::string> names(3 * n);
  std::vector<Side> sides(3 * n);
  std::vector<std::vector<int>> prefs(3 * n);
  for (int u = 0; u < n; ++u) {
    const int p = GPrime::plus(u), m = GPrime::minus(u), d = GPrime::dummy(u);
    names[p] = inst.name(u) + "+";
    names[m] = inst.name(u) + "-";
    names[d] = "d(" + inst.name(u) + ")";
    Side own = inst.side(u);
    Side other = own == Side::A ? Side::B : Side::A;
    sides[p] = sides[m] = own;
    sides[d] = other;
    auto& lp = prefs[p];
    auto& lm = prefs[m];
    lm.push_back(d);
    for (int v : inst.prefs(u)) {
      lp.push_back(GPrime::minus(v));
      lm.push_back(GPrime::plus(v));
    }
    lp.push_back(d);
    prefs[d] = {p, m};
  }
  return GPrime{Instance::make(Kind::Marriage, std::move(names), std::move(sides), std::move(prefs))};
}

Matching project(const Instance& inst, const Matching& mp) {
  Matching m(inst.size());
  for (auto e : mp.edges()) {
    if (GPrime::role(e.u) == GPrime::Role::Dummy || GPrime::role(e.v) == GPrime::Role::Dummy)
      continue;
    int a = GPrime::original(e.u), b = GPrime::original(e.v);
    if (m.matched(a) || m.matched(b))
      throw ValidationError("G' matching uses both copies of " + inst.name(m.matched(a) ? a : b));
    m.link(a, b);
  }
  return m;
}

Witness gprime_witness(const Instance& inst, const Matching& mp) {
  Witness w(inst.size(), 0);
  for (auto e : mp.edges()) {
    for (int x : {e.u, e.v}) {
      int y = x == e.u ? e.v : e.u;
      if (GPrime::role(y) == GPrime::Role::Dummy || GPrime::role(x) == GPrime::Role::Dummy) continue;
      w[GPrime::original(x)] = GPrime::role(x) == GPrime::Role::Plus ? 1 : -1;
    }
  }
  return w;
}

std::pair<Matching, Witness> solve_dominant(const Instance& inst) {
  GPrime gp = build_gprime(inst);
  Matching mp = gale_shapley(gp.graph);
  return {project(inst, mp), gprime_witness(inst, mp)};
}

Matching solve_stable(const Instance& inst) { return gale_shapley(inst); }

std::vector<int> stable_vertex_set(const Instance& inst) {
  return matched_vertices(solve_stable(inst));
}

}  // namespace popmatch
