#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "popmatch/core_model.hpp"

namespace popmatch {

struct WitnessDecomposition {
  std::vector<int> a0, b0, a1, a_minus1, b1, b_minus1;
  std::vector<Edge> m0;  // matching edges inside A0 x B0
  std::vector<Edge> m1;  // matching edges with +-1 endpoints
};

// Throws ValidationError if w is not a valid witness for m.
WitnessDecomposition decompose(const Instance& inst, const Matching& m, const Witness& w);

// Unstable popular M to unstable dominant M* = M1 u D, with a witness for M*.
std::pair<Matching, Witness> to_unstable_dominant(const Instance& inst, const Matching& m,
                                                  const Witness& w);
// Non-dominant popular M to stable non-dominant N = M0 u S.
Matching to_nondominant_stable(const Instance& inst, const Matching& m, const Witness& w);

struct ClassifierStats {
  long long solver_runs = 0;
};

// Some unstable dominant matching (blocked by the first accepted edge in edge
// order), or none iff every popular matching is stable.
std::optional<Matching> exists_unstable_popular(const Instance& inst,
                                                ClassifierStats* stats = nullptr);
std::optional<Matching> exists_unstable_popular_pairwise(const Instance& inst,
                                                         ClassifierStats* stats = nullptr);

}  // namespace popmatch
