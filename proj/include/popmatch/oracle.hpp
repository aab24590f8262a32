#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "popmatch/core_model.hpp"
#include "popmatch/reductions.hpp"

namespace popmatch {

constexpr int kDefaultOracleCap = 20;

// POPMATCH_CAP if set to a positive integer, else `fallback`.
int oracle_cap(int fallback = kDefaultOracleCap);

// Callback returns false to stop early.
using MatchingSink = std::function<bool(const Matching&)>;

// Depth-first over edges in edge order, exclude before include. Throws
// ValidationError above `cap` vertices (cap <= 0 means oracle_cap()).
void enumerate_matchings(const Instance& inst, const MatchingSink& sink, int cap = 0);
std::vector<Matching> all_matchings(const Instance& inst, int cap = 0);

struct ExhaustiveReport {
  std::vector<Matching> matchings;
  std::vector<int> stable;    // indices into matchings
  std::vector<int> popular;
  std::vector<int> dominant;
  int min_popular_size = -1;
  int max_popular_size = -1;
  std::vector<std::vector<Edge>> blocking;  // per matching
  std::vector<char> is_stable, is_popular, is_dominant;
  int index_of(const Matching& m) const;
};

ExhaustiveReport classify_exhaustive(const Instance& inst, int cap = 0);

// Tiny SAT ground truth; a[i] is variable i+1. Throws above 24 variables.
std::optional<std::vector<bool>> brute_sat(const CnfFormula& f);
std::optional<std::vector<bool>> brute_sat(const NormalizedFormula& nf);

struct EnumerationStatus {
  long long count = 0;
  bool complete = true;  // false if `limit` was hit or the sink stopped
};

// Every stable matching (marriage or roommates) by backtracking.
EnumerationStatus enumerate_stable_matchings(const Instance& inst, const MatchingSink& sink,
                                             long long limit = -1);
// Every matching whose matched vertex set is exactly `cover`.
EnumerationStatus enumerate_matchings_covering(const Instance& inst, const std::vector<int>& cover,
                                               const MatchingSink& sink, long long limit = -1);

}  // namespace popmatch
