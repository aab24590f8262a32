#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "popmatch/core_model.hpp"

namespace popmatch {

using Rng = std::mt19937_64;

// Each A-B pair is an edge with probability `density`; lists are shuffled.
Instance random_marriage(Rng& rng, int na, int nb, double density);
Instance random_roommates(Rng& rng, int n, double density);

// a_i: b_i > b_{i-1}, b_i: a_i > a_{i+1}; 2k-1 edges.
Instance chain_instance(int k);

// Every marriage instance on a1..ak, b1..bk: each edge subset with every
// ordering of every list. The callback returns false to stop.
long long for_each_small_instance(int k, const std::function<bool(const Instance&)>& fn);

}  // namespace popmatch
