#include "popmatch/generators.hpp"

#include <algorithm>
#include <string>

namespace popmatch {

namespace {

std::vector<std::string> side_names(char prefix, int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void shuffle_lists(Rng& rng, std::vector<std::vector<int>>& prefs) {
  for (auto& p : prefs)
    for (int i = static_cast<int>(p.size()) - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(p[i], p[pick(rng)]);
    }
}

}  // namespace

Instance random_marriage(Rng& rng, int na, int nb, double density) {
  std::vector<std::string> names = side_names('a', na);
  for (auto& s : side_names('b', nb)) names.push_back(s);
  std::vector<Side> sides(na, Side::A);
  sides.resize(na + nb, Side::B);
  std::vector<std::vector<int>> prefs(na + nb);
  std::bernoulli_distribution coin(density);
  for (int a = 0; a < na; ++a)
    for (int b = na; b < na + nb; ++b)
      if (coin(rng)) {
        prefs[a].push_back(b);
        prefs[b].push_back(a);
      }
  shuffle_lists(rng, prefs);
  return Instance::make(Kind::Marriage, names, sides, prefs);
}

Instance random_roommates(Rng& rng, int n, double density) {
  std::vector<std::string> names = side_names('v', n);
  std::vector<std::vector<int>> prefs(n);
  std::bernoulli_distribution coin(density);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) {
        prefs[u].push_back(v);
        prefs[v].push_back(u);
      }
  shuffle_lists(rng, prefs);
  return Instance::make(Kind::Roommates, names, {}, prefs);
}

Instance chain_instance(int k) {
  std::vector<std::string> names = side_names('a', k);
  for (auto& s : side_names('b', k)) names.push_back(s);
  std::vector<Side> sides(k, Side::A);
  sides.resize(2 * k, Side::B);
  std::vector<std::vector<int>> prefs(2 * k);
  for (int i = 0; i < k; ++i) {
    prefs[i].push_back(k + i);
    if (i > 0) prefs[i].push_back(k + i - 1);
    prefs[k + i].push_back(i);
    if (i + 1 < k) prefs[k + i].push_back(i + 1);
  }
  return Instance::make(Kind::Marriage, names, sides, prefs);
}

long long for_each_small_instance(int k, const std::function<bool(const Instance&)>& fn) {
  std::vector<std::string> names = side_names('a', k);
  for (auto& s : side_names('b', k)) names.push_back(s);
  std::vector<Side> sides(k, Side::A);
  sides.resize(2 * k, Side::B);
  const int cells = k * k;
  long long count = 0;
  for (unsigned mask = 0; mask < (1u << cells); ++mask) {
    std::vector<std::vector<int>> prefs(2 * k);
    for (int c = 0; c < cells; ++c)
      if (mask >> c & 1u) {
        int a = c / k, b = k + c % k;
        prefs[a].push_back(b);
        prefs[b].push_back(a);
      }
    for (auto& p : prefs) std::sort(p.begin(), p.end());
    // Odometer over the permutations of every list.
    auto lists = prefs;
    while (true) {
      ++count;
      if (!fn(Instance::make(Kind::Marriage, names, sides, lists))) return count;
      int v = 0;
      while (v < 2 * k && !std::next_permutation(lists[v].begin(), lists[v].end())) ++v;
      if (v == 2 * k) break;
    }
  }
  return count;
}

}  // namespace popmatch
