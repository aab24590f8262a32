#include "popmatch/oracle.hpp"

#include <cstdlib>
#include <string>

namespace popmatch {

int oracle_cap(int fallback) {
  if (const char* env = std::getenv("POPMATCH_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return fallback;
}

void enumerate_matchings(const Instance& inst, const MatchingSink& sink, int cap) {
  if (cap <= 0) cap = oracle_cap();
  if (inst.size() > cap)
    throw ValidationError("enumeration cap exceeded (" + std::to_string(inst.size()) + " > " +
                          std::to_string(cap) + " vertices)");
  const auto& edges = inst.edges();
  Matching m(inst.size());
  bool stop = false;
  auto rec = [&](auto&& self, size_t k) -> void {
    if (stop) return;
    if (k == edges.size()) {
      if (!sink(m)) stop = true;
      return;
    }
    self(self, k + 1);
    Edge e = edges[k];
    if (!m.matched(e.u) && !m.matched(e.v)) {
      m.link(e.u, e.v);
      self(self, k + 1);
      m.unlink(e.u);
    }
  };
  rec(rec, 0);
}

std::vector<Matching> all_matchings(const Instance& inst, int cap) {
  std::vector<Matching> out;
  enumerate_matchings(inst, [&](const Matching& m) {
    out.push_back(m);
    return true;
  }, cap);
  return out;
}

int ExhaustiveReport::index_of(const Matching& m) const {
  for (size_t i = 0; i < matchings.size(); ++i)
    if (matchings[i] == m) return static_cast<int>(i);
  return -1;
}

ExhaustiveReport classify_exhaustive(const Instance& inst, int cap) {
  ExhaustiveReport r;
  r.matchings = all_matchings(inst, cap);
  const int n = inst.size();
  const size_t k = r.matchings.size();
  // Partner rank per vertex, unmatched ranked after every neighbour.
  std::vector<int> rk(k * n);
  std::vector<int> sz(k);
  for (size_t i = 0; i < k; ++i) {
    const Matching& m = r.matchings[i];
    sz[i] = m.edge_count();
    for (int v = 0; v < n; ++v)
      rk[i * n + v] = m.matched(v) ? inst.rank(v, m.partner(v)) : inst.degree(v) + 1;
  }
  auto margin = [&](size_t i, size_t j) {
    const int* x = &rk[i * n];
    const int* y = &rk[j * n];
    int d = 0;
    for (int v = 0; v < n; ++v) d += (x[v] < y[v]) - (x[v] > y[v]);
    return d;
  };

  r.blocking.resize(k);
  r.is_stable.assign(k, 0);
  r.is_popular.assign(k, 0);
  r.is_dominant.assign(k, 0);
  for (size_t i = 0; i < k; ++i) {
    const Matching& m = r.matchings[i];
    for (const Edge& e : inst.edges()) {
      if (m.contains(e.u, e.v)) continue;
      if (inst.rank(e.u, e.v) < rk[i * n + e.u] && inst.rank(e.v, e.u) < rk[i * n + e.v])
        r.blocking[i].push_back(e);
    }
    r.is_stable[i] = r.blocking[i].empty();

    bool popular = true;
    for (size_t j = 0; j < k && popular; ++j)
      if (margin(i, j) < 0) popular = false;
    r.is_popular[i] = popular;
    if (!popular) continue;
    bool dominant = true;
    for (size_t j = 0; j < k && dominant; ++j)
      if (sz[j] > sz[i] && margin(i, j) <= 0) dominant = false;
    r.is_dominant[i] = dominant;
  }
  for (size_t i = 0; i < k; ++i) {
    if (r.is_stable[i]) r.stable.push_back(static_cast<int>(i));
    if (r.is_popular[i]) {
      r.popular.push_back(static_cast<int>(i));
      if (r.min_popular_size < 0 || sz[i] < r.min_popular_size) r.min_popular_size = sz[i];
      if (sz[i] > r.max_popular_size) r.max_popular_size = sz[i];
    }
    if (r.is_dominant[i]) r.dominant.push_back(static_cast<int>(i));
  }
  return r;
}

std::optional<std::vector<bool>> brute_sat(const CnfFormula& f) {
  if (f.num_vars > 24) throw ValidationError("brute_sat handles at most 24 variables");
  const unsigned long long total = 1ULL << f.num_vars;
  std::vector<bool> a(f.num_vars);
  for (unsigned long long mask = 0; mask < total; ++mask) {
    for (int i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1ULL;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

std::optional<std::vector<bool>> brute_sat(const NormalizedFormula& nf) { return brute_sat(nf.as_cnf()); }

EnumerationStatus enumerate_stable_matchings(const Instance& inst, const MatchingSink& sink,
                                             long long limit) {
  constexpr int kOpen = -2;
  const int n = inst.size();
  std::vector<int> a(n, kOpen);
  EnumerationStatus st;
  bool stop = false;

  // u prefers x to y, where y may be kUnmatched.
  auto better = [&](int u, int x, int y) {
    return y == kUnmatched || inst.rank(u, x) < inst.rank(u, y);
  };
  auto consistent = [&](int x) {
    for (int y : inst.prefs(x)) {
      if (a[y] == kOpen || y == a[x]) continue;
      if (better(x, y, a[x]) && better(y, x, a[y])) return false;
    }
    return true;
  };
  // Necessary condition: some option of open z is not already blocked.
  auto has_option = [&](int z) {
    const auto& p = inst.prefs(z);
    int limit_pos = static_cast<int>(p.size());
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      int y = p[i];
      if (a[y] != kOpen && better(y, z, a[y])) {
        limit_pos = i;
        break;
      }
    }
    if (limit_pos == static_cast<int>(p.size())) return true;
    for (int i = 0; i < limit_pos; ++i)
      if (a[p[i]] == kOpen) return true;
    return false;
  };
  auto forward = [&](int x) {
    for (int z : inst.prefs(x))
      if (a[z] == kOpen && !has_option(z)) return false;
    return true;
  };

  auto rec = [&](auto&& self, int cursor) -> void {
    if (stop) return;
    while (cursor < n && a[cursor] != kOpen) ++cursor;
    if (cursor == n) {
      Matching m(n);
      for (int v = 0; v < n; ++v)
        if (a[v] > v) m.link(v, a[v]);
      ++st.count;
      if (!sink(m) || (limit >= 0 && st.count >= limit)) {
        stop = true;
        st.complete = false;
      }
      return;
    }
    const int x = cursor;
    for (int w : inst.prefs(x)) {
      if (a[w] != kOpen) continue;
      a[x] = w;
      a[w] = x;
      if (consistent(x) && consistent(w) && forward(x) && forward(w)) self(self, cursor + 1);
      a[x] = a[w] = kOpen;
      if (stop) return;
    }
    a[x] = kUnmatched;
    if (consistent(x) && forward(x)) self(self, cursor + 1);
    a[x] = kOpen;
  };
  rec(rec, 0);
  return st;
}

EnumerationStatus enumerate_matchings_covering(const Instance& inst, const std::vector<int>& cover,
                                               const MatchingSink& sink, long long limit) {
  const int n = inst.size();
  std::vector<char> want(n, 0);
  for (int v : cover) want[v] = 1;
  Matching m(n);
  EnumerationStatus st;
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    int pick = -1, best = n + 1;
    for (int v : cover) {
      if (m.matched(v)) continue;
      int options = 0;
      for (int w : inst.prefs(v))
        if (want[w] && !m.matched(w)) ++options;
      if (options < best) {
        best = options;
        pick = v;
        if (options == 0) break;
      }
    }
    if (pick < 0) {
      ++st.count;
      if (!sink(m) || (limit >= 0 && st.count >= limit)) {
        stop = true;
        st.complete = false;
      }
      return;
    }
    if (best == 0) return;
    for (int w : inst.prefs(pick)) {
      if (!want[w] || m.matched(w)) continue;
      m.link(pick, w);
      self(self);
      m.unlink(pick);
      if (stop) return;
    }
  };
  if (!cover.empty() || true) rec(rec);
  return st;
}

}  // namespace popmatch
