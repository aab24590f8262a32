#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace popmatch {

enum class Kind { Marriage, Roommates };
enum class Side { A, B, None };

constexpr int kUnmatched = -1;

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict preferences over neighbours; vertices are dense ids in file order.
class Instance {
 public:
  Instance() = default;

  // Validates and builds the derived indices. Throws ValidationError.
  static Instance make(Kind kind, std::vector<std::string> names,
                       std::vector<Side> sides,
                       std::vector<std::vector<int>> prefs);

  Kind kind() const { return kind_; }
  bool bipartite() const { return kind_ == Kind::Marriage; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  Side side(int v) const { return sides_[v]; }
  const std::vector<Side>& sides() const { return sides_; }
  const std::vector<int>& prefs(int v) const { return prefs_[v]; }
  const std::vector<std::vector<int>>& all_prefs() const { return prefs_; }
  int degree(int v) const { return static_cast<int>(prefs_[v].size()); }

  // 1-based rank of v in u's list, 0 if not adjacent.
  int rank(int u, int v) const;
  bool adjacent(int u, int v) const { return rank(u, v) != 0; }
  // True iff u strictly prefers v to w; kUnmatched ranks below every neighbour.
  bool prefers(int u, int v, int w) const;
  // 1-based rank of u inside the list of prefs(u)[i].
  int reverse_rank(int u, int i) const { return rev_[u][i]; }

  std::optional<int> find(std::string_view name) const;
  int id(std::string_view name) const;  // throws ValidationError

  // Edges with u < v, ordered by u then by u's preference order.
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  friend bool operator==(const Instance& x, const Instance& y) {
    return x.kind_ == y.kind_ && x.names_ == y.names_ &&
           x.sides_ == y.sides_ && x.prefs_ == y.prefs_;
  }

 private:
  Kind kind_ = Kind::Marriage;
  std::vector<std::string> names_;
  std::vector<Side> sides_;
  std::vector<std::vector<int>> prefs_;
  std::vector<std::vector<std::pair<int, int>>> sorted_rank_;  // (nbr, rank)
  std::vector<std::vector<int>> rev_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, int> index_;
};

// The induced sub-instance on `keep` (vertex order preserved). `old_to_new`
// maps original ids to new ids or -1.
Instance induced_subinstance(const Instance& inst, const std::vector<int>& keep,
                             std::vector<int>* old_to_new = nullptr);

class Matching {
 public:
  Matching() = default;
  explicit Matching(int n) : mate_(n, kUnmatched) {}

  // Throws ValidationError if an edge is missing from inst or edges overlap.
  static Matching from_edges(const Instance& inst, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(mate_.size()); }
  int partner(int v) const { return mate_[v]; }
  bool matched(int v) const { return mate_[v] != kUnmatched; }
  bool contains(int u, int v) const { return mate_[u] == v; }
  int edge_count() const;
  std::vector<Edge> edges() const;  // u < v, sorted
  const std::vector<int>& mates() const { return mate_; }

  // Unchecked mutation for builders; callers keep the matching valid.
  void link(int u, int v) {
    mate_[u] = v;
    mate_[v] = u;
  }
  void unlink(int u) {
    if (mate_[u] != kUnmatched) mate_[mate_[u]] = kUnmatched;
    mate_[u] = kUnmatched;
  }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<int> mate_;
};

using Witness = std::vector<int>;

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Matching parse_matching(const Instance& inst, std::string_view text);
std::string serialize_matching(const Instance& inst, const Matching& m);

Witness parse_witness(const Instance& inst, std::string_view text);
std::string serialize_witness(const Instance& inst, const Witness& w);

std::vector<int> matched_vertices(const Matching& m);

std::string read_file(const std::string& path);

std::string format_edge(const Instance& inst, Edge e);
std::string format_matching(const Instance& inst, const Matching& m);

}  // namespace popmatch
