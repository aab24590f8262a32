#include "popmatch/core_model.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace popmatch {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

namespace {

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ':' || c == '#' || c == ' ' || c == '\t' || c == '\r' || c == '\n') return false;
  }
  return true;
}

}  // namespace

Instance Instance::make(Kind kind, std::vector<std::string> names,
                        std::vector<Side> sides,
                        std::vector<std::vector<int>> prefs) {
  const int n = static_cast<int>(names.size());
  if (static_cast<int>(prefs.size()) != n) throw ValidationError("preference table size mismatch");
  if (kind == Kind::Roommates) {
    sides.assign(n, Side::None);
  } else if (static_cast<int>(sides.size()) != n) {
    throw ValidationError("side table size mismatch");
  }

  Instance inst;
  inst.kind_ = kind;
  inst.index_.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (!valid_name(names[v])) throw ValidationError("invalid vertex name '" + names[v] + "'");
    if (!inst.index_.emplace(names[v], v).second)
      throw ValidationError("vertex '" + names[v] + "' declared twice");
    if (kind == Kind::Marriage && sides[v] == Side::None)
      throw ValidationError("vertex '" + names[v] + "' has no side");
  }

  inst.sorted_rank_.resize(n);
  for (int u = 0; u < n; ++u) {
    auto& sr = inst.sorted_rank_[u];
    sr.reserve(prefs[u].size());
    for (int i = 0; i < static_cast<int>(prefs[u].size()); ++i) {
      int v = prefs[u][i];
      if (v < 0 || v >= n) throw ValidationError("list of '" + names[u] + "' names an unknown vertex");
      if (v == u) throw ValidationError("'" + names[u] + "' lists itself");
      sr.emplace_back(v, i + 1);
    }
    std::sort(sr.begin(), sr.end());
    for (size_t i = 1; i < sr.size(); ++i) {
      if (sr[i].first == sr[i - 1].first)
        throw ValidationError("duplicate '" + names[sr[i].first] + "' in list of '" + names[u] + "'");
    }
  }
  inst.names_ = std::move(names);
  inst.sides_ = std::move(sides);
  inst.prefs_ = std::move(prefs);

  inst.rev_.resize(n);
  for (int u = 0; u < n; ++u) {
    inst.rev_[u].resize(inst.prefs_[u].size());
    for (int i = 0; i < static_cast<int>(inst.prefs_[u].size()); ++i) {
      int v = inst.prefs_[u][i];
      int r = inst.rank(v, u);
      if (r == 0)
        throw ValidationError("asymmetric adjacency: '" + inst.names_[u] + "' lists '" +
                              inst.names_[v] + "' but not conversely");
      if (kind == Kind::Marriage && inst.sides_[u] == inst.sides_[v])
        throw ValidationError("side violation: '" + inst.names_[u] + "' and '" + inst.names_[v] +
                              "' are on the same side");
      inst.rev_[u][i] = r;
      if (u < v) inst.edges_.push_back({u, v});
    }
  }
  return inst;
}

int Instance::rank(int u, int v) const {
  const auto& sr = sorted_rank_[u];
  auto it = std::lower_bound(sr.begin(), sr.end(), std::make_pair(v, 0));
  if (it == sr.end() || it->first != v) return 0;
  return it->second;
}

bool Instance::prefers(int u, int v, int w) const {
  if (v == w) return false;
  if (v == kUnmatched) return false;
  if (w == kUnmatched) return true;
  return rank(u, v) < rank(u, w);
}

std::optional<int> Instance::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Instance::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw ValidationError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

Instance induced_subinstance(const Instance& inst, const std::vector<int>& keep,
                             std::vector<int>* old_to_new) {
  std::vector<int> map(inst.size(), -1);
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) map[sorted[i]] = i;
  std::vector<std::string> names;
  std::vector<Side> sides;
  std::vector<std::vector<int>> prefs;
  for (int v : sorted) {
    names.push_back(inst.name(v));
    sides.push_back(inst.side(v));
    std::vector<int> p;
    for (int w : inst.prefs(v))
      if (map[w] >= 0) p.push_back(map[w]);
    prefs.push_back(std::move(p));
  }
  if (old_to_new) *old_to_new = map;
  return Instance::make(inst.kind(), std::move(names), std::move(sides), std::move(prefs));
}

Matching Matching::from_edges(const Instance& inst, const std::vector<Edge>& edges) {
  Matching m(inst.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= inst.size() || v >= inst.size() || !inst.adjacent(u, v))
      throw ValidationError("matching uses a non-edge");
    if (m.matched(u) || m.matched(v)) throw ValidationError("matching edges overlap");
    m.link(u, v);
  }
  return m;
}

int Matching::edge_count() const {
  int c = 0;
  for (int v = 0; v < size(); ++v)
    if (mate_[v] > v) ++c;
  return c;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  for (int v = 0; v < size(); ++v)
    if (mate_[v] > v) out.push_back({v, mate_[v]});
  return out;
}

namespace {

struct Line {
  int number;
  std::string text;  // comment stripped
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string line(text.substr(pos, end - pos));
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back({number, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokens(const std::string& s, size_t from = 0) {
  std::vector<Token> out;
  size_t i = from;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    out.push_back({s.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

int parse_int_token(const Token& t, int line) {
  try {
    size_t used = 0;
    int v = std::stoi(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + t.text + "'", line, t.column);
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  auto lines = content_lines(text);
  size_t li = 0;
  if (lines.empty()) throw ParseError("missing header line", 1, 1);
  auto head = tokens(lines[0].text);
  Kind kind;
  if (head.size() == 1 && head[0].text == "marriage") {
    kind = Kind::Marriage;
  } else if (head.size() == 1 && head[0].text == "roommates") {
    kind = Kind::Roommates;
  } else {
    throw ParseError("expected 'marriage' or 'roommates'", lines[0].number, head[0].column);
  }
  ++li;

  std::vector<std::string> declared;
  std::vector<Side> declared_side;
  std::unordered_map<std::string, int> decl_index;
  auto declare_line = [&](const std::string& tag, Side side) {
    if (li >= lines.size()) throw ParseError("missing '" + tag + "' line", lines.back().number + 1, 1);
    auto toks = tokens(lines[li].text);
    if (toks[0].text != tag)
      throw ParseError("expected '" + tag + "' line", lines[li].number, toks[0].column);
    for (size_t k = 1; k < toks.size(); ++k) {
      if (!valid_name(toks[k].text))
        throw ParseError("invalid vertex name '" + toks[k].text + "'", lines[li].number, toks[k].column);
      if (!decl_index.emplace(toks[k].text, static_cast<int>(declared.size())).second)
        throw ParseError("vertex '" + toks[k].text + "' declared twice", lines[li].number, toks[k].column);
      declared.push_back(toks[k].text);
      declared_side.push_back(side);
    }
    ++li;
  };
  if (kind == Kind::Marriage) {
    declare_line("A", Side::A);
    declare_line("B", Side::B);
  } else {
    declare_line("V", Side::None);
  }

  // Vertex order follows the list lines; declared vertices without a line follow.
  std::vector<int> order;
  std::vector<int> line_of(declared.size(), 0);
  std::vector<std::vector<std::pair<std::string, int>>> raw(declared.size());
  std::vector<int> raw_line(declared.size(), 0);
  for (; li < lines.size(); ++li) {
    const auto& L = lines[li];
    auto colon = L.text.find(':');
    auto first = L.text.find_first_not_of(" \t");
    if (colon == std::string::npos)
      throw ParseError("expected '<id>: <preferences>'", L.number, static_cast<int>(first) + 1);
    std::string id = L.text.substr(first, colon - first);
    while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.pop_back();
    auto it = decl_index.find(id);
    if (it == decl_index.end())
      throw ParseError("undeclared vertex '" + id + "'", L.number, static_cast<int>(first) + 1);
    if (line_of[it->second] != 0)
      throw ParseError("second preference line for '" + id + "'", L.number, static_cast<int>(first) + 1);
    line_of[it->second] = L.number;
    order.push_back(it->second);
    for (auto& t : tokens(L.text, colon + 1)) {
      if (t.text.find(':') != std::string::npos)
        throw ParseError("unexpected ':'", L.number, t.column);
      if (!decl_index.count(t.text))
        throw ParseError("unknown vertex '" + t.text + "'", L.number, t.column);
      raw[it->second].emplace_back(t.text, t.column);
    }
  }
  for (int d = 0; d < static_cast<int>(declared.size()); ++d)
    if (line_of[d] == 0) order.push_back(d);

  std::vector<int> pos(declared.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;
  std::vector<std::string> names;
  std::vector<Side> sides;
  std::vector<std::vector<int>> prefs;
  for (int d : order) {
    names.push_back(declared[d]);
    sides.push_back(declared_side[d]);
    std::vector<int> p;
    std::vector<char> seen(declared.size(), 0);
    for (auto& [nm, col] : raw[d]) {
      int w = decl_index.at(nm);
      if (seen[w]) {
        throw ValidationError("line " + std::to_string(line_of[d]) + ", column " +
                              std::to_string(col) + ": duplicate '" + nm + "' in list of '" +
                              declared[d] + "'");
      }
      seen[w] = 1;
      p.push_back(pos[w]);
    }
    prefs.push_back(std::move(p));
  }
  return Instance::make(kind, std::move(names), std::move(sides), std::move(prefs));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream os;
  auto header = [&](const char* tag, Side side) {
    os << tag;
    for (int v = 0; v < inst.size(); ++v)
      if (inst.side(v) == side) os << ' ' << inst.name(v);
    os << '\n';
  };
  if (inst.kind() == Kind::Marriage) {
    os << "marriage\n";
    header("A", Side::A);
    header("B", Side::B);
  } else {
    os << "roommates\n";
    header("V", Side::None);
  }
  for (int v = 0; v < inst.size(); ++v) {
    os << inst.name(v) << ':';
    for (int w : inst.prefs(v)) os << ' ' << inst.name(w);
    os << '\n';
  }
  return os.str();
}

Matching parse_matching(const Instance& inst, std::string_view text) {
  std::vector<Edge> edges;
  for (auto& L : content_lines(text)) {
    auto toks = tokens(L.text);
    if (toks.size() != 2) throw ParseError("expected '<u> <v>'", L.number, toks[0].column);
    auto u = inst.find(toks[0].text);
    auto v = inst.find(toks[1].text);
    if (!u) throw ParseError("unknown vertex '" + toks[0].text + "'", L.number, toks[0].column);
    if (!v) throw ParseError("unknown vertex '" + toks[1].text + "'", L.number, toks[1].column);
    if (!inst.adjacent(*u, *v))
      throw ParseError("'" + toks[0].text + " " + toks[1].text + "' is not an edge", L.number, toks[0].column);
    edges.push_back({*u, *v});
  }
  return Matching::from_edges(inst, edges);
}

std::string serialize_matching(const Instance& inst, const Matching& m) {
  std::ostringstream os;
  for (int v = 0; v < inst.size(); ++v) {
    int w = m.partner(v);
    if (w == kUnmatched) continue;
    // Each edge once, from its first endpoint in vertex order.
    if (w > v) os << inst.name(v) << ' ' << inst.name(w) << '\n';
  }
  return os.str();
}

Witness parse_witness(const Instance& inst, std::string_view text) {
  Witness w(inst.size(), std::numeric_limits<int>::min());
  for (auto& L : content_lines(text)) {
    auto toks = tokens(L.text);
    if (toks.size() != 2) throw ParseError("expected '<vertex> <value>'", L.number, toks[0].column);
    auto u = inst.find(toks[0].text);
    if (!u) throw ParseError("unknown vertex '" + toks[0].text + "'", L.number, toks[0].column);
    int val = parse_int_token(toks[1], L.number);
    if (val < -1 || val > 1) throw ParseError("witness values lie in {-1,0,1}", L.number, toks[1].column);
    w[*u] = val;
  }
  return w;
}

std::string serialize_witness(const Instance& inst, const Witness& w) {
  std::ostringstream os;
  for (int v = 0; v < inst.size(); ++v) os << inst.name(v) << ' ' << w[v] << '\n';
  return os.str();
}

std::vector<int> matched_vertices(const Matching& m) {
  std::vector<int> out;
  for (int v = 0; v < m.size(); ++v)
    if (m.matched(v)) out.push_back(v);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_edge(const Instance& inst, Edge e) {
  return "(" + inst.name(e.u) + "," + inst.name(e.v) + ")";
}

std::string format_matching(const Instance& inst, const Matching& m) {
  std::string out = "{";
  bool first = true;
  for (int v = 0; v < inst.size(); ++v) {
    int w = m.partner(v);
    if (w == kUnmatched || w < v) continue;
    if (!first) out += ",";
    first = false;
    out += format_edge(inst, {v, w});
  }
  return out + "}";
}

}  // namespace popmatch
