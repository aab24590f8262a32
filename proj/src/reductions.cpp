#include "popmatch/reductions.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/proposal_engine.hpp"

namespace popmatch {

// ---- formulas ----

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  int declared = 0;
  std::vector<Literal> cur;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream in(line);
    std::string tok;
    if (!(in >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok[0] == '%') break;
    if (tok == "p") {
      std::string fmt;
      long v = -1, c = -1;
      if (header || !(in >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
        throw ParseError("malformed problem line", line_no, 1);
      header = true;
      f.num_vars = static_cast<int>(v);
      declared = static_cast<int>(c);
      continue;
    }
    if (!header) throw ParseError("clause before problem line", line_no, 1);
    do {
      long x = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("expected integer literal, got '" + tok + "'", line_no,
                         static_cast<int>(line.find(tok)) + 1);
      if (x == 0) {
        f.clauses.push_back(cur);
        cur.clear();
        continue;
      }
      long var = x < 0 ? -x : x;
      if (var > f.num_vars)
        throw ParseError("variable " + std::to_string(var) + " exceeds declared count", line_no,
                         static_cast<int>(line.find(tok)) + 1);
      cur.push_back({static_cast<int>(var), x < 0});
    } while (in >> tok);
  }
  if (!header) throw ParseError("missing problem line", line_no, 1);
  if (!cur.empty()) f.clauses.push_back(cur);
  if (static_cast<int>(f.clauses.size()) != declared)
    throw ParseError("expected " + std::to_string(declared) + " clauses, found " +
                     std::to_string(f.clauses.size()), line_no, 1);
  return f;
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (const Literal& l : c) out << (l.negated ? -l.var : l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& a) {
  if (static_cast<int>(a.size()) < f.num_vars) throw ValidationError("assignment too short");
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (const Literal& l : c)
      if (a[l.var - 1] != l.negated) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

CnfFormula NormalizedFormula::as_cnf() const {
  CnfFormula f;
  f.num_vars = 2 * n;
  for (int q = 0; q < clause_count(); ++q) {
    std::vector<Literal> c;
    for (int v : clauses[q]) c.push_back({v, negative(q)});
    f.clauses.push_back(c);
  }
  return f;
}

NormalizedFormula normalize_3sat(const CnfFormula& f) {
  NormalizedFormula nf;
  nf.n = f.num_vars;
  nf.m = static_cast<int>(f.clauses.size());
  for (size_t q = 0; q < f.clauses.size(); ++q) {
    const auto& c = f.clauses[q];
    if (c.size() < 2 || c.size() > 3)
      throw ValidationError("clause " + std::to_string(q + 1) + " has " + std::to_string(c.size()) +
                            " literals; 2 or 3 required");
    std::vector<int> out;
    for (const Literal& l : c) {
      if (l.var < 1 || l.var > f.num_vars) throw ValidationError("literal out of range");
      out.push_back(l.negated ? nf.n + l.var : l.var);
    }
    nf.clauses.push_back(out);
  }
  for (int i = 1; i <= nf.n; ++i) nf.clauses.push_back({i, nf.n + i});
  for (int i = 1; i <= nf.n; ++i) nf.clauses.push_back({i, nf.n + i});
  return nf;
}

Target parse_target(std::string_view s) {
  if (s == "g4") return Target::G4;
  if (s == "g4max") return Target::G4Max;
  if (s == "g5") return Target::G5;
  if (s == "hmin") return Target::HMin;
  if (s == "hroom") return Target::HRoom;
  throw ValidationError("unknown target '" + std::string(s) + "'");
}

const char* target_name(Target t) {
  switch (t) {
    case Target::G4: return "g4";
    case Target::G4Max: return "g4max";
    case Target::G5: return "g5";
    case Target::HMin: return "hmin";
    case Target::HRoom: return "hroom";
  }
  return "?";
}

// ---- builders ----

namespace {

struct Builder {
  std::vector<std::string> names;
  std::vector<Side> sides;
  std::vector<std::vector<int>> prefs;

  int add(std::string name, Side side) {
    names.push_back(std::move(name));
    sides.push_back(side);
    prefs.emplace_back();
    return static_cast<int>(names.size()) - 1;
  }
  Instance finish(Kind kind = Kind::Marriage) {
    return Instance::make(kind, names, sides, prefs);
  }
  static Builder from(const Instance& g) {
    Builder b;
    b.names = g.names();
    b.sides = g.sides();
    b.prefs = g.all_prefs();
    return b;
  }
};

Edge edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

std::string gadget_name(const char* letter, int clause, int pos) {
  return std::string(letter) + std::to_string(clause + 1) + "_" + std::to_string(pos + 1);
}

// Creates the four vertices of every literal occurrence.
void add_gadgets(Builder& b, const NormalizedFormula& nf, GadgetMap& gm) {
  gm.negative_gadget.assign(2 * nf.n + 1, -1);
  for (int q = 0; q < nf.clause_count(); ++q) {
    for (int p = 0; p < static_cast<int>(nf.clauses[q].size()); ++p) {
      LiteralGadget g;
      g.clause = q;
      g.position = p;
      g.var = nf.clauses[q][p];
      g.negative = nf.negative(q);
      if (!g.negative) {
        g.x = b.add(gadget_name("a", q, p), Side::A);
        g.y = b.add(gadget_name("b", q, p), Side::B);
        g.x2 = b.add(gadget_name("a'", q, p), Side::A);
        g.y2 = b.add(gadget_name("b'", q, p), Side::B);
      } else {
        g.x = b.add(gadget_name("c", q, p), Side::A);
        g.y = b.add(gadget_name("d", q, p), Side::B);
        g.x2 = b.add(gadget_name("c'", q, p), Side::A);
        g.y2 = b.add(gadget_name("d'", q, p), Side::B);
        gm.negative_gadget[g.var] = static_cast<int>(gm.gadgets.size());
      }
      gm.gadgets.push_back(g);
    }
  }
}

void check_normalized(const NormalizedFormula& nf) {
  if (static_cast<int>(nf.clauses.size()) != nf.clause_count())
    throw ValidationError("normalized formula has wrong clause count");
  for (int q = 0; q < nf.clause_count(); ++q) {
    const auto& c = nf.clauses[q];
    if (c.size() < 2 || c.size() > 3) throw ValidationError("normalized clause arity must be 2 or 3");
    for (int v : c)
      if (v < 1 || v > 2 * nf.n) throw ValidationError("normalized variable out of range");
  }
}

}  // namespace

std::pair<Instance, GadgetMap> build_nondominant_gadget(const NormalizedFormula& nf) {
  check_normalized(nf);
  const int M = nf.clause_count();
  Builder b;
  GadgetMap gm;
  gm.target = Target::G4;
  const int s = b.add("s", Side::B);
  const int t = b.add("t", Side::A);
  std::vector<int> u(M + 1), v(M + 1);
  for (int i = 0; i <= M; ++i) {
    u[i] = b.add("u" + std::to_string(i), Side::A);
    v[i] = b.add("v" + std::to_string(i), Side::B);
    gm.basic.push_back(edge(u[i], v[i]));
  }
  add_gadgets(b, nf, gm);
  gm.special = {{"s", s}, {"t", t}};

  auto& P = b.prefs;
  P[s] = {u[0]};
  P[t] = {v[M]};
  P[u[0]] = {v[0], s};
  std::vector<std::vector<int>> by_clause(M);
  for (int g = 0; g < static_cast<int>(gm.gadgets.size()); ++g) by_clause[gm.gadgets[g].clause].push_back(g);

  for (int q = 0; q < M; ++q) {
    const int i = q + 1;
    auto& ui = P[u[i]];
    auto& vprev = P[v[i - 1]];
    if (!nf.negative(q)) {
      for (int g : by_clause[q]) ui.push_back(gm.gadgets[g].y);
      ui.push_back(v[i]);
      vprev.push_back(u[i - 1]);
      for (int g : by_clause[q]) vprev.push_back(gm.gadgets[g].x);
    } else {
      ui.push_back(v[i]);
      for (int g : by_clause[q]) ui.push_back(gm.gadgets[g].y);
      for (int g : by_clause[q]) vprev.push_back(gm.gadgets[g].x);
      vprev.push_back(u[i - 1]);
    }
  }
  P[v[M]] = {u[M], t};

  for (const LiteralGadget& g : gm.gadgets) {
    const int i = g.clause + 1;
    if (!g.negative) {
      const LiteralGadget& neg = gm.gadgets[gm.negative_gadget[g.var]];
      P[g.x] = {g.y, neg.y, v[i - 1], g.y2};
      P[g.x2] = {g.y2, g.y};
      P[g.y] = {g.x2, g.x, u[i]};
      P[g.y2] = {g.x, g.x2};
      gm.consistency.push_back(edge(g.x, neg.y));
    } else {
      P[g.x] = {g.y, g.y2, v[i - 1]};
      P[g.x2] = {g.y2, g.y};
      P[g.y] = {g.x2};
      for (const LiteralGadget& h : gm.gadgets)
        if (!h.negative && h.var == g.var) P[g.y].push_back(h.x);
      P[g.y].push_back(u[i]);
      P[g.y].push_back(g.x);
      P[g.y2] = {g.x, g.x2};
    }
  }
  return {b.finish(), gm};
}

std::pair<Instance, GadgetMap> build_stable_dominant_gadget(const NormalizedFormula& nf) {
  check_normalized(nf);
  const int M = nf.clause_count();
  Builder b;
  GadgetMap gm;
  gm.target = Target::G5;
  const int s = b.add("s", Side::B);
  const int t = b.add("t", Side::A);
  std::vector<std::vector<int>> u(M), v(M);
  for (int q = 0; q < M; ++q) {
    const int r = static_cast<int>(nf.clauses[q].size());
    for (int j = 0; j <= r; ++j) {
      std::string idx = std::to_string(q + 1) + "_" + std::to_string(j);
      u[q].push_back(b.add("u" + idx, Side::A));
      v[q].push_back(b.add("v" + idx, Side::B));
      gm.basic.push_back(edge(u[q][j], v[q][j]));
    }
  }
  add_gadgets(b, nf, gm);
  gm.special = {{"s", s}, {"t", t}};

  auto& P = b.prefs;
  for (int q = 0; q < M; ++q) {
    P[s].push_back(u[q][0]);
    P[t].push_back(v[q].back());
    P[u[q][0]] = {v[q][0], s};
  }
  for (const LiteralGadget& g : gm.gadgets) {
    const int q = g.clause, j = g.position + 1;
    if (!g.negative) {
      P[u[q][j]] = {g.y, v[q][j]};
      P[v[q][j - 1]] = {u[q][j - 1], g.x};
    } else {
      P[u[q][j]] = {v[q][j], g.y};
      P[v[q][j - 1]] = {g.x, u[q][j - 1]};
    }
  }
  for (int q = 0; q < M; ++q) P[v[q].back()] = {u[q].back(), t};

  for (const LiteralGadget& g : gm.gadgets) {
    const int q = g.clause, j = g.position + 1;
    if (!g.negative) {
      const LiteralGadget& neg = gm.gadgets[gm.negative_gadget[g.var]];
      P[g.x] = {g.y, v[q][j - 1], g.y2};
      P[g.x2] = {g.y2, g.y};
      P[g.y] = {g.x2, neg.x, g.x, u[q][j]};
      P[g.y2] = {g.x, g.x2};
      gm.consistency.push_back(edge(g.y, neg.x));
    } else {
      P[g.x] = {g.y};
      for (const LiteralGadget& h : gm.gadgets)
        if (!h.negative && h.var == g.var) P[g.x].push_back(h.y);
      P[g.x].push_back(g.y2);
      P[g.x].push_back(v[q][j - 1]);
      P[g.x2] = {g.y2, g.y};
      P[g.y] = {g.x2, u[q][j], g.x};
      P[g.y2] = {g.x, g.x2};
    }
  }
  return {b.finish(), gm};
}

std::pair<Instance, GadgetMap> augment_max_size(const Instance& g4, const GadgetMap& gm) {
  if (gm.target != Target::G4) throw ValidationError("augment_max_size needs a g4 instance");
  Builder b = Builder::from(g4);
  GadgetMap out = gm;
  out.target = Target::G4Max;
  const int p0 = b.add("p0", Side::A), q0 = b.add("q0", Side::B);
  const int p1 = b.add("p1", Side::A), q1 = b.add("q1", Side::B);
  b.prefs[p0] = {q0};
  b.prefs[q0] = {p1, p0};
  b.prefs[p1] = {q0, q1};
  b.prefs[q1] = {p1};
  out.special.insert({{"p0", p0}, {"q0", q0}, {"p1", p1}, {"q1", q1}});
  return {b.finish(), out};
}

std::pair<Instance, GadgetMap> augment_min_size(const Instance& g5, const GadgetMap& gm) {
  if (gm.target != Target::G5) throw ValidationError("augment_min_size needs a g5 instance");
  Builder b = Builder::from(g5);
  GadgetMap out = gm;
  out.target = Target::HMin;
  const int w = b.add("w", Side::A);
  for (const LiteralGadget& g : gm.gadgets) {
    if (!g.negative) continue;
    b.prefs[w].push_back(g.y2);
    b.prefs[g.y2].push_back(w);
  }
  const int t = gm.vertex("t");
  const int t2 = b.add("t'", Side::B);
  const int r2 = b.add("r'", Side::A);
  const int r = b.add("r", Side::B);
  b.prefs[r] = {r2, t};
  b.prefs[r2] = {r, t2};
  b.prefs[t2] = {r2, t};
  b.prefs[t].push_back(r);
  b.prefs[t].push_back(t2);
  out.special.insert({{"w", w}, {"t'", t2}, {"r'", r2}, {"r", r}});
  return {b.finish(), out};
}

std::pair<Instance, GadgetMap> augment_roommates(const Instance& g5, const GadgetMap& gm) {
  if (gm.target != Target::G5) throw ValidationError("augment_roommates needs a g5 instance");
  Builder b = Builder::from(g5);
  GadgetMap out = gm;
  out.target = Target::HRoom;
  const int s = gm.vertex("s"), t = gm.vertex("t");
  for (const LiteralGadget& g : gm.gadgets) {
    if (!g.negative) continue;
    b.prefs[s].push_back(g.y2);
    b.prefs[g.y2].push_back(s);
  }
  const int r = b.add("r", Side::None);
  const int r2 = b.add("r'", Side::None);
  const int r3 = b.add("r''", Side::None);
  b.prefs[r] = {r2, r3, t};
  b.prefs[r2] = {r3, r};
  b.prefs[r3] = {r, r2};
  b.prefs[t].push_back(r);
  out.special.insert({{"r", r}, {"r'", r2}, {"r''", r3}});
  return {b.finish(Kind::Roommates), out};
}

std::pair<Instance, GadgetMap> build_target(const NormalizedFormula& nf, Target t) {
  switch (t) {
    case Target::G4: return build_nondominant_gadget(nf);
    case Target::G4Max: {
      auto [g, gm] = build_nondominant_gadget(nf);
      return augment_max_size(g, gm);
    }
    case Target::G5: return build_stable_dominant_gadget(nf);
    case Target::HMin: {
      auto [g, gm] = build_stable_dominant_gadget(nf);
      return augment_min_size(g, gm);
    }
    case Target::HRoom: {
      auto [g, gm] = build_stable_dominant_gadget(nf);
      return augment_roommates(g, gm);
    }
  }
  throw ValidationError("unknown target");
}

std::string serialize_gadget_map(const Instance& inst, const GadgetMap& gm) {
  std::ostringstream out;
  out << "target " << target_name(gm.target) << '\n';
  for (const auto& [role, v] : gm.special) out << role << ' ' << inst.name(v) << '\n';
  static const char* pos_roles[] = {"a", "b", "a'", "b'"};
  static const char* neg_roles[] = {"c", "d", "c'", "d'"};
  for (const LiteralGadget& g : gm.gadgets) {
    const char** roles = g.negative ? neg_roles : pos_roles;
    const int ids[] = {g.x, g.y, g.x2, g.y2};
    std::string lit = std::string(g.negative ? "~" : "") + "X" + std::to_string(g.var) + "@C" +
                      std::to_string(g.clause + 1) + "." + std::to_string(g.position + 1);
    for (int k = 0; k < 4; ++k) out << roles[k] << '[' << lit << "] " << inst.name(ids[k]) << '\n';
  }
  for (Edge e : gm.basic) out << "basic " << inst.name(e.u) << ',' << inst.name(e.v) << '\n';
  for (Edge e : gm.consistency) out << "consistency " << inst.name(e.u) << ',' << inst.name(e.v) << '\n';
  return out.str();
}

std::string serialize_gadget_instance(const Instance& inst, const GadgetMap& gm) {
  std::ostringstream out;
  std::istringstream in(serialize_gadget_map(inst, gm));
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
  out << serialize_instance(inst);
  return out.str();
}

// ---- assignments ----

std::vector<bool> expand_assignment(const NormalizedFormula& nf, const std::vector<bool>& a) {
  const int n = nf.n;
  std::vector<bool> full(2 * n);
  if (static_cast<int>(a.size()) == n) {
    for (int i = 0; i < n; ++i) {
      full[i] = a[i];
      full[n + i] = !a[i];
    }
    return full;
  }
  if (static_cast<int>(a.size()) != 2 * n)
    throw ValidationError("assignment must have " + std::to_string(n) + " or " + std::to_string(2 * n) + " values");
  for (int i = 0; i < n; ++i)
    if (a[i] == a[n + i])
      throw ValidationError("inconsistent complement pair X" + std::to_string(i + 1) + ", X" +
                            std::to_string(n + i + 1));
  return a;
}

namespace {

bool g5_family(const GadgetMap& gm) { return gm.stable_dominant_family(); }

}  // namespace

Matching assignment_to_matching(const Instance& inst, const NormalizedFormula& nf, const GadgetMap& gm,
                                const std::vector<bool>& a) {
  std::vector<bool> full = expand_assignment(nf, a);
  Matching m(inst.size());
  for (Edge e : gm.basic) m.link(e.u, e.v);
  for (const LiteralGadget& g : gm.gadgets) {
    // g4 encodes true as the crossed pair, g5 as the straight pair.
    bool straight = full[g.var - 1] == g5_family(gm);
    if (straight) {
      m.link(g.x, g.y);
      m.link(g.x2, g.y2);
    } else {
      m.link(g.x, g.y2);
      m.link(g.x2, g.y);
    }
  }
  return m;
}

std::vector<bool> matching_to_assignment(const Instance& inst, const NormalizedFormula& nf,
                                         const GadgetMap& gm, const Matching& s) {
  if (s.size() != inst.size()) throw ValidationError("matching does not belong to the instance");
  if (!is_stable(inst, s).stable) throw ValidationError("matching is not stable");
  std::vector<int> state(gm.gadgets.size());
  for (size_t k = 0; k < gm.gadgets.size(); ++k) {
    const LiteralGadget& g = gm.gadgets[k];
    if (s.contains(g.x, g.y) && s.contains(g.x2, g.y2)) {
      state[k] = 1;
    } else if (s.contains(g.x, g.y2) && s.contains(g.x2, g.y)) {
      state[k] = 0;
    } else {
      throw ValidationError("gadget " + inst.name(g.x) + " is in neither canonical state");
    }
  }
  std::vector<bool> a(2 * nf.n);
  for (int x = 1; x <= 2 * nf.n; ++x) {
    int k = gm.negative_gadget.at(x);
    bool straight = state[k] == 1;
    a[x - 1] = g5_family(gm) ? straight : !straight;
  }
  return a;
}

Matching lift_matching(const Instance& inst, const GadgetMap& gm, const Matching& base) {
  Matching m(inst.size());
  for (Edge e : base.edges()) m.link(e.u, e.v);
  auto add = [&](const char* x, const char* y) { m.link(gm.vertex(x), gm.vertex(y)); };
  switch (gm.target) {
    case Target::G4Max: add("p0", "q0"); add("p1", "q1"); break;
    case Target::HMin: add("r", "t"); add("r'", "t'"); break;
    case Target::HRoom: add("t", "r"); add("r'", "r''"); break;
    default: break;
  }
  return m;
}

// ---- verification ----

bool ReductionReport::confirmed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReductionCheck& c) { return c.holds; });
}

namespace {

struct Structure {
  bool ok = true;
  std::string first_failure;
};

// Basic edges present, consistency edges absent, unmatched set as expected.
void check_structure(const Instance& inst, const GadgetMap& gm, const Matching& s,
                     const std::vector<int>& id_map, const std::set<int>& unmatched, Structure& out) {
  if (!out.ok) return;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.first_failure = std::move(why);
  };
  for (Edge e : gm.basic)
    if (!s.contains(id_map[e.u], id_map[e.v])) return fail("basic edge " + format_edge(inst, {id_map[e.u], id_map[e.v]}) + " missing");
  for (Edge e : gm.consistency)
    if (s.contains(id_map[e.u], id_map[e.v])) return fail("consistency edge " + format_edge(inst, {id_map[e.u], id_map[e.v]}) + " used");
  std::set<int> free_set;
  for (int v = 0; v < inst.size(); ++v)
    if (!s.matched(v)) free_set.insert(v);
  if (free_set != unmatched) {
    std::string names;
    for (int v : free_set) names += (names.empty() ? "" : ",") + inst.name(v);
    fail("unmatched set {" + names + "}");
  }
}

std::string article(const std::string& noun) {
  return std::string("aeiou").find(noun[0]) == std::string::npos ? "a " : "an ";
}

const char* verdict(const ReductionCheck& c) {
  if (!c.holds) return "FAILED";
  return c.exact ? "CONFIRMED" : "CONSISTENT";
}

std::string method_for(const EnumerationStatus& st, const char* what) {
  return std::string(what) + " (" + std::to_string(st.count) + (st.complete ? ", complete)" : ", limit reached)");
}

}  // namespace

ReductionReport verify_reduction(const CnfFormula& f, Target target, const VerifyOptions& opt) {
  ReductionReport rep;
  rep.target = target;
  auto sat = brute_sat(f);
  rep.satisfiable = sat.has_value();
  NormalizedFormula nf = normalize_3sat(f);
  auto [inst, gm] = build_target(nf, target);
  rep.vertices = inst.size();
  const long long cap = opt.enumeration_cap;
  const std::string S = sat ? "SAT ⇒ " : "UNSAT ⇒ ";

  std::vector<int> identity(inst.size());
  for (int v = 0; v < inst.size(); ++v) identity[v] = v;
  auto sp = [&](const char* role) { return gm.vertex(role); };

  // Stable-matching structure on the instance itself (H* for the roommates target).
  {
    Instance host = inst;
    std::vector<int> id_map = identity;
    std::set<int> expect;
    std::string who;
    switch (target) {
      case Target::G4:
      case Target::G5: expect = {sp("s"), sp("t")}; who = "{s,t}"; break;
      case Target::G4Max: expect = {sp("s"), sp("t"), sp("p0"), sp("q1")}; who = "{s,t,p0,q1}"; break;
      case Target::HMin: expect = {sp("s"), sp("w")}; who = "{s,w}"; break;
      case Target::HRoom: {
        std::vector<int> keep;
        std::set<int> drop = {sp("t"), sp("r"), sp("r'"), sp("r''")};
        for (int v = 0; v < inst.size(); ++v)
          if (!drop.count(v)) keep.push_back(v);
        std::vector<int> to_sub;
        host = induced_subinstance(inst, keep, &to_sub);
        id_map = to_sub;
        expect = {to_sub[sp("s")]};
        who = "{s} in H*";
        break;
      }
    }
    Structure st;
    bool square_ok = true;
    bool exists = false;
    auto status = enumerate_stable_matchings(host, [&](const Matching& m) {
      check_structure(host, gm, m, id_map, expect, st);
      if (target == Target::HMin && !(m.contains(sp("r"), sp("r'")) && m.contains(sp("t"), sp("t'"))))
        square_ok = false;
      // A stable matching is dominant iff G_M has no augmenting path.
      if (target == Target::G4 && !exists && !augmenting_path_in_gm(host, m).empty()) exists = true;
      if (target == Target::G5 && !exists && augmenting_path_in_gm(host, m).empty()) exists = true;
      return true;
    }, cap);
    ReductionCheck c;
    c.statement = "stable matchings contain every basic edge, no consistency edge, and leave exactly " + who +
                  " unmatched";
    c.holds = st.ok && status.count > 0;
    c.exact = status.complete;
    c.method = method_for(status, "stable enumeration") + (st.ok ? "" : "; " + st.first_failure);
    rep.checks.push_back(c);
    if (target == Target::HMin) {
      ReductionCheck q{"every stable matching contains (r,r') and (t,t')", square_ok, status.complete,
                       method_for(status, "stable enumeration")};
      rep.checks.push_back(q);
    }
    if (target == Target::G4 || target == Target::G5) {
      const char* obj = target == Target::G4 ? "stable non-dominant matching" : "stable∧dominant matching";
      ReductionCheck th;
      th.statement = S + (sat ? article(obj) + obj + " exists" : std::string("no ") + obj);
      th.holds = exists == rep.satisfiable;
      th.exact = status.complete || exists;
      th.method = method_for(status, "stable enumeration");
      rep.checks.push_back(th);
    }
  }

  // Coverage enumeration for the popularity-based targets.
  if (target == Target::G4Max || target == Target::HMin || target == Target::HRoom) {
    std::vector<int> cover;
    const char* obj = "";
    if (target == Target::G4Max) {
      cover = matched_vertices(solve_dominant(inst).first);
      obj = "non-dominant max-size popular matching";
    } else if (target == Target::HMin) {
      cover = stable_vertex_set(inst);
      obj = "unstable min-size popular matching";
    } else {
      for (int v = 0; v < inst.size(); ++v)
        if (v != sp("s")) cover.push_back(v);
      obj = "popular matching";
    }
    bool exists = false;
    bool fixed_ok = true;
    auto status = enumerate_matchings_covering(inst, cover, [&](const Matching& m) {
      if (target == Target::HMin && is_stable(inst, m).stable) return true;
      if (!is_popular_structure(inst, m).popular) return true;
      switch (target) {
        case Target::G4Max:
          if (!(m.contains(sp("p0"), sp("q0")) && m.contains(sp("p1"), sp("q1")))) fixed_ok = false;
          if (!augmenting_path_in_gm(inst, m).empty()) exists = true;
          break;
        case Target::HMin:
          exists = true;
          break;
        default:
          if (!(m.contains(sp("t"), sp("r")) && m.contains(sp("r'"), sp("r''")))) fixed_ok = false;
          exists = true;
          break;
      }
      return true;
    }, cap);
    if (target != Target::HMin) {
      ReductionCheck fc;
      fc.statement = target == Target::G4Max ? "every max-size popular matching contains (p0,q0) and (p1,q1)"
                                             : "every popular matching contains (t,r) and (r',r'')";
      fc.holds = fixed_ok;
      fc.exact = status.complete;
      fc.method = method_for(status, "coverage enumeration");
      rep.checks.push_back(fc);
    }
    ReductionCheck th;
    th.statement = S + (sat ? article(obj) + obj + " exists" : std::string("no ") + obj);
    th.holds = exists == rep.satisfiable;
    th.exact = status.complete || exists;
    th.method = method_for(status, "coverage enumeration");
    rep.checks.push_back(th);
  }

  // One-directional construction checks from a satisfying assignment.
  if (sat) {
    Matching ma = assignment_to_matching(inst, nf, gm, *sat);
    ReductionCheck c;
    c.exact = true;
    c.method = "M_A construction";
    switch (target) {
      case Target::G4:
        c.statement = "M_A is stable and not dominant";
        c.holds = is_stable(inst, ma).stable && !is_dominant(inst, ma);
        break;
      case Target::G5:
        c.statement = "M_A is stable and dominant";
        c.holds = is_stable(inst, ma).stable && is_dominant(inst, ma);
        break;
      case Target::G4Max: {
        Matching lifted = lift_matching(inst, gm, ma);
        c.statement = "lifted M_A is popular, max-size and not dominant";
        c.holds = is_popular(inst, lifted) &&
                  lifted.edge_count() == solve_dominant(inst).first.edge_count() && !is_dominant(inst, lifted);
        break;
      }
      case Target::HMin: {
        Matching lifted = lift_matching(inst, gm, ma);
        c.statement = "lifted M_A is popular, min-size and unstable";
        c.holds = is_popular(inst, lifted) && lifted.edge_count() == solve_stable(inst).edge_count() &&
                  !is_stable(inst, lifted).stable;
        break;
      }
      case Target::HRoom: {
        Matching lifted = lift_matching(inst, gm, ma);
        c.statement = "lifted M_A is popular";
        c.holds = is_popular(inst, lifted);
        break;
      }
    }
    rep.checks.push_back(c);
    if (target == Target::G4 || target == Target::G5) {
      ReductionCheck rt;
      rt.statement = "assignment read back from M_A equals the assignment";
      rt.exact = true;
      rt.method = "round trip";
      rt.holds = matching_to_assignment(inst, nf, gm, ma) == expand_assignment(nf, *sat);
      rep.checks.push_back(rt);
    }
  }
  return rep;
}

std::string format_report(const ReductionReport& r) {
  std::ostringstream out;
  out << "target " << target_name(r.target) << ": formula " << (r.satisfiable ? "SAT" : "UNSAT") << ", "
      << r.vertices << " vertices\n";
  for (const ReductionCheck& c : r.checks)
    out << c.statement << ": " << verdict(c) << " [" << c.method << "]\n";
  return out.str();
}

}  // namespace popmatch
