#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "popmatch/core_model.hpp"

namespace popmatch {

struct Literal {
  int var = 1;  // 1-based
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<Literal>> clauses;
};

CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& f);
// a[i] is the value of variable i+1.
bool satisfies(const CnfFormula& f, const std::vector<bool>& a);

// Negation-free form over 2n variables: X_{n+i} stands for not X_i.
// Clauses 0..m-1 are the originals, m..m+n-1 are X_i v X_{n+i}, and
// m+n..m+2n-1 are the negative clauses (not X_i v not X_{n+i}).
struct NormalizedFormula {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> clauses;  // variables 1..2n
  int clause_count() const { return m + 2 * n; }
  bool negative(int clause) const { return clause >= m + n; }
  CnfFormula as_cnf() const;
};

NormalizedFormula normalize_3sat(const CnfFormula& f);

enum class Target { G4, G4Max, G5, HMin, HRoom };
Target parse_target(std::string_view s);
const char* target_name(Target t);

struct LiteralGadget {
  int clause = 0;    // 0-based
  int position = 0;  // 0-based
  int var = 1;       // 1..2n
  bool negative = false;
  // (a, b, a', b') for x, (c, d, c', d') for not x.
  int x = -1, y = -1, x2 = -1, y2 = -1;
};

struct GadgetMap {
  Target target = Target::G4;
  std::vector<LiteralGadget> gadgets;  // construction order
  std::vector<Edge> basic;
  std::vector<Edge> consistency;
  std::map<std::string, int> special;
  // Index into gadgets of the negative gadget of each variable (1..2n).
  std::vector<int> negative_gadget;
  bool stable_dominant_family() const {
    return target == Target::G5 || target == Target::HMin || target == Target::HRoom;
  }
  int vertex(const std::string& role) const { return special.at(role); }
};

std::pair<Instance, GadgetMap> build_nondominant_gadget(const NormalizedFormula& nf);
std::pair<Instance, GadgetMap> build_stable_dominant_gadget(const NormalizedFormula& nf);
std::pair<Instance, GadgetMap> augment_max_size(const Instance& g4, const GadgetMap& gm);
std::pair<Instance, GadgetMap> augment_min_size(const Instance& g5, const GadgetMap& gm);
std::pair<Instance, GadgetMap> augment_roommates(const Instance& g5, const GadgetMap& gm);
std::pair<Instance, GadgetMap> build_target(const NormalizedFormula& nf, Target t);

std::string serialize_gadget_map(const Instance& inst, const GadgetMap& gm);
// Instance file with the gadget roles as leading comments.
std::string serialize_gadget_instance(const Instance& inst, const GadgetMap& gm);

// Accepts n values (complements derived) or 2n complement-consistent values.
std::vector<bool> expand_assignment(const NormalizedFormula& nf, const std::vector<bool>& a);

// M_A on the base gadget graph; vertices added by the augmentations stay unmatched.
Matching assignment_to_matching(const Instance& inst, const NormalizedFormula& nf,
                                const GadgetMap& gm, const std::vector<bool>& a);
// 2n-valued assignment read back from the negative gadgets. Throws
// ValidationError if s is unstable or a gadget is in neither canonical state.
std::vector<bool> matching_to_assignment(const Instance& inst, const NormalizedFormula& nf,
                                         const GadgetMap& gm, const Matching& s);

// Adds the fixed edges of the augmentation (rho pair, square pair, triangle pair).
Matching lift_matching(const Instance& inst, const GadgetMap& gm, const Matching& base);

struct ReductionCheck {
  std::string statement;
  bool holds = false;
  bool exact = false;  // decided by complete enumeration
  std::string method;
};

struct ReductionReport {
  Target target = Target::G4;
  bool satisfiable = false;
  int vertices = 0;
  std::vector<ReductionCheck> checks;
  bool confirmed() const;
};

struct VerifyOptions {
  long long enumeration_cap = 2'000'000;
};

ReductionReport verify_reduction(const CnfFormula& f, Target t, const VerifyOptions& opt = {});
std::string format_report(const ReductionReport& r);

}  // namespace popmatch
