#pragma once

#include <optional>
#include <string>
#include <vector>

#include "popmatch/core_model.hpp"

namespace popmatch {

struct StabilityResult {
  bool stable = true;
  std::optional<Edge> blocking;  // first blocking edge in edge order
};
StabilityResult is_stable(const Instance& inst, const Matching& m);

// Max over matchings N of Delta(N, m), with an N attaining it.
struct MarginResult {
  long long margin = 0;
  Matching better;
};
MarginResult max_margin_weight(const Instance& inst, const Matching& m);
bool is_popular_weight(const Instance& inst, const Matching& m);

struct ForbiddenStructure {
  enum class Kind {
    CycleWithBlockingEdge,       // alternating cycle through a (+,+) edge
    PathFromUnmatched,           // starts at an unmatched vertex, has a (+,+) edge
    PathWithTwoBlockingEdges,
    PositiveComponent,           // component of M xor N with positive margin
  };
  Kind kind;
  std::vector<int> vertices;  // walk order; cycles do not repeat the first vertex
};
struct StructureResult {
  bool popular = true;
  std::optional<ForbiddenStructure> structure;
};
StructureResult is_popular_structure(const Instance& inst, const Matching& m);
std::string describe(const Instance& inst, const ForbiddenStructure& s);

// Weight test for marriage instances, structure test otherwise.
bool is_popular(const Instance& inst, const Matching& m);

// Augmenting path in G_M, endpoints unmatched; empty if none.
std::vector<int> augmenting_path_in_gm(const Instance& inst, const Matching& m);

struct DominanceResult {
  bool dominant = false;
  bool popular = false;
  std::vector<int> augmenting_path;
};
DominanceResult check_dominant(const Instance& inst, const Matching& m);
bool is_dominant(const Instance& inst, const Matching& m);

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> violations;
};
// Throws ValidationError if w does not cover every vertex.
WitnessCheck verify_witness(const Instance& inst, const Matching& m, const Witness& w);

constexpr int kDefaultWitnessBound = 24;
// Throws ValidationError when the instance has more than `bound` vertices.
std::optional<Witness> find_witness_small(const Instance& inst, const Matching& m,
                                          int bound = kDefaultWitnessBound);

}  // namespace popmatch
