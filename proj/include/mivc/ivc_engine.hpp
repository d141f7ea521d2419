#pragma once

#include <optional>
#include <vector>

#include "mivc/engine_context.hpp"

namespace mivc {

struct IvcResult {
  ElementIdSet elements;
  bool approximate = false;
};

struct MivcEnumeration {
  std::vector<IvcResult> mivcs;
  bool complete = false;          // no unknown degraded the search
  ElementIdSet must;              // MUST set used to seed the search
  bool must_approximate = false;  // MUST was an underapproximation
};

struct Categorization {
  ElementIdSet must, may, irr;
};

struct IncompleteEnumeration : std::runtime_error {
  IncompleteEnumeration()
      : std::runtime_error("categorization requires a complete, exact MIVC enumeration") {}
};

// Thrown when an analysis that presumes an invariant property meets an
// unsafe one.
struct PropertyNotInvariant : std::runtime_error {
  explicit PropertyNotInvariant(const std::string& label)
      : std::runtime_error("property " + label + " is not invariant") {}
};

// Approximate validity core: the union of the unsat cores of the base and
// step queries of the smallest successful k-induction proof. Falls back to
// the whole universe (flagged approximate) when verification is
// inconclusive.
IvcResult get_approximate_mivc(EngineContext& ctx);

// Deletion-based minimization in element-id order; elements of `must` are
// never tried. Approximate iff some removal attempt was inconclusive.
IvcResult minimize_ivc(EngineContext& ctx, const ElementIdSet& ivc, const ElementIdSet& must);

// All minimal validity cores, seeded with the MUST set and terminated early
// when the MUST set itself is a core.
MivcEnumeration all_mivcs(EngineContext& ctx);

// MUST / MAY / IRR partition of the universe from a complete enumeration.
Categorization categorize(const MivcEnumeration& enumeration, const ElementIdSet& universe);

// CNF exploration map over one Boolean selector per element, solved in its
// own solver session. Tracks the unexplored portion of the power set.
class ExplorationMap {
 public:
  ExplorationMap(const ElementIdSet& universe, SolverConfig cfg);
  ~ExplorationMap();

  void require_all(const ElementIdSet& ids);        // unit clauses
  void block_supersets(const ElementIdSet& ids);    // clause: some id off
  void require_intersection(const ElementIdSet& ids);  // clause: some id on

  bool is_sat();
  // A satisfying assignment maximizing the number of selected elements;
  // nullopt when the map is exhausted.
  std::optional<ElementIdSet> get_unexplored_max();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mivc
