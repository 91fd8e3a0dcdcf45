#pragma once

#include <optional>
#include <vector>

#include "pcsf/constraint.hpp"
#include "pcsf/instance.hpp"

namespace pcsf {

/// Exact mode reports any strict violation; tolerance mode only violations
/// larger than epsilon (still evaluated in exact arithmetic).
struct SeparationOptions {
  bool exact = true;
  Rational epsilon{1, 1'000'000'000};
};

/// Minimum cut of the first violated pair in index order, or nullopt when the
/// point satisfies every cut constraint.
std::optional<CutConstraint> separate(const PcsfInstance& inst, const FracSolution& point,
                                      const SeparationOptions& opts = {});

/// One minimum cut per violated pair.
std::vector<CutConstraint> separate_all(const PcsfInstance& inst, const FracSolution& point,
                                        const SeparationOptions& opts = {});

struct FeasibilityResult {
  bool feasible = true;
  std::optional<CutConstraint> violated;
};

/// Nonnegativity (and z_i = 0 for infinite penalties) plus full separation.
FeasibilityResult check_feasible(const PcsfInstance& inst, const FracSolution& point,
                                 const SeparationOptions& opts = {});

struct LpResult {
  FracSolution solution;
  Rational value;
  std::vector<CutConstraint> active_cuts;  // generated cuts tight at the optimum
  int iterations = 0;                      // cutting-plane rounds
  int cuts_generated = 0;
};

/// Optimal solution of the cut relaxation by cutting planes over an exact
/// simplex. Infinite-penalty pairs have z fixed to 0. Throws InfeasibleError
/// when an infinite-penalty pair cannot be connected.
LpResult solve_lp(const PcsfInstance& inst, const SeparationOptions& opts = {});

/// Cut relaxation with some edges fixed to 1 (forced in) or removed (forced
/// out), objective data overridden, and a cut pool shared across calls.
struct CutLpModel {
  const Graph* graph = nullptr;
  const std::vector<TerminalPair>* pairs = nullptr;
  Capacities costs;
  std::vector<Penalty> penalties;
  std::vector<signed char> edge_state;  // 0 free, 1 forced in, -1 forced out
};

struct CutPoolEntry {
  PairId pair;
  std::vector<char> in_side;
};

struct CutLpOutcome {
  bool feasible = false;
  FracSolution solution;  // x includes forced-in edges at 1
  Rational value;         // includes the cost of forced-in edges
  int iterations = 0;
};

/// Stops early (returning the current lower bound, feasible = true) once the
/// restricted optimum reaches `cutoff`.
CutLpOutcome solve_cut_lp(const CutLpModel& model, std::vector<CutPoolEntry>& pool,
                          const std::optional<Rational>& cutoff = std::nullopt,
                          const SeparationOptions& opts = {});

struct VertexReport {
  bool is_feasible = false;
  bool all_tight = false;
  bool unique = false;
  int rank = 0;
  int dimension = 0;
  std::optional<CutConstraint> violated;
  std::vector<int> slack_members;  // family indices that are not tight
  Rational max_coordinate;
  bool all_x_positive = false;
};

/// Feasibility, tightness of every family member, and whether the family's
/// equality system determines the point (rank == number of variables).
VertexReport verify_vertex(const PcsfInstance& inst, const FracSolution& point,
                           const std::vector<CutConstraint>& family);

/// Rank of the family's constraint rows over the (x, finite-z) variables.
int constraint_rank(const PcsfInstance& inst, const std::vector<CutConstraint>& family);

}  // namespace pcsf
