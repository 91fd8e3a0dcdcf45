#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcsf/exact_solver.hpp"
#include "pcsf/generators.hpp"
#include "pcsf/instance.hpp"

namespace pcsf {

struct WeightedForest {
  EdgeSet forest;
  Rational weight;
};

/// Weighted forests with weights >= 0 summing to exactly 1.
struct ForestDistribution {
  std::vector<WeightedForest> support;

  Rational total_weight() const;
  /// Throws ValidationError on negative weights, a total other than 1, unknown
  /// edges or a cycle.
  void validate(const Graph& g) const;
};

// Text format: blocks "forest <weight>" followed by "e <edge-id>" lines.
ForestDistribution parse_distribution(std::istream& in);
void write_distribution(const ForestDistribution& dist, std::ostream& out);
ForestDistribution read_distribution(const std::filesystem::path& path);
void write_distribution(const ForestDistribution& dist, const std::filesystem::path& path);

/// Gap: Pr[e in F] <= s * x_e and Pr[s_i ~ t_i] >= 1 - s * z_i.
/// Lmp: Pr[e in F] <= s * x_e and Pr[s_i ~ t_i] >= 1 - z_i.
enum class DominanceMode { Gap, Lmp };

const char* to_string(DominanceMode mode);

struct DistributionReport {
  std::vector<Rational> marginals;   // per edge
  std::vector<Rational> pair_probs;  // per pair
  std::vector<EdgeId> edge_violations;
  std::vector<PairId> pair_violations;
  Rational max_marginal;
  Rational min_pair_prob;
  bool passes = false;
};

DistributionReport verify_distribution(const PcsfInstance& inst, const FracSolution& point,
                                       const ForestDistribution& dist, const Rational& scale, DominanceMode mode);

/// Dual of the dominance master: edge prices d, pair prices rho, and gamma.
/// For min_alpha / min_beta gamma is the pricing threshold (the dual of
/// sum(lambda) = 1); for feasibility_at_beta it is the (D) variable.
struct DualWitness {
  std::vector<Rational> d;
  std::vector<Rational> rho;
  Rational gamma;
};

struct DecompositionOptions {
  IpOptions ip;
  bool heuristic_pricing = true;  // try local search before exact pricing
  int max_iterations = 100000;
};

struct DecompositionResult {
  Rational value;  // alpha* or beta*
  ForestDistribution dist;
  DualWitness witness;
  int iterations = 0;
  int columns = 0;
  long exact_pricing_calls = 0;
};

/// min alpha with sum(lambda) (x^q, z^q) <= alpha (x*, z*) over integral
/// solutions, by column generation with exact pricing. Edges with x*_e = 0 are
/// never used. Throws ValidationError on an infeasible point or an instance
/// without pairs.
DecompositionResult min_alpha(const PcsfInstance& inst, const FracSolution& point,
                              const DecompositionOptions& opts = {});

/// Same LP with every forest on supp(x*) as a column; |supp(x*)| <= max_edges.
DecompositionResult min_alpha_enumerated(const PcsfInstance& inst, const FracSolution& point, int max_edges = 20);

/// min beta with sum(lambda) x^q <= beta x* and sum(lambda) z^q <= z*.
DecompositionResult min_beta(const PcsfInstance& inst, const FracSolution& point,
                             const DecompositionOptions& opts = {});

struct BetaFeasibility {
  Rational value;  // optimum of max sum(lambda); 1 iff a decomposition exists
  bool feasible = false;
  ForestDistribution dist;   // when feasible
  DualWitness certificate;   // (d, rho, gamma) of (D); objective = value
  int iterations = 0;
};

BetaFeasibility feasibility_at_beta(const PcsfInstance& inst, const FracSolution& point, const Rational& beta,
                                    const DecompositionOptions& opts = {});

/// Instance with c = d and pi = rho (gap) or rho / beta (lmp). Edges with
/// x*_e = 0 and pairs with z*_i = 0 are priced at gamma so that no integral
/// solution undercuts the certified value. Throws on an all-zero dual.
PcsfInstance witness_costs_from_dual(const PcsfInstance& inst, const FracSolution& point, const DualWitness& w,
                                     DominanceMode mode, const Rational& beta = 1);

struct TreeDecomposition {
  ForestDistribution dist;
  Rational target;        // 2(n-1)/(d n) for a d-regular graph, (n-1)/|E| in general
  Rational max_marginal;  // achieved
  bool enumerated = false;
};

/// Distribution over spanning trees of P with every edge marginal <= target.
/// Uses the uniform distribution over all trees when |E| <= 20 and it meets the
/// target, column generation with minimum-spanning-tree pricing otherwise.
TreeDecomposition spanning_tree_decomposition(const Graph& p);

/// Weight (3 - alpha) spread over the replicated subdivided base trees and
/// (alpha - 2) on a minimum spanning tree of G. Requires 2 <= alpha <= 3 and a
/// 3-regular base.
ForestDistribution explicit_gap_distribution(const LayeredConstruction& lc, const Rational& alpha);

/// Within every copy, drops forest edges in components that hold no branch
/// node of that copy. Pair connectivity is unchanged.
ForestDistribution trim_supports(const LayeredConstruction& lc, const ForestDistribution& dist);

using ForestEvent = std::function<bool(std::size_t index, const EdgeSet& forest)>;

struct WitnessNode {
  NodeId node = -1;
  int group = -1;               // edge of P whose path holds node
  Rational pr_event;
  Rational pr_leaf;             // Pr[deg_{F[C]}(node) = 1]
  Rational pr_path_given_event; // Pr[Q_group in F | event]
  Rational leaf_bound;          // 2 / m
  Rational path_bound;          // (|V(P)| - 1) / |E(P)|
  bool leaf_ok = false;
  bool path_ok = false;
};

/// Witness node of copy `copy` conditioned on `event`. Throws ValidationError
/// when the event has probability 0 or a support forest is not a tree inside
/// the copy.
WitnessNode find_witness_node(const LayeredConstruction& lc, const ForestDistribution& dist, int copy,
                              const ForestEvent& event);

struct ChainStep {
  int j = 0;
  NodeId root = -1;  // r_j
  int copy = -1;     // H_j
  NodeId next = -1;  // r_{j+1}
  WitnessNode witness;
  Rational p_root;          // Pr[r_j ~ r0]
  Rational p_next;          // Pr[r_{j+1} ~ r0]
  Rational p_next_to_root;  // Pr[r_{j+1} ~ r_j]
  Rational step_bound;      // s/l + 2/m
  bool step_ok = false;
  Rational path_and_cut;    // Pr[Q_{r_{j+1}} in F and r_j !~ r0]
  Rational path_and_cut_bound;
  bool path_and_cut_ok = true;  // only checked for j >= 1
  Rational recursion_bound;     // s/l + 2/m - c_P (1 - p_root)
  bool recursion_ok = false;
};

struct ChainTrace {
  std::vector<ChainStep> steps;
  bool truncated = false;
  std::string note;
  bool all_hold = true;
  Rational final_probability;  // Pr[r_{last} ~ r0]
  Rational closed_form;        // expanded recursion bound for the chain length
};

/// Follows the chain r_1, r_2, ... of witness nodes, each conditioned on its
/// parent root being cut off from r0, and checks the per-step inequalities
/// exactly. `scale` is alpha (x = 1/l). Supports are trimmed first.
ChainTrace chain_trace(const LayeredConstruction& lc, const ForestDistribution& dist, const Rational& scale);

/// alpha = (3 - 3t + 2s - 8s/n)/(s + 1), s = sum_{i<=k} (2/3)^i, t = (2/3)^{k+1}.
Rational bound_alpha(long n, int k);
/// beta = 2 + (2 - l t)/s - (2l + 2)/n, s = sum_{i<=k} (2/l)^i, t = (2/l)^{k+1}.
Rational bound_beta(int l, long n, int k);
/// 4 - 4/l.
Rational bound_beta_asymptote(int l);

struct TwoValueLmp {
  ForestDistribution dist;
  Rational gamma;
  Rational beta;            // 2 + 2 gamma
  Rational connect_scale;   // x-scale of the connect-all part on x/(1 - gamma)
  Rational pay_scale;       // x-scale of the zero-pairs part on x
  Rational achieved;        // connect_scale + gamma * pay_scale
};

/// Weight 1 - gamma on a decomposition of x/(1 - gamma) connecting every pair,
/// weight gamma on a decomposition of x connecting the z = 0 pairs.
TwoValueLmp two_value_lmp_distribution(const PcsfInstance& inst, const FracSolution& point,
                                       const DecompositionOptions& opts = {});

}  // namespace pcsf
