#pragma once

#include <optional>
#include <vector>

#include "pcsf/instance.hpp"
#include "pcsf/solution.hpp"

namespace pcsf {

struct SteinerForestResult {
  EdgeSet forest;
  /// Sum of moat duals; a lower bound on the Steiner forest cut LP optimum
  /// over the required pairs, and cost(forest) <= 2 * dual_value.
  Rational dual_value;
};

/// Moat growing with reverse deletion over exact event times. Every required
/// pair ends up connected; ties go to the smallest edge id.
SteinerForestResult gw_steiner_forest(const PcsfInstance& inst, const std::vector<PairId>& required);

struct RoundingResult {
  IntegralSolution solution;
  Rational lp_value;  // c.x + pi.z of the input point
  Rational factor;    // proven objective <= factor * lp_value
  Rational theta;     // threshold used (best/threshold methods)
  bool connect_all = false;  // two-value: candidate that connects every pair
};

/// Connects R' = {i : z_i < theta} with moat growing; factor max(2/(1-theta), 1/theta).
/// Throws ValidationError on an infeasible point or theta outside (0, 1).
RoundingResult threshold_round(const PcsfInstance& inst, const FracSolution& point, const Rational& theta);

/// Best threshold over the distinct z-values in (0, 1) plus 1/3; ties keep the
/// smaller threshold.
RoundingResult best_threshold_round(const PcsfInstance& inst, const FracSolution& point);

/// z must take values in {0, gamma} with 0 < gamma < 1/2. Returns the cheaper of
/// "connect the z = 0 pairs" and "connect every pair"; factor
/// max((2 - 2 p gamma)/(1 - gamma), p/gamma).
RoundingResult two_value_round(const PcsfInstance& inst, const FracSolution& point, const Rational& p);

/// The nonzero z-value of a two-valued point, or nullopt when z is zero or takes
/// more than one nonzero value.
std::optional<Rational> two_value_gamma(const FracSolution& point);

struct MuBound {
  Rational mu;
  Rational p_star;
};

/// mu = 2/(2 gamma^2 - gamma + 1), attained at p* = 2 gamma/(2 gamma^2 - gamma + 1).
MuBound mu_bound(const Rational& gamma);

/// max((2 - 2 p gamma)/(1 - gamma), p/gamma).
Rational two_value_factor(const Rational& gamma, const Rational& p);

struct Evaluation {
  Rational cost;
  Rational penalty;
  Rational objective;
  Rational lmp_objective;  // cost + beta * penalty
  bool feasible = true;
};

Evaluation evaluate(const PcsfInstance& inst, const EdgeSet& forest, const Rational& beta);

}  // namespace pcsf
