#pragma once

#include <utility>
#include <vector>

#include "pcsf/rational.hpp"

namespace pcsf::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Row {
  std::vector<std::pair<int, Rational>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::GreaterEqual;
  Rational rhs;
};

/// min objective . x  subject to rows, x >= 0.
struct Problem {
  std::vector<Rational> objective;
  std::vector<Row> rows;
  /// Optional starting basis in Solution::basis encoding. Used when it is
  /// nonsingular and primal feasible; otherwise ignored.
  std::vector<int> warm_basis;

  int add_variable(Rational cost) {
    objective.push_back(std::move(cost));
    return static_cast<int>(objective.size()) - 1;
  }
  int add_row(Row row) {
    rows.push_back(std::move(row));
    return static_cast<int>(rows.size()) - 1;
  }
  int variable_count() const { return static_cast<int>(objective.size()); }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  Rational objective;
  std::vector<Rational> x;
  /// Row duals y with c - A^T y >= 0 at optimality: y >= 0 on >= rows,
  /// y <= 0 on <= rows, free on equalities.
  std::vector<Rational> duals;
  long pivots = 0;
  /// Final basis: variable j as j, the slack of row i as variable_count() + i.
  std::vector<int> basis;
};

/// Two-phase dense-tableau simplex over exact rationals. Dantzig pricing,
/// falling back to Bland's rule after a run of degenerate pivots.
Solution solve(const Problem& problem);

}  // namespace pcsf::lp
