#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcsf/graph.hpp"
#include "pcsf/instance.hpp"

namespace pcsf {

/// One inequality of the cut relaxation:
///   cut:        x(delta(S)) + z_i >= 1, S separating pair i (S holds s_i)
///   nonneg_x:   x_e >= 0
///   nonneg_z:   z_i >= 0
struct CutConstraint {
  enum class Kind { Cut, NonnegX, NonnegZ };

  Kind kind = Kind::Cut;
  PairId pair = -1;
  NodeSet side;     // Cut only
  EdgeId edge = -1; // NonnegX only

  static CutConstraint cut(const PcsfInstance& inst, PairId i, NodeSet side);
  static CutConstraint nonneg_x(EdgeId e);
  static CutConstraint nonneg_z(PairId i);

  /// Left-hand side at `point`.
  Rational lhs(const PcsfInstance& inst, const FracSolution& point) const;
  Rational rhs() const { return kind == Kind::Cut ? Rational(1) : Rational(0); }

  std::string describe(const PcsfInstance& inst) const;
};

/// Text format, one constraint per line, '#' starts a comment:
///   cut <pair> <node>...   side S given by node names
///   x <edge>
///   z <pair>
std::vector<CutConstraint> parse_constraint_family(std::istream& in, const PcsfInstance& inst);
void write_constraint_family(const PcsfInstance& inst, const std::vector<CutConstraint>& family, std::ostream& out);
std::vector<CutConstraint> read_constraint_family(const std::filesystem::path& path, const PcsfInstance& inst);

}  // namespace pcsf
