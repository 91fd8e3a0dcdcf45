#include "pcsf/simplex.hpp"

#include <cstddef>

#include "pcsf/error.hpp"

namespace pcsf::lp {

namespace {

constexpr int kDegenerateRunBeforeBland = 50;

class Tableau {
public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), cells_(static_cast<std::size_t>((rows + 1) * (cols + 1)), Rational(0)) {}

  Rational& at(int r, int c) { return cells_[index(r, c)]; }
  const Rational& at(int r, int c) const { return cells_[index(r, c)]; }
  // Row m_ is the objective (reduced costs, negated objective value in rhs).
  Rational& cost(int c) { return at(m_, c); }
  Rational& rhs(int r) { return at(r, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void pivot(int r, int s) {
    mpq_class inv = 1 / at(r, s);
    std::vector<int> nz;
    for (int c = 0; c <= n_; ++c) {
      auto& v = at(r, c);
      if (sgn(v) != 0) {
        v *= inv;
        nz.push_back(c);
      }
    }
    mpq_class factor;
    mpq_class tmp;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const auto& lead = at(i, s);
      if (sgn(lead) == 0) continue;
      factor = lead;
      for (int c : nz) {
        mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), at(r, c).get_mpq_t());
        auto& dst = at(i, c);
        mpq_sub(dst.get_mpq_t(), dst.get_mpq_t(), tmp.get_mpq_t());
      }
    }
  }

private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_ + 1) +
           static_cast<std::size_t>(c);
  }
  int m_;
  int n_;
  std::vector<Rational> cells_;
};

struct Engine {
  Tableau t;
  std::vector<int> basis;
  std::vector<char> blocked;  // columns barred from entering
  long pivots = 0;

  Engine(int rows, int cols) : t(rows, cols), basis(static_cast<std::size_t>(rows), -1),
                               blocked(static_cast<std::size_t>(cols), 0) {}

  // Loads cost vector c into the objective row and prices out the basis.
  void set_objective(const std::vector<Rational>& c) {
    for (int j = 0; j < t.cols(); ++j) t.cost(j) = c[static_cast<std::size_t>(j)];
    t.cost(t.cols()) = 0;
    for (int r = 0; r < t.rows(); ++r) {
      const auto& cb = c[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j <= t.cols(); ++j) {
        if (sgn(t.at(r, j)) != 0) t.cost(j) -= cb * t.at(r, j);
      }
    }
  }

  // Returns false when unbounded.
  bool run() {
    int degenerate_run = 0;
    bool bland = false;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < t.cols(); ++j) {
        if (blocked[static_cast<std::size_t>(j)] || sgn(t.cost(j)) >= 0) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (enter < 0 || t.cost(j) < t.cost(enter)) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio;
      for (int r = 0; r < t.rows(); ++r) {
        const auto& a = t.at(r, enter);
        if (sgn(a) <= 0) continue;
        Rational ratio = t.rhs(r) / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[static_cast<std::size_t>(r)] <
                                        basis[static_cast<std::size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      if (sgn(best_ratio) == 0) {
        if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      t.pivot(leave, enter);
      basis[static_cast<std::size_t>(leave)] = enter;
      ++pivots;
    }
  }
};

}  // namespace

Solution solve(const Problem& problem) {
  const int n = problem.variable_count();
  const int m = static_cast<int>(problem.rows.size());

  // Normalize to nonnegative right-hand sides.
  std::vector<Sense> sense(static_cast<std::size_t>(m));
  std::vector<char> flipped(static_cast<std::size_t>(m), 0);
  int slack_count = 0;
  int art_count = 0;
  for (int i = 0; i < m; ++i) {
    const auto& row = problem.rows[static_cast<std::size_t>(i)];
    Sense s = row.sense;
    if (sgn(row.rhs) < 0) {
      flipped[static_cast<std::size_t>(i)] = 1;
      if (s == Sense::LessEqual) {
        s = Sense::GreaterEqual;
      } else if (s == Sense::GreaterEqual) {
        s = Sense::LessEqual;
      }
    }
    sense[static_cast<std::size_t>(i)] = s;
    if (s != Sense::Equal) ++slack_count;
    if (s != Sense::LessEqual) ++art_count;
  }

  const int cols = n + slack_count + art_count;
  std::vector<int> identity_col(static_cast<std::size_t>(m));
  std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
  std::vector<char> is_art(static_cast<std::size_t>(cols), 0);

  auto build = [&](Engine& eng) {
    int next_slack = n;
    int next_art = n + slack_count;
    for (int i = 0; i < m; ++i) {
      const auto& row = problem.rows[static_cast<std::size_t>(i)];
      const bool flip = flipped[static_cast<std::size_t>(i)] != 0;
      for (const auto& [var, coef] : row.coeffs) {
        if (var < 0 || var >= n) throw ValidationError("lp: row references unknown variable");
        if (flip) {
          eng.t.at(i, var) -= coef;
        } else {
          eng.t.at(i, var) += coef;
        }
      }
      eng.t.rhs(i) = flip ? Rational(-row.rhs) : row.rhs;
      switch (sense[static_cast<std::size_t>(i)]) {
        case Sense::LessEqual:
          eng.t.at(i, next_slack) = 1;
          identity_col[static_cast<std::size_t>(i)] = next_slack;
          slack_col[static_cast<std::size_t>(i)] = next_slack;
          eng.basis[static_cast<std::size_t>(i)] = next_slack++;
          break;
        case Sense::GreaterEqual:
          slack_col[static_cast<std::size_t>(i)] = next_slack;
          eng.t.at(i, next_slack++) = -1;
          [[fallthrough]];
        case Sense::Equal:
          eng.t.at(i, next_art) = 1;
          is_art[static_cast<std::size_t>(next_art)] = 1;
          identity_col[static_cast<std::size_t>(i)] = next_art;
          eng.basis[static_cast<std::size_t>(i)] = next_art++;
          break;
      }
    }
  };

  // Pivots the hinted columns into the basis; true when the result is a
  // feasible basis with every remaining artificial at zero.
  auto warm = [&](Engine& eng) {
    std::vector<char> placed(static_cast<std::size_t>(m), 0);
    for (int h : problem.warm_basis) {
      int c = -1;
      if (h >= 0 && h < n) c = h;
      if (h >= n && h < n + m) c = slack_col[static_cast<std::size_t>(h - n)];
      if (c < 0) continue;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (placed[static_cast<std::size_t>(i)] || sgn(eng.t.at(i, c)) == 0) continue;
        if (r < 0 || abs(eng.t.at(i, c)) > abs(eng.t.at(r, c))) r = i;
      }
      if (r < 0) return false;
      eng.t.pivot(r, c);
      eng.basis[static_cast<std::size_t>(r)] = c;
      placed[static_cast<std::size_t>(r)] = 1;
      ++eng.pivots;
    }
    for (int i = 0; i < m; ++i) {
      const auto& v = eng.t.rhs(i);
      if (sgn(v) < 0) return false;
      if (is_art[static_cast<std::size_t>(eng.basis[static_cast<std::size_t>(i)])] && sgn(v) != 0) return false;
    }
    return true;
  };

  Engine eng(m, cols);
  build(eng);
  bool warmed = false;
  if (!problem.warm_basis.empty()) {
    warmed = warm(eng);
    if (!warmed) {
      eng = Engine(m, cols);
      build(eng);
    }
  }

  Solution out;
  if (art_count > 0) {
    if (!warmed) {
      std::vector<Rational> phase1(static_cast<std::size_t>(cols), Rational(0));
      for (int j = 0; j < cols; ++j) {
        if (is_art[static_cast<std::size_t>(j)]) phase1[static_cast<std::size_t>(j)] = 1;
      }
      eng.set_objective(phase1);
      eng.run();  // bounded below by 0
      if (sgn(eng.t.cost(cols)) != 0) {
        out.status = Status::Infeasible;
        out.pivots = eng.pivots;
        return out;
      }
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (!is_art[static_cast<std::size_t>(eng.basis[static_cast<std::size_t>(r)])]) continue;
      for (int j = 0; j < cols; ++j) {
        if (!is_art[static_cast<std::size_t>(j)] && sgn(eng.t.at(r, j)) != 0) {
          eng.t.pivot(r, j);
          eng.basis[static_cast<std::size_t>(r)] = j;
          ++eng.pivots;
          break;
        }
      }
    }
    for (int j = 0; j < cols; ++j) {
      if (is_art[static_cast<std::size_t>(j)]) eng.blocked[static_cast<std::size_t>(j)] = 1;
    }
  }

  std::vector<Rational> cost(static_cast<std::size_t>(cols), Rational(0));
  for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(j)] = problem.objective[static_cast<std::size_t>(j)];
  eng.set_objective(cost);
  const bool bounded = eng.run();
  out.pivots = eng.pivots;
  if (!bounded) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  for (int r = 0; r < m; ++r) {
    const int b = eng.basis[static_cast<std::size_t>(r)];
    if (b < n) {
      out.basis.push_back(b);
    } else {
      for (int i = 0; i < m; ++i) {
        if (slack_col[static_cast<std::size_t>(i)] == b) out.basis.push_back(n + i);
      }
    }
  }
  out.x.assign(static_cast<std::size_t>(n), Rational(0));
  for (int r = 0; r < m; ++r) {
    const int b = eng.basis[static_cast<std::size_t>(r)];
    if (b < n) out.x[static_cast<std::size_t>(b)] = eng.t.rhs(r);
  }
  out.objective = 0;
  for (int j = 0; j < n; ++j) {
    out.objective += problem.objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  }
  // y = c_B B^{-1}; column identity_col[i] of the tableau holds B^{-1} e_i.
  out.duals.assign(static_cast<std::size_t>(m), Rational(0));
  for (int i = 0; i < m; ++i) {
    const int col = identity_col[static_cast<std::size_t>(i)];
    Rational y(0);
    for (int r = 0; r < m; ++r) {
      const auto& cb = cost[static_cast<std::size_t>(eng.basis[static_cast<std::size_t>(r)])];
      if (sgn(cb) != 0 && sgn(eng.t.at(r, col)) != 0) y += cb * eng.t.at(r, col);
    }
    out.duals[static_cast<std::size_t>(i)] = flipped[static_cast<std::size_t>(i)] ? Rational(-y) : y;
  }
  return out;
}

}  // namespace pcsf::lp
