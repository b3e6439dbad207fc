#pragma once

#include <vector>

#include "gradedjets/expr.hpp"
#include "gradedjets/rational.hpp"

namespace gradedjets {

/// Dense exact linear system A x = b over the rationals.
struct LinearSystem {
  int cols = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  void add_row(std::vector<Rational> row, Rational b);
};

struct LinearSolveResult {
  bool feasible = false;
  std::vector<Rational> particular;  // free variables pinned to zero
  int nullity = 0;
};

/// Fraction-free-ish Gaussian elimination with a fixed pivot order (first
/// usable row per column, columns left to right), so the particular solution
/// is deterministic: it is the reduced-echelon solution with all free
/// variables set to zero.
LinearSolveResult solve_linear(LinearSystem system);

/// Assemble the exact linear system  sum_k q_k * columns[k] = target  by
/// matching coefficients of canonical monomials.
LinearSystem assemble_from_exprs(const std::vector<Expr>& columns, const Expr& target);

/// Stack several expression-matching systems (e.g. one equation per field
/// component) over a shared unknown vector.
LinearSystem assemble_from_expr_equations(const std::vector<std::vector<Expr>>& column_sets,
                                          const std::vector<Expr>& targets);

} // namespace gradedjets
