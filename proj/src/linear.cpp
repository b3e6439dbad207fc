#include "gradedjets/linear.hpp"

#include <map>
#include <tuple>

namespace gradedjets {

void LinearSystem::add_row(std::vector<Rational> row, Rational b) {
  if (static_cast<int>(row.size()) != cols)
    throw DomainError("linear-system row width mismatch");
  rows.push_back(std::move(row));
  rhs.push_back(std::move(b));
}

LinearSolveResult solve_linear(LinearSystem system) {
  const int cols = system.cols;
  const int nrows = static_cast<int>(system.rows.size());
  std::vector<int> pivot_col_of_row;
  int rank = 0;

  for (int col = 0; col < cols && rank < nrows; ++col) {
    int pivot = -1;
    for (int r = rank; r < nrows; ++r) {
      if (system.rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(system.rows[static_cast<size_t>(rank)], system.rows[static_cast<size_t>(pivot)]);
    std::swap(system.rhs[static_cast<size_t>(rank)], system.rhs[static_cast<size_t>(pivot)]);

    auto& prow = system.rows[static_cast<size_t>(rank)];
    const Rational inv = Rational(1) / prow[static_cast<size_t>(col)];
    for (int c = col; c < cols; ++c) prow[static_cast<size_t>(c)] *= inv;
    system.rhs[static_cast<size_t>(rank)] *= inv;

    for (int r = 0; r < nrows; ++r) {
      if (r == rank) continue;
      auto& row = system.rows[static_cast<size_t>(r)];
      const Rational factor = row[static_cast<size_t>(col)];
      if (factor == 0) continue;
      for (int c = col; c < cols; ++c)
        row[static_cast<size_t>(c)] -= factor * prow[static_cast<size_t>(c)];
      system.rhs[static_cast<size_t>(r)] -= factor * system.rhs[static_cast<size_t>(rank)];
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }

  LinearSolveResult result;
  for (int r = rank; r < nrows; ++r)
    if (system.rhs[static_cast<size_t>(r)] != 0) return result;  // infeasible

  result.feasible = true;
  result.nullity = cols - rank;
  result.particular.assign(static_cast<size_t>(cols), Rational(0));
  for (int r = 0; r < rank; ++r)
    result.particular[static_cast<size_t>(pivot_col_of_row[static_cast<size_t>(r)])] =
        system.rhs[static_cast<size_t>(r)];
  return result;
}

namespace {

using MonomialKey = std::tuple<std::vector<int>, std::vector<std::pair<JetVar, int>>,
                               std::vector<JetVar>>;

MonomialKey key_of(const Monomial& m) { return {m.base_exp, m.even_part, m.odd_part}; }

} // namespace

LinearSystem assemble_from_exprs(const std::vector<Expr>& columns, const Expr& target) {
  return assemble_from_expr_equations({columns}, {target});
}

LinearSystem assemble_from_expr_equations(const std::vector<std::vector<Expr>>& column_sets,
                                          const std::vector<Expr>& targets) {
  if (column_sets.size() != targets.size())
    throw DomainError("equation/target count mismatch");
  const int cols = column_sets.empty() ? 0 : static_cast<int>(column_sets.front().size());
  LinearSystem system;
  system.cols = cols;

  for (size_t eq = 0; eq < targets.size(); ++eq) {
    const auto& columns = column_sets[eq];
    if (static_cast<int>(columns.size()) != cols)
      throw DomainError("column count differs between equations");
    std::map<MonomialKey, size_t> row_of;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    auto row_for = [&](const Monomial& m) -> size_t {
      auto [it, inserted] = row_of.emplace(key_of(m), rows.size());
      if (inserted) {
        rows.emplace_back(static_cast<size_t>(cols), Rational(0));
        rhs.emplace_back(0);
      }
      return it->second;
    };
    for (int c = 0; c < cols; ++c)
      for (const Monomial& m : columns[static_cast<size_t>(c)].terms())
        rows[row_for(m)][static_cast<size_t>(c)] += m.coeff;
    for (const Monomial& m : targets[eq].terms()) rhs[row_for(m)] += m.coeff;
    for (size_t r = 0; r < rows.size(); ++r)
      system.add_row(std::move(rows[r]), std::move(rhs[r]));
  }
  return system;
}

} // namespace gradedjets
