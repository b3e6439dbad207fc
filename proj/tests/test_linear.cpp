#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradedjets/linear.hpp"

#include "test_support.hpp"

using namespace testsupport;

TEST_CASE("unique solution") {
  LinearSystem s;
  s.cols = 2;
  s.add_row({Rational(2), Rational(1)}, Rational(5));
  s.add_row({Rational(1), Rational(-1)}, Rational(1));
  auto r = solve_linear(s);
  REQUIRE(r.feasible);
  CHECK(r.nullity == 0);
  CHECK(r.particular == std::vector<Rational>{Rational(2), Rational(1)});
}

TEST_CASE("underdetermined systems pin free variables to zero") {
  LinearSystem s;
  s.cols = 3;
  s.add_row({Rational(1), Rational(1), Rational(0)}, Rational(3));
  auto r = solve_linear(s);
  REQUIRE(r.feasible);
  CHECK(r.nullity == 2);
  // first usable column becomes the pivot; the rest stay zero
  CHECK(r.particular == std::vector<Rational>{Rational(3), Rational(0), Rational(0)});
}

TEST_CASE("infeasible systems are detected") {
  LinearSystem s;
  s.cols = 1;
  s.add_row({Rational(1)}, Rational(1));
  s.add_row({Rational(2)}, Rational(3));
  CHECK(!solve_linear(s).feasible);
}

TEST_CASE("exact fractions survive elimination") {
  LinearSystem s;
  s.cols = 2;
  s.add_row({Rational(1, 3), Rational(1, 7)}, Rational(1));
  s.add_row({Rational(1, 2), Rational(1, 5)}, Rational(1));
  auto r = solve_linear(s);
  REQUIRE(r.feasible);
  // cross-checked by substitution
  CHECK(r.particular[0] * Rational(1, 3) + r.particular[1] * Rational(1, 7) == 1);
  CHECK(r.particular[0] * Rational(1, 2) + r.particular[1] * Rational(1, 5) == 1);
}

TEST_CASE("coefficient matching over expressions") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr y1 = var(sys, "y", 0, {0});
  auto r = solve_linear(assemble_from_exprs({y, y1, y * y1}, y.scaled(2) + (y * y1).scaled(-3)));
  REQUIRE(r.feasible);
  CHECK(r.particular == std::vector<Rational>{Rational(2), Rational(0), Rational(-3)});

  CHECK(!solve_linear(assemble_from_exprs({y}, y1)).feasible);
}

TEST_CASE("stacked equations share one unknown vector") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr y1 = var(sys, "y", 0, {0});
  // q0 * y = 2y and q0 * y1 = 2y1 simultaneously
  auto r = solve_linear(
      assemble_from_expr_equations({{y}, {y1}}, {y.scaled(2), y1.scaled(2)}));
  REQUIRE(r.feasible);
  CHECK(r.particular == std::vector<Rational>{Rational(2)});
  // ... but q0 * y = 2y and q0 * y1 = 3y1 is contradictory
  CHECK(!solve_linear(assemble_from_expr_equations({{y}, {y1}}, {y.scaled(2), y1.scaled(3)}))
             .feasible);
}
