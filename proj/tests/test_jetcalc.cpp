#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace testsupport;

TEST_CASE("total derivative of basic expressions") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr y1 = var(sys, "y", 0, {0});
  Expr y11 = var(sys, "y", 0, {0, 0});

  CHECK(total_derivative(y, 0) == y1);
  CHECK(total_derivative(rat(sys, 7), 0).is_zero());
  CHECK(total_derivative(y * y1, 0) == y1 * y1 + y * y11);
}

TEST_CASE("iterated total derivatives commute") {
  auto sys = FieldSystem::create(2, {{"y", {1}, Parity::Even, FieldRole::Dynamic}});
  Expr y = var(sys, "y", 0);
  MultiIndex two_in_first = MultiIndex(2).plus(0).plus(0);
  CHECK(total_derivative_multi(y, two_in_first) == var(sys, "y", 0, {0, 0}));
  CHECK(total_derivative_multi(y, MultiIndex(2)) == y);
  CHECK(total_derivative(total_derivative(y, 0), 1) ==
        total_derivative(total_derivative(y, 1), 0));

  Rng rng(3);
  auto mixed = FieldSystem::create(2, {{"y", {2}, Parity::Even, FieldRole::Dynamic},
                                       {"c", {2}, Parity::Odd, FieldRole::Ghost}});
  RandomSpec spec;
  spec.allow_x = true;
  for (int trial = 0; trial < 500; ++trial) {
    Expr f = random_expr(mixed, rng, spec);
    CHECK(total_derivative(total_derivative(f, 0), 1) ==
          total_derivative(total_derivative(f, 1), 0));
  }
}

TEST_CASE("explicit x dependence differentiates through the base part") {
  auto sys = scalar_system();
  Expr x = Expr::base_variable(sys, 0);
  Expr y = var(sys, "y", 0);
  CHECK(total_derivative(x * x * y, 0) ==
        x.scaled(2) * y + x * x * var(sys, "y", 0, {0}));
  CHECK(partial_base(x * x, 0) == x.scaled(2));
}

TEST_CASE("left partial derivatives") {
  auto sys = scalar_ghost_system();
  Expr y = var(sys, "y", 0);
  Expr c1 = var(sys, "c", 0);
  Expr c2 = var(sys, "c", 1);

  CHECK(partial(y * y, jet(sys, "y", 0)) == y.scaled(2));
  CHECK(partial(c2 * c1, jet(sys, "c", 0)) == -c2);
  CHECK(partial(c1 * y, jet(sys, "c", 0)) == y);
  CHECK(partial(c1 * c2, jet(sys, "c", 1)) == -c1);
}

TEST_CASE("prolonged action of a generalized vector field") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr g = y * y + var(sys, "y", 0, {0});
  GeneralizedVectorField v(sys, {{{0, 0}, g}});

  CHECK(prolong_apply(v, y) == g);
  MultiIndex two = MultiIndex(1).plus(0).plus(0);
  CHECK(prolong_apply(v, Expr::variable(sys, JetVar{0, 0, two})) ==
        total_derivative_multi(g, two));

  GeneralizedVectorField scale(sys, {{{0, 0}, y}});
  CHECK(prolong_apply(scale, y * var(sys, "y", 0, {0})) ==
        (y * var(sys, "y", 0, {0})).scaled(2));
}

TEST_CASE("prolongation is a graded derivation and commutes with d") {
  auto sys = FieldSystem::create(1, {{"y", {1}, Parity::Even, FieldRole::Dynamic},
                                     {"c", {2}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(17);
  std::vector<Component> cover = {{0, 0}, {1, 0}, {1, 1}};
  for (int trial = 0; trial < 120; ++trial) {
    Parity parity = rng.flip() ? Parity::Odd : Parity::Even;
    auto v = random_vector_field(sys, rng, cover, parity);
    Expr f = random_expr(sys, rng);
    Expr g = random_expr(sys, rng);

    // theta(fg) = theta(f) g + (-1)^{[theta][f]} f theta(g) for pure-parity f
    if (auto pf = parity_of(f)) {
      Expr lhs = prolong_apply(v, f * g);
      Expr rhs = prolong_apply(v, f) * g;
      Expr tail = f * prolong_apply(v, g);
      if (parity == Parity::Odd && *pf == Parity::Odd) tail = -tail;
      CHECK(lhs == rhs + tail);
    }
    CHECK(prolong_apply(v, total_derivative(f, 0)) ==
          total_derivative(prolong_apply(v, f), 0));
  }
}

TEST_CASE("graded Euler identity for left partials") {
  // sum over jet variables of v * d/dv multiplies each term by its degree in
  // jet variables; exercises partials and products across parities at once.
  auto sys = FieldSystem::create(2, {{"y", {2}, Parity::Even, FieldRole::Dynamic},
                                     {"c", {2}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(37);
  RandomSpec spec;
  spec.allow_x = true;
  for (int trial = 0; trial < 150; ++trial) {
    Expr f = random_expr(sys, rng, spec);
    Expr weighted = Expr::zero(sys);
    for (const JetVar& v : f.jet_variables())
      weighted += Expr::variable(sys, v) * partial(f, v);
    std::vector<Monomial> scaled;
    for (Monomial m : f.terms()) {
      m.coeff *= m.field_degree();
      scaled.push_back(std::move(m));
    }
    CHECK(weighted == Expr::from_monomials(sys, std::move(scaled)));
  }
}

TEST_CASE("vector fields require uniform derivation parity") {
  auto sys = scalar_ghost_system();
  std::map<Component, Expr> bad = {{{0, 0}, var(sys, "y", 0)},
                                   {{1, 0}, var(sys, "y", 0)}};
  CHECK_THROWS_AS(GeneralizedVectorField(sys, bad), DomainError);
  std::map<Component, Expr> mixed = {{{0, 0}, var(sys, "y", 0) + var(sys, "c", 0)}};
  CHECK_THROWS_AS(GeneralizedVectorField(sys, mixed), DomainError);
}

TEST_CASE("variational derivative of basic densities") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr y1 = var(sys, "y", 0, {0});

  EulerResult half_square = euler_lagrange((y1 * y1).scaled(Rational(1, 2)));
  CHECK(half_square.component({0, 0}) == -var(sys, "y", 0, {0, 0}));

  CHECK(euler_lagrange(y).component({0, 0}) == rat(sys, 1));
  CHECK(euler_lagrange(total_derivative(y * y1, 0)).all_zero());
}

TEST_CASE("variational derivative annihilates random divergences") {
  auto sys = FieldSystem::create(2, {{"y", {2}, Parity::Even, FieldRole::Dynamic},
                                     {"c", {1}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(29);
  RandomSpec spec;
  spec.allow_x = true;
  for (int trial = 0; trial < 60; ++trial) {
    Expr f = random_expr(sys, rng, spec);
    for (int dir = 0; dir < 2; ++dir)
      CHECK(euler_lagrange(total_derivative(f, dir)).all_zero());
  }
}

TEST_CASE("graded variational derivative uses left partials") {
  auto sys = scalar_ghost_system();
  Expr c1 = var(sys, "c", 0);
  Expr c2 = var(sys, "c", 1);
  // d(c1 c2)/dc2 = -c1 via the left rule
  EulerResult euler = euler_lagrange(c1 * c2);
  CHECK(euler.component({1, 1}) == -c1);
  CHECK(euler.component({1, 0}) == c2);
}

TEST_CASE("density-level variation split") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr y1 = var(sys, "y", 0, {0});
  Expr g = y * y;
  GeneralizedVectorField v(sys, {{{0, 0}, g}});

  auto flat = decompose_variation(v, HorizontalDensity(y));
  CHECK(flat.contraction == g);
  REQUIRE(flat.boundary.components.size() == 1);
  CHECK(flat.boundary.components[0].is_zero());

  auto kinetic = decompose_variation(v, HorizontalDensity((y1 * y1).scaled(Rational(1, 2))));
  CHECK(kinetic.contraction == -(g * var(sys, "y", 0, {0, 0})));
  CHECK(kinetic.boundary.components[0] == g * y1);
}

TEST_CASE("first variational identity holds exactly on random input") {
  auto sys = FieldSystem::create(2, {{"y", {2}, Parity::Even, FieldRole::Dynamic},
                                     {"c", {1}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(31);
  std::vector<Component> cover = {{0, 0}, {0, 1}, {1, 0}};
  for (int trial = 0; trial < 60; ++trial) {
    Parity parity = rng.flip() ? Parity::Odd : Parity::Even;
    auto v = random_vector_field(sys, rng, cover, parity);
    Expr density = filter_parity(random_expr(sys, rng), Parity::Even);
    HorizontalDensity L(density);
    auto split = decompose_variation(v, L);
    Expr residual =
        prolong_apply(v, density) - split.contraction - split.boundary.divergence();
    CHECK(residual.is_zero());
  }
}

TEST_CASE("Lagrangian densities must be even") {
  auto sys = scalar_ghost_system();
  CHECK_THROWS_AS(HorizontalDensity(var(sys, "c", 0)), DomainError);
  CHECK_NOTHROW(HorizontalDensity(var(sys, "c", 0) * var(sys, "c", 1)));
}
