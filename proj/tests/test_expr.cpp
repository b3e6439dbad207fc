#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "gradedjets/models.hpp"

#include "test_support.hpp"

using namespace testsupport;

TEST_CASE("odd generators anticommute") {
  auto sys = scalar_ghost_system();
  Expr c1 = var(sys, "c", 0);
  Expr c2 = var(sys, "c", 1);
  CHECK(c1 * c2 == -(c2 * c1));
  CHECK((c1 * c2 + c2 * c1).is_zero());
  CHECK((c1 * c1).is_zero());
}

TEST_CASE("even arithmetic is plain polynomial arithmetic") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  CHECK((y + rat(sys, 1)) * (y - rat(sys, 1)) == y * y - rat(sys, 1));
  CHECK((y + y.scaled(-1)).is_zero());
  Expr y1 = var(sys, "y", 0, {0});
  CHECK(y1.scaled(2) + y1.scaled(3) == y1.scaled(5));
}

TEST_CASE("mismatched field systems are rejected") {
  auto a = scalar_system();
  auto b = scalar_ghost_system();
  CHECK_THROWS_AS(var(a, "y", 0) * var(b, "y", 0), DomainError);
  CHECK_THROWS_AS(var(a, "y", 0) + var(b, "c", 0), DomainError);
}

TEST_CASE("grading reports parity and ghost degree") {
  auto sys = scalar_ghost_system();
  Expr c1 = var(sys, "c", 0);
  Expr c2 = var(sys, "c", 1);
  Expr y = var(sys, "y", 0);

  auto g = grading(c1 * c2);
  REQUIRE(g.has_value());
  CHECK(g->parity == Parity::Even);
  CHECK(g->ghost_degree == 2);

  g = grading(y * c1);
  REQUIRE(g.has_value());
  CHECK(g->parity == Parity::Odd);
  CHECK(g->ghost_degree == 1);

  CHECK(!grading(y + c1).has_value());
  CHECK(grading(Expr::zero(sys)) == PureGrading{Parity::Even, 0});
}

TEST_CASE("odd dynamic fields count for parity but not ghost degree") {
  auto sys = FieldSystem::create(1, {{"psi", {1}, Parity::Odd, FieldRole::Dynamic},
                                     {"c", {1}, Parity::Odd, FieldRole::Ghost}});
  auto g = grading(var(sys, "psi", 0) * var(sys, "c", 0));
  REQUIRE(g.has_value());
  CHECK(g->parity == Parity::Even);
  CHECK(g->ghost_degree == 1);
}

TEST_CASE("normalization is idempotent and kills odd squares") {
  auto sys = scalar_ghost_system();
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Expr e = random_expr(sys, rng);
    CHECK(Expr::from_monomials(sys, e.terms()) == e);
  }
  // A repeated odd variable annihilates the monomial regardless of position.
  Monomial m;
  m.coeff = 3;
  m.odd_part = {jet(sys, "c", 0), jet(sys, "c", 1), jet(sys, "c", 0)};
  CHECK(Expr::from_monomials(sys, {m}).is_zero());
}

TEST_CASE("graded ring laws on random triples") {
  auto sys = FieldSystem::create(2, {{"y", {2}, Parity::Even, FieldRole::Dynamic},
                                     {"c", {2}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(11);
  RandomSpec spec;
  spec.allow_x = true;
  for (int trial = 0; trial < 300; ++trial) {
    Expr a = random_expr(sys, rng, spec);
    Expr b = random_expr(sys, rng, spec);
    Expr c = random_expr(sys, rng, spec);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    auto pa = parity_of(a);
    auto pb = parity_of(b);
    if (pa && pb) {
      Expr commuted = (*pa == Parity::Odd && *pb == Parity::Odd) ? -(b * a) : b * a;
      CHECK(a * b == commuted);
    }
  }
}

TEST_CASE("pure-parity products pick up the Koszul sign") {
  auto sys = scalar_ghost_system();
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Expr a = filter_parity(random_expr(sys, rng), Parity::Odd);
    Expr b = filter_parity(random_expr(sys, rng), Parity::Odd);
    CHECK(a * b == -(b * a));
  }
}

TEST_CASE("negative powers are rejected") {
  auto sys = scalar_system();
  CHECK_THROWS_AS(var(sys, "y", 0).pow(-1), DomainError);
  CHECK(var(sys, "y", 0).pow(0) == rat(sys, 1));
}

TEST_CASE("term cap guards runaway products") {
  auto sys = scalar_system();
  const std::size_t original = max_term_count();
  set_max_term_count(5);
  Expr base = var(sys, "y", 0) + var(sys, "y", 0, {0}) + var(sys, "y", 0, {0, 0}) +
              rat(sys, 1);
  CHECK_THROWS_AS(base.pow(4), TermLimitError);
  set_max_term_count(original);
  CHECK_NOTHROW(base.pow(4));
}

namespace {

// Independent exterior-algebra model for the pure ghost sector: basis
// elements are generator subsets as bitmasks, the product sign counts the
// crossings needed to interleave two ascending subsets, and the left
// derivative drops a generator with the sign of the generators before it.
using ExteriorElement = std::map<unsigned, Rational>;

ExteriorElement exterior_mul(const ExteriorElement& a, const ExteriorElement& b) {
  ExteriorElement out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      if (sa & sb) continue;
      int crossings = 0;
      for (unsigned i = 0; i < 16; ++i)
        if (sb & (1u << i))
          for (unsigned j = i + 1; j < 16; ++j)
            if (sa & (1u << j)) ++crossings;
      Rational c = ca * cb;
      if (crossings & 1) c = -c;
      out[sa | sb] += c;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

ExteriorElement exterior_partial(const ExteriorElement& a, unsigned generator) {
  ExteriorElement out;
  for (const auto& [s, c] : a) {
    if (!(s & (1u << generator))) continue;
    int before = 0;
    for (unsigned i = 0; i < generator; ++i)
      if (s & (1u << i)) ++before;
    Rational v = c;
    if (before & 1) v = -v;
    out[s & ~(1u << generator)] += v;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

ExteriorElement to_exterior(const Expr& e) {
  ExteriorElement out;
  for (const Monomial& m : e.terms()) {
    unsigned mask = 0;
    for (const JetVar& v : m.odd_part) mask |= 1u << v.fiber;
    out[mask] += m.coeff;
  }
  return out;
}

Expr random_ghost_expr(const FieldSystemPtr& sys, Rng& rng, int fibers) {
  std::vector<Monomial> terms;
  for (int t = rng.pick(1, 4); t > 0; --t) {
    Monomial m;
    m.coeff = rng.coefficient();
    m.base_exp = {0};
    for (int f = 0; f < fibers; ++f)
      if (rng.flip()) m.odd_part.push_back(JetVar{0, f, MultiIndex(1)});
    terms.push_back(std::move(m));
  }
  return Expr::from_monomials(sys, std::move(terms));
}

} // namespace

TEST_CASE("the ghost sector agrees with an independent exterior-algebra model") {
  const int fibers = 5;
  auto sys = FieldSystem::create(
      1, {{"c", {fibers}, Parity::Odd, FieldRole::Ghost}});
  Rng rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    Expr a = random_ghost_expr(sys, rng, fibers);
    Expr b = random_ghost_expr(sys, rng, fibers);
    CHECK(to_exterior(a * b) == exterior_mul(to_exterior(a), to_exterior(b)));
    unsigned generator = static_cast<unsigned>(rng.pick(0, fibers - 1));
    Expr derivative = partial(a, JetVar{0, static_cast<int>(generator), MultiIndex(1)});
    CHECK(to_exterior(derivative) == exterior_partial(to_exterior(a), generator));
  }
}

TEST_CASE("shared immutable values are safe to use from several threads") {
  ConnectionModel model = ConnectionModel::make(2, LieAlgebraData::su2(), true);
  BrstCandidate candidate = yang_mills_brst(model);
  const GeneralizedVectorField& theta = candidate.as_vector_field();
  std::vector<std::map<Component, Expr>> results(4);
  std::vector<std::thread> workers;
  for (auto& slot : results)
    workers.emplace_back([&theta, &slot] {
      for (const auto& [comp, expr] : theta.components())
        slot.emplace(comp, prolong_apply(theta, expr));
    });
  for (auto& w : workers) w.join();
  for (const auto& slot : results) {
    CHECK(slot == results.front());
    for (const auto& [comp, residual] : slot) CHECK(residual.is_zero());
  }
}

TEST_CASE("exact rational coefficients do not drift") {
  auto sys = scalar_system();
  Expr y = var(sys, "y", 0);
  Expr e = y.scaled(Rational(1, 3)) + y.scaled(Rational(1, 6));
  CHECK(e == y.scaled(Rational(1, 2)));
  // large exponents exercise the arbitrary-precision path
  Expr big = rat(sys, 1234567891234567LL).pow(3) * y;
  REQUIRE(big.terms().size() == 1);
  CHECK(big.terms().front().coeff ==
        Rational(Integer("1881676377434179912408028260071117986920562263")));
}
