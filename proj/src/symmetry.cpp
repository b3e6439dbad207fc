#include "gradedjets/symmetry.hpp"

#include <algorithm>

#include "gradedjets/ansatz.hpp"
#include "gradedjets/linear.hpp"

namespace gradedjets {

std::optional<BoundaryCurrent> exhibit_divergence(const Expr& target,
                                                  std::size_t max_unknowns) {
  const FieldSystemPtr& sys = target.system();
  if (target.is_zero()) {
    BoundaryCurrent zero;
    if (sys) zero.components.assign(static_cast<size_t>(sys->base_dim()), Expr::zero(sys));
    return zero;
  }
  const int n = sys->base_dim();

  int field_degree = 0, x_degree = 0;
  for (const Monomial& t : target.terms()) {
    field_degree = std::max(field_degree, t.field_degree());
    int xd = 0;
    for (int e : t.base_exp) xd += e;
    x_degree = std::max(x_degree, xd);
  }
  const int jet_bound = std::max(1, target.max_jet_order());
  const int degree_bound = field_degree + x_degree + 1;

  auto vars = collect_jet_vars(*sys, [](int, const FieldDecl&) { return true; }, jet_bound);
  auto candidates = enumerate_monomials(*sys, vars, true, degree_bound);
  std::erase_if(candidates, [&](const Monomial& m) {
    int xd = 0;
    for (int e : m.base_exp) xd += e;
    return m.field_degree() > field_degree || xd > x_degree + 1;
  });
  if (candidates.size() * static_cast<size_t>(n) > max_unknowns) return std::nullopt;

  std::vector<Expr> columns;
  columns.reserve(candidates.size() * static_cast<size_t>(n));
  for (int dir = 0; dir < n; ++dir)
    for (const Monomial& m : candidates)
      columns.push_back(total_derivative(Expr::from_monomials(sys, {m}), dir));

  auto solution = solve_linear(assemble_from_exprs(columns, target));
  if (!solution.feasible) return std::nullopt;

  BoundaryCurrent sigma;
  sigma.components.assign(static_cast<size_t>(n), Expr::zero(sys));
  for (size_t col = 0; col < columns.size(); ++col) {
    const Rational& q = solution.particular[col];
    if (q == 0) continue;
    const int dir = static_cast<int>(col / candidates.size());
    Monomial m = candidates[col % candidates.size()];
    m.coeff *= q;
    sigma.components[static_cast<size_t>(dir)] += Expr::from_monomials(sys, {std::move(m)});
  }
  return sigma;
}

SymmetryVerdict is_variational_symmetry(const GeneralizedVectorField& v,
                                        const HorizontalDensity& L) {
  SymmetryVerdict verdict;
  Expr action = prolong_apply(v, L.value());
  verdict.holds = euler_lagrange(action).all_zero();
  if (!verdict.holds) return verdict;

  if (action.is_zero()) {
    BoundaryCurrent zero;
    zero.components.assign(static_cast<size_t>(v.system()->base_dim()),
                           Expr::zero(v.system()));
    verdict.current = std::move(zero);
    return verdict;
  }
  auto decomposition = decompose_variation(v, L);
  if (auto tail = exhibit_divergence(decomposition.contraction)) {
    BoundaryCurrent total = std::move(decomposition.boundary);
    for (size_t k = 0; k < total.components.size(); ++k)
      total.components[k] += tail->components[k];
    verdict.current = std::move(total);
  }
  return verdict;
}

GaugeGenerator::GaugeGenerator(FieldSystemPtr sys, std::map<GaugeKey, Expr> coefficients)
    : sys_(std::move(sys)), coefficients_(std::move(coefficients)) {
  if (!sys_) throw DomainError("gauge generator requires a field system");
  for (auto it = coefficients_.begin(); it != coefficients_.end();) {
    if (it->second.is_zero()) {
      it = coefficients_.erase(it);
      continue;
    }
    const auto& [key, coeff] = *it;
    if (key.dynamic.field < 0 || key.dynamic.field >= sys_->field_count() ||
        sys_->field(key.dynamic.field).role != FieldRole::Dynamic)
      throw DomainError("gauge generator must act on dynamic field components");
    if (key.parameter.field < 0 || key.parameter.field >= sys_->field_count() ||
        sys_->field(key.parameter.field).role != FieldRole::Parameter)
      throw DomainError("gauge generator coefficients must be indexed by parameter components");
    if (!same_system(coeff.system(), sys_))
      throw DomainError("gauge coefficient lives over a different field system");
    for (const JetVar& var : coeff.jet_variables())
      if (sys_->field(var.field).role != FieldRole::Dynamic)
        throw DomainError("gauge coefficients must depend on dynamic-field jets only");
    max_order_ = std::max(max_order_, key.index.order());
    max_coeff_order_ = std::max(max_coeff_order_, coeff.max_jet_order());
    max_coeff_degree_ = std::max(max_coeff_degree_, coeff.degree());
    ++it;
  }
}

GeneralizedVectorField GaugeGenerator::expand() const {
  std::map<Component, Expr> components;
  for (const auto& [key, coeff] : coefficients_) {
    Expr term = coeff * Expr::variable(sys_, JetVar{key.parameter.field, key.parameter.fiber,
                                                    key.index});
    auto [it, inserted] = components.emplace(key.dynamic, term);
    if (!inserted) it->second += term;
  }
  return GeneralizedVectorField(sys_, std::move(components));
}

bool is_gauge_symmetry(const GaugeGenerator& g, const HorizontalDensity& L) {
  if (!same_system(L.system(), g.system()))
    throw DomainError("density lives over a different field system");
  for (const JetVar& var : L.value().jet_variables())
    if (g.system()->field(var.field).role == FieldRole::Parameter)
      throw DomainError("density must not reference parameter variables");
  return is_variational_symmetry(g.expand(), L).holds;
}

GaugeGenerator trivial_gauge_symmetry(const std::map<TrivialKey, Expr>& T,
                                      const HorizontalDensity& L) {
  const FieldSystemPtr& sys = L.system();
  if (!sys) throw DomainError("density over the null system");
  for (const auto& [key, expr] : T) {
    TrivialKey swapped{key.i, key.j, key.parameter, key.index};
    auto it = T.find(swapped);
    const Expr& mirrored = it == T.end() ? Expr() : it->second;
    if (!(expr + mirrored).is_zero())
      throw DomainError("trivial-symmetry ansatz is not antisymmetric");
  }

  EulerResult euler = euler_lagrange(L.value());
  std::map<GaugeKey, Expr> coefficients;
  for (const auto& [key, expr] : T) {
    if (expr.is_zero()) continue;
    Expr term = expr * euler.component(key.j);
    GaugeKey gk{key.i, key.parameter, key.index};
    auto [it, inserted] = coefficients.emplace(gk, term);
    if (!inserted) it->second += term;
  }
  return GaugeGenerator(sys, std::move(coefficients));
}

Expr OnShellResult::witness_expansion(const HorizontalDensity& L) const {
  EulerResult euler = euler_lagrange(L.value());
  Expr out;
  for (const auto& term : witness)
    out += term.multiplier * total_derivative_multi(euler.component(term.component),
                                                    term.prolongation);
  return out;
}

OnShellResult reduce_on_shell(const Expr& f, const HorizontalDensity& L, int jet_bound,
                              int degree_bound) {
  if (jet_bound < 0 || degree_bound < 0) throw DomainError("bounds must be non-negative");
  OnShellResult result;
  if (f.is_zero()) {
    result.verdict = OnShellVerdict::ZeroOnShell;
    return result;
  }
  const FieldSystemPtr& sys = L.system();
  if (!same_system(f.system(), sys))
    throw DomainError("expression lives over a different field system");

  EulerResult euler = euler_lagrange(L.value());
  struct Generator {
    Component component;
    MultiIndex index;
    Expr value;
  };
  std::vector<Generator> generators;
  const auto indices = multi_indices_up_to(sys->base_dim(), jet_bound);
  for (const auto& [comp, e] : euler.components) {
    if (e.is_zero() || sys->field(comp.field).role != FieldRole::Dynamic) continue;
    for (const MultiIndex& idx : indices)
      generators.push_back({comp, idx, total_derivative_multi(e, idx)});
  }

  auto vars = collect_jet_vars(*sys, [](int, const FieldDecl&) { return true; }, jet_bound);
  auto candidates = enumerate_monomials(*sys, vars, true, degree_bound);

  std::vector<Expr> columns;
  columns.reserve(generators.size() * candidates.size());
  for (const Generator& gen : generators)
    for (const Monomial& m : candidates)
      columns.push_back(Expr::from_monomials(sys, {m}) * gen.value);

  auto solution = solve_linear(assemble_from_exprs(columns, f));
  if (!solution.feasible) return result;

  result.verdict = OnShellVerdict::ZeroOnShell;
  for (size_t g = 0; g < generators.size(); ++g) {
    Expr multiplier = Expr::zero(sys);
    for (size_t c = 0; c < candidates.size(); ++c) {
      const Rational& q = solution.particular[g * candidates.size() + c];
      if (q == 0) continue;
      Monomial m = candidates[c];
      m.coeff *= q;
      multiplier += Expr::from_monomials(sys, {std::move(m)});
    }
    if (!multiplier.is_zero())
      result.witness.push_back({generators[g].component, generators[g].index, multiplier});
  }
  return result;
}

} // namespace gradedjets
