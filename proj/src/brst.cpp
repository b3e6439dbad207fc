#include "gradedjets/brst.hpp"

#include <algorithm>
#include <set>

#include "gradedjets/ansatz.hpp"
#include "gradedjets/linear.hpp"

namespace gradedjets {

namespace {

std::map<Component, Expr> merge_parts(const std::map<Component, Expr>& a,
                                      const std::map<Component, Expr>& b) {
  std::map<Component, Expr> merged = a;
  for (const auto& [comp, expr] : b) {
    if (!merged.emplace(comp, expr).second)
      throw DomainError("candidate covers a component twice");
  }
  return merged;
}

} // namespace

BrstCandidate::BrstCandidate(FieldSystemPtr sys, std::map<Component, Expr> dynamic_part,
                             std::map<Component, Expr> ghost_part)
    : sys_(std::move(sys)),
      dynamic_(std::move(dynamic_part)),
      ghost_(std::move(ghost_part)),
      field_(sys_, merge_parts(dynamic_, ghost_), Parity::Odd) {
  for (const auto& [comp, expr] : dynamic_) {
    if (sys_->field(comp.field).role != FieldRole::Dynamic)
      throw DomainError("dynamic part must cover dynamic field components");
    if (expr.is_zero()) continue;
    auto g = grading(expr);
    if (!g || g->ghost_degree != 1)
      throw DomainError("dynamic components must carry ghost degree 1");
  }
  for (const auto& [comp, expr] : ghost_) {
    if (sys_->field(comp.field).role != FieldRole::Ghost)
      throw DomainError("ghost part must cover ghost field components");
    if (expr.is_zero()) continue;
    auto g = grading(expr);
    if (!g || g->ghost_degree != 2)
      throw DomainError("ghost components must carry ghost degree 2");
  }
}

NilpotencyReport check_nilpotent(const BrstCandidate& b) {
  NilpotencyReport report;
  report.nilpotent = true;
  const GeneralizedVectorField& theta = b.as_vector_field();
  for (const auto& [comp, expr] : theta.components()) {
    Expr residual = prolong_apply(theta, expr);
    if (!residual.is_zero()) report.nilpotent = false;
    report.residuals.emplace(comp, std::move(residual));
  }
  return report;
}

std::map<int, int> ghost_pairing(const FieldSystem& sys) {
  const auto params = sys.fields_with_role(FieldRole::Parameter);
  const auto ghosts = sys.fields_with_role(FieldRole::Ghost);
  std::map<int, int> pairing;
  for (size_t k = 0; k < params.size() && k < ghosts.size(); ++k)
    pairing[params[k]] = ghosts[k];
  return pairing;
}

GeneralizedVectorField ghostify(const GaugeGenerator& g) {
  const FieldSystemPtr& sys = g.system();
  const auto pairing = ghost_pairing(*sys);
  std::map<Component, Expr> components;
  for (const auto& [key, coeff] : g.coefficients()) {
    auto it = pairing.find(key.parameter.field);
    if (it == pairing.end())
      throw DomainError("missing ghost declaration for parameter field '" +
                        sys->field(key.parameter.field).name + "'");
    const int ghost_field = it->second;
    if (sys->field(ghost_field).fiber_size() != sys->field(key.parameter.field).fiber_size())
      throw DomainError("ghost field '" + sys->field(ghost_field).name +
                        "' does not match the fiber of parameter '" +
                        sys->field(key.parameter.field).name + "'");
    Expr term =
        coeff * Expr::variable(sys, JetVar{ghost_field, key.parameter.fiber, key.index});
    auto [slot, inserted] = components.emplace(key.dynamic, term);
    if (!inserted) slot->second += term;
  }
  return GeneralizedVectorField(sys, std::move(components), Parity::Odd);
}

StructureFunctions::StructureFunctions(FieldSystemPtr sys, std::map<StructureKey, Expr> u2,
                                       int dim)
    : sys_(std::move(sys)), u2_(std::move(u2)), dim_(dim) {
  for (const auto& [key, coeff] : u2_) {
    if (!(key.first < key.second))
      throw DomainError("structure-function pairs must be strictly ordered");
    Expr term = coeff * Expr::variable(sys_, key.first) * Expr::variable(sys_, key.second);
    auto [slot, inserted] = action_.emplace(key.ghost, term);
    if (!inserted) slot->second += term;
  }
}

bool StructureSolveResult::jacobi_holds() const {
  if (!solutions) return false;
  return std::all_of(jacobi_residuals.begin(), jacobi_residuals.end(),
                     [](const auto& kv) { return kv.second.is_zero(); });
}

StructureSolveResult solve_structure_functions(const GaugeGenerator& g,
                                               StructureSolveOptions options) {
  const FieldSystemPtr& sys = g.system();
  GeneralizedVectorField ghosted = ghostify(g);
  const auto pairing = ghost_pairing(*sys);

  const int ghost_jet_bound = options.ghost_jet_bound >= 0
                                  ? options.ghost_jet_bound
                                  : std::max(0, g.max_parameter_jet_order() - 1);
  const int jet_bound =
      options.jet_bound >= 0 ? options.jet_bound : g.max_coefficient_jet_order();
  const int degree_bound =
      options.degree_bound >= 0 ? options.degree_bound : g.max_coefficient_degree();

  bool uses_x = false;
  for (const auto& [key, coeff] : g.coefficients())
    for (const Monomial& t : coeff.terms())
      for (int e : t.base_exp)
        if (e > 0) uses_x = true;

  // Ghost components reachable from this generator's parameters.
  std::set<int> paired_ghosts;
  std::set<int> used_params;
  for (const auto& [key, coeff] : g.coefficients()) used_params.insert(key.parameter.field);
  for (int p : used_params) paired_ghosts.insert(pairing.at(p));

  auto ghost_vars = collect_jet_vars(
      *sys, [&](int field, const FieldDecl&) { return paired_ghosts.count(field) != 0; },
      ghost_jet_bound);
  auto dynamic_vars = collect_jet_vars(
      *sys, [](int, const FieldDecl& d) { return d.role == FieldRole::Dynamic; }, jet_bound);
  auto coeff_monomials = enumerate_monomials(*sys, dynamic_vars, uses_x, degree_bound);

  struct Unknown {
    Component ghost;
    JetVar first, second;
    Monomial coeff;
    Expr ghost_value;  // coeff * c^p_{Gamma1} * c^q_{Gamma2}
  };
  std::vector<Unknown> unknowns;
  for (int gf : paired_ghosts) {
    const FieldDecl& decl = sys->field(gf);
    for (int fiber = 0; fiber < decl.fiber_size(); ++fiber) {
      for (size_t i = 0; i < ghost_vars.size(); ++i) {
        for (size_t j = i + 1; j < ghost_vars.size(); ++j) {
          for (const Monomial& m : coeff_monomials) {
            Expr value = Expr::from_monomials(sys, {m}) *
                         Expr::variable(sys, ghost_vars[i]) *
                         Expr::variable(sys, ghost_vars[j]);
            unknowns.push_back({{gf, fiber}, ghost_vars[i], ghost_vars[j], m, value});
          }
        }
      }
    }
  }

  // One equation per covered dynamic component j:
  //   theta_c(v^j) + sum over (r, Lambda) of d_Lambda(u^r) * coeff^{j,Lambda}_r = 0,
  // linear in the u_(2) coefficients for fixed g.
  std::vector<std::vector<Expr>> column_sets;
  std::vector<Expr> targets;
  for (const auto& [comp, expr] : ghosted.components()) {
    targets.push_back(-prolong_apply(ghosted, expr));
    std::vector<Expr> columns;
    columns.reserve(unknowns.size());
    for (const Unknown& u : unknowns) {
      Expr column = Expr::zero(sys);
      for (const auto& [key, coeff] : g.coefficients()) {
        if (!(key.dynamic == comp)) continue;
        Component ghost_comp{pairing.at(key.parameter.field), key.parameter.fiber};
        if (!(ghost_comp == u.ghost)) continue;
        column += total_derivative_multi(u.ghost_value, key.index) * coeff;
      }
      columns.push_back(std::move(column));
    }
    column_sets.push_back(std::move(columns));
  }

  StructureSolveResult result;
  auto solution = solve_linear(assemble_from_expr_equations(column_sets, targets));
  if (!solution.feasible) return result;

  std::map<StructureKey, Expr> u2;
  for (size_t k = 0; k < unknowns.size(); ++k) {
    const Rational& q = solution.particular[k];
    if (q == 0) continue;
    Monomial m = unknowns[k].coeff;
    m.coeff *= q;
    StructureKey key{unknowns[k].ghost, unknowns[k].first, unknowns[k].second};
    Expr value = Expr::from_monomials(sys, {std::move(m)});
    auto [slot, inserted] = u2.emplace(key, value);
    if (!inserted) slot->second += value;
  }
  for (auto it = u2.begin(); it != u2.end();)
    it = it->second.is_zero() ? u2.erase(it) : std::next(it);
  result.solutions = StructureFunctions(sys, std::move(u2), solution.nullity);

  // Generalized Jacobi identities: residual of the completed candidate on
  // every reachable ghost component.
  std::map<Component, Expr> ghost_part;
  for (int gf : paired_ghosts)
    for (int fiber = 0; fiber < sys->field(gf).fiber_size(); ++fiber)
      ghost_part.emplace(Component{gf, fiber}, Expr::zero(sys));
  for (const auto& [comp, expr] : result.solutions->ghost_action()) ghost_part[comp] = expr;

  BrstCandidate candidate(sys, ghosted.components(), ghost_part);
  const GeneralizedVectorField& theta = candidate.as_vector_field();
  for (const auto& [comp, expr] : ghost_part)
    result.jacobi_residuals.emplace(comp, prolong_apply(theta, expr));
  return result;
}

BracketResult extract_bracket(const GaugeGenerator& g) {
  const FieldSystemPtr& sys = g.system();

  // Extended system: the original fields followed by two even copies of each
  // parameter field. Keeping the original fields as a prefix preserves every
  // field index, so coefficient expressions transport verbatim.
  std::vector<FieldDecl> decls = sys->fields();
  std::map<int, std::pair<int, int>> copies;
  for (int f : sys->fields_with_role(FieldRole::Parameter)) {
    FieldDecl first = sys->field(f);
    FieldDecl second = sys->field(f);
    first.name += "_1";
    second.name += "_2";
    copies[f] = {static_cast<int>(decls.size()), static_cast<int>(decls.size()) + 1};
    decls.push_back(std::move(first));
    decls.push_back(std::move(second));
  }
  FieldSystemPtr ext = FieldSystem::create(sys->base_dim(), std::move(decls));

  auto transport = [&](const Expr& e) {
    return Expr::from_monomials(ext, e.terms());
  };
  auto expand_copy = [&](bool second_copy) {
    std::map<Component, Expr> components;
    for (const auto& [key, coeff] : g.coefficients()) {
      const auto& [first, second] = copies.at(key.parameter.field);
      const int field = second_copy ? second : first;
      Expr term = transport(coeff) *
                  Expr::variable(ext, JetVar{field, key.parameter.fiber, key.index});
      auto [slot, inserted] = components.emplace(key.dynamic, term);
      if (!inserted) slot->second += term;
    }
    return GeneralizedVectorField(ext, std::move(components));
  };

  GeneralizedVectorField with_xi = expand_copy(false);
  GeneralizedVectorField with_eta = expand_copy(true);

  BracketResult result;
  result.extended_system = ext;
  for (const auto& [comp, expr] : with_eta.components()) {
    Expr bracket =
        prolong_apply(with_xi, expr) - prolong_apply(with_eta, with_xi.component(comp));
    if (bracket.is_zero()) continue;

    // Split off the bilinear parameter factors per monomial. Every term holds
    // exactly one jet of each parameter copy, both even, so no signs move.
    for (const Monomial& t : bracket.terms()) {
      std::optional<JetVar> xi_var, eta_var;
      Monomial rest = t;
      std::vector<std::pair<JetVar, int>> kept;
      for (const auto& [var, exp] : rest.even_part) {
        bool is_copy = false;
        for (const auto& [orig, pair] : copies) {
          (void)orig;
          if (var.field == pair.first) {
            xi_var = var;
            is_copy = true;
          } else if (var.field == pair.second) {
            eta_var = var;
            is_copy = true;
          }
        }
        if (!is_copy) kept.emplace_back(var, exp);
      }
      if (!xi_var || !eta_var) continue;
      rest.even_part = std::move(kept);
      Expr coefficient = Expr::from_monomials(ext, {std::move(rest)});
      auto& slot = result.pairs[{*xi_var, *eta_var}];
      auto [it, inserted] = slot.emplace(comp, coefficient);
      if (!inserted) it->second += coefficient;
    }
    result.components.emplace(comp, std::move(bracket));
  }
  return result;
}

} // namespace gradedjets
