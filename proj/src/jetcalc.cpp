#include "gradedjets/jetcalc.hpp"

#include <algorithm>
#include <map>

namespace gradedjets {

Expr partial(const Expr& f, const JetVar& v) {
  if (f.is_zero()) return f;
  const FieldSystemPtr& sys = f.system();
  const bool odd = sys->field(v.field).parity == Parity::Odd;
  std::vector<Monomial> out;
  for (const Monomial& t : f.terms()) {
    if (odd) {
      for (size_t j = 0; j < t.odd_part.size(); ++j) {
        if (!(t.odd_part[j] == v)) continue;
        Monomial m = t;
        m.odd_part.erase(m.odd_part.begin() + static_cast<long>(j));
        if (j & 1) m.coeff = -m.coeff;  // factors passed by the left derivative
        out.push_back(std::move(m));
        break;  // canonical form holds each odd variable at most once
      }
    } else {
      for (size_t j = 0; j < t.even_part.size(); ++j) {
        if (!(t.even_part[j].first == v)) continue;
        Monomial m = t;
        m.coeff *= m.even_part[j].second;
        if (--m.even_part[j].second == 0)
          m.even_part.erase(m.even_part.begin() + static_cast<long>(j));
        out.push_back(std::move(m));
        break;
      }
    }
  }
  return Expr::from_monomials(sys, std::move(out));
}

Expr partial_base(const Expr& f, int direction) {
  if (f.is_zero()) return f;
  const FieldSystemPtr& sys = f.system();
  if (direction < 0 || direction >= sys->base_dim())
    throw DomainError("base direction out of range");
  std::vector<Monomial> out;
  for (const Monomial& t : f.terms()) {
    const size_t k = static_cast<size_t>(direction);
    if (t.base_exp[k] == 0) continue;
    Monomial m = t;
    m.coeff *= m.base_exp[k];
    m.base_exp[k] -= 1;
    out.push_back(std::move(m));
  }
  return Expr::from_monomials(sys, std::move(out));
}

Expr total_derivative(const Expr& f, int direction) {
  if (f.is_zero()) return f;
  const FieldSystemPtr& sys = f.system();
  if (direction < 0 || direction >= sys->base_dim())
    throw DomainError("base direction out of range");
  Expr out = partial_base(f, direction);
  for (const JetVar& v : f.jet_variables()) {
    JetVar shifted{v.field, v.fiber, v.index.plus(direction)};
    out += Expr::variable(sys, std::move(shifted)) * partial(f, v);
  }
  return out;
}

Expr total_derivative_multi(const Expr& f, const MultiIndex& index) {
  Expr out = f;
  for (int k = 0; k < index.base_dim(); ++k)
    for (int i = 0; i < index[k]; ++i) out = total_derivative(out, k);
  return out;
}

GeneralizedVectorField::GeneralizedVectorField(FieldSystemPtr sys,
                                               std::map<Component, Expr> components,
                                               std::optional<Parity> expected_parity)
    : sys_(std::move(sys)), components_(std::move(components)) {
  if (!sys_) throw DomainError("vector field requires a field system");
  std::optional<Parity> derivation;
  for (const auto& [comp, expr] : components_) {
    if (comp.field < 0 || comp.field >= sys_->field_count())
      throw DomainError("vector-field component references an undeclared field");
    const FieldDecl& decl = sys_->field(comp.field);
    if (comp.fiber < 0 || comp.fiber >= decl.fiber_size())
      throw DomainError("vector-field component fiber index out of range");
    if (!same_system(expr.system(), sys_))
      throw DomainError("vector-field component lives over a different field system");
    order_ = std::max(order_, expr.max_jet_order());
    if (expr.is_zero()) continue;
    auto p = parity_of(expr);
    if (!p) throw DomainError("vector-field component has mixed parity");
    Parity d = *p + decl.parity;
    if (derivation && *derivation != d)
      throw DomainError("vector-field components have non-uniform derivation parity");
    derivation = d;
  }
  if (expected_parity) {
    if (derivation && *derivation != *expected_parity)
      throw DomainError("vector field does not have the expected parity");
    derivation = expected_parity;
  }
  parity_ = derivation.value_or(Parity::Even);
}

const Expr& GeneralizedVectorField::component(Component c) const {
  static const Expr kZero;
  auto it = components_.find(c);
  return it == components_.end() ? kZero : it->second;
}

namespace {

/// Memoized d_Lambda(v^A), shared by prolongation and the variation split.
class ProlongCache {
public:
  explicit ProlongCache(const GeneralizedVectorField& v) : v_(v) {}

  const Expr& get(Component comp, const MultiIndex& index) {
    auto key = std::make_pair(comp, index);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Expr value;
    if (index.order() == 0) {
      value = v_.component(comp);
    } else {
      int dir = index.first_direction();
      value = total_derivative(get(comp, index.minus(dir)), dir);
    }
    return cache_.emplace(std::move(key), std::move(value)).first->second;
  }

private:
  const GeneralizedVectorField& v_;
  std::map<std::pair<Component, MultiIndex>, Expr> cache_;
};

} // namespace

Expr prolong_apply(const GeneralizedVectorField& v, const Expr& f) {
  if (f.is_zero()) return f;
  if (!same_system(f.system(), v.system()))
    throw DomainError("expression lives over a different field system");
  ProlongCache cache(v);
  Expr out = Expr::zero(v.system());
  for (const JetVar& var : f.jet_variables()) {
    if (!v.covers(var.component())) continue;
    const Expr& coefficient = cache.get(var.component(), var.index);
    if (coefficient.is_zero()) continue;
    out += coefficient * partial(f, var);
  }
  return out;
}

HorizontalDensity::HorizontalDensity(Expr value) : value_(std::move(value)) {
  auto p = parity_of(value_);
  if (!p || *p != Parity::Even)
    throw DomainError("a Lagrangian density must be even");
}

const Expr& EulerResult::component(Component c) const {
  static const Expr kZero;
  auto it = components.find(c);
  return it == components.end() ? kZero : it->second;
}

bool EulerResult::all_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const auto& kv) { return kv.second.is_zero(); });
}

EulerResult euler_lagrange(const Expr& density) {
  EulerResult result;
  const FieldSystemPtr& sys = density.system();
  if (!sys) return result;
  for (int field = 0; field < sys->field_count(); ++field)
    for (int fiber = 0; fiber < sys->field(field).fiber_size(); ++fiber)
      result.components[{field, fiber}] = Expr::zero(sys);
  for (const JetVar& v : density.jet_variables()) {
    Expr term = total_derivative_multi(partial(density, v), v.index);
    if (v.index.order() & 1) term = -term;
    result.components[v.component()] += term;
  }
  return result;
}

Expr BoundaryCurrent::divergence() const {
  Expr out;
  for (size_t k = 0; k < components.size(); ++k)
    out += total_derivative(components[k], static_cast<int>(k));
  return out;
}

VariationDecomposition decompose_variation(const GeneralizedVectorField& v,
                                           const HorizontalDensity& L) {
  const FieldSystemPtr& sys = v.system();
  const int n = sys->base_dim();
  ProlongCache cache(v);

  // Pending terms d_Lambda(v^A) * g, keyed by (A, Lambda) so equal keys merge
  // and the rewriting stays polynomial-sized.
  std::map<std::pair<Component, MultiIndex>, Expr> pending;
  for (const JetVar& var : L.value().jet_variables()) {
    if (!v.covers(var.component())) continue;
    Expr g = partial(L.value(), var);
    if (g.is_zero()) continue;
    auto key = std::make_pair(var.component(), var.index);
    auto [it, inserted] = pending.emplace(key, g);
    if (!inserted) it->second += g;
  }

  BoundaryCurrent sigma;
  sigma.components.assign(static_cast<size_t>(n), Expr::zero(sys));

  // Peel one derivative at a time, highest orders first:
  // d_{lambda+Lambda'}(v) g  ->  sigma^lambda += d_{Lambda'}(v) g,
  // and the counter-term -d_{Lambda'}(v) d_lambda(g) re-enters the pool.
  while (true) {
    auto it = std::max_element(pending.begin(), pending.end(),
                               [](const auto& a, const auto& b) {
                                 return a.first.second.order() < b.first.second.order();
                               });
    if (it == pending.end() || it->first.second.order() == 0) break;
    auto [comp, index] = it->first;
    Expr g = std::move(it->second);
    pending.erase(it);
    if (g.is_zero()) continue;
    const int dir = index.first_direction();
    const MultiIndex rest = index.minus(dir);
    sigma.components[static_cast<size_t>(dir)] += cache.get(comp, rest) * g;
    auto key = std::make_pair(comp, rest);
    Expr counter = -total_derivative(g, dir);
    auto [slot, inserted] = pending.emplace(key, counter);
    if (!inserted) slot->second += counter;
  }

  EulerResult euler = euler_lagrange(L.value());
  Expr contraction = Expr::zero(sys);
  for (const auto& [comp, expr] : v.components()) contraction += expr * euler.component(comp);
  return {std::move(contraction), std::move(sigma)};
}

} // namespace gradedjets
