#include "gradedjets/models.hpp"

namespace gradedjets {

LieAlgebraData::LieAlgebraData(int dim,
                               std::map<std::tuple<int, int, int>, Rational> constants,
                               std::optional<std::vector<std::vector<Rational>>> metric)
    : dim_(dim), metric_(std::move(metric)) {
  if (dim < 0) throw DomainError("algebra dimension must be non-negative");
  for (const auto& [key, value] : constants) {
    auto [r, p, q] = key;
    if (r < 0 || r >= dim || p < 0 || p >= dim || q < 0 || q >= dim)
      throw DomainError("structure-constant index out of range");
    if (p == q && value != 0)
      throw DomainError("structure constants must be antisymmetric in the lower pair");
    if (value == 0 || p == q) continue;
    auto canonical = p < q ? key : std::make_tuple(r, q, p);
    Rational canonical_value = p < q ? value : -value;
    auto [it, inserted] = entries_.emplace(canonical, canonical_value);
    if (!inserted && it->second != canonical_value)
      throw DomainError("conflicting structure-constant entries for one index pair");
  }
  if (metric_) {
    if (static_cast<int>(metric_->size()) != dim)
      throw DomainError("metric dimension mismatch");
    for (const auto& row : *metric_)
      if (static_cast<int>(row.size()) != dim) throw DomainError("metric dimension mismatch");
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q)
        if ((*metric_)[p][q] != (*metric_)[q][p])
          throw DomainError("invariant metric must be symmetric");
    // kappa_{rs} c^s_{pq} must be totally antisymmetric in (r, p, q).
    auto lowered = [&](int r, int p, int q) {
      Rational sum = 0;
      for (int s = 0; s < dim; ++s) sum += (*metric_)[r][s] * structure_constant(s, p, q);
      return sum;
    };
    for (int r = 0; r < dim; ++r)
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
          if (lowered(r, p, q) != -lowered(p, r, q))
            throw DomainError("metric is not invariant for the structure constants");
  }
}

Rational LieAlgebraData::structure_constant(int r, int p, int q) const {
  if (p == q) return 0;
  auto it = entries_.find(p < q ? std::make_tuple(r, p, q) : std::make_tuple(r, q, p));
  if (it == entries_.end()) return 0;
  return p < q ? it->second : -it->second;
}

const Rational& LieAlgebraData::metric(int p, int q) const {
  if (!metric_) throw DomainError("algebra has no invariant metric");
  return (*metric_)[static_cast<size_t>(p)][static_cast<size_t>(q)];
}

namespace {

std::vector<std::vector<Rational>> identity_metric(int dim) {
  std::vector<std::vector<Rational>> id(static_cast<size_t>(dim),
                                        std::vector<Rational>(static_cast<size_t>(dim), 0));
  for (int k = 0; k < dim; ++k) id[static_cast<size_t>(k)][static_cast<size_t>(k)] = 1;
  return id;
}

} // namespace

LieAlgebraData LieAlgebraData::abelian(int dim) {
  return LieAlgebraData(dim, {}, identity_metric(dim));
}

LieAlgebraData LieAlgebraData::su2() {
  std::map<std::tuple<int, int, int>, Rational> c;
  c[{0, 1, 2}] = 1;  // c^1_{23} = 1 and cyclic
  c[{1, 2, 0}] = 1;
  c[{2, 0, 1}] = 1;
  return LieAlgebraData(3, std::move(c), identity_metric(3));
}

LieAlgebraData LieAlgebraData::su2_u1() {
  std::map<std::tuple<int, int, int>, Rational> c;
  c[{0, 1, 2}] = 1;
  c[{1, 2, 0}] = 1;
  c[{2, 0, 1}] = 1;
  return LieAlgebraData(4, std::move(c), identity_metric(4));
}

bool check_jacobi(const LieAlgebraData& g) {
  const int m = g.dim();
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int t = 0; t < m; ++t) {
          Rational sum = 0;
          for (int s = 0; s < m; ++s)
            sum += g.structure_constant(s, p, q) * g.structure_constant(t, s, r) +
                   g.structure_constant(s, q, r) * g.structure_constant(t, s, p) +
                   g.structure_constant(s, r, p) * g.structure_constant(t, s, q);
          if (sum != 0) return false;
        }
  return true;
}

TgpSection tgp_bracket(const LieAlgebraData& g, const TgpSection& u, const TgpSection& v) {
  if (u.horizontal.size() != v.horizontal.size() || u.vertical.size() != v.vertical.size())
    throw DomainError("section dimension mismatch");
  if (static_cast<int>(u.vertical.size()) != g.dim())
    throw DomainError("section does not match the algebra dimension");
  const size_t n = u.horizontal.size();
  const size_t m = u.vertical.size();
  for (const auto* section : {&u, &v})
    for (const auto* part : {&section->horizontal, &section->vertical})
      for (const Expr& e : *part)
        if (!e.jet_variables().empty())
          throw DomainError("section data must be polynomial in x only");

  TgpSection out;
  out.horizontal.resize(n);
  out.vertical.resize(m);
  for (size_t lam = 0; lam < n; ++lam) {
    Expr sum;
    for (size_t mu = 0; mu < n; ++mu)
      sum += u.horizontal[mu] * partial_base(v.horizontal[lam], static_cast<int>(mu)) -
             v.horizontal[mu] * partial_base(u.horizontal[lam], static_cast<int>(mu));
    out.horizontal[lam] = std::move(sum);
  }
  for (size_t r = 0; r < m; ++r) {
    Expr sum;
    for (size_t lam = 0; lam < n; ++lam)
      sum += u.horizontal[lam] * partial_base(v.vertical[r], static_cast<int>(lam)) -
             v.horizontal[lam] * partial_base(u.vertical[r], static_cast<int>(lam));
    for (int p = 0; p < g.dim(); ++p)
      for (int q = 0; q < g.dim(); ++q) {
        Rational c = g.structure_constant(static_cast<int>(r), p, q);
        if (c == 0) continue;
        sum += (u.vertical[static_cast<size_t>(p)] * v.vertical[static_cast<size_t>(q)])
                   .scaled(c);
      }
    out.vertical[r] = std::move(sum);
  }
  return out;
}

ConnectionModel ConnectionModel::make(int base_dim, LieAlgebraData algebra,
                                      bool diffeo_ghosts) {
  ConnectionModel model;
  model.n_ = base_dim;
  model.diffeo_ = diffeo_ghosts;
  const int m = algebra.dim();
  model.algebra_ = std::move(algebra);

  std::vector<FieldDecl> fields;
  model.a_ = 0;
  fields.push_back({"a", {m, base_dim}, Parity::Even, FieldRole::Dynamic});
  model.xi_ = 1;
  fields.push_back({"xi", {m}, Parity::Even, FieldRole::Parameter});
  if (diffeo_ghosts) {
    model.tau_ = 2;
    fields.push_back({"tau", {base_dim}, Parity::Even, FieldRole::Parameter});
  }
  model.c_ = static_cast<int>(fields.size());
  fields.push_back({"c", {m}, Parity::Odd, FieldRole::Ghost});
  if (diffeo_ghosts) {
    model.ct_ = static_cast<int>(fields.size());
    fields.push_back({"ct", {base_dim}, Parity::Odd, FieldRole::Ghost});
  }
  model.sys_ = FieldSystem::create(base_dim, std::move(fields));
  return model;
}

Component ConnectionModel::diffeo_parameter(int mu) const {
  if (!diffeo_) throw DomainError("model has no diffeomorphism sector");
  return {tau_, mu};
}

Component ConnectionModel::diffeo_ghost(int mu) const {
  if (!diffeo_) throw DomainError("model has no diffeomorphism sector");
  return {ct_, mu};
}

JetVar ConnectionModel::potential_jet(int r, int lambda, const MultiIndex& idx) const {
  Component comp = potential(r, lambda);
  return JetVar{comp.field, comp.fiber, idx};
}

GaugeGenerator connection_generator(const ConnectionModel& model) {
  const FieldSystemPtr& sys = model.system();
  const LieAlgebraData& g = model.algebra();
  const int n = model.base_dim();
  const int m = g.dim();
  std::map<GaugeKey, Expr> coefficients;
  auto add = [&](Component dyn, Component par, MultiIndex idx, Expr value) {
    GaugeKey key{dyn, par, std::move(idx)};
    auto [it, inserted] = coefficients.emplace(key, value);
    if (!inserted) it->second += value;
  };

  for (int r = 0; r < m; ++r) {
    for (int lam = 0; lam < n; ++lam) {
      const Component target = model.potential(r, lam);
      // c^r_{pq} a^p_lambda xi^q
      for (int q = 0; q < m; ++q) {
        Expr coeff = Expr::zero(sys);
        for (int p = 0; p < m; ++p) {
          Rational c = g.structure_constant(r, p, q);
          if (c != 0)
            coeff += Expr::variable(sys, model.potential_jet(p, lam, MultiIndex(n))).scaled(c);
        }
        if (!coeff.is_zero()) add(target, model.parameter(q), MultiIndex(n), coeff);
      }
      // xi^r_lambda
      add(target, model.parameter(r), MultiIndex::unit(n, lam), Expr::constant(sys, 1));
      if (model.diffeo_ghosts()) {
        for (int mu = 0; mu < n; ++mu) {
          // -a^r_mu tau^mu_lambda
          add(target, model.diffeo_parameter(mu), MultiIndex::unit(n, lam),
              -Expr::variable(sys, model.potential_jet(r, mu, MultiIndex(n))));
          // -tau^mu a^r_{lambda;mu}
          add(target, model.diffeo_parameter(mu), MultiIndex(n),
              -Expr::variable(sys, model.potential_jet(r, lam, MultiIndex::unit(n, mu))));
        }
      }
    }
  }
  return GaugeGenerator(sys, std::move(coefficients));
}

HorizontalDensity yang_mills_lagrangian(const ConnectionModel& model) {
  const FieldSystemPtr& sys = model.system();
  const LieAlgebraData& g = model.algebra();
  if (!g.has_metric()) throw DomainError("Yang-Mills Lagrangian requires an invariant metric");
  const int n = model.base_dim();
  const int m = g.dim();

  auto strength = [&](int r, int lam, int mu) {
    Expr f = Expr::variable(sys, model.potential_jet(r, mu, MultiIndex::unit(n, lam))) -
             Expr::variable(sys, model.potential_jet(r, lam, MultiIndex::unit(n, mu)));
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        Rational c = g.structure_constant(r, p, q);
        if (c == 0) continue;
        f += (Expr::variable(sys, model.potential_jet(p, lam, MultiIndex(n))) *
              Expr::variable(sys, model.potential_jet(q, mu, MultiIndex(n))))
                 .scaled(c);
      }
    return f;
  };

  Expr density = Expr::zero(sys);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      if (g.metric(p, q) == 0) continue;
      for (int lam = 0; lam < n; ++lam)
        for (int mu = 0; mu < n; ++mu)
          density += (strength(p, lam, mu) * strength(q, lam, mu))
                         .scaled(g.metric(p, q) * Rational(-1, 4));
    }
  return HorizontalDensity(std::move(density));
}

BrstCandidate yang_mills_brst(const ConnectionModel& model) {
  const FieldSystemPtr& sys = model.system();
  const LieAlgebraData& g = model.algebra();
  const int n = model.base_dim();
  const int m = g.dim();

  std::map<Component, Expr> dynamic_part;
  for (int r = 0; r < m; ++r) {
    for (int lam = 0; lam < n; ++lam) {
      // s a^r_lambda = c^r_{pq} a^p_lambda c^q + c^r_lambda
      //               - a^r_mu ct^mu_lambda - ct^mu a^r_{lambda;mu}
      Expr value =
          Expr::variable(sys, JetVar{model.ghost(r).field, r, MultiIndex::unit(n, lam)});
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
          Rational c = g.structure_constant(r, p, q);
          if (c == 0) continue;
          value += (Expr::variable(sys, model.potential_jet(p, lam, MultiIndex(n))) *
                    Expr::variable(sys, model.ghost(q)))
                       .scaled(c);
        }
      if (model.diffeo_ghosts()) {
        for (int mu = 0; mu < n; ++mu) {
          value -= Expr::variable(sys, model.potential_jet(r, mu, MultiIndex(n))) *
                   Expr::variable(sys, JetVar{model.diffeo_ghost(mu).field, mu,
                                              MultiIndex::unit(n, lam)});
          value -= Expr::variable(sys, model.diffeo_ghost(mu)) *
                   Expr::variable(sys, model.potential_jet(r, lam, MultiIndex::unit(n, mu)));
        }
      }
      dynamic_part.emplace(model.potential(r, lam), std::move(value));
    }
  }

  std::map<Component, Expr> ghost_part;
  for (int r = 0; r < m; ++r) {
    // s c^r = -1/2 c^r_{pq} c^p c^q (- ct^mu c^r_mu)
    Expr value = Expr::zero(sys);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        Rational c = g.structure_constant(r, p, q);
        if (c == 0) continue;
        value += (Expr::variable(sys, model.ghost(p)) * Expr::variable(sys, model.ghost(q)))
                     .scaled(c * Rational(-1, 2));
      }
    if (model.diffeo_ghosts()) {
      for (int mu = 0; mu < n; ++mu)
        value -= Expr::variable(sys, model.diffeo_ghost(mu)) *
                 Expr::variable(sys, JetVar{model.ghost(r).field, r, MultiIndex::unit(n, mu)});
    }
    ghost_part.emplace(model.ghost(r), std::move(value));
  }
  if (model.diffeo_ghosts()) {
    for (int lam = 0; lam < n; ++lam) {
      // s ct^lambda = ct^lambda_mu ct^mu
      Expr value = Expr::zero(sys);
      for (int mu = 0; mu < n; ++mu)
        value += Expr::variable(sys, JetVar{model.diffeo_ghost(lam).field, lam,
                                            MultiIndex::unit(n, mu)}) *
                 Expr::variable(sys, model.diffeo_ghost(mu));
      ghost_part.emplace(model.diffeo_ghost(lam), std::move(value));
    }
  }
  return BrstCandidate(sys, std::move(dynamic_part), std::move(ghost_part));
}

} // namespace gradedjets
