#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gradedjets/expr.hpp"

namespace gradedjets {

/// Graded left partial derivative with respect to one jet variable.
/// For odd v acting on c^{b1}...c^{bk} the j-th factor contributes the sign
/// (-1)^{j-1}; distinct multi-indices are independent variables, so no
/// multinomial weights appear.
Expr partial(const Expr& f, const JetVar& v);

/// Derivative with respect to the explicit x^lambda dependence (0-based).
Expr partial_base(const Expr& f, int direction);

/// Total derivative d_lambda = partial_base + sum over jet variables of
/// s^A_{lambda+Lambda} * left partial. An even derivation; total derivatives
/// commute with each other.
Expr total_derivative(const Expr& f, int direction);

/// Iterated total derivative d_Lambda (identity for |Lambda| = 0).
Expr total_derivative_multi(const Expr& f, const MultiIndex& index);

/// Vertical generalized vector field: a map from covered field components to
/// expressions. The derivation parity [v^A] + [s^A] must be uniform across
/// all nonzero components.
class GeneralizedVectorField {
public:
  GeneralizedVectorField(FieldSystemPtr sys, std::map<Component, Expr> components,
                         std::optional<Parity> expected_parity = std::nullopt);

  const FieldSystemPtr& system() const { return sys_; }
  const std::map<Component, Expr>& components() const& { return components_; }
  std::map<Component, Expr> components() const&& { return components_; }
  bool covers(Component c) const { return components_.count(c) != 0; }
  /// Component expression; zero for uncovered components.
  const Expr& component(Component c) const;
  Parity derivation_parity() const { return parity_; }
  int order() const { return order_; }

private:
  FieldSystemPtr sys_;
  std::map<Component, Expr> components_;
  Parity parity_ = Parity::Even;
  int order_ = 0;
};

/// Prolonged action of the vertical contact derivation generated by v:
/// sum over (A, Lambda) of d_Lambda(v^A) * left partial of f. Components of
/// uncovered fields annihilate. A graded derivation of parity
/// v.derivation_parity().
Expr prolong_apply(const GeneralizedVectorField& v, const Expr& f);

/// Coefficient of the volume element: a Lagrangian density must be even.
class HorizontalDensity {
public:
  explicit HorizontalDensity(Expr value);
  const Expr& value() const { return value_; }
  const FieldSystemPtr& system() const { return value_.system(); }

private:
  Expr value_;
};

/// Componentwise variational derivative, defined for every declared field
/// component (ghosts and parameters included, with graded signs).
struct EulerResult {
  std::map<Component, Expr> components;

  const Expr& component(Component c) const;
  bool all_zero() const;
};

/// E_A = sum over Lambda of (-1)^{|Lambda|} d_Lambda(dL/ds^A_Lambda),
/// with left partials for odd components. Annihilates total divergences.
EulerResult euler_lagrange(const Expr& density);
inline EulerResult euler_lagrange(const HorizontalDensity& L) { return euler_lagrange(L.value()); }

/// Boundary current: one expression per base direction.
struct BoundaryCurrent {
  std::vector<Expr> components;

  /// sum over lambda of d_lambda(sigma^lambda)
  Expr divergence() const;
};

struct VariationDecomposition {
  Expr contraction;         // sum over covered A of v^A * E_A
  BoundaryCurrent boundary; // sigma with theta(L) = contraction + div(sigma)
};

/// Density-level first variational identity. The current is produced by
/// integration by parts, peeling the lowest base direction of each
/// multi-index first, which makes sigma a fixed representative of the
/// (non-unique) boundary current.
VariationDecomposition decompose_variation(const GeneralizedVectorField& v,
                                           const HorizontalDensity& L);

} // namespace gradedjets
