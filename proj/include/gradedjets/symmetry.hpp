#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gradedjets/jetcalc.hpp"

namespace gradedjets {

struct SymmetryVerdict {
  bool holds = false;
  /// Total current sigma with theta(L) = div(sigma), exhibited when the
  /// bounded linear-ansatz search succeeds; absent otherwise.
  std::optional<BoundaryCurrent> current;
};

/// Variational symmetry test by the Euler-kernel criterion: the action of v
/// on the density is a total divergence iff its variational derivative
/// vanishes for every declared component.
SymmetryVerdict is_variational_symmetry(const GeneralizedVectorField& v,
                                        const HorizontalDensity& L);

/// Key of one gauge-generator coefficient: dynamic component i, parameter
/// component r and the parameter jet multi-index.
struct GaugeKey {
  Component dynamic;
  Component parameter;
  MultiIndex index;
  friend auto operator<=>(const GaugeKey&, const GaugeKey&) = default;
};

/// Family of coefficients linear in parameter jets; the coefficients
/// themselves live in dynamic-field jets (and x) only.
class GaugeGenerator {
public:
  GaugeGenerator(FieldSystemPtr sys, std::map<GaugeKey, Expr> coefficients);

  const FieldSystemPtr& system() const { return sys_; }
  const std::map<GaugeKey, Expr>& coefficients() const& { return coefficients_; }
  std::map<GaugeKey, Expr> coefficients() const&& { return coefficients_; }
  int max_parameter_jet_order() const { return max_order_; }
  int max_coefficient_jet_order() const { return max_coeff_order_; }
  int max_coefficient_degree() const { return max_coeff_degree_; }

  /// Expand to the generalized vector field sum of coeff * xi^r_Lambda on the
  /// dynamic components (parameters kept even).
  GeneralizedVectorField expand() const;

private:
  FieldSystemPtr sys_;
  std::map<GaugeKey, Expr> coefficients_;
  int max_order_ = 0;
  int max_coeff_order_ = 0;
  int max_coeff_degree_ = 0;
};

/// Gauge-symmetry test over the product system: expands the generator and
/// delegates to the variational-symmetry criterion. The density must not
/// reference parameter variables.
bool is_gauge_symmetry(const GaugeGenerator& g, const HorizontalDensity& L);

/// Key of one antisymmetric-ansatz entry T^{j,i,Lambda}_r.
struct TrivialKey {
  Component j;
  Component i;
  Component parameter;
  MultiIndex index;
  friend auto operator<=>(const TrivialKey&, const TrivialKey&) = default;
};

/// Builds the generator with coefficients sum_j T^{j,i,Lambda}_r E_j(L); by
/// antisymmetry of T its contraction with the variational derivative is
/// identically zero. Antisymmetry in (j, i) is verified structurally.
GaugeGenerator trivial_gauge_symmetry(const std::map<TrivialKey, Expr>& T,
                                      const HorizontalDensity& L);

enum class OnShellVerdict { ZeroOnShell, NotFoundWithinBounds };

struct OnShellWitnessTerm {
  Component component;  // dynamic component i
  MultiIndex prolongation;
  Expr multiplier;
};

/// ZeroOnShell comes with the witness combination (a proof);
/// NotFoundWithinBounds is not a disproof.
struct OnShellResult {
  OnShellVerdict verdict = OnShellVerdict::NotFoundWithinBounds;
  std::vector<OnShellWitnessTerm> witness;

  /// sum of multiplier * d_Lambda(E_i); equals f exactly when ZeroOnShell.
  Expr witness_expansion(const HorizontalDensity& L) const;
};

/// Bounded membership test in the linear span of prolonged variational
/// derivatives of the dynamic components: searches for polynomial multipliers
/// of jet order <= jet_bound and total degree <= degree_bound, with
/// prolongation orders |Lambda| <= jet_bound, as one exact linear solve.
OnShellResult reduce_on_shell(const Expr& f, const HorizontalDensity& L, int jet_bound,
                              int degree_bound);

/// Bounded search for sigma with div(sigma) = target. Bounds are derived from
/// the target; the search is skipped (absent) when the ansatz would exceed
/// max_unknowns columns.
std::optional<BoundaryCurrent> exhibit_divergence(const Expr& target,
                                                  std::size_t max_unknowns = 4000);

} // namespace gradedjets
