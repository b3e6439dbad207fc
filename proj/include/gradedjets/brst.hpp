#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gradedjets/symmetry.hpp"

namespace gradedjets {

/// Odd generalized vector field covering dynamic fields and ghosts. Each
/// dynamic component carries ghost degree 1, each ghost component ghost
/// degree 2, so the derivation raises ghost number by one and is odd.
class BrstCandidate {
public:
  BrstCandidate(FieldSystemPtr sys, std::map<Component, Expr> dynamic_part,
                std::map<Component, Expr> ghost_part);

  const FieldSystemPtr& system() const { return sys_; }
  const std::map<Component, Expr>& dynamic_part() const& { return dynamic_; }
  std::map<Component, Expr> dynamic_part() const&& { return dynamic_; }
  const std::map<Component, Expr>& ghost_part() const& { return ghost_; }
  std::map<Component, Expr> ghost_part() const&& { return ghost_; }

  /// The candidate as one odd vector field over all covered components.
  const GeneralizedVectorField& as_vector_field() const& { return field_; }
  GeneralizedVectorField as_vector_field() const&& { return field_; }

private:
  FieldSystemPtr sys_;
  std::map<Component, Expr> dynamic_;
  std::map<Component, Expr> ghost_;
  GeneralizedVectorField field_;
};

struct NilpotencyReport {
  bool nilpotent = false;
  /// residual_A = theta(v^A) for every covered component A; the candidate is
  /// nilpotent iff all residuals are exactly zero.
  std::map<Component, Expr> residuals;
};

NilpotencyReport check_nilpotent(const BrstCandidate& b);

/// Pairing of parameter fields with ghost fields, by declaration order.
/// Throws when a parameter lacks a ghost of matching fiber size.
std::map<int, int> ghost_pairing(const FieldSystem& sys);

/// Replace parameter jets with the jets of the paired odd ghosts:
/// v^i = sum of coeff * c^r_Lambda. The result is an odd vector field on the
/// dynamic components.
GeneralizedVectorField ghostify(const GaugeGenerator& g);

/// Key of one quadratic structure-function entry: ghost component r and the
/// ordered pair of ghost jet variables (p, Gamma1) < (q, Gamma2). Storing
/// ordered pairs canonicalizes the antisymmetry under the simultaneous swap.
struct StructureKey {
  Component ghost;
  JetVar first;
  JetVar second;
  friend auto operator<=>(const StructureKey&, const StructureKey&) = default;
};

class StructureFunctions {
public:
  StructureFunctions(FieldSystemPtr sys, std::map<StructureKey, Expr> u2, int dim);

  const std::map<StructureKey, Expr>& u2() const { return u2_; }
  int solution_space_dim() const { return dim_; }
  /// Re-expansion sum of u2 * c^p_{Gamma1} c^q_{Gamma2} per ghost component.
  const std::map<Component, Expr>& ghost_action() const { return action_; }

private:
  FieldSystemPtr sys_;
  std::map<StructureKey, Expr> u2_;
  int dim_ = 0;
  std::map<Component, Expr> action_;
};

struct StructureSolveResult {
  /// Canonical representative of the solution space, or nothing when the
  /// commutation-relation system is infeasible (the gauge transformations do
  /// not close into the quadratic ansatz).
  std::optional<StructureFunctions> solutions;
  /// Generalized Jacobi residuals: the action of the completed candidate on
  /// each ghost component, evaluated for the representative.
  std::map<Component, Expr> jacobi_residuals;
  bool jacobi_holds() const;
};

struct StructureSolveOptions {
  /// Jet order / total degree of the dynamic-jet coefficient polynomials;
  /// -1 derives the bound from the generator.
  int jet_bound = -1;
  int degree_bound = -1;
  /// Ghost jet order admitted inside the quadratic ansatz; -1 derives
  /// max(0, m - 1) from the generator's parameter jet order m.
  int ghost_jet_bound = -1;
};

/// Assembles the ghost-extension equations for a quadratic-in-ghost ansatz as
/// one exact linear system in the u_(2) coefficients, solves it over the
/// rationals, and evaluates the generalized Jacobi residuals for the
/// deterministic representative (free coordinates pinned to zero under the
/// canonical unknown order). The companion equations for non-quadratic ghost
/// polynomials are identically satisfied under this ansatz.
StructureSolveResult solve_structure_functions(const GaugeGenerator& g,
                                               StructureSolveOptions options = {});

/// Bracket of the generator with itself over two fresh even parameter copies:
/// B^j = sum [d_Sigma(v^i(xi)) d/ds^i_Sigma v^j(eta) - (xi <-> eta)].
struct BracketResult {
  /// Extended system: the original fields plus parameter copies named
  /// <param>_1 and <param>_2.
  FieldSystemPtr extended_system;
  /// Full bracket expression per dynamic component.
  std::map<Component, Expr> components;
  /// Decomposition by parameter-pair monomial: (xi-jet, eta-jet) -> per-
  /// component coefficient in dynamic jets.
  std::map<std::pair<JetVar, JetVar>, std::map<Component, Expr>> pairs;
};

BracketResult extract_bracket(const GaugeGenerator& g);

} // namespace gradedjets
