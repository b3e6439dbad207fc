#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gradedjets/field_system.hpp"
#include "gradedjets/rational.hpp"

namespace gradedjets {

/// One canonical term: an exact rational coefficient times an optional
/// explicit x-monomial, a commuting jet-variable part and an anticommuting
/// part.
///
/// Invariants of the canonical form:
///   - even_part is sorted by the canonical variable order, exponents > 0;
///   - odd_part is strictly ascending (a repeated odd variable kills the
///     whole term, which is therefore never stored);
///   - coeff != 0.
struct Monomial {
  Rational coeff = 0;
  std::vector<int> base_exp;                      // x^lambda exponents, size = base_dim
  std::vector<std::pair<JetVar, int>> even_part;  // ascending variables
  std::vector<JetVar> odd_part;                   // strictly ascending variables

  int degree() const;         // total degree in jet variables and x
  int field_degree() const;   // degree in jet variables only
  int max_jet_order() const;  // highest |Lambda| among the variables
  Parity parity() const { return (odd_part.size() & 1) ? Parity::Odd : Parity::Even; }
  int ghost_degree(const FieldSystem& sys) const;

  /// Sort the variable parts into canonical order, tracking the permutation
  /// sign of the odd part. Returns nothing when a repeated odd variable makes
  /// the term vanish.
  std::optional<Monomial> canonicalized() const;

  /// Comparison of the variable part only (coefficient ignored); this is the
  /// canonical monomial order used for term ordering, printing and the
  /// solvers' representative choice.
  friend std::strong_ordering compare_key(const Monomial& a, const Monomial& b);
  friend bool same_key(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical-form graded polynomial: the universal value type of the engine.
/// Zero is the empty term list; equality of canonical forms is structural.
/// Immutable after construction; all operations are pure.
class Expr {
public:
  Expr() = default;  // zero over the null system

  static Expr zero(FieldSystemPtr sys) { return Expr(std::move(sys), {}); }
  static Expr constant(FieldSystemPtr sys, Rational value);
  static Expr variable(FieldSystemPtr sys, JetVar v);
  static Expr variable(FieldSystemPtr sys, Component c) {
    int n = sys->base_dim();
    return variable(std::move(sys), JetVar{c.field, c.fiber, MultiIndex(n)});
  }
  static Expr base_variable(FieldSystemPtr sys, int direction);
  /// Normalizing constructor: canonicalizes each monomial, merges duplicates
  /// and drops zero coefficients.
  static Expr from_monomials(FieldSystemPtr sys, std::vector<Monomial> terms);

  bool is_zero() const { return terms_.empty(); }
  const FieldSystemPtr& system() const { return sys_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  int degree() const;
  int max_jet_order() const;
  /// Distinct jet variables occurring in the expression, ascending.
  std::vector<JetVar> jet_variables() const;

  Expr scaled(const Rational& c) const;
  Expr pow(int k) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a) { return a.scaled(-1); }
  Expr& operator+=(const Expr& other) { return *this = *this + other; }
  Expr& operator-=(const Expr& other) { return *this = *this - other; }
  Expr& operator*=(const Expr& other) { return *this = *this * other; }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.terms_ == b.terms_ && same_system(a.sys_, b.sys_);
  }

private:
  Expr(FieldSystemPtr sys, std::vector<Monomial> terms)
      : sys_(std::move(sys)), terms_(std::move(terms)) {}

  static std::vector<Monomial> merge_sorted(std::vector<Monomial> terms);

  FieldSystemPtr sys_;
  std::vector<Monomial> terms_;  // ascending by monomial key, distinct keys
};

/// Graded product of two canonical monomials under the Koszul sign rule;
/// nothing when an odd variable repeats.
std::optional<Monomial> multiply_monomials(const Monomial& a, const Monomial& b);

struct PureGrading {
  Parity parity = Parity::Even;
  int ghost_degree = 0;
  friend bool operator==(const PureGrading&, const PureGrading&) = default;
};

/// Common (parity, ghost degree) of all terms, or nothing when mixed.
/// The zero expression is vacuously pure: {even, 0}.
std::optional<PureGrading> grading(const Expr& e);

/// Common parity of all terms irrespective of ghost degree; nothing if mixed.
std::optional<Parity> parity_of(const Expr& e);

/// Process-wide safety cap on the term count of any single expression
/// (default 10^7). Exceeding it throws TermLimitError.
std::size_t max_term_count();
void set_max_term_count(std::size_t cap);

} // namespace gradedjets
