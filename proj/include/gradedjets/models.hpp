#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "gradedjets/brst.hpp"

namespace gradedjets {

/// Finite-dimensional real Lie algebra data: structure constants c^r_{pq}
/// (antisymmetric in the lower pair, 0-based indices) and an optional
/// invariant metric kappa.
class LieAlgebraData {
public:
  LieAlgebraData(int dim, std::map<std::tuple<int, int, int>, Rational> constants,
                 std::optional<std::vector<std::vector<Rational>>> metric = std::nullopt);

  int dim() const { return dim_; }
  Rational structure_constant(int r, int p, int q) const;
  bool has_metric() const { return metric_.has_value(); }
  const Rational& metric(int p, int q) const;
  /// Entries with p < q and nonzero value, canonically ordered.
  const std::map<std::tuple<int, int, int>, Rational>& entries() const { return entries_; }

  static LieAlgebraData abelian(int dim);
  static LieAlgebraData su2();
  /// su(2) + central u(1), identity metric; exercises a reducible algebra.
  static LieAlgebraData su2_u1();

private:
  int dim_ = 0;
  std::map<std::tuple<int, int, int>, Rational> entries_;  // keys with p < q only
  std::optional<std::vector<std::vector<Rational>>> metric_;
};

/// Brute-force Jacobi test: the cyclic sum c^s_{pq} c^t_{sr} + cycles
/// vanishes for all index choices.
bool check_jacobi(const LieAlgebraData& g);

/// Section data (u^lambda(x), u^r(x)) with polynomial x-dependence; the
/// expressions must not contain jet variables.
struct TgpSection {
  std::vector<Expr> horizontal;  // size n
  std::vector<Expr> vertical;    // size dim
};

/// Bracket of two sections: horizontal part u^mu d_mu v^lambda - (u <-> v);
/// vertical part u^lambda d_lambda v^r - (u <-> v) + c^r_{pq} u^p v^q.
TgpSection tgp_bracket(const LieAlgebraData& g, const TgpSection& u, const TgpSection& v);

/// Coordinate model of the bundle of principal connections: gauge potential
/// a (fiber shape dim x n, even dynamic), parameters xi (and tau for
/// diffeomorphisms), ghosts c (and ct).
class ConnectionModel {
public:
  static ConnectionModel make(int base_dim, LieAlgebraData algebra, bool diffeo_ghosts);

  int base_dim() const { return n_; }
  const LieAlgebraData& algebra() const { return algebra_; }
  bool diffeo_ghosts() const { return diffeo_; }
  const FieldSystemPtr& system() const { return sys_; }

  Component potential(int r, int lambda) const { return {a_, r * n_ + lambda}; }
  Component parameter(int r) const { return {xi_, r}; }
  Component ghost(int r) const { return {c_, r}; }
  Component diffeo_parameter(int mu) const;
  Component diffeo_ghost(int mu) const;

  /// Jet variable of the potential component (r, lambda).
  JetVar potential_jet(int r, int lambda, const MultiIndex& idx) const;

private:
  int n_ = 0;
  LieAlgebraData algebra_{0, {}};
  bool diffeo_ = false;
  FieldSystemPtr sys_;
  int a_ = 0, xi_ = 0, tau_ = -1, c_ = 0, ct_ = -1;
};

/// delta a^r_lambda = c^r_{pq} a^p_lambda xi^q + xi^r_lambda
///                    (- a^r_mu tau^mu_lambda - tau^mu a^r_{lambda;mu}).
GaugeGenerator connection_generator(const ConnectionModel& model);

/// L = -1/4 kappa_{pq} F^p_{lambda mu} F^q_{lambda mu} with
/// F^r = a^r_{mu;lambda} - a^r_{lambda;mu} + c^r_{pq} a^p_lambda a^q_mu,
/// all base indices summed with the flat metric. Requires kappa.
HorizontalDensity yang_mills_lagrangian(const ConnectionModel& model);

/// s a^r_lambda = c^r_{pq} a^p_lambda c^q + c^r_lambda
///                (- a^r_mu ct^mu_lambda - ct^mu a^r_{lambda;mu});
/// s c^r = -1/2 c^r_{pq} c^p c^q (- ct^mu c^r_mu);
/// s ct^lambda = ct^lambda_mu ct^mu (diffeomorphism ghosts only).
BrstCandidate yang_mills_brst(const ConnectionModel& model);

} // namespace gradedjets
