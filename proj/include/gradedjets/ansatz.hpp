#pragma once

#include <functional>
#include <vector>

#include "gradedjets/expr.hpp"

namespace gradedjets {

/// All multi-indices with |Lambda| <= bound, ascending graded-lex.
std::vector<MultiIndex> multi_indices_up_to(int base_dim, int bound);

/// Jet variables of every declared field accepted by the filter (called with
/// the field index and declaration), with jet order <= jet_bound, in canonical
/// variable order.
std::vector<JetVar> collect_jet_vars(const FieldSystem& sys,
                                     const std::function<bool(int, const FieldDecl&)>& filter,
                                     int jet_bound);

/// Coefficient-1 canonical monomials over the given variables (plus explicit
/// x factors when include_x) of total degree <= degree_bound. Deterministic
/// enumeration order.
std::vector<Monomial> enumerate_monomials(const FieldSystem& sys,
                                          const std::vector<JetVar>& vars, bool include_x,
                                          int degree_bound);

} // namespace gradedjets
