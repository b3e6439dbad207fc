#include "gradedjets/ansatz.hpp"

#include <algorithm>

namespace gradedjets {

std::vector<MultiIndex> multi_indices_up_to(int base_dim, int bound) {
  std::vector<MultiIndex> out;
  std::vector<int> exp(static_cast<size_t>(base_dim), 0);
  std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == base_dim) {
      out.emplace_back(base_dim, exp);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      exp[static_cast<size_t>(pos)] = e;
      rec(pos + 1, budget - e);
    }
    exp[static_cast<size_t>(pos)] = 0;
  };
  rec(0, bound);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<JetVar> collect_jet_vars(const FieldSystem& sys,
                                     const std::function<bool(int, const FieldDecl&)>& filter,
                                     int jet_bound) {
  std::vector<JetVar> out;
  const auto indices = multi_indices_up_to(sys.base_dim(), jet_bound);
  for (int field = 0; field < sys.field_count(); ++field) {
    const FieldDecl& decl = sys.field(field);
    if (!filter(field, decl)) continue;
    for (int fiber = 0; fiber < decl.fiber_size(); ++fiber)
      for (const MultiIndex& idx : indices) out.push_back(JetVar{field, fiber, idx});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> enumerate_monomials(const FieldSystem& sys,
                                          const std::vector<JetVar>& vars, bool include_x,
                                          int degree_bound) {
  std::vector<Monomial> out;
  Monomial current;
  current.coeff = 1;
  current.base_exp.assign(static_cast<size_t>(sys.base_dim()), 0);
  const int nx = include_x ? sys.base_dim() : 0;

  std::function<void(size_t, int)> rec = [&](size_t pos, int budget) {
    if (pos == vars.size() + static_cast<size_t>(nx)) {
      out.push_back(current);
      return;
    }
    if (pos < static_cast<size_t>(nx)) {
      for (int e = 0; e <= budget; ++e) {
        current.base_exp[pos] = e;
        rec(pos + 1, budget - e);
      }
      current.base_exp[pos] = 0;
      return;
    }
    const JetVar& v = vars[pos - static_cast<size_t>(nx)];
    const bool odd = sys.field(v.field).parity == Parity::Odd;
    rec(pos + 1, budget);  // exponent 0
    if (budget >= 1) {
      if (odd) {
        current.odd_part.push_back(v);
        rec(pos + 1, budget - 1);
        current.odd_part.pop_back();
      } else {
        for (int e = 1; e <= budget; ++e) {
          current.even_part.emplace_back(v, e);
          rec(pos + 1, budget - e);
          current.even_part.pop_back();
        }
      }
    }
  };
  rec(0, degree_bound);
  return out;
}

} // namespace gradedjets
