#include "gradedjets/expr.hpp"

#include <algorithm>
#include <atomic>

namespace gradedjets {

namespace {

std::atomic<std::size_t> g_max_terms{10'000'000};

void check_cap(std::size_t count) {
  if (count > g_max_terms.load(std::memory_order_relaxed))
    throw TermLimitError("expression term count exceeds the safety cap");
}

void require_same_system(const Expr& a, const Expr& b) {
  if (!same_system(a.system(), b.system()))
    throw DomainError("operands live over different field systems");
}

} // namespace

std::size_t max_term_count() { return g_max_terms.load(std::memory_order_relaxed); }
void set_max_term_count(std::size_t cap) { g_max_terms.store(cap, std::memory_order_relaxed); }

int Monomial::degree() const {
  int d = static_cast<int>(odd_part.size());
  for (int e : base_exp) d += e;
  for (const auto& [v, e] : even_part) d += e;
  return d;
}

int Monomial::field_degree() const {
  int d = static_cast<int>(odd_part.size());
  for (const auto& [v, e] : even_part) d += e;
  return d;
}

int Monomial::max_jet_order() const {
  int m = 0;
  for (const auto& [v, e] : even_part) m = std::max(m, v.index.order());
  for (const auto& v : odd_part) m = std::max(m, v.index.order());
  return m;
}

int Monomial::ghost_degree(const FieldSystem& sys) const {
  int d = 0;
  for (const auto& v : odd_part)
    if (sys.field(v.field).role == FieldRole::Ghost) ++d;
  return d;
}

std::optional<Monomial> Monomial::canonicalized() const {
  Monomial m = *this;
  // Merge repeated even variables.
  std::sort(m.even_part.begin(), m.even_part.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<JetVar, int>> even;
  for (auto& p : m.even_part) {
    if (!even.empty() && even.back().first == p.first)
      even.back().second += p.second;
    else
      even.push_back(p);
  }
  std::erase_if(even, [](const auto& p) { return p.second == 0; });
  for (const auto& p : even)
    if (p.second < 0) throw DomainError("negative exponent in monomial");
  m.even_part = std::move(even);

  // Sort the odd part by counting transpositions; a repeat kills the term.
  bool negate = false;
  auto& odd = m.odd_part;
  for (size_t i = 1; i < odd.size(); ++i) {
    size_t j = i;
    while (j > 0 && odd[j] < odd[j - 1]) {
      std::swap(odd[j], odd[j - 1]);
      negate = !negate;
      --j;
    }
  }
  for (size_t i = 1; i < odd.size(); ++i)
    if (odd[i] == odd[i - 1]) return std::nullopt;
  if (negate) m.coeff = -m.coeff;
  if (m.coeff == 0) return std::nullopt;
  return m;
}

std::strong_ordering compare_key(const Monomial& a, const Monomial& b) {
  if (auto c = a.base_exp <=> b.base_exp; c != 0) return c;
  if (auto c = a.even_part <=> b.even_part; c != 0) return c;
  return a.odd_part <=> b.odd_part;
}

bool same_key(const Monomial& a, const Monomial& b) {
  return compare_key(a, b) == std::strong_ordering::equal;
}

Expr Expr::constant(FieldSystemPtr sys, Rational value) {
  if (value == 0) return zero(std::move(sys));
  Monomial m;
  m.coeff = std::move(value);
  m.base_exp.assign(static_cast<size_t>(sys->base_dim()), 0);
  return Expr(std::move(sys), {std::move(m)});
}

Expr Expr::variable(FieldSystemPtr sys, JetVar v) {
  if (v.field < 0 || v.field >= sys->field_count())
    throw DomainError("jet variable references an undeclared field");
  const FieldDecl& decl = sys->field(v.field);
  if (v.fiber < 0 || v.fiber >= decl.fiber_size())
    throw DomainError("fiber index out of range for field '" + decl.name + "'");
  if (v.index.base_dim() != sys->base_dim())
    throw DomainError("multi-index length does not match the base dimension");
  Monomial m;
  m.coeff = 1;
  m.base_exp.assign(static_cast<size_t>(sys->base_dim()), 0);
  if (decl.parity == Parity::Odd)
    m.odd_part.push_back(std::move(v));
  else
    m.even_part.emplace_back(std::move(v), 1);
  return Expr(std::move(sys), {std::move(m)});
}

Expr Expr::base_variable(FieldSystemPtr sys, int direction) {
  if (direction < 0 || direction >= sys->base_dim())
    throw DomainError("base direction out of range");
  Monomial m;
  m.coeff = 1;
  m.base_exp.assign(static_cast<size_t>(sys->base_dim()), 0);
  m.base_exp[static_cast<size_t>(direction)] = 1;
  return Expr(std::move(sys), {std::move(m)});
}

std::vector<Monomial> Expr::merge_sorted(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    return compare_key(a, b) == std::strong_ordering::less;
  });
  std::vector<Monomial> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && same_key(out.back(), t)) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == 0) out.pop_back();
    } else {
      out.push_back(std::move(t));
    }
  }
  check_cap(out.size());
  return out;
}

Expr Expr::from_monomials(FieldSystemPtr sys, std::vector<Monomial> terms) {
  std::vector<Monomial> canon;
  canon.reserve(terms.size());
  const size_t n = sys ? static_cast<size_t>(sys->base_dim()) : 0;
  for (auto& t : terms) {
    if (t.base_exp.size() != n) {
      if (t.base_exp.empty())
        t.base_exp.assign(n, 0);
      else
        throw DomainError("explicit x-part does not match the base dimension");
    }
    if (auto c = t.canonicalized()) canon.push_back(std::move(*c));
  }
  return Expr(std::move(sys), merge_sorted(std::move(canon)));
}

int Expr::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.degree());
  return d;
}

int Expr::max_jet_order() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.max_jet_order());
  return m;
}

std::vector<JetVar> Expr::jet_variables() const {
  std::vector<JetVar> vars;
  for (const auto& t : terms_) {
    for (const auto& [v, e] : t.even_part) vars.push_back(v);
    for (const auto& v : t.odd_part) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Expr Expr::scaled(const Rational& c) const {
  if (c == 0) return Expr(sys_, {});
  std::vector<Monomial> out = terms_;
  for (auto& t : out) t.coeff *= c;
  return Expr(sys_, std::move(out));
}

Expr Expr::pow(int k) const {
  if (k < 0) throw DomainError("negative exponent");
  Expr acc = Expr::constant(sys_, 1);
  for (int i = 0; i < k; ++i) acc = acc * *this;
  return acc;
}

Expr operator+(const Expr& a, const Expr& b) {
  require_same_system(a, b);
  std::vector<Monomial> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Expr(merge_system(a.sys_, b.sys_), Expr::merge_sorted(std::move(terms)));
}

Expr operator-(const Expr& a, const Expr& b) { return a + b.scaled(-1); }

std::optional<Monomial> multiply_monomials(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.coeff = a.coeff * b.coeff;
  if (m.coeff == 0) return std::nullopt;

  m.base_exp = a.base_exp;
  if (m.base_exp.size() < b.base_exp.size()) m.base_exp.resize(b.base_exp.size(), 0);
  for (size_t k = 0; k < b.base_exp.size(); ++k) m.base_exp[k] += b.base_exp[k];

  // Merge the commuting parts.
  m.even_part.reserve(a.even_part.size() + b.even_part.size());
  {
    size_t i = 0, j = 0;
    while (i < a.even_part.size() || j < b.even_part.size()) {
      if (j == b.even_part.size() ||
          (i < a.even_part.size() && a.even_part[i].first < b.even_part[j].first)) {
        m.even_part.push_back(a.even_part[i++]);
      } else if (i == a.even_part.size() || b.even_part[j].first < a.even_part[i].first) {
        m.even_part.push_back(b.even_part[j++]);
      } else {
        m.even_part.emplace_back(a.even_part[i].first,
                                 a.even_part[i].second + b.even_part[j].second);
        ++i, ++j;
      }
    }
  }

  // Merge the anticommuting parts, counting the crossings that sort the
  // concatenation; each crossing flips the sign (Koszul rule on generators).
  m.odd_part.reserve(a.odd_part.size() + b.odd_part.size());
  {
    size_t i = 0, j = 0;
    long crossings = 0;
    while (i < a.odd_part.size() || j < b.odd_part.size()) {
      if (j == b.odd_part.size()) {
        m.odd_part.push_back(a.odd_part[i++]);
      } else if (i == a.odd_part.size()) {
        m.odd_part.push_back(b.odd_part[j++]);
      } else if (a.odd_part[i] < b.odd_part[j]) {
        m.odd_part.push_back(a.odd_part[i++]);
      } else if (b.odd_part[j] < a.odd_part[i]) {
        crossings += static_cast<long>(a.odd_part.size() - i);
        m.odd_part.push_back(b.odd_part[j++]);
      } else {
        return std::nullopt;  // odd square vanishes
      }
    }
    if (crossings & 1) m.coeff = -m.coeff;
  }
  return m;
}

Expr operator*(const Expr& a, const Expr& b) {
  require_same_system(a, b);
  check_cap(a.terms_.size() * b.terms_.size());
  std::vector<Monomial> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ma : a.terms_) {
    for (const auto& mb : b.terms_) {
      if (auto m = multiply_monomials(ma, mb)) out.push_back(std::move(*m));
    }
    check_cap(out.size());
  }
  return Expr(merge_system(a.sys_, b.sys_), Expr::merge_sorted(std::move(out)));
}

std::optional<PureGrading> grading(const Expr& e) {
  if (e.is_zero()) return PureGrading{Parity::Even, 0};
  const FieldSystem& sys = *e.system();
  PureGrading g{e.terms().front().parity(), e.terms().front().ghost_degree(sys)};
  for (const auto& t : e.terms())
    if (t.parity() != g.parity || t.ghost_degree(sys) != g.ghost_degree) return std::nullopt;
  return g;
}

std::optional<Parity> parity_of(const Expr& e) {
  if (e.is_zero()) return Parity::Even;
  Parity p = e.terms().front().parity();
  for (const auto& t : e.terms())
    if (t.parity() != p) return std::nullopt;
  return p;
}

} // namespace gradedjets
