#include "gradedjets/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>

namespace gradedjets {
namespace dsl {

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::vector<int> unflatten(const std::vector<int>& shape, int flat) {
  std::vector<int> idx(shape.size(), 0);
  for (size_t k = shape.size(); k-- > 0;) {
    idx[k] = flat % shape[k];
    flat /= shape[k];
  }
  return idx;
}

int flatten(const std::vector<int>& shape, const std::vector<int>& idx) {
  int flat = 0;
  for (size_t k = 0; k < shape.size(); ++k) flat = flat * shape[k] + idx[k];
  return flat;
}

std::string multi_index_text(const MultiIndex& index) {
  std::string out;
  for (int k = 0; k < index.base_dim(); ++k)
    for (int i = 0; i < index[k]; ++i) {
      if (!out.empty()) out += ' ';
      out += std::to_string(k + 1);
    }
  return out;
}

} // namespace

std::string jetvar_name(const FieldSystem& sys, const JetVar& v) {
  const FieldDecl& decl = sys.field(v.field);
  std::string out = decl.name + "[";
  const auto idx = unflatten(decl.fiber_shape, v.fiber);
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(idx[k] + 1);
  }
  if (v.index.order() > 0) out += ";" + multi_index_text(v.index);
  out += "]";
  return out;
}

std::string component_name(const FieldSystem& sys, Component c) {
  return jetvar_name(sys, JetVar{c.field, c.fiber, MultiIndex(sys.base_dim())});
}

namespace {

std::string term_text(const FieldSystem& sys, const Monomial& m, bool with_sign) {
  Rational coeff = m.coeff;
  std::string out;
  if (with_sign) out = coeff < 0 ? " - " : " + ";
  else if (coeff < 0) out = "-";
  if (coeff < 0) coeff = -coeff;

  std::vector<std::string> factors;
  for (size_t k = 0; k < m.base_exp.size(); ++k) {
    if (m.base_exp[k] == 0) continue;
    std::string f = "x[" + std::to_string(k + 1) + "]";
    if (m.base_exp[k] > 1) f += "^" + std::to_string(m.base_exp[k]);
    factors.push_back(std::move(f));
  }
  for (const auto& [v, e] : m.even_part) {
    std::string f = jetvar_name(sys, v);
    if (e > 1) f += "^" + std::to_string(e);
    factors.push_back(std::move(f));
  }
  for (const auto& v : m.odd_part) factors.push_back(jetvar_name(sys, v));

  if (factors.empty() || coeff != 1) {
    std::string c = coeff.str();
    factors.insert(factors.begin(), std::move(c));
  }
  for (size_t k = 0; k < factors.size(); ++k) {
    if (k) out += " * ";
    out += factors[k];
  }
  return out;
}

} // namespace

std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  const FieldSystem& sys = *e.system();
  std::string out;
  for (size_t k = 0; k < e.terms().size(); ++k) out += term_text(sys, e.terms()[k], k > 0);
  return out;
}

namespace {

void print_components(std::ostringstream& out, const FieldSystem& sys,
                      const std::map<Component, Expr>& components) {
  for (const auto& [comp, expr] : components)
    out << "  " << component_name(sys, comp) << " => " << to_string(expr) << "\n";
}

} // namespace

std::string print(const ModelDocument& doc) {
  std::ostringstream out;
  const FieldSystem& sys = *doc.system;
  out << "base dim " << sys.base_dim() << "\n";
  for (const FieldDecl& decl : sys.fields()) {
    out << to_string(decl.role) << " " << decl.name << "[";
    for (size_t k = 0; k < decl.fiber_shape.size(); ++k) {
      if (k) out << ",";
      out << decl.fiber_shape[k];
    }
    out << "]";
    if (decl.role == FieldRole::Dynamic && decl.parity == Parity::Odd) out << " odd";
    out << "\n";
  }
  for (const Definition& def : doc.definitions) {
    if (const auto* density = std::get_if<DensityDef>(&def.payload)) {
      out << "lagrangian " << def.name << " = " << to_string(density->value) << "\n";
    } else if (const auto* gen = std::get_if<GeneratorDef>(&def.payload)) {
      out << "generator " << def.name << " {\n";
      print_components(out, sys, gen->components);
      out << "}\n";
    } else if (const auto* brst = std::get_if<BrstDef>(&def.payload)) {
      std::map<Component, Expr> merged = brst->dynamic_part;
      merged.insert(brst->ghost_part.begin(), brst->ghost_part.end());
      out << "brst " << def.name << " {\n";
      print_components(out, sys, merged);
      out << "}\n";
    } else if (const auto* alg = std::get_if<AlgebraDef>(&def.payload)) {
      out << "algebra " << def.name << " {\n";
      for (const auto& [key, value] : alg->algebra.entries()) {
        auto [r, p, q] = key;
        out << "  c[" << r + 1 << "," << p + 1 << "," << q + 1 << "] = " << value.str()
            << "\n";
      }
      out << "}\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Ident, Int, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  long long value = 0;
  int line = 1;
  int column = 1;
};

struct Lexer {
  std::string_view src;
  size_t pos = 0;
  int line = 1;
  int column = 1;
  std::vector<Diagnostic>& diagnostics;

  void advance() {
    if (pos < src.size() && src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (pos < src.size()) {
      const char ch = src[pos];
      if (ch == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
        continue;
      }
      Token tok;
      tok.line = line;
      tok.column = column;
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        tok.kind = TokKind::Int;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          tok.text += src[pos];
          advance();
        }
        try {
          tok.value = std::stoll(tok.text);
        } catch (const std::out_of_range&) {
          diagnostics.push_back({Severity::Error, "E_LEX", "integer literal out of range",
                                 tok.line, tok.column});
          tok.value = 0;
        }
        tokens.push_back(std::move(tok));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        tok.kind = TokKind::Ident;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
          tok.text += src[pos];
          advance();
        }
        tokens.push_back(std::move(tok));
        continue;
      }
      static const std::string punct = "[]{}(),;=*^+-/>";
      if (punct.find(ch) != std::string::npos) {
        tok.kind = TokKind::Punct;
        tok.text = std::string(1, ch);
        advance();
        if (ch == '=' && pos < src.size() && src[pos] == '>') {
          tok.text = "=>";
          advance();
        }
        tokens.push_back(std::move(tok));
        continue;
      }
      diagnostics.push_back({Severity::Error, "E_LEX",
                             std::string("unexpected character '") + ch + "'", line, column});
      advance();
    }
    Token end;
    end.kind = TokKind::End;
    end.line = line;
    end.column = column;
    tokens.push_back(std::move(end));
    return tokens;
  }
};

// ---------------------------------------------------------------------------
// Statement AST (expressions are evaluated once all declarations are known)
// ---------------------------------------------------------------------------

struct JetRef {
  std::string name;
  std::vector<long long> fibers;
  std::vector<long long> multi;
  int line = 1, column = 1;
};

struct ENode;
using ENodePtr = std::unique_ptr<ENode>;

struct ENode {
  enum class Kind { Number, Ref, Deriv, Add, Sub, Mul, Pow, Neg };
  Kind kind = Kind::Number;
  Rational value;       // Number
  JetRef ref;           // Ref
  long long arg = 0;    // Deriv direction (1-based) or Pow exponent
  ENodePtr lhs, rhs;
  int line = 1, column = 1;
};

struct DeclStmt {
  FieldRole role = FieldRole::Dynamic;
  std::string name;
  std::vector<long long> shape;
  std::optional<Parity> parity;
  int line = 1, column = 1;
};

struct AlgebraEntry {
  long long r = 0, p = 0, q = 0;
  Rational value;
  int line = 1, column = 1;
};

struct AlgebraStmt {
  std::string name;
  std::vector<AlgebraEntry> entries;
  int line = 1, column = 1;
};

struct DensityStmt {
  std::string name;
  ENodePtr expr;
  int line = 1, column = 1;
};

struct VectorStmt {
  bool brst = false;
  std::string name;
  std::vector<std::pair<JetRef, ENodePtr>> entries;
  int line = 1, column = 1;
};

struct Stmt {
  std::variant<DeclStmt, AlgebraStmt, DensityStmt, VectorStmt, long long /*base dim*/> node;
  int line = 1, column = 1;
};

const std::set<std::string> kReserved = {"base",   "dim",       "field",     "ghost",
                                         "param",  "odd",       "even",      "algebra",
                                         "lagrangian", "generator", "brst",  "d",
                                         "x"};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
  const std::vector<Token>& tokens;
  size_t pos = 0;
  std::vector<Diagnostic>& diagnostics;
  bool failed = false;

  const Token& peek(size_t ahead = 0) const {
    return tokens[std::min(pos + ahead, tokens.size() - 1)];
  }
  const Token& advance() { return tokens[std::min(pos++, tokens.size() - 1)]; }
  bool at_end() const { return peek().kind == TokKind::End; }

  void error(const Token& at, std::string code, std::string message) {
    diagnostics.push_back({Severity::Error, std::move(code), std::move(message), at.line,
                           at.column});
    failed = true;
  }

  bool match_punct(std::string_view text) {
    if (peek().kind == TokKind::Punct && peek().text == text) {
      ++pos;
      return true;
    }
    return false;
  }

  bool expect_punct(std::string_view text) {
    if (match_punct(text)) return true;
    error(peek(), "E_SYNTAX", "expected '" + std::string(text) + "'");
    return false;
  }

  std::optional<long long> expect_int() {
    if (peek().kind == TokKind::Int) return advance().value;
    error(peek(), "E_SYNTAX", "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> expect_ident() {
    if (peek().kind == TokKind::Ident) return advance().text;
    error(peek(), "E_SYNTAX", "expected an identifier");
    return std::nullopt;
  }

  /// Skip to a statement boundary after an error.
  void synchronize() {
    static const std::set<std::string> heads = {"base",       "field",     "ghost",
                                                "param",      "algebra",   "lagrangian",
                                                "generator",  "brst"};
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.text == "{") ++depth;
      if (t.kind == TokKind::Punct && t.text == "}" && depth > 0) --depth;
      if (depth == 0 && t.kind == TokKind::Ident && heads.count(t.text)) return;
      ++pos;
    }
  }

  std::optional<Rational> parse_rational(bool allow_negative) {
    bool negative = false;
    if (allow_negative && peek().kind == TokKind::Punct && peek().text == "-") {
      negative = true;
      ++pos;
    }
    auto num = expect_int();
    if (!num) return std::nullopt;
    Rational value(*num);
    if (peek().kind == TokKind::Punct && peek().text == "/") {
      ++pos;
      auto den = expect_int();
      if (!den) return std::nullopt;
      if (*den == 0) {
        error(peek(), "E_SYNTAX", "zero denominator");
        return std::nullopt;
      }
      value = Rational(*num, *den);
    }
    return negative ? Rational(-value) : value;
  }

  std::optional<JetRef> parse_jetref() {
    JetRef ref;
    const Token& head = peek();
    ref.line = head.line;
    ref.column = head.column;
    auto name = expect_ident();
    if (!name) return std::nullopt;
    ref.name = *name;
    if (!expect_punct("[")) return std::nullopt;
    auto first = expect_int();
    if (!first) return std::nullopt;
    ref.fibers.push_back(*first);
    while (match_punct(",")) {
      auto next = expect_int();
      if (!next) return std::nullopt;
      ref.fibers.push_back(*next);
    }
    if (match_punct(";")) {
      while (peek().kind == TokKind::Int) ref.multi.push_back(advance().value);
    }
    if (!expect_punct("]")) return std::nullopt;
    return ref;
  }

  ENodePtr parse_atom() {
    const Token& t = peek();
    auto node = std::make_unique<ENode>();
    node->line = t.line;
    node->column = t.column;
    if (t.kind == TokKind::Int) {
      auto value = parse_rational(false);
      if (!value) return nullptr;
      node->kind = ENode::Kind::Number;
      node->value = *value;
      return node;
    }
    if (t.kind == TokKind::Punct && t.text == "(") {
      ++pos;
      ENodePtr inner = parse_expr();
      if (!inner) return nullptr;
      if (!expect_punct(")")) return nullptr;
      return inner;
    }
    if (t.kind == TokKind::Ident && t.text == "d" && peek(1).kind == TokKind::Punct &&
        peek(1).text == "(") {
      pos += 2;
      auto dir = expect_int();
      if (!dir) return nullptr;
      if (!expect_punct(";")) return nullptr;
      ENodePtr inner = parse_expr();
      if (!inner) return nullptr;
      if (!expect_punct(")")) return nullptr;
      node->kind = ENode::Kind::Deriv;
      node->arg = *dir;
      node->lhs = std::move(inner);
      return node;
    }
    if (t.kind == TokKind::Ident) {
      auto ref = parse_jetref();
      if (!ref) return nullptr;
      node->kind = ENode::Kind::Ref;
      node->ref = std::move(*ref);
      return node;
    }
    error(t, "E_SYNTAX", "expected a term");
    return nullptr;
  }

  ENodePtr parse_power() {
    ENodePtr base = parse_atom();
    if (!base) return nullptr;
    while (peek().kind == TokKind::Punct && peek().text == "^") {
      const Token& op = advance();
      auto exponent = expect_int();
      if (!exponent) return nullptr;
      auto node = std::make_unique<ENode>();
      node->kind = ENode::Kind::Pow;
      node->arg = *exponent;
      node->lhs = std::move(base);
      node->line = op.line;
      node->column = op.column;
      base = std::move(node);
    }
    return base;
  }

  ENodePtr parse_product() {
    ENodePtr lhs = parse_power();
    if (!lhs) return nullptr;
    while (peek().kind == TokKind::Punct && peek().text == "*") {
      const Token& op = advance();
      ENodePtr rhs = parse_power();
      if (!rhs) return nullptr;
      auto node = std::make_unique<ENode>();
      node->kind = ENode::Kind::Mul;
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      node->line = op.line;
      node->column = op.column;
      lhs = std::move(node);
    }
    return lhs;
  }

  ENodePtr parse_expr() {
    bool negate = false;
    if (peek().kind == TokKind::Punct && peek().text == "-") {
      negate = true;
      ++pos;
    }
    ENodePtr lhs = parse_product();
    if (!lhs) return nullptr;
    if (negate) {
      auto node = std::make_unique<ENode>();
      node->kind = ENode::Kind::Neg;
      node->lhs = std::move(lhs);
      lhs = std::move(node);
    }
    while (peek().kind == TokKind::Punct && (peek().text == "+" || peek().text == "-")) {
      const Token& op = advance();
      ENodePtr rhs = parse_product();
      if (!rhs) return nullptr;
      auto node = std::make_unique<ENode>();
      node->kind = op.text == "+" ? ENode::Kind::Add : ENode::Kind::Sub;
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      node->line = op.line;
      node->column = op.column;
      lhs = std::move(node);
    }
    return lhs;
  }

  std::optional<Stmt> parse_stmt() {
    const Token& head = peek();
    Stmt stmt;
    stmt.line = head.line;
    stmt.column = head.column;
    if (head.kind != TokKind::Ident) {
      error(head, "E_SYNTAX", "expected a statement");
      return std::nullopt;
    }
    if (head.text == "base") {
      ++pos;
      if (peek().kind != TokKind::Ident || peek().text != "dim") {
        error(peek(), "E_SYNTAX", "expected 'dim'");
        return std::nullopt;
      }
      ++pos;
      auto value = expect_int();
      if (!value) return std::nullopt;
      stmt.node = *value;
      return stmt;
    }
    if (head.text == "field" || head.text == "ghost" || head.text == "param") {
      ++pos;
      DeclStmt decl;
      decl.line = head.line;
      decl.column = head.column;
      decl.role = head.text == "field"   ? FieldRole::Dynamic
                  : head.text == "ghost" ? FieldRole::Ghost
                                         : FieldRole::Parameter;
      const Token& name_tok = peek();
      auto name = expect_ident();
      if (!name) return std::nullopt;
      if (kReserved.count(*name)) {
        error(name_tok, "E_RESERVED", "'" + *name + "' is a reserved name");
        return std::nullopt;
      }
      decl.name = *name;
      if (!expect_punct("[")) return std::nullopt;
      auto first = expect_int();
      if (!first) return std::nullopt;
      decl.shape.push_back(*first);
      while (match_punct(",")) {
        auto next = expect_int();
        if (!next) return std::nullopt;
        decl.shape.push_back(*next);
      }
      if (!expect_punct("]")) return std::nullopt;
      if (peek().kind == TokKind::Ident && (peek().text == "odd" || peek().text == "even")) {
        decl.parity = peek().text == "odd" ? Parity::Odd : Parity::Even;
        ++pos;
      }
      stmt.node = std::move(decl);
      return stmt;
    }
    if (head.text == "algebra") {
      ++pos;
      AlgebraStmt alg;
      alg.line = head.line;
      alg.column = head.column;
      auto name = expect_ident();
      if (!name) return std::nullopt;
      alg.name = *name;
      if (!expect_punct("{")) return std::nullopt;
      while (!at_end() && !(peek().kind == TokKind::Punct && peek().text == "}")) {
        AlgebraEntry entry;
        entry.line = peek().line;
        entry.column = peek().column;
        if (peek().kind != TokKind::Ident || peek().text != "c") {
          error(peek(), "E_SYNTAX", "expected a structure-constant entry 'c[r,p,q] = value'");
          return std::nullopt;
        }
        ++pos;
        if (!expect_punct("[")) return std::nullopt;
        auto r = expect_int();
        if (!r || !expect_punct(",")) return std::nullopt;
        auto p = expect_int();
        if (!p || !expect_punct(",")) return std::nullopt;
        auto q = expect_int();
        if (!q || !expect_punct("]")) return std::nullopt;
        if (!expect_punct("=")) return std::nullopt;
        auto value = parse_rational(true);
        if (!value) return std::nullopt;
        entry.r = *r;
        entry.p = *p;
        entry.q = *q;
        entry.value = *value;
        alg.entries.push_back(std::move(entry));
      }
      if (!expect_punct("}")) return std::nullopt;
      stmt.node = std::move(alg);
      return stmt;
    }
    if (head.text == "lagrangian") {
      ++pos;
      DensityStmt density;
      density.line = head.line;
      density.column = head.column;
      auto name = expect_ident();
      if (!name) return std::nullopt;
      density.name = *name;
      if (!expect_punct("=")) return std::nullopt;
      density.expr = parse_expr();
      if (!density.expr) return std::nullopt;
      stmt.node = std::move(density);
      return stmt;
    }
    if (head.text == "generator" || head.text == "brst") {
      ++pos;
      VectorStmt vec;
      vec.line = head.line;
      vec.column = head.column;
      vec.brst = head.text == "brst";
      auto name = expect_ident();
      if (!name) return std::nullopt;
      vec.name = *name;
      if (!expect_punct("{")) return std::nullopt;
      while (!at_end() && !(peek().kind == TokKind::Punct && peek().text == "}")) {
        auto ref = parse_jetref();
        if (!ref) return std::nullopt;
        if (!expect_punct("=>")) return std::nullopt;
        ENodePtr expr = parse_expr();
        if (!expr) return std::nullopt;
        vec.entries.emplace_back(std::move(*ref), std::move(expr));
      }
      if (!expect_punct("}")) return std::nullopt;
      stmt.node = std::move(vec);
      return stmt;
    }
    error(head, "E_SYNTAX", "unknown statement '" + head.text + "'");
    return std::nullopt;
  }

  std::vector<Stmt> run() {
    std::vector<Stmt> stmts;
    while (!at_end()) {
      auto stmt = parse_stmt();
      if (stmt)
        stmts.push_back(std::move(*stmt));
      else
        synchronize();
    }
    return stmts;
  }
};

// ---------------------------------------------------------------------------
// Semantic pass
// ---------------------------------------------------------------------------

struct Analyzer {
  std::vector<Diagnostic>& diagnostics;
  FieldSystemPtr sys = nullptr;
  std::map<std::string, size_t> decl_position = {};  // field name -> statement index
  bool failed = false;

  void error(int line, int column, std::string code, std::string message) {
    diagnostics.push_back({Severity::Error, std::move(code), std::move(message), line,
                           column});
    failed = true;
  }

  std::optional<JetVar> resolve_ref(const JetRef& ref, size_t stmt_index) {
    if (ref.name == "x") {
      error(ref.line, ref.column, "E_SYNTAX", "'x' is not a field reference here");
      return std::nullopt;
    }
    auto field = sys->field_index(ref.name);
    if (!field) {
      error(ref.line, ref.column, "E_UNKNOWN_FIELD", "unknown field '" + ref.name + "'");
      return std::nullopt;
    }
    if (decl_position.at(ref.name) > stmt_index) {
      error(ref.line, ref.column, "E_FORWARD_REF",
            "field '" + ref.name + "' is declared after this use");
      return std::nullopt;
    }
    const FieldDecl& decl = sys->field(*field);
    if (ref.fibers.size() != decl.fiber_shape.size()) {
      error(ref.line, ref.column, "E_INDEX_RANGE",
            "field '" + ref.name + "' expects " + std::to_string(decl.fiber_shape.size()) +
                " fiber indices");
      return std::nullopt;
    }
    std::vector<int> idx(ref.fibers.size(), 0);
    for (size_t k = 0; k < ref.fibers.size(); ++k) {
      if (ref.fibers[k] < 1 || ref.fibers[k] > decl.fiber_shape[k]) {
        error(ref.line, ref.column, "E_INDEX_RANGE",
              "fiber index " + std::to_string(ref.fibers[k]) + " out of range for '" +
                  ref.name + "'");
        return std::nullopt;
      }
      idx[k] = static_cast<int>(ref.fibers[k]) - 1;
    }
    MultiIndex multi(sys->base_dim());
    for (long long entry : ref.multi) {
      if (entry < 1 || entry > sys->base_dim()) {
        error(ref.line, ref.column, "E_INDEX_RANGE",
              "base index " + std::to_string(entry) + " out of range");
        return std::nullopt;
      }
      multi = multi.plus(static_cast<int>(entry) - 1);
    }
    return JetVar{*field, flatten(decl.fiber_shape, idx), std::move(multi)};
  }

  std::optional<Expr> eval(const ENode& node, size_t stmt_index) {
    switch (node.kind) {
      case ENode::Kind::Number:
        return Expr::constant(sys, node.value);
      case ENode::Kind::Ref: {
        const JetRef& ref = node.ref;
        if (ref.name == "x") {
          if (ref.fibers.size() != 1 || !ref.multi.empty()) {
            error(ref.line, ref.column, "E_SYNTAX",
                  "'x' takes one base index and no multi-index");
            return std::nullopt;
          }
          if (ref.fibers[0] < 1 || ref.fibers[0] > sys->base_dim()) {
            error(ref.line, ref.column, "E_INDEX_RANGE", "base index out of range for 'x'");
            return std::nullopt;
          }
          return Expr::base_variable(sys, static_cast<int>(ref.fibers[0]) - 1);
        }
        auto var = resolve_ref(ref, stmt_index);
        if (!var) return std::nullopt;
        return Expr::variable(sys, std::move(*var));
      }
      case ENode::Kind::Deriv: {
        if (node.arg < 1 || node.arg > sys->base_dim()) {
          error(node.line, node.column, "E_INDEX_RANGE", "derivative direction out of range");
          return std::nullopt;
        }
        auto inner = eval(*node.lhs, stmt_index);
        if (!inner) return std::nullopt;
        return total_derivative(*inner, static_cast<int>(node.arg) - 1);
      }
      case ENode::Kind::Neg: {
        auto inner = eval(*node.lhs, stmt_index);
        if (!inner) return std::nullopt;
        return -*inner;
      }
      case ENode::Kind::Pow: {
        auto base = eval(*node.lhs, stmt_index);
        if (!base) return std::nullopt;
        if (node.arg < 0) {
          error(node.line, node.column, "E_SYNTAX", "negative exponent");
          return std::nullopt;
        }
        return base->pow(static_cast<int>(node.arg));
      }
      case ENode::Kind::Add:
      case ENode::Kind::Sub:
      case ENode::Kind::Mul: {
        auto lhs = eval(*node.lhs, stmt_index);
        auto rhs = eval(*node.rhs, stmt_index);
        if (!lhs || !rhs) return std::nullopt;
        if (node.kind == ENode::Kind::Add) return *lhs + *rhs;
        if (node.kind == ENode::Kind::Sub) return *lhs - *rhs;
        return *lhs * *rhs;
      }
    }
    return std::nullopt;
  }
};

} // namespace

const Definition* ModelDocument::find(std::string_view name) const {
  for (const auto& def : definitions)
    if (def.name == name) return &def;
  return nullptr;
}

ParseResult parse(std::string_view text) {
  ParseResult result;
  Lexer lexer{text, 0, 1, 1, result.diagnostics};
  const std::vector<Token> tokens = lexer.run();
  Parser parser{tokens, 0, result.diagnostics};
  const std::vector<Stmt> stmts = parser.run();

  Analyzer analyzer{result.diagnostics};

  // Declarations first: the field system must be complete before any
  // expression is evaluated, while use-before-declaration is still rejected
  // through the statement positions.
  int base_dim = 1;
  bool base_dim_seen = false;
  bool fields_seen = false;
  std::vector<FieldDecl> decls;
  for (size_t k = 0; k < stmts.size(); ++k) {
    if (const auto* dim = std::get_if<long long>(&stmts[k].node)) {
      if (base_dim_seen)
        analyzer.error(stmts[k].line, stmts[k].column, "E_BASEDIM", "duplicate 'base dim'");
      else if (fields_seen)
        analyzer.error(stmts[k].line, stmts[k].column, "E_BASEDIM",
                       "'base dim' must precede field declarations");
      else if (*dim < 1)
        analyzer.error(stmts[k].line, stmts[k].column, "E_BASEDIM",
                       "base dimension must be positive");
      else
        base_dim = static_cast<int>(*dim);
      base_dim_seen = true;
    } else if (const auto* decl = std::get_if<DeclStmt>(&stmts[k].node)) {
      fields_seen = true;
      FieldDecl fd;
      fd.name = decl->name;
      fd.role = decl->role;
      fd.fiber_shape.clear();
      for (long long extent : decl->shape) {
        if (extent < 1) {
          analyzer.error(decl->line, decl->column, "E_INDEX_RANGE",
                         "fiber extent must be positive");
          extent = 1;
        }
        fd.fiber_shape.push_back(static_cast<int>(extent));
      }
      switch (decl->role) {
        case FieldRole::Dynamic:
          fd.parity = decl->parity.value_or(Parity::Even);
          break;
        case FieldRole::Ghost:
          fd.parity = Parity::Odd;
          if (decl->parity && *decl->parity != Parity::Odd)
            analyzer.error(decl->line, decl->column, "E_PARITY", "ghost fields must be odd");
          break;
        case FieldRole::Parameter:
          fd.parity = Parity::Even;
          if (decl->parity && *decl->parity != Parity::Even)
            analyzer.error(decl->line, decl->column, "E_PARITY",
                           "parameter fields must be even");
          break;
      }
      if (analyzer.decl_position.count(fd.name))
        analyzer.error(decl->line, decl->column, "E_DUPLICATE",
                       "duplicate field '" + fd.name + "'");
      else {
        analyzer.decl_position[fd.name] = k;
        decls.push_back(std::move(fd));
      }
    }
  }
  if (analyzer.failed) return result;
  try {
    analyzer.sys = FieldSystem::create(base_dim, std::move(decls));
  } catch (const DomainError& err) {
    analyzer.error(1, 1, "E_TYPE", err.what());
    return result;
  }

  ModelDocument doc;
  doc.system = analyzer.sys;
  std::set<std::string> definition_names;
  auto claim_name = [&](const std::string& name, int line, int column) {
    if (!definition_names.insert(name).second) {
      analyzer.error(line, column, "E_DUPLICATE", "duplicate definition '" + name + "'");
      return false;
    }
    return true;
  };

  for (size_t k = 0; k < stmts.size(); ++k) {
    if (const auto* density = std::get_if<DensityStmt>(&stmts[k].node)) {
      if (!claim_name(density->name, density->line, density->column)) continue;
      auto value = analyzer.eval(*density->expr, k);
      if (!value) continue;
      doc.definitions.push_back({density->name, DensityDef{std::move(*value)}});
    } else if (const auto* alg = std::get_if<AlgebraStmt>(&stmts[k].node)) {
      if (!claim_name(alg->name, alg->line, alg->column)) continue;
      long long dim = 0;
      for (const auto& entry : alg->entries)
        dim = std::max({dim, entry.r, entry.p, entry.q});
      std::map<std::tuple<int, int, int>, Rational> constants;
      bool ok = true;
      for (const auto& entry : alg->entries) {
        if (entry.r < 1 || entry.p < 1 || entry.q < 1) {
          analyzer.error(entry.line, entry.column, "E_INDEX_RANGE",
                         "algebra indices are 1-based");
          ok = false;
          continue;
        }
        auto key = std::make_tuple(static_cast<int>(entry.r) - 1,
                                   static_cast<int>(entry.p) - 1,
                                   static_cast<int>(entry.q) - 1);
        auto canonical = std::get<1>(key) < std::get<2>(key)
                             ? key
                             : std::make_tuple(std::get<0>(key), std::get<2>(key),
                                               std::get<1>(key));
        Rational value =
            std::get<1>(key) < std::get<2>(key) ? entry.value : Rational(-entry.value);
        auto [it, inserted] = constants.emplace(canonical, value);
        if (!inserted && it->second != value) {
          analyzer.error(entry.line, entry.column, "E_TYPE",
                         "conflicting antisymmetric entries");
          ok = false;
        }
      }
      if (!ok) continue;
      try {
        doc.definitions.push_back(
            {alg->name,
             AlgebraDef{LieAlgebraData(static_cast<int>(dim), std::move(constants))}});
      } catch (const DomainError& err) {
        analyzer.error(alg->line, alg->column, "E_TYPE", err.what());
      }
    } else if (const auto* vec = std::get_if<VectorStmt>(&stmts[k].node)) {
      if (!claim_name(vec->name, vec->line, vec->column)) continue;
      std::map<Component, Expr> components;
      bool ok = true;
      for (const auto& [ref, expr_node] : vec->entries) {
        auto var = analyzer.resolve_ref(ref, k);
        if (!var) {
          ok = false;
          continue;
        }
        if (var->index.order() != 0) {
          analyzer.error(ref.line, ref.column, "E_TYPE",
                         "left-hand side must be an undifferentiated field component");
          ok = false;
          continue;
        }
        auto value = analyzer.eval(*expr_node, k);
        if (!value) {
          ok = false;
          continue;
        }
        if (!components.emplace(var->component(), std::move(*value)).second) {
          analyzer.error(ref.line, ref.column, "E_DUPLICATE",
                         "component bound twice in '" + vec->name + "'");
          ok = false;
        }
      }
      if (!ok) continue;
      if (!vec->brst) {
        try {
          GeneralizedVectorField probe(analyzer.sys, components);
        } catch (const DomainError& err) {
          analyzer.error(vec->line, vec->column, "E_TYPE", err.what());
          continue;
        }
        doc.definitions.push_back({vec->name, GeneratorDef{std::move(components)}});
      } else {
        std::map<Component, Expr> dynamic_part, ghost_part;
        bool roles_ok = true;
        for (auto& [comp, expr] : components) {
          switch (analyzer.sys->field(comp.field).role) {
            case FieldRole::Dynamic:
              dynamic_part.emplace(comp, std::move(expr));
              break;
            case FieldRole::Ghost:
              ghost_part.emplace(comp, std::move(expr));
              break;
            case FieldRole::Parameter:
              analyzer.error(vec->line, vec->column, "E_TYPE",
                             "brst candidates cannot act on parameter fields");
              roles_ok = false;
              break;
          }
        }
        if (!roles_ok) continue;
        try {
          BrstCandidate probe(analyzer.sys, dynamic_part, ghost_part);
        } catch (const DomainError& err) {
          analyzer.error(vec->line, vec->column, "E_TYPE", err.what());
          continue;
        }
        doc.definitions.push_back(
            {vec->name, BrstDef{std::move(dynamic_part), std::move(ghost_part)}});
      }
    }
  }

  for (const auto& diag : result.diagnostics)
    if (diag.severity == Severity::Error) return result;
  result.document = std::move(doc);
  return result;
}

// ---------------------------------------------------------------------------
// Structural equality and gauge-generator extraction
// ---------------------------------------------------------------------------

namespace {

bool algebra_equal(const LieAlgebraData& a, const LieAlgebraData& b) {
  if (a.dim() != b.dim() || a.has_metric() != b.has_metric()) return false;
  if (a.entries() != b.entries()) return false;
  if (a.has_metric())
    for (int p = 0; p < a.dim(); ++p)
      for (int q = 0; q < a.dim(); ++q)
        if (a.metric(p, q) != b.metric(p, q)) return false;
  return true;
}

} // namespace

bool equivalent(const ModelDocument& a, const ModelDocument& b) {
  if (!(*a.system == *b.system)) return false;
  if (a.definitions.size() != b.definitions.size()) return false;
  for (size_t k = 0; k < a.definitions.size(); ++k) {
    const Definition& da = a.definitions[k];
    const Definition& db = b.definitions[k];
    if (da.name != db.name || da.payload.index() != db.payload.index()) return false;
    if (const auto* x = std::get_if<DensityDef>(&da.payload)) {
      if (!(x->value == std::get<DensityDef>(db.payload).value)) return false;
    } else if (const auto* g = std::get_if<GeneratorDef>(&da.payload)) {
      if (!(g->components == std::get<GeneratorDef>(db.payload).components)) return false;
    } else if (const auto* s = std::get_if<BrstDef>(&da.payload)) {
      const auto& other = std::get<BrstDef>(db.payload);
      if (!(s->dynamic_part == other.dynamic_part && s->ghost_part == other.ghost_part))
        return false;
    } else if (const auto* alg = std::get_if<AlgebraDef>(&da.payload)) {
      if (!algebra_equal(alg->algebra, std::get<AlgebraDef>(db.payload).algebra))
        return false;
    }
  }
  return true;
}

ModelDocument builtin_yang_mills(const ConnectionModel& model, std::string algebra_name) {
  ModelDocument doc;
  doc.system = model.system();
  doc.definitions.push_back({std::move(algebra_name), AlgebraDef{model.algebra()}});
  doc.definitions.push_back({"L", DensityDef{yang_mills_lagrangian(model).value()}});
  GeneralizedVectorField expanded = connection_generator(model).expand();
  doc.definitions.push_back({"gauge", GeneratorDef{expanded.components()}});
  BrstCandidate brst = yang_mills_brst(model);
  doc.definitions.push_back({"s", BrstDef{brst.dynamic_part(), brst.ghost_part()}});
  return doc;
}

std::optional<GaugeGenerator> to_gauge_generator(const ModelDocument& doc,
                                                 const GeneratorDef& def,
                                                 std::vector<Diagnostic>& diagnostics) {
  const FieldSystemPtr& sys = doc.system;
  std::map<GaugeKey, Expr> coefficients;
  for (const auto& [comp, expr] : def.components) {
    for (const Monomial& term : expr.terms()) {
      std::optional<JetVar> parameter;
      int multiplicity = 0;
      for (const auto& [var, exp] : term.even_part) {
        if (sys->field(var.field).role != FieldRole::Parameter) continue;
        multiplicity += exp;
        parameter = var;
      }
      for (const auto& var : term.odd_part)
        if (sys->field(var.field).role == FieldRole::Ghost) multiplicity = -1;
      if (multiplicity != 1 || !parameter) {
        diagnostics.push_back({Severity::Error, "E_TYPE",
                               "generator is not linear in parameter jets", 1, 1});
        return std::nullopt;
      }
      Monomial coefficient = term;
      std::erase_if(coefficient.even_part,
                    [&](const auto& p) { return p.first == *parameter; });
      GaugeKey key{comp, parameter->component(), parameter->index};
      Expr contribution = Expr::from_monomials(sys, {std::move(coefficient)});
      auto [it, inserted] = coefficients.emplace(key, contribution);
      if (!inserted) it->second += contribution;
    }
  }
  try {
    return GaugeGenerator(sys, std::move(coefficients));
  } catch (const DomainError& err) {
    diagnostics.push_back({Severity::Error, "E_TYPE", err.what(), 1, 1});
    return std::nullopt;
  }
}

} // namespace dsl
} // namespace gradedjets
