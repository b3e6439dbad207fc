#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gradedjets/models.hpp"

namespace gradedjets {
namespace dsl {

enum class Severity { Error, Warning };

/// Every parse or validation failure carries a 1-based source span.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  int line = 1;
  int column = 1;
};

struct DensityDef {
  Expr value;
};

struct GeneratorDef {
  std::map<Component, Expr> components;
};

struct BrstDef {
  std::map<Component, Expr> dynamic_part;
  std::map<Component, Expr> ghost_part;
};

struct AlgebraDef {
  LieAlgebraData algebra{0, {}};
};

struct Definition {
  std::string name;
  std::variant<DensityDef, GeneratorDef, BrstDef, AlgebraDef> payload;
};

/// A parsed and validated model file: the field system plus ordered named
/// bindings. Identifiers resolve to declarations earlier in the document.
struct ModelDocument {
  FieldSystemPtr system;
  std::vector<Definition> definitions;

  const Definition* find(std::string_view name) const;
  /// The unique definition holding payload type T, by name when given.
  template <class T>
  const Definition* find_unique(std::string_view name = {}) const {
    const Definition* found = nullptr;
    for (const auto& def : definitions) {
      if (!std::holds_alternative<T>(def.payload)) continue;
      if (!name.empty()) {
        if (def.name == name) return &def;
        continue;
      }
      if (found) return nullptr;  // ambiguous
      found = &def;
    }
    return found;
  }
};

struct ParseResult {
  std::optional<ModelDocument> document;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;
};

/// Parse a model document. Whitespace-insensitive; '#' starts a line comment.
ParseResult parse(std::string_view text);

/// Canonical text form; parse(print(doc)) is structurally identical to doc
/// and print is a fixed point on canonical forms.
std::string print(const ModelDocument& doc);

/// Surface syntax of one expression (canonical term order, explicit
/// rationals).
std::string to_string(const Expr& e);

/// "a[2,1]" -- component reference with the fiber unflattened by shape.
std::string component_name(const FieldSystem& sys, Component c);

/// "a[2,1;1 2]" -- jet variable reference.
std::string jetvar_name(const FieldSystem& sys, const JetVar& v);

/// Structural document equality (same system, same definitions in order).
bool equivalent(const ModelDocument& a, const ModelDocument& b);

/// Interpret a generator definition as a gauge generator: every term must be
/// linear in parameter jets with parameter-free coefficients. Diagnostics are
/// appended on failure.
std::optional<GaugeGenerator> to_gauge_generator(const ModelDocument& doc,
                                                 const GeneratorDef& def,
                                                 std::vector<Diagnostic>& diagnostics);

/// The built-in Yang-Mills model as a document: field declarations, the
/// algebra block, the Lagrangian 'L', the gauge generator 'gauge' and the
/// BRST candidate 's'.
ModelDocument builtin_yang_mills(const ConnectionModel& model, std::string algebra_name);

} // namespace dsl
} // namespace gradedjets
