#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gradedjets/multi_index.hpp"

namespace gradedjets {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Violation of an operation precondition (mismatched field systems, parity
/// misuse, antisymmetry failure, ...).
struct DomainError : Error {
  using Error::Error;
};

/// The term-count safety cap was exceeded while normalizing an expression.
struct TermLimitError : Error {
  using Error::Error;
};

/// Grassmann parity, closed under mod-2 addition.
enum class Parity : unsigned char { Even = 0, Odd = 1 };

constexpr Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>((static_cast<unsigned>(a) + static_cast<unsigned>(b)) & 1u);
}

constexpr const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

enum class FieldRole : unsigned char { Dynamic, Ghost, Parameter };

constexpr const char* to_string(FieldRole r) {
  switch (r) {
    case FieldRole::Dynamic: return "field";
    case FieldRole::Ghost: return "ghost";
    case FieldRole::Parameter: return "param";
  }
  return "?";
}

/// One declared field. The fiber may carry a multi-dimensional shape for
/// display purposes (e.g. a gauge potential indexed by algebra and base
/// direction); internally components are addressed by the flattened index
/// 0..fiber_size()-1, last shape entry varying fastest.
struct FieldDecl {
  std::string name;
  std::vector<int> fiber_shape = {1};
  Parity parity = Parity::Even;
  FieldRole role = FieldRole::Dynamic;

  int fiber_size() const {
    int s = 1;
    for (int d : fiber_shape) s *= d;
    return s;
  }

  friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

class FieldSystem;
using FieldSystemPtr = std::shared_ptr<const FieldSystem>;

/// Immutable declaration catalog: base dimension plus the ordered list of
/// fields. Declaration order fixes the canonical variable order and therefore
/// every sign produced by the kernel.
class FieldSystem {
public:
  static FieldSystemPtr create(int base_dim, std::vector<FieldDecl> fields);

  int base_dim() const { return base_dim_; }
  int field_count() const { return static_cast<int>(fields_.size()); }
  const FieldDecl& field(int index) const { return fields_.at(static_cast<size_t>(index)); }
  const std::vector<FieldDecl>& fields() const { return fields_; }

  std::optional<int> field_index(std::string_view name) const;

  std::vector<int> fields_with_role(FieldRole role) const;

  bool operator==(const FieldSystem& other) const {
    return base_dim_ == other.base_dim_ && fields_ == other.fields_;
  }

private:
  FieldSystem(int base_dim, std::vector<FieldDecl> fields)
      : base_dim_(base_dim), fields_(std::move(fields)) {}

  int base_dim_ = 1;
  std::vector<FieldDecl> fields_;
};

/// True when both expressions may interact: either pointer-identical systems,
/// structurally equal systems, or one side null (the null system only ever
/// carries the zero expression).
bool same_system(const FieldSystemPtr& a, const FieldSystemPtr& b);

/// Merge two compatible system handles, preferring a non-null one.
const FieldSystemPtr& merge_system(const FieldSystemPtr& a, const FieldSystemPtr& b);

/// A field component: (field index, flattened fiber index), both 0-based.
struct Component {
  int field = 0;
  int fiber = 0;
  friend auto operator<=>(const Component&, const Component&) = default;
};

/// One jet coordinate s^A_Lambda. Distinct triples are independent variables.
struct JetVar {
  int field = 0;
  int fiber = 0;
  MultiIndex index;

  Component component() const { return {field, fiber}; }
  friend bool operator==(const JetVar&, const JetVar&) = default;
  /// Canonical variable order: declaration order, fiber, then graded-lex index.
  friend std::strong_ordering operator<=>(const JetVar& a, const JetVar& b) {
    if (auto c = a.field <=> b.field; c != 0) return c;
    if (auto c = a.fiber <=> b.fiber; c != 0) return c;
    return a.index <=> b.index;
  }
};

} // namespace gradedjets
