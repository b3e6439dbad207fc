#include "gradedjets/field_system.hpp"

#include <set>

namespace gradedjets {

FieldSystemPtr FieldSystem::create(int base_dim, std::vector<FieldDecl> fields) {
  if (base_dim < 1) throw DomainError("base dimension must be positive");
  std::set<std::string> names;
  for (const auto& f : fields) {
    if (f.name.empty()) throw DomainError("field name must not be empty");
    if (!names.insert(f.name).second)
      throw DomainError("duplicate field name '" + f.name + "'");
    if (f.fiber_shape.empty()) throw DomainError("field '" + f.name + "' has empty fiber shape");
    for (int d : f.fiber_shape)
      if (d < 1) throw DomainError("field '" + f.name + "' has non-positive fiber extent");
    if (f.role == FieldRole::Ghost && f.parity != Parity::Odd)
      throw DomainError("ghost field '" + f.name + "' must be odd");
    if (f.role == FieldRole::Parameter && f.parity != Parity::Even)
      throw DomainError("parameter field '" + f.name + "' must be even");
  }
  return FieldSystemPtr(new FieldSystem(base_dim, std::move(fields)));
}

std::optional<int> FieldSystem::field_index(std::string_view name) const {
  for (size_t k = 0; k < fields_.size(); ++k)
    if (fields_[k].name == name) return static_cast<int>(k);
  return std::nullopt;
}

std::vector<int> FieldSystem::fields_with_role(FieldRole role) const {
  std::vector<int> out;
  for (int k = 0; k < field_count(); ++k)
    if (fields_[static_cast<size_t>(k)].role == role) out.push_back(k);
  return out;
}

bool same_system(const FieldSystemPtr& a, const FieldSystemPtr& b) {
  if (!a || !b) return true;  // null carries only the zero expression
  if (a == b) return true;
  return *a == *b;
}

const FieldSystemPtr& merge_system(const FieldSystemPtr& a, const FieldSystemPtr& b) {
  return a ? a : b;
}

} // namespace gradedjets
