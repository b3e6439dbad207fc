#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradedjets/dsl.hpp"

namespace gradedjets {
namespace report {

enum class Status { Ok, Fail, Error };

struct ResidualEntry {
  std::string component;
  std::string expr;
};

/// Machine-readable command report. Rendered bytes are deterministic for a
/// fixed input in both text and JSON form.
struct Report {
  std::string command;
  Status status = Status::Ok;
  nlohmann::json result = nlohmann::json::object();
  std::vector<ResidualEntry> residuals;
  std::optional<int> solution_space_dim;
  std::vector<dsl::Diagnostic> diagnostics;

  int exit_code() const;
  nlohmann::json to_json() const;
  std::string to_json_string() const;  // 2-space indent, trailing newline
  std::string to_text() const;
};

/// Validates the published report schema: required keys, types, and the
/// residual/diagnostic entry shapes.
bool validates_schema(const nlohmann::json& j, std::string* why = nullptr);

} // namespace report
} // namespace gradedjets
