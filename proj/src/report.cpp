#include "gradedjets/report.hpp"

#include <sstream>

namespace gradedjets {
namespace report {

namespace {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "?";
}

} // namespace

int Report::exit_code() const {
  switch (status) {
    case Status::Ok: return 0;
    case Status::Fail: return 1;
    case Status::Error: return 2;
  }
  return 2;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["status"] = status_name(status);
  j["result"] = result;
  nlohmann::json res_list = nlohmann::json::array();
  for (const auto& r : residuals)
    res_list.push_back({{"component", r.component}, {"expr", r.expr}});
  j["residuals"] = res_list;
  if (solution_space_dim) j["solution_space_dim"] = *solution_space_dim;
  nlohmann::json diag_list = nlohmann::json::array();
  for (const auto& d : diagnostics)
    diag_list.push_back({{"severity", d.severity == dsl::Severity::Error ? "error" : "warning"},
                         {"code", d.code},
                         {"message", d.message},
                         {"line", d.line},
                         {"column", d.column}});
  j["diagnostics"] = diag_list;
  return j;
}

std::string Report::to_json_string() const { return to_json().dump(2) + "\n"; }

std::string Report::to_text() const {
  std::ostringstream out;
  out << command << ": " << status_name(status) << "\n";
  for (auto it = result.begin(); it != result.end(); ++it) {
    if (it.value().is_string())
      out << "  " << it.key() << ": " << it.value().get<std::string>() << "\n";
    else if (it.value().is_array()) {
      out << "  " << it.key() << ":\n";
      for (const auto& item : it.value()) {
        if (item.is_object() && item.size() == 2 && item.contains("component") &&
            item.contains("expr")) {
          out << "    " << item["component"].get<std::string>() << " = "
              << item["expr"].get<std::string>() << "\n";
        } else if (item.is_object()) {
          out << "   ";
          for (auto field = item.begin(); field != item.end(); ++field)
            out << " " << field.key() << "="
                << (field.value().is_string() ? field.value().get<std::string>()
                                              : field.value().dump());
          out << "\n";
        } else {
          out << "    " << item.dump() << "\n";
        }
      }
    } else {
      out << "  " << it.key() << ": " << it.value().dump() << "\n";
    }
  }
  if (!residuals.empty()) {
    out << "  residuals:\n";
    for (const auto& r : residuals) out << "    " << r.component << " = " << r.expr << "\n";
  }
  if (solution_space_dim) out << "  solution_space_dim: " << *solution_space_dim << "\n";
  for (const auto& d : diagnostics)
    out << (d.severity == dsl::Severity::Error ? "error" : "warning") << " [" << d.code
        << "] line " << d.line << ", column " << d.column << ": " << d.message << "\n";
  return out.str();
}

bool validates_schema(const nlohmann::json& j, std::string* why) {
  auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  if (!j.is_object()) return fail("report is not an object");
  if (!j.contains("command") || !j["command"].is_string()) return fail("missing command");
  if (!j.contains("status") || !j["status"].is_string()) return fail("missing status");
  const std::string status = j["status"].get<std::string>();
  if (status != "ok" && status != "fail" && status != "error")
    return fail("invalid status '" + status + "'");
  if (!j.contains("result") || !j["result"].is_object()) return fail("missing result");
  if (!j.contains("residuals") || !j["residuals"].is_array()) return fail("missing residuals");
  for (const auto& r : j["residuals"]) {
    if (!r.is_object() || !r.contains("component") || !r["component"].is_string() ||
        !r.contains("expr") || !r["expr"].is_string())
      return fail("malformed residual entry");
  }
  if (j.contains("solution_space_dim") && !j["solution_space_dim"].is_number_integer())
    return fail("solution_space_dim must be an integer");
  if (!j.contains("diagnostics") || !j["diagnostics"].is_array())
    return fail("missing diagnostics");
  for (const auto& d : j["diagnostics"]) {
    if (!d.is_object() || !d.contains("severity") || !d.contains("code") ||
        !d.contains("message") || !d.contains("line") || !d.contains("column"))
      return fail("malformed diagnostic entry");
    if (!d["line"].is_number_integer() || !d["column"].is_number_integer())
      return fail("diagnostic span must be integral");
  }
  return true;
}

} // namespace report
} // namespace gradedjets
