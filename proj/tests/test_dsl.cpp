#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradedjets/report.hpp"

#include "test_support.hpp"

using namespace testsupport;
using gradedjets::dsl::parse;
using gradedjets::dsl::print;

namespace {

bool has_code(const std::vector<dsl::Diagnostic>& diagnostics, std::string_view code) {
  for (const auto& d : diagnostics)
    if (d.code == code) return true;
  return false;
}

} // namespace

TEST_CASE("a minimal Lagrangian document") {
  auto result = parse("base dim 1\nfield y[1]\nlagrangian L = 1/2 * y[1;1]^2\n");
  REQUIRE(result.document.has_value());
  const auto& doc = *result.document;
  REQUIRE(doc.definitions.size() == 1);
  const auto& density = std::get<dsl::DensityDef>(doc.definitions[0].payload);
  Expr y1 = var(doc.system, "y", 0, {0});
  CHECK(density.value == (y1 * y1).scaled(Rational(1, 2)));
}

TEST_CASE("diagnostics carry codes and spans") {
  SUBCASE("unknown field") {
    auto result = parse("field y[1]\nlagrangian L = z[1]\n");
    CHECK(!result.document.has_value());
    REQUIRE(!result.diagnostics.empty());
    const auto& d = result.diagnostics.front();
    CHECK(d.code == "E_UNKNOWN_FIELD");
    CHECK(d.line == 2);
    CHECK(d.column == 16);
  }
  SUBCASE("fiber index out of range") {
    auto result = parse("field y[2]\nlagrangian L = y[3]\n");
    CHECK(has_code(result.diagnostics, "E_INDEX_RANGE"));
  }
  SUBCASE("parity misuse") {
    CHECK(has_code(parse("ghost c[1] even\n").diagnostics, "E_PARITY"));
    CHECK(has_code(parse("param p[1] odd\n").diagnostics, "E_PARITY"));
  }
  SUBCASE("forward reference") {
    auto result = parse("lagrangian L = y[1]\nfield y[1]\n");
    CHECK(has_code(result.diagnostics, "E_FORWARD_REF"));
  }
  SUBCASE("duplicate names") {
    CHECK(has_code(parse("field y[1]\nfield y[2]\n").diagnostics, "E_DUPLICATE"));
    CHECK(has_code(parse("field y[1]\nlagrangian L = y[1]\nlagrangian L = y[1]\n")
                       .diagnostics,
                   "E_DUPLICATE"));
  }
  SUBCASE("lexical errors") {
    CHECK(has_code(parse("lagrangian L = @\n").diagnostics, "E_LEX"));
  }
  SUBCASE("syntax errors") {
    CHECK(has_code(parse("field y[\n").diagnostics, "E_SYNTAX"));
    CHECK(has_code(parse("base dim 1 field y[1] lagrangian L = y[1] +\n").diagnostics,
                   "E_SYNTAX"));
  }
  SUBCASE("misplaced base dim") {
    CHECK(has_code(parse("field y[1]\nbase dim 2\n").diagnostics, "E_BASEDIM"));
  }
  SUBCASE("reserved names") {
    CHECK(has_code(parse("field x[1]\n").diagnostics, "E_RESERVED"));
    CHECK(has_code(parse("field d[1]\n").diagnostics, "E_RESERVED"));
  }
  SUBCASE("every diagnostic has a positive span") {
    auto result = parse("field y[1]\nlagrangian L = z[1] + w[2]\n");
    REQUIRE(!result.diagnostics.empty());
    for (const auto& d : result.diagnostics) {
      CHECK(d.line >= 1);
      CHECK(d.column >= 1);
    }
  }
}

TEST_CASE("expression surface syntax") {
  auto result = parse(
      "base dim 2\n"
      "field y[1]\n"
      "ghost c[2]\n"
      "lagrangian A = d(1; y[1] * y[1;2])\n"
      "lagrangian B = -3/2 * x[1]^2 * y[1] + c[1] * c[2]\n"
      "lagrangian C = (y[1] + 1) * (y[1] - 1)\n");
  REQUIRE(result.document.has_value());
  const auto& doc = *result.document;
  const auto& sys = doc.system;

  Expr y = var(sys, "y", 0);
  Expr y12 = var(sys, "y", 0, {1});
  CHECK(std::get<dsl::DensityDef>(doc.definitions[0].payload).value ==
        total_derivative(y * y12, 0));

  Expr x1 = Expr::base_variable(sys, 0);
  Expr expected_b = (x1 * x1 * y).scaled(Rational(-3, 2)) +
                    var(sys, "c", 0) * var(sys, "c", 1);
  CHECK(std::get<dsl::DensityDef>(doc.definitions[1].payload).value == expected_b);

  CHECK(std::get<dsl::DensityDef>(doc.definitions[2].payload).value ==
        y * y - rat(sys, 1));
}

TEST_CASE("multi-index entries are order-insensitive") {
  auto result = parse(
      "base dim 2\nfield y[1]\nlagrangian A = y[1;1 2]\nlagrangian B = y[1;2 1]\n");
  REQUIRE(result.document.has_value());
  CHECK(std::get<dsl::DensityDef>(result.document->definitions[0].payload).value ==
        std::get<dsl::DensityDef>(result.document->definitions[1].payload).value);
}

TEST_CASE("generator and brst definitions are validated") {
  SUBCASE("well-formed generator") {
    auto result = parse(
        "base dim 1\nfield y[1]\nparam xi[1]\n"
        "generator g { y[1] => xi[1;1] + y[1] * xi[1] }\n");
    REQUIRE(result.document.has_value());
  }
  SUBCASE("jet on the left-hand side") {
    auto result = parse("base dim 1\nfield y[1]\ngenerator g { y[1;1] => y[1] }\n");
    CHECK(has_code(result.diagnostics, "E_TYPE"));
  }
  SUBCASE("mixed parity components") {
    auto result = parse(
        "base dim 1\nfield y[1]\nghost c[1]\n"
        "generator g { y[1] => y[1] + c[1] }\n");
    CHECK(has_code(result.diagnostics, "E_TYPE"));
  }
  SUBCASE("brst on a parameter") {
    auto result = parse(
        "base dim 1\nfield y[1]\nparam xi[1]\nghost c[1]\n"
        "brst s { xi[1] => c[1] }\n");
    CHECK(has_code(result.diagnostics, "E_TYPE"));
  }
  SUBCASE("brst ghost grading") {
    auto result = parse(
        "base dim 1\nfield y[1]\nghost c[2]\n"
        "brst s { y[1] => c[1]\n c[1] => c[1] * c[2]\n c[2] => 0 }\n");
    REQUIRE(result.document.has_value());
  }
}

TEST_CASE("algebra blocks") {
  auto result = parse("algebra g { c[1,2,3] = 1 c[1,3,2] = -1 c[2,3,1] = 1/2 }\n");
  REQUIRE(result.document.has_value());
  const auto& algebra =
      std::get<dsl::AlgebraDef>(result.document->definitions[0].payload).algebra;
  CHECK(algebra.dim() == 3);
  CHECK(algebra.structure_constant(0, 1, 2) == 1);
  CHECK(algebra.structure_constant(1, 2, 0) == Rational(1, 2));

  CHECK(has_code(parse("algebra g { c[1,2,3] = 1 c[1,3,2] = 1 }\n").diagnostics, "E_TYPE"));
}

TEST_CASE("printing canonical documents") {
  auto result = parse("base dim 1\nfield y[1]\nlagrangian L = 0\n");
  REQUIRE(result.document.has_value());
  CHECK(print(*result.document) == "base dim 1\nfield y[1]\nlagrangian L = 0\n");
}

TEST_CASE("round trips over handwritten and built-in documents") {
  std::vector<std::string> corpus;
  corpus.push_back(
      "base dim 2\nfield y[2] odd\nparam xi[1]\nghost c[1]\n"
      "lagrangian L = y[1] * y[2] + 1/3 * x[2]\n"
      "generator g { y[1] => xi[1;2] }\n");
  for (bool diffeo : {false, true}) {
    ConnectionModel model = ConnectionModel::make(2, LieAlgebraData::su2(), diffeo);
    corpus.push_back(print(dsl::builtin_yang_mills(model, "su2")));
  }
  for (const std::string& text : corpus) {
    CAPTURE(text.substr(0, 60));
    auto first = parse(text);
    REQUIRE(first.document.has_value());
    std::string printed = print(*first.document);
    auto second = parse(printed);
    REQUIRE(second.document.has_value());
    CHECK(dsl::equivalent(*first.document, *second.document));
    CHECK(print(*second.document) == printed);
  }
}

TEST_CASE("gauge-generator extraction from generator definitions") {
  auto result = parse(
      "base dim 1\nfield y[1]\nparam xi[1]\nghost c[1]\n"
      "generator linear { y[1] => y[1] * xi[1] + xi[1;1] }\n"
      "generator quadratic { y[1] => xi[1] * xi[1;1] }\n");
  REQUIRE(result.document.has_value());
  const auto& doc = *result.document;

  std::vector<dsl::Diagnostic> diags;
  auto linear = dsl::to_gauge_generator(
      doc, std::get<dsl::GeneratorDef>(doc.definitions[0].payload), diags);
  REQUIRE(linear.has_value());
  CHECK(diags.empty());
  CHECK(linear->coefficients().size() == 2);
  CHECK(linear->max_parameter_jet_order() == 1);

  auto quadratic = dsl::to_gauge_generator(
      doc, std::get<dsl::GeneratorDef>(doc.definitions[1].payload), diags);
  CHECK(!quadratic.has_value());
  CHECK(has_code(diags, "E_TYPE"));
}

TEST_CASE("reports validate against the published schema") {
  report::Report rep;
  rep.command = "check-nilpotent";
  rep.status = report::Status::Fail;
  rep.result["nilpotent"] = false;
  rep.residuals.push_back({"c[1]", "c[2] * c[3]"});
  rep.solution_space_dim = 2;
  rep.diagnostics.push_back({dsl::Severity::Warning, "W_TEST", "message", 3, 4});
  std::string why;
  CHECK(report::validates_schema(rep.to_json(), &why));
  CHECK(rep.exit_code() == 1);

  nlohmann::json broken = rep.to_json();
  broken.erase("residuals");
  CHECK(!report::validates_schema(broken, &why));
  CHECK(why == "missing residuals");
}

TEST_CASE("json rendering is deterministic") {
  report::Report rep;
  rep.command = "el";
  rep.result["components"] = nlohmann::json::array();
  CHECK(rep.to_json_string() == rep.to_json_string());
  CHECK(rep.to_json_string().back() == '\n');
}
