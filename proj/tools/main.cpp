#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gradedjets/dsl.hpp"
#include "gradedjets/report.hpp"

namespace {

using namespace gradedjets;
using report::Report;
using report::Status;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int emit(const Report& rep, bool json) {
  std::cout << (json ? rep.to_json_string() : rep.to_text());
  return rep.exit_code();
}

Report failure(std::string command, std::string code, std::string message) {
  Report rep;
  rep.command = std::move(command);
  rep.status = Status::Error;
  rep.diagnostics.push_back({dsl::Severity::Error, std::move(code), std::move(message), 1, 1});
  return rep;
}

struct DocumentOptions {
  std::string file;
  bool json = false;
  std::string lagrangian;
  std::string generator;
  std::string brst;
  std::string target;
  int index = 1;
  int jet_bound = -1;
  int degree_bound = -1;

  void add_common(CLI::App* cmd) {
    cmd->add_option("file", file, "model file (default: stdin)");
    cmd->add_flag("--json", json, "emit a JSON report");
  }
};

/// Parse the input document or emit the diagnostics report.
std::optional<dsl::ModelDocument> load_document(const std::string& command,
                                                const DocumentOptions& opts, int& exit_code) {
  dsl::ParseResult parsed = dsl::parse(read_input(opts.file));
  if (parsed.document) return parsed.document;
  Report rep;
  rep.command = command;
  rep.status = Status::Error;
  rep.diagnostics = std::move(parsed.diagnostics);
  exit_code = emit(rep, opts.json);
  return std::nullopt;
}

template <class T>
const T* select_definition(const dsl::ModelDocument& doc, const std::string& name,
                           const std::string& what, const std::string& command,
                           const DocumentOptions& opts, int& exit_code) {
  const dsl::Definition* def = doc.find_unique<T>(name);
  if (def) return &std::get<T>(def->payload);
  std::string message = name.empty()
                            ? "no unique " + what + " definition; select one by name"
                            : "no " + what + " definition named '" + name + "'";
  exit_code = emit(failure(command, "E_USAGE", std::move(message)), opts.json);
  return nullptr;
}

nlohmann::json component_list(const FieldSystem& sys, const std::map<Component, Expr>& map,
                              bool keep_zero) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [comp, expr] : map) {
    if (!keep_zero && expr.is_zero()) continue;
    list.push_back({{"component", dsl::component_name(sys, comp)},
                    {"expr", dsl::to_string(expr)}});
  }
  return list;
}

int run_el(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("el", opts, exit_code);
  if (!doc) return exit_code;
  const auto* density =
      select_definition<dsl::DensityDef>(*doc, opts.lagrangian, "lagrangian", "el", opts,
                                         exit_code);
  if (!density) return exit_code;
  HorizontalDensity L(density->value);
  EulerResult euler = euler_lagrange(L);
  Report rep;
  rep.command = "el";
  rep.result["components"] = component_list(*doc->system, euler.components, false);
  return emit(rep, opts.json);
}

int run_dtot(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("dtot", opts, exit_code);
  if (!doc) return exit_code;
  const auto* density =
      select_definition<dsl::DensityDef>(*doc, opts.lagrangian, "lagrangian", "dtot", opts,
                                         exit_code);
  if (!density) return exit_code;
  if (opts.index < 1 || opts.index > doc->system->base_dim())
    return emit(failure("dtot", "E_INDEX_RANGE", "derivative direction out of range"),
                opts.json);
  Expr result = total_derivative(density->value, opts.index - 1);
  Report rep;
  rep.command = "dtot";
  rep.result["expr"] = dsl::to_string(result);
  return emit(rep, opts.json);
}

nlohmann::json current_json(const BoundaryCurrent& current) {
  nlohmann::json list = nlohmann::json::array();
  for (size_t k = 0; k < current.components.size(); ++k)
    list.push_back({{"component", "sigma[" + std::to_string(k + 1) + "]"},
                    {"expr", dsl::to_string(current.components[k])}});
  return list;
}

int run_check_symmetry(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("check-symmetry", opts, exit_code);
  if (!doc) return exit_code;
  const auto* gen = select_definition<dsl::GeneratorDef>(*doc, opts.generator, "generator",
                                                         "check-symmetry", opts, exit_code);
  if (!gen) return exit_code;
  const auto* density =
      select_definition<dsl::DensityDef>(*doc, opts.lagrangian, "lagrangian",
                                         "check-symmetry", opts, exit_code);
  if (!density) return exit_code;
  GeneralizedVectorField field(doc->system, gen->components);
  SymmetryVerdict verdict = is_variational_symmetry(field, HorizontalDensity(density->value));
  Report rep;
  rep.command = "check-symmetry";
  rep.status = verdict.holds ? Status::Ok : Status::Fail;
  rep.result["holds"] = verdict.holds;
  if (verdict.current) rep.result["current"] = current_json(*verdict.current);
  return emit(rep, opts.json);
}

int run_check_gauge_symmetry(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("check-gauge-symmetry", opts, exit_code);
  if (!doc) return exit_code;
  const auto* gen =
      select_definition<dsl::GeneratorDef>(*doc, opts.generator, "generator",
                                           "check-gauge-symmetry", opts, exit_code);
  if (!gen) return exit_code;
  const auto* density =
      select_definition<dsl::DensityDef>(*doc, opts.lagrangian, "lagrangian",
                                         "check-gauge-symmetry", opts, exit_code);
  if (!density) return exit_code;
  Report rep;
  rep.command = "check-gauge-symmetry";
  auto gauge = dsl::to_gauge_generator(*doc, *gen, rep.diagnostics);
  if (!gauge) {
    rep.status = Status::Error;
    return emit(rep, opts.json);
  }
  bool holds = is_gauge_symmetry(*gauge, HorizontalDensity(density->value));
  rep.status = holds ? Status::Ok : Status::Fail;
  rep.result["holds"] = holds;
  return emit(rep, opts.json);
}

int run_check_nilpotent(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("check-nilpotent", opts, exit_code);
  if (!doc) return exit_code;
  const auto* def = select_definition<dsl::BrstDef>(*doc, opts.brst, "brst",
                                                    "check-nilpotent", opts, exit_code);
  if (!def) return exit_code;
  BrstCandidate candidate(doc->system, def->dynamic_part, def->ghost_part);
  NilpotencyReport nil = check_nilpotent(candidate);
  Report rep;
  rep.command = "check-nilpotent";
  rep.status = nil.nilpotent ? Status::Ok : Status::Fail;
  rep.result["nilpotent"] = nil.nilpotent;
  for (const auto& [comp, expr] : nil.residuals) {
    if (expr.is_zero()) continue;
    rep.residuals.push_back({dsl::component_name(*doc->system, comp), dsl::to_string(expr)});
  }
  return emit(rep, opts.json);
}

int run_solve_brst(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("solve-brst", opts, exit_code);
  if (!doc) return exit_code;
  const auto* gen = select_definition<dsl::GeneratorDef>(*doc, opts.generator, "generator",
                                                         "solve-brst", opts, exit_code);
  if (!gen) return exit_code;
  Report rep;
  rep.command = "solve-brst";
  auto gauge = dsl::to_gauge_generator(*doc, *gen, rep.diagnostics);
  if (!gauge) {
    rep.status = Status::Error;
    return emit(rep, opts.json);
  }
  StructureSolveOptions solve_opts;
  solve_opts.jet_bound = opts.jet_bound;
  solve_opts.degree_bound = opts.degree_bound;
  StructureSolveResult solved = solve_structure_functions(*gauge, solve_opts);
  if (!solved.solutions) {
    rep.status = Status::Fail;
    rep.result["solvable"] = false;
    return emit(rep, opts.json);
  }
  rep.result["solvable"] = true;
  rep.result["ghost_action"] =
      component_list(*doc->system, solved.solutions->ghost_action(), true);
  rep.solution_space_dim = solved.solutions->solution_space_dim();
  bool jacobi = solved.jacobi_holds();
  rep.result["jacobi_holds"] = jacobi;
  for (const auto& [comp, expr] : solved.jacobi_residuals) {
    if (expr.is_zero()) continue;
    rep.residuals.push_back({dsl::component_name(*doc->system, comp), dsl::to_string(expr)});
  }
  rep.status = jacobi ? Status::Ok : Status::Fail;
  return emit(rep, opts.json);
}

int run_bracket(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("bracket", opts, exit_code);
  if (!doc) return exit_code;
  const auto* gen = select_definition<dsl::GeneratorDef>(*doc, opts.generator, "generator",
                                                         "bracket", opts, exit_code);
  if (!gen) return exit_code;
  Report rep;
  rep.command = "bracket";
  auto gauge = dsl::to_gauge_generator(*doc, *gen, rep.diagnostics);
  if (!gauge) {
    rep.status = Status::Error;
    return emit(rep, opts.json);
  }
  BracketResult bracket = extract_bracket(*gauge);
  const FieldSystem& ext = *bracket.extended_system;
  rep.result["components"] = component_list(ext, bracket.components, false);
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [key, comps] : bracket.pairs)
    pairs.push_back({{"first", dsl::jetvar_name(ext, key.first)},
                     {"second", dsl::jetvar_name(ext, key.second)},
                     {"components", component_list(ext, comps, false)}});
  rep.result["pairs"] = pairs;
  return emit(rep, opts.json);
}

int run_reduce_onshell(const DocumentOptions& opts) {
  int exit_code = 0;
  auto doc = load_document("reduce-onshell", opts, exit_code);
  if (!doc) return exit_code;
  const dsl::Definition* target_def =
      opts.target.empty() ? nullptr : doc->find(opts.target);
  if (!target_def || !std::holds_alternative<dsl::DensityDef>(target_def->payload))
    return emit(failure("reduce-onshell", "E_USAGE",
                        "--target must name a defined density"),
                opts.json);
  const auto* density =
      select_definition<dsl::DensityDef>(*doc, opts.lagrangian, "lagrangian",
                                         "reduce-onshell", opts, exit_code);
  if (!density) return exit_code;
  const int jet_bound = opts.jet_bound < 0 ? 1 : opts.jet_bound;
  const int degree_bound = opts.degree_bound < 0 ? 2 : opts.degree_bound;
  OnShellResult reduced =
      reduce_on_shell(std::get<dsl::DensityDef>(target_def->payload).value,
                      HorizontalDensity(density->value), jet_bound, degree_bound);
  Report rep;
  rep.command = "reduce-onshell";
  const bool zero = reduced.verdict == OnShellVerdict::ZeroOnShell;
  rep.status = zero ? Status::Ok : Status::Fail;
  rep.result["verdict"] = zero ? "ZeroOnShell" : "NotFoundWithinBounds";
  if (zero) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& term : reduced.witness) {
      std::string jet;
      for (int k = 0; k < term.prolongation.base_dim(); ++k)
        for (int i = 0; i < term.prolongation[k]; ++i) {
          if (!jet.empty()) jet += ' ';
          jet += std::to_string(k + 1);
        }
      witness.push_back({{"component", dsl::component_name(*doc->system, term.component)},
                         {"prolongation", jet},
                         {"multiplier", dsl::to_string(term.multiplier)}});
    }
    rep.result["witness"] = witness;
  }
  return emit(rep, opts.json);
}

struct BuiltinOptions {
  std::string algebra = "su2";
  int dim = 3;
  int rank = 1;
  bool diffeo = false;
  bool json = false;
};

int run_builtin_ym(const BuiltinOptions& opts) {
  if (opts.dim < 1) return emit(failure("builtin", "E_USAGE", "--dim must be positive"), opts.json);
  LieAlgebraData algebra{0, {}};
  if (opts.algebra == "su2") {
    algebra = LieAlgebraData::su2();
  } else if (opts.algebra == "abelian") {
    if (opts.rank < 1)
      return emit(failure("builtin", "E_USAGE", "--rank must be positive"), opts.json);
    algebra = LieAlgebraData::abelian(opts.rank);
  } else {
    return emit(failure("builtin", "E_USAGE", "unknown algebra '" + opts.algebra + "'"),
                opts.json);
  }
  ConnectionModel model = ConnectionModel::make(opts.dim, std::move(algebra), opts.diffeo);
  std::string text = dsl::print(dsl::builtin_yang_mills(model, opts.algebra));
  if (!opts.json) {
    std::cout << text;
    return 0;
  }
  Report rep;
  rep.command = "builtin";
  rep.result["document"] = text;
  return emit(rep, true);
}

} // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  if (const char* cap = std::getenv("GRADEDJETS_MAX_TERMS")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(cap, &end, 10);
    if (!end || *end != '\0' || value == 0) {
      std::cerr << "error [E_USAGE]: GRADEDJETS_MAX_TERMS must be a positive integer\n";
      return 2;
    }
    set_max_term_count(static_cast<std::size_t>(value));
  }

  CLI::App app{"exact variational calculus for gauge systems with ghosts"};
  app.require_subcommand(1);

  DocumentOptions opts;
  BuiltinOptions builtin_opts;

  auto* el = app.add_subcommand("el", "Euler-Lagrange components of a Lagrangian");
  opts.add_common(el);
  el->add_option("--lagrangian", opts.lagrangian, "density name");

  auto* dtot = app.add_subcommand("dtot", "total derivative of a density");
  opts.add_common(dtot);
  dtot->add_option("--lagrangian", opts.lagrangian, "density name");
  dtot->add_option("--index", opts.index, "base direction (1-based)")->required();

  auto* sym = app.add_subcommand("check-symmetry", "variational symmetry test");
  opts.add_common(sym);
  sym->add_option("--generator", opts.generator, "generator name");
  sym->add_option("--lagrangian", opts.lagrangian, "density name");

  auto* gauge = app.add_subcommand("check-gauge-symmetry", "gauge symmetry test");
  opts.add_common(gauge);
  gauge->add_option("--generator", opts.generator, "generator name");
  gauge->add_option("--lagrangian", opts.lagrangian, "density name");

  auto* nil = app.add_subcommand("check-nilpotent", "BRST nilpotency test");
  opts.add_common(nil);
  nil->add_option("--brst", opts.brst, "candidate name");

  auto* solve = app.add_subcommand("solve-brst", "solve the ghost-extension equations");
  opts.add_common(solve);
  solve->add_option("--generator", opts.generator, "generator name");
  solve->add_option("--jet-bound", opts.jet_bound, "coefficient jet-order bound");
  solve->add_option("--degree-bound", opts.degree_bound, "coefficient degree bound");

  auto* bracket = app.add_subcommand("bracket", "generator bracket over two parameter copies");
  opts.add_common(bracket);
  bracket->add_option("--generator", opts.generator, "generator name");

  auto* onshell = app.add_subcommand("reduce-onshell", "bounded on-shell reduction");
  opts.add_common(onshell);
  onshell->add_option("--target", opts.target, "density to reduce")->required();
  onshell->add_option("--lagrangian", opts.lagrangian, "density name");
  onshell->add_option("--jet-bound", opts.jet_bound, "multiplier jet-order bound");
  onshell->add_option("--degree-bound", opts.degree_bound, "multiplier degree bound");

  auto* builtin = app.add_subcommand("builtin", "emit a built-in model document");
  auto* ym = builtin->add_subcommand("ym", "Yang-Mills gauge model");
  ym->add_option("--algebra", builtin_opts.algebra, "abelian or su2");
  ym->add_option("--dim", builtin_opts.dim, "base dimension");
  ym->add_option("--rank", builtin_opts.rank, "abelian rank");
  ym->add_flag("--diffeo", builtin_opts.diffeo, "include diffeomorphism ghosts");
  ym->add_flag("--json", builtin_opts.json, "emit a JSON report");
  builtin->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error [E_USAGE]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(el)) return run_el(opts);
    if (app.got_subcommand(dtot)) return run_dtot(opts);
    if (app.got_subcommand(sym)) return run_check_symmetry(opts);
    if (app.got_subcommand(gauge)) return run_check_gauge_symmetry(opts);
    if (app.got_subcommand(nil)) return run_check_nilpotent(opts);
    if (app.got_subcommand(solve)) return run_solve_brst(opts);
    if (app.got_subcommand(bracket)) return run_bracket(opts);
    if (app.got_subcommand(onshell)) return run_reduce_onshell(opts);
    if (app.got_subcommand(builtin)) return run_builtin_ym(builtin_opts);
  } catch (const TermLimitError& err) {
    std::cerr << "error [E_LIMIT]: " << err.what() << "\n";
    return 2;
  } catch (const DomainError& err) {
    std::cerr << "error [E_DOMAIN]: " << err.what() << "\n";
    return 2;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
