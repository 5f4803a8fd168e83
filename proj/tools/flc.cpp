// flc: batch front end for the kernel.
//
//   flc check <theory.flt> <proof.flp>
//   flc eval <structure.fls> --expr E [--persp x,y] [--args a,b]
//   flc sat <structure.fls> <theory.flt>
//   flc fuzz <suite> [--n N] [--seed S]
//   flc henkin <theory.flt> [--levels L] [--depth D] [--out F]
//   flc termmodel <structure.fls> [--depth D] [--out F]
//
// Every command takes --json. Exit status: 0 ok, 1 verdict fail, 2 usage,
// parse or other errors.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fnl/error.hpp"
#include "fnl/fuzz.hpp"
#include "fnl/henkin.hpp"
#include "fnl/io.hpp"
#include "fnl/parser.hpp"

using namespace fnl;
using json = nlohmann::ordered_json;

namespace {

struct FirstFailure {
  std::string file;
  std::size_t line = 0;
  std::string expected;
  std::string got;
};

struct RunReport {
  std::vector<std::string> command;
  bool ok = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<FirstFailure> first;
  double seconds = 0;
  json details = json::object();
  std::vector<std::string> lines;  // human-readable body
};

json to_json(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["verdict"] = r.ok ? "ok" : "fail";
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  if (r.first)
    j["first_failure"] = {{"file", r.first->file}, {"line", r.first->line}, {"expected", r.first->expected}, {"got", r.first->got}};
  else
    j["first_failure"] = nullptr;
  j["seconds"] = r.seconds;
  j["details"] = r.details;
  return j;
}

void print_text(const RunReport& r, std::ostream& os) {
  for (const auto& l : r.lines) os << l << "\n";
  if (r.first) {
    os << "first failure: ";
    if (!r.first->file.empty()) os << r.first->file << ":" << r.first->line << ": ";
    os << "expected " << r.first->expected << ", got " << r.first->got << "\n";
  }
  os << (r.ok ? "ok" : "FAIL") << " (" << r.cases << " cases, " << r.failures << " failures, " << r.seconds << " s)\n";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::size_t depth_default(std::size_t fallback) {
  if (const char* v = std::getenv("FLC_DEPTH_DEFAULT")) {
    try {
      return std::stoul(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("FLC_DEPTH_DEFAULT is not a number: ") + v);
    }
  }
  return fallback;
}

// ---------------------------------------------------------------------------

void cmd_check(RunReport& r, const std::string& theory_file, const std::string& proof_file) {
  Theory t = load_theory(theory_file);
  Proof p = load_proof(t, proof_file);
  CheckResult c = check_proof(p);
  r.cases = p.lines.size();
  r.details["lines"] = p.lines.size();
  if (!c) {
    r.ok = false;
    r.failures = 1;
    const auto& line = p.lines.at(c.line);
    r.first = FirstFailure{proof_file, c.line + 1, "valid " + justification_name(line.why) + " step", c.reason};
    r.details["failed_formula"] = print_expr(line.formula);
    return;
  }
  std::vector<std::size_t> used;
  for (auto i : used_axioms(p)) used.push_back(i + 1);
  r.details["conclusion"] = print_expr(p.conclusion());
  r.details["used_axioms"] = used;
  r.lines.push_back("proves " + print_expr(p.conclusion()));
  std::string u = "used axioms:";
  for (auto i : used) u += " " + std::to_string(i);
  r.lines.push_back(used.empty() ? "used axioms: none" : u);
}

void cmd_eval(RunReport& r, const std::string& structure_file, const std::string& text, const std::string& persp,
              const std::string& args) {
  Structure s = load_structure(structure_file);
  const Signature& sig = s.signature;
  Expr e = parse_expr(sig, text);
  Perspective p;
  for (const auto& name : split_list(persp)) {
    auto sort = sig.variable_sort(name);
    if (!sort) throw Error(ErrorKind::UnknownSymbol, "perspective entry " + name + " is not a variable");
    p.vars.push_back(Var{name, *sort});
  }
  FnTable table = evaluate(s, e, p);
  const auto sorts = p.sorts();
  r.details["expr"] = print_expr(e);
  r.details["sort"] = e.sort().name;
  if (!args.empty() || p.vars.empty()) {
    auto names = split_list(args);
    if (names.size() != p.vars.size())
      throw Error(ErrorKind::NotInPerspective, "expected " + std::to_string(p.vars.size()) + " arguments, got " +
                                                  std::to_string(names.size()));
    std::size_t row = 0;
    for (std::size_t j = 0; j < names.size(); ++j) {
      auto el = s.element(sorts[j], names[j]);
      if (!el) throw Error(ErrorKind::InterpretationOutOfCarrier, names[j] + " is not an element of " + sorts[j].name);
      row = row * s.size(sorts[j]) + *el;
    }
    const std::string& v = s.element_name(e.sort(), table.rows.at(row));
    r.cases = 1;
    r.details["value"] = v;
    r.lines.push_back(v);
    return;
  }
  json rows = json::array();
  for (std::size_t t = 0; t < table.rows.size(); ++t) {
    auto coords = decode_tuple(s, sorts, t);
    std::vector<std::string> in;
    std::string line;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      in.push_back(s.element_name(sorts[j], coords[j]));
      line += (j ? ", " : "") + in.back();
    }
    const std::string& v = s.element_name(e.sort(), table.rows[t]);
    rows.push_back({{"args", in}, {"value", v}});
    r.lines.push_back(line + " -> " + v);
  }
  r.cases = table.rows.size();
  r.details["table"] = rows;
}

void cmd_sat(RunReport& r, const std::string& structure_file, const std::string& theory_file) {
  Structure s = load_structure(structure_file);
  Theory t = load_theory(theory_file);
  if (!(t.signature == s.signature)) {
    // the theory may use a sub-signature; evaluate in the structure's
    Theory u{s.signature, {}};
    for (const auto& a : t.axioms) u.axioms.push_back(parse_expr(s.signature, print_expr(a)));
    t = std::move(u);
  }
  json unsat = json::array();
  for (std::size_t i = 0; i < t.axioms.size(); ++i) {
    ++r.cases;
    if (satisfies(s, t.axioms[i])) continue;
    ++r.failures;
    unsat.push_back(i + 1);
    if (!r.first) r.first = FirstFailure{theory_file, i + 1, "1", "0 for " + print_expr(t.axioms[i])};
  }
  r.ok = r.failures == 0;
  r.details["unsatisfied_axioms"] = unsat;
  r.lines.push_back(r.ok ? "model of the theory" : "not a model of the theory");
}

void cmd_fuzz(RunReport& r, const std::string& suite, std::size_t n, std::uint64_t seed) {
  SuiteReport s = run_suite(suite, {.cases = n, .seed = seed});
  r.cases = s.cases;
  r.failures = s.failures;
  r.ok = s.ok();
  json laws = json::object();
  for (const auto& [law, c] : s.law_cases) {
    std::size_t f = s.law_failures.contains(law) ? s.law_failures.at(law) : 0;
    laws[law] = {{"cases", c}, {"failures", f}};
    r.lines.push_back(law + ": " + std::to_string(c) + " cases, " + std::to_string(f) + " failures");
  }
  r.details["suite"] = suite;
  r.details["seed"] = seed;
  r.details["laws"] = laws;
  if (s.first) {
    r.first = FirstFailure{"", 0, "no counterexample", s.first->law + ": " + s.first->detail};
    r.details["first_case"] = {{"index", s.first->index}, {"law", s.first->law}, {"shrunk", s.first->shrunk}};
    if (!s.first->shrunk.empty()) r.lines.push_back("shrunk: " + s.first->shrunk);
  }
}

// Writes `text` to `out` ("-" for stdout) after checking it re-parses.
void emit(const std::string& out, const std::string& text) {
  if (out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

void cmd_henkin(RunReport& r, const std::string& theory_file, std::size_t levels, std::size_t depth, const std::string& out) {
  Theory t = load_theory(theory_file);
  Theory ext = henkin_extend(t, levels, depth);
  std::string text = write_theory(ext);
  Theory again = parse_theory(text, "<emitted>");
  validate_theory(again);
  std::size_t constants = ext.axioms.size() - t.axioms.size();
  r.cases = constants;
  r.details["levels"] = levels;
  r.details["depth"] = depth;
  r.details["special_constants"] = constants;
  r.details["axioms"] = ext.axioms.size();
  r.lines.push_back(std::to_string(constants) + " special constants added");
  emit(out, text);
}

void cmd_termmodel(RunReport& r, const std::string& structure_file, std::size_t depth, const std::string& out) {
  Structure m = load_structure(structure_file);
  TermModelOptions opt;
  opt.depth = depth;
  TermModelReport tm = run_term_model(m, opt);
  json checks = json::object();
  auto tally = [&](const char* name, const CheckTally& t) {
    r.cases += t.cases;
    r.failures += t.failures;
    checks[name] = {{"cases", t.cases}, {"failures", t.failures}};
    r.lines.push_back(std::string(name) + ": " + std::to_string(t.cases) + " cases, " + std::to_string(t.failures) + " failures");
    if (!t.ok() && !r.first) r.first = FirstFailure{"", 0, std::string(name) + " agreement", t.first};
  };
  tally("norm", tm.norm_props);
  tally("idempotence", tm.idempotence);
  tally("cm_expr", tm.cm_expr);
  tally("ded_sat", tm.ded_sat);
  tally("restriction", tm.restriction);
  r.ok = tm.ok();
  r.details["depth"] = depth;
  r.details["checks"] = checks;
  r.details["carriers"] = tm.carrier_sizes;
  r.details["oracle_calls"] = tm.oracle_calls;
  if (tm.term_structure) {
    std::string text = write_structure(*tm.term_structure);
    validate_structure(parse_structure(text, "<emitted>"));
    emit(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional-logic kernel"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit the report as JSON")->configurable(false);

  std::string f1, f2, expr, persp, args, suite, out = "-";
  std::size_t n = 1000, levels = 1, depth = 0;
  std::uint64_t seed = 1;
  bool depth_given = false;

  auto* check = app.add_subcommand("check", "check a proof against a theory");
  check->add_option("theory", f1)->required();
  check->add_option("proof", f2)->required();

  auto* eval = app.add_subcommand("eval", "evaluate an expression in a structure");
  eval->add_option("structure", f1)->required();
  eval->add_option("--expr", expr)->required();
  eval->add_option("--persp", persp, "comma-separated perspective variables");
  eval->add_option("--args", args, "comma-separated carrier elements");

  auto* sat = app.add_subcommand("sat", "check that a structure is a model of a theory");
  sat->add_option("structure", f1)->required();
  sat->add_option("theory", f2)->required();

  auto* fuzz = app.add_subcommand("fuzz", "run a seeded property suite");
  fuzz->add_option("suite", suite)->required();
  fuzz->add_option("--n", n);
  fuzz->add_option("--seed", seed);

  auto* henkin = app.add_subcommand("henkin", "add special constants and axioms");
  henkin->add_option("theory", f1)->required();
  henkin->add_option("--levels", levels);
  henkin->add_option("--depth", depth)->each([&](const std::string&) { depth_given = true; });
  henkin->add_option("--out", out, "output .flt, - for stdout");

  auto* term = app.add_subcommand("termmodel", "build and check the term structure of Th(M)");
  term->add_option("structure", f1)->required();
  term->add_option("--depth", depth)->each([&](const std::string&) { depth_given = true; });
  term->add_option("--out", out, "output .fls, - for stdout");

  for (auto* sc : app.get_subcommands({})) sc->add_flag("--json", as_json, "emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunReport r;
  r.command.assign(argv + 1, argv + argc);
  // emitted files on stdout push the report to stderr
  const bool emits = (henkin->parsed() || term->parsed()) && out == "-";
  std::ostream& rs = emits ? std::cerr : std::cout;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (check->parsed()) cmd_check(r, f1, f2);
    if (eval->parsed()) cmd_eval(r, f1, expr, persp, args);
    if (sat->parsed()) cmd_sat(r, f1, f2);
    if (fuzz->parsed()) {
      if (!is_suite(suite)) {
        std::cerr << "unknown suite " << suite << "; one of:";
        for (const auto& s : suite_names()) std::cerr << " " << s;
        std::cerr << "\n";
        return 2;
      }
      cmd_fuzz(r, suite, n, seed);
    }
    if (henkin->parsed()) cmd_henkin(r, f1, levels, depth_given ? depth : 2, out);
    if (term->parsed()) cmd_termmodel(r, f1, depth_given ? depth : depth_default(4), out);
  } catch (const Error& e) {
    if (as_json)
      rs << json{{"command", r.command}, {"verdict", "error"}, {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}.dump(2)
         << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (as_json)
      rs << json{{"command", r.command}, {"verdict", "error"}, {"error", {{"kind", "Usage"}, {"message", e.what()}}}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (as_json)
    rs << to_json(r).dump(2) << "\n";
  else
    print_text(r, rs);
  return r.ok ? 0 : 1;
}
