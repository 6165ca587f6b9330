// Command-line frontend for the propositional type theory kernel:
// validity checking, normalization, quotation, proving and proof checking.
//
// Exit codes: 0 success, 1 semantic negative (invalid formula or rejected
// proof), 2 usage/parse/type errors, 3 enumeration guard exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ptt/parser.hpp"
#include "ptt/pretty.hpp"
#include "ptt/prover.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;

struct Options {
  std::uint64_t guard = ptt::kDefaultGuard;
  bool sugar = false;
  bool no_color = false;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ptt::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ptt::ParseError("cannot open '" + path + "' for writing");
  out << content;
}

void diag(const Options& opt, const std::string& msg) {
  const char* pre = opt.no_color ? "error: " : "\033[31merror:\033[0m ";
  std::cerr << pre << msg << "\n";
}

ptt::PrintOptions popts(const Options& opt) {
  ptt::PrintOptions p;
  p.sugar = opt.sugar;
  return p;
}

void print_assignment(const ptt::Assignment& a) {
  for (const auto& [var, value] : a)
    std::cout << var.id << " = " << value.to_string() << "\n";
}

// --assign x=v,f=[1,0]: split on commas outside brackets.
ptt::Assignment parse_assignment(const std::string& text,
                                 const ptt::Declarations& decls,
                                 std::uint64_t guard) {
  ptt::Assignment out;
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  for (const auto& p : parts) {
    auto eq = p.find('=');
    if (eq == std::string::npos)
      throw ptt::ParseError("--assign expects name=value pairs");
    std::string name = p.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    size_t start = name.find_first_not_of(' ');
    if (start != std::string::npos) name = name.substr(start);
    auto var = decls.lookup(name);
    if (!var)
      throw ptt::TypeError("--assign names undeclared variable '" + name + "'");
    out.emplace(*var, ptt::parse_value(p.substr(eq + 1), var->type, guard));
  }
  return out;
}

int cmd_check_type(const Options& opt, const std::string& file) {
  ptt::Term t = ptt::parse_term_file(read_file(file));
  std::cout << t.type().to_string() << "\n";
  (void)opt;
  return kExitOk;
}

int cmd_normalize(const Options& opt, const std::string& file) {
  ptt::Term t = ptt::parse_term_file(read_file(file));
  std::cout << ptt::pretty(ptt::beta_normalize(t), popts(opt)) << "\n";
  return kExitOk;
}

int cmd_eval(const Options& opt, const std::string& file,
             const std::string& assign) {
  ptt::ParsedUnit unit = ptt::parse_unit(read_file(file));
  if (!unit.is_term()) throw ptt::ParseError("eval expects a term file");
  ptt::Assignment a = parse_assignment(assign, unit.decls, opt.guard);
  std::cout << ptt::eval(unit.term(), a, opt.guard).to_string() << "\n";
  return kExitOk;
}

int cmd_valid(const Options& opt, const std::string& file) {
  ptt::ParsedUnit unit = ptt::parse_unit(read_file(file));
  std::optional<ptt::Assignment> cm;
  if (unit.is_term()) {
    if (!unit.term().type().is_base())
      throw ptt::TypeError("valid expects a formula, got type " +
                           unit.term().type().to_string());
    cm = ptt::countermodel(unit.term(), opt.guard);
  } else if (unit.is_sequent()) {
    cm = ptt::countermodel_sequent(unit.sequent().assumptions(),
                                   unit.sequent().conclusion(), opt.guard);
  } else {
    throw ptt::ParseError("valid expects a term or sequent file");
  }
  if (!cm) {
    std::cout << "valid\n";
    return kExitOk;
  }
  std::cout << "invalid\n";
  print_assignment(*cm);
  return kExitNegative;
}

int cmd_quote(const Options& opt, const std::string& type_text,
              const std::string& value_text) {
  ptt::TypeExpr ty = ptt::parse_type(type_text);
  ptt::Value v = ptt::parse_value(value_text, ty, opt.guard);
  std::cout << ptt::pretty(ptt::quote(ty, v, opt.guard), popts(opt)) << "\n";
  return kExitOk;
}

int cmd_prove(const Options& opt, const std::string& file) {
  ptt::Term t = ptt::parse_term_file(read_file(file));
  if (!t.type().is_base())
    throw ptt::TypeError("prove expects a formula, got type " +
                         t.type().to_string());
  ptt::ProveResult r = ptt::prove(t, opt.guard);
  if (std::holds_alternative<ptt::NotValid>(r)) {
    std::cout << "invalid\n";
    print_assignment(std::get<ptt::NotValid>(r).countermodel);
    return kExitNegative;
  }
  std::string proof =
      ptt::render_derivation_file(*std::get<ptt::DerivPtr>(r));
  if (opt.output.empty())
    std::cout << proof;
  else
    write_file(opt.output, proof);
  return kExitOk;
}

int cmd_verify(const Options& opt, const std::string& file) {
  ptt::DerivPtr d = ptt::parse_derivation_file(read_file(file));
  if (auto err = ptt::check(*d)) {
    diag(opt, "proof rejected " + err->to_string());
    return kExitNegative;
  }
  std::cout << "verified: " << ptt::pretty(d->conclusion(), popts(opt))
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal propositional type theory toolkit"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--guard", opt.guard,
                 "maximum values enumerated per type (default 65536)")
      ->check(CLI::Range(std::uint64_t{2}, UINT64_MAX));
  app.add_flag("--sugar", opt.sugar,
               "print with connective sugar (top, ~, \\/, /\\, <=>, ==, forall)");
  app.add_flag("--no-color", opt.no_color, "plain diagnostics");

  std::string file, assign, type_text, value_text;

  auto* c_type = app.add_subcommand("check-type", "print the type of a term");
  c_type->add_option("file", file)->required();

  auto* c_norm =
      app.add_subcommand("normalize", "print the beta-normal form of a term");
  c_norm->add_option("file", file)->required();

  auto* c_eval = app.add_subcommand("eval", "evaluate a term");
  c_eval->add_option("file", file)->required();
  c_eval->add_option("--assign", assign, "x=v,... values for free variables");

  auto* c_valid =
      app.add_subcommand("valid", "decide validity of a formula or sequent");
  c_valid->add_option("file", file)->required();

  auto* c_quote =
      app.add_subcommand("quote", "closed term denoting a value");
  c_quote->add_option("type", type_text)->required();
  c_quote->add_option("value", value_text)->required();

  auto* c_prove =
      app.add_subcommand("prove", "construct a checkable derivation");
  c_prove->add_option("file", file)->required();
  c_prove->add_option("-o,--output", opt.output, "proof output path");

  auto* c_verify = app.add_subcommand("verify", "check a derivation file");
  c_verify->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_type->parsed()) return cmd_check_type(opt, file);
    if (c_norm->parsed()) return cmd_normalize(opt, file);
    if (c_eval->parsed()) return cmd_eval(opt, file, assign);
    if (c_valid->parsed()) return cmd_valid(opt, file);
    if (c_quote->parsed()) return cmd_quote(opt, type_text, value_text);
    if (c_prove->parsed()) return cmd_prove(opt, file);
    if (c_verify->parsed()) return cmd_verify(opt, file);
  } catch (const ptt::TooLargeError& e) {
    diag(opt, e.what());
    return kExitTooLarge;
  } catch (const ptt::PttError& e) {
    diag(opt, e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    diag(opt, std::string("internal error: ") + e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
