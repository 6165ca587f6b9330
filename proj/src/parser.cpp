#include "ptt/parser.hpp"

#include <cctype>
#include <string_view>

#include "ptt/quote.hpp"

namespace ptt {

namespace {

enum class Tok {
  Ident,      // identifiers and keywords
  Arrow,      // ->
  FatArrow,   // =>
  Iff,        // <=>
  EqEq,       // ==
  OrOp,       // backslash slash
  AndOp,      // slash backslash
  Tilde,      // ~
  Lambda,     // backslash
  Dot,
  Colon,
  Comma,
  LParen,
  RParen,
  Turnstile,  // |-
  End,
};

struct Token {
  Tok kind;
  std::string_view text;  // view into the source buffer
  int line;
  int col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string_view t, int l, int c) {
    out.push_back({k, t, l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    int l = line, co = col;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (src[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      push(Tok::Ident, std::string_view(src).substr(i, j - i), l, co);
      advance(j - i);
      continue;
    }
    auto two = [&](const char* s) {
      return i + 1 < src.size() && src[i] == s[0] && src[i + 1] == s[1];
    };
    if (i + 2 < src.size() && src[i] == '<' && src[i + 1] == '=' &&
        src[i + 2] == '>') {
      push(Tok::Iff, "<=>", l, co);
      advance(3);
      continue;
    }
    if (two("->")) { push(Tok::Arrow, "->", l, co); advance(2); continue; }
    if (two("=>")) { push(Tok::FatArrow, "=>", l, co); advance(2); continue; }
    if (two("==")) { push(Tok::EqEq, "==", l, co); advance(2); continue; }
    if (two("\\/")) { push(Tok::OrOp, "\\/", l, co); advance(2); continue; }
    if (two("/\\")) { push(Tok::AndOp, "/\\", l, co); advance(2); continue; }
    if (two("|-")) { push(Tok::Turnstile, "|-", l, co); advance(2); continue; }
    switch (c) {
      case '~': push(Tok::Tilde, "~", l, co); advance(1); continue;
      case '\\': push(Tok::Lambda, "\\", l, co); advance(1); continue;
      case '.': push(Tok::Dot, ".", l, co); advance(1); continue;
      case ':': push(Tok::Colon, ":", l, co); advance(1); continue;
      case ',': push(Tok::Comma, ",", l, co); advance(1); continue;
      case '(': push(Tok::LParen, "(", l, co); advance(1); continue;
      case ')': push(Tok::RParen, ")", l, co); advance(1); continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l,
                         co);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_proof_tag(std::string_view s) {
  return s == "triv" || s == "weak" || s == "ded" || s == "mp" || s == "dn" ||
         s == "lam" || s == "br";
}

bool is_step_tag(std::string_view s) {
  return s == "underlam" || s == "intofun" || s == "intoarg";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ParsedUnit run() {
    parse_preamble();
    if (at(Tok::LParen) && peek_ahead_is_proof_tag()) {
      DerivPtr d = parse_derivation_node();
      expect(Tok::End, "end of file after the derivation");
      return ParsedUnit{decls_, d};
    }
    if (at(Tok::Turnstile)) {
      next();
      Term c = parse_term();
      expect(Tok::End, "end of file after the sequent");
      return ParsedUnit{decls_, Sequent({}, c)};
    }
    Term first = parse_term();
    if (at(Tok::End)) return ParsedUnit{decls_, first};
    std::vector<Term> assumptions = {first};
    while (at(Tok::Comma)) {
      next();
      assumptions.push_back(parse_term());
    }
    expect(Tok::Turnstile, "'|-' in a sequent");
    Term c = parse_term();
    expect(Tok::End, "end of file after the sequent");
    try {
      return ParsedUnit{decls_, Sequent(std::move(assumptions), c)};
    } catch (const TypeError& e) {
      throw ParseError(std::string("ill-typed sequent: ") + e.what(),
                       cur().line, cur().col);
    }
  }

  TypeExpr run_type() {
    TypeExpr t = parse_type();
    expect(Tok::End, "end of input after the type");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Declarations decls_;
  std::vector<VarName> lam_scope_;   // lambda binders, innermost last
  std::vector<VarName> path_scope_;  // underlam binders of the current path

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_ident(std::string_view s) const {
    return cur().kind == Tok::Ident && cur().text == s;
  }
  const Token& next() { return toks_[pos_++]; }
  void expect(Tok k, const std::string& what) {
    if (!at(k))
      throw ParseError("expected " + what + ", got '" + std::string(cur().text) + "'",
                       cur().line, cur().col);
    next();
  }
  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }

  bool peek_ahead_is_proof_tag() const {
    return pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Ident &&
           is_proof_tag(toks_[pos_ + 1].text);
  }

  // -- preamble ---------------------------------------------------------

  void parse_preamble() {
    while (at_ident("var")) {
      next();
      if (!at(Tok::Ident)) error("expected an identifier after 'var'");
      Token name = next();
      if (is_reserved_word(std::string(name.text)))
        throw ParseError("'" + std::string(name.text) + "' is reserved and cannot be declared",
                         name.line, name.col);
      if (decls_.lookup(std::string(name.text)))
        throw ParseError("duplicate declaration of '" + std::string(name.text) + "'",
                         name.line, name.col);
      expect(Tok::Colon, "':' in a declaration");
      TypeExpr t = parse_type();
      expect(Tok::Dot, "'.' after a declaration");
      decls_.vars.emplace_back(std::string(name.text), t);
    }
  }

  // -- types --------------------------------------------------------------

  TypeExpr parse_type() {
    TypeExpr left = parse_type_atom();
    if (at(Tok::Arrow)) {
      next();
      return TypeExpr::arrow(left, parse_type());
    }
    return left;
  }

  TypeExpr parse_type_atom() {
    if (at_ident("B")) {
      next();
      return TypeExpr::base();
    }
    if (at(Tok::LParen)) {
      next();
      TypeExpr t = parse_type();
      expect(Tok::RParen, "')' in a type");
      return t;
    }
    error("expected a type");
  }

  // -- terms ----------------------------------------------------------------

  std::optional<VarName> resolve(std::string_view id) const {
    for (auto it = lam_scope_.rbegin(); it != lam_scope_.rend(); ++it)
      if (it->id == id) return *it;
    for (auto it = path_scope_.rbegin(); it != path_scope_.rend(); ++it)
      if (it->id == id) return *it;
    for (const auto& v : decls_.vars)
      if (v.id == id) return v;
    return std::nullopt;
  }

  Term parse_term() {
    if (at(Tok::Lambda)) {
      next();
      VarName binder = parse_binder();
      lam_scope_.push_back(binder);
      Term body = parse_term();
      lam_scope_.pop_back();
      return Term::lam(binder, body);
    }
    if (at_ident("forall")) {
      Token kw = cur();
      next();
      VarName binder = parse_binder();
      lam_scope_.push_back(binder);
      Term body = parse_term();
      lam_scope_.pop_back();
      if (!body.type().is_base())
        throw ParseError("forall body must be a formula", kw.line, kw.col);
      return forall_formula(binder, body);
    }
    return parse_iff();
  }

  VarName parse_binder() {
    if (!at(Tok::Ident)) error("expected a binder identifier");
    Token name = next();
    if (is_reserved_word(std::string(name.text)))
      throw ParseError("'" + std::string(name.text) + "' is reserved and cannot bind",
                       name.line, name.col);
    expect(Tok::Colon, "':' after the binder");
    TypeExpr t = parse_type();
    expect(Tok::Dot, "'.' after the binder type");
    return VarName(std::string(name.text), t);
  }

  Term mk_imp(const Term& a, const Term& b, const Token& where) {
    try {
      return Term::imp(a, b);
    } catch (const TypeError& e) {
      throw ParseError(std::string("ill-typed '=>': ") + e.what(), where.line,
                       where.col);
    }
  }

  // A binder may start the right operand of a binary connective and then
  // extends as far right as possible.
  Term parse_rhs(Term (Parser::*cont)()) {
    if (at(Tok::Lambda) || at_ident("forall")) return parse_term();
    return (this->*cont)();
  }

  Term parse_iff() {
    Term left = parse_imp();
    if (at(Tok::Iff)) {
      Token op = next();
      Term right = parse_rhs(&Parser::parse_iff);
      try {
        return equiv(left, right);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed '<=>': ") + e.what(), op.line,
                         op.col);
      }
    }
    return left;
  }

  Term parse_imp() {
    Term left = parse_or();
    if (at(Tok::FatArrow)) {
      Token op = next();
      return mk_imp(left, parse_rhs(&Parser::parse_imp), op);
    }
    return left;
  }

  Term parse_or() {
    Term left = parse_and();
    if (at(Tok::OrOp)) {
      Token op = next();
      Term right = parse_rhs(&Parser::parse_or);
      try {
        return disj(left, right);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed '\\/': ") + e.what(), op.line,
                         op.col);
      }
    }
    return left;
  }

  Term parse_and() {
    Term left = parse_unary();
    if (at(Tok::AndOp)) {
      Token op = next();
      Term right = parse_rhs(&Parser::parse_and);
      try {
        return conj(left, right);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed '/\\': ") + e.what(), op.line,
                         op.col);
      }
    }
    return left;
  }

  Term parse_unary() {
    if (at(Tok::Tilde)) {
      Token op = next();
      Term s = parse_unary();
      try {
        return neg(s);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed '~': ") + e.what(), op.line,
                         op.col);
      }
    }
    return parse_eq();
  }

  Term parse_eq() {
    Term left = parse_app();
    while (at(Tok::EqEq)) {
      Token op = next();
      Term right = parse_app();
      try {
        left = eq_formula(left, right);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed '==': ") + e.what(), op.line,
                         op.col);
      }
    }
    return left;
  }

  bool atom_starts_here() const {
    if (at(Tok::Ident))
      return !is_proof_tag(cur().text) && !is_step_tag(cur().text) &&
             cur().text != "var";
    if (at(Tok::LParen)) {
      // Inside proof files a parenthesis may open a sibling node rather
      // than a parenthesized argument.
      if (pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Ident &&
          (is_proof_tag(toks_[pos_ + 1].text) ||
           is_step_tag(toks_[pos_ + 1].text)))
        return false;
      return true;
    }
    return false;
  }

  Term parse_app() {
    Term t = parse_atom();
    while (atom_starts_here()) {
      Token where = cur();
      Term a = parse_atom();
      try {
        t = Term::app(t, a);
      } catch (const TypeError& e) {
        throw ParseError(std::string("ill-typed application: ") + e.what(),
                         where.line, where.col);
      }
    }
    return t;
  }

  Term parse_atom() {
    if (at(Tok::LParen)) {
      next();
      Term t = parse_term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (!at(Tok::Ident)) error("expected a term");
    Token name = next();
    if (name.text == "bot") return Term::bot();
    if (name.text == "top") return top_term();
    if (name.text == "imp") return Term::imp_const();
    if (is_reserved_word(std::string(name.text)))
      throw ParseError("'" + std::string(name.text) + "' cannot appear in a term",
                       name.line, name.col);
    auto v = resolve(name.text);
    if (!v)
      throw TypeError("undeclared identifier '" + std::string(name.text) + "' (line " +
                      std::to_string(name.line) + ", column " +
                      std::to_string(name.col) + ")");
    return Term::var(*v);
  }

  // -- derivations ------------------------------------------------------

 public:
  DerivPtr parse_derivation_node() {
    expect(Tok::LParen, "'(' opening a derivation node");
    if (!at(Tok::Ident) || !is_proof_tag(cur().text))
      error("expected a derivation rule tag");
    Token tag = next();
    DerivPtr result;
    if (tag.text == "triv") {
      std::vector<Term> assumptions = parse_term_list();
      Term s = parse_term();
      result = make_sequent_node(Rule::Triv, assumptions, s, tag);
    } else if (tag.text == "weak") {
      Term s = parse_term();
      DerivPtr d = parse_derivation_node();
      result = Derivation::raw(Rule::Weak, d->conclusion().with(s), {d}, s);
    } else if (tag.text == "ded") {
      Term s = parse_term();
      DerivPtr d = parse_derivation_node();
      Sequent concl = d->conclusion().without(s).but(
          Term::imp(s, d->conclusion().conclusion()));
      result = Derivation::raw(Rule::Ded, std::move(concl), {d}, std::nullopt, s);
    } else if (tag.text == "mp") {
      DerivPtr d1 = parse_derivation_node();
      DerivPtr d2 = parse_derivation_node();
      const Term& f = d1->conclusion().conclusion();
      if (!f.is_imp_app())
        throw ParseError("mp: first premise is not an implication", tag.line,
                         tag.col);
      result = Derivation::raw(Rule::MP, d1->conclusion().but(f.imp_rhs()),
                               {d1, d2});
    } else if (tag.text == "dn") {
      DerivPtr d = parse_derivation_node();
      const Term& f = d->conclusion().conclusion();
      if (!f.is_imp_app() || f.imp_rhs() != Term::bot() ||
          !f.imp_lhs().is_imp_app() || f.imp_lhs().imp_rhs() != Term::bot())
        throw ParseError("dn: premise is not a double negation", tag.line,
                         tag.col);
      result = Derivation::raw(Rule::DN,
                               d->conclusion().but(f.imp_lhs().imp_lhs()), {d});
    } else if (tag.text == "lam") {
      Term t = parse_term();
      DerivPtr d = parse_derivation_node();
      result = Derivation::raw(Rule::Lam, d->conclusion().but(t), {d});
    } else {  // br
      ContextPath path = parse_context_path();
      size_t pushed = 0;
      for (const auto& step : path)
        if (step.kind == ContextStep::Kind::UnderLam) {
          path_scope_.push_back(*step.binder);
          ++pushed;
        }
      Term s = parse_delimited_term();
      Term t = parse_delimited_term();
      for (size_t k = 0; k < pushed; ++k) path_scope_.pop_back();
      DerivPtr d_eq = parse_derivation_node();
      DerivPtr d_body = parse_derivation_node();
      Sequent concl = [&] {
        try {
          return d_body->conclusion().but(plug(path, t));
        } catch (const TypeError& e) {
          throw ParseError(std::string("br: ill-typed replacement: ") +
                               e.what(),
                           tag.line, tag.col);
        }
      }();
      result = Derivation::raw(Rule::BR, std::move(concl), {d_eq, d_body},
                               std::nullopt, std::nullopt,
                               BrPayload{std::move(path), s, t});
    }
    expect(Tok::RParen, "')' closing the derivation node");
    return result;
  }

 private:
  DerivPtr make_sequent_node(Rule rule, std::vector<Term> assumptions,
                             const Term& s, const Token& where) {
    try {
      return Derivation::raw(rule, Sequent(std::move(assumptions), s), {});
    } catch (const TypeError& e) {
      throw ParseError(std::string("ill-typed sequent: ") + e.what(),
                       where.line, where.col);
    }
  }

  std::vector<Term> parse_term_list() {
    expect(Tok::LParen, "'(' opening an assumption list");
    std::vector<Term> out;
    if (at(Tok::RParen)) {
      next();
      return out;
    }
    out.push_back(parse_term());
    while (at(Tok::Comma)) {
      next();
      out.push_back(parse_term());
    }
    expect(Tok::RParen, "')' closing an assumption list");
    return out;
  }

  Term parse_delimited_term() {
    expect(Tok::LParen, "'(' opening a term");
    Term t = parse_term();
    expect(Tok::RParen, "')' closing a term");
    return t;
  }

  ContextPath parse_context_path() {
    expect(Tok::LParen, "'(' opening a context path");
    ContextPath path;
    size_t pushed = 0;
    while (at(Tok::LParen)) {
      next();
      if (!at(Tok::Ident) || !is_step_tag(cur().text))
        error("expected a context step tag");
      Token tag = next();
      if (tag.text == "underlam") {
        if (!at(Tok::Ident)) error("expected a binder identifier");
        Token name = next();
        expect(Tok::Colon, "':' in an underlam step");
        TypeExpr ty = parse_type();
        VarName binder = [&] {
          try {
            return VarName(std::string(name.text), ty);
          } catch (const TypeError& e) {
            throw ParseError(e.what(), name.line, name.col);
          }
        }();
        path.push_back(ContextStep::under_lam(binder));
        path_scope_.push_back(binder);
        ++pushed;
      } else if (tag.text == "intofun") {
        path.push_back(ContextStep::into_fun(parse_term()));
      } else {
        path.push_back(ContextStep::into_arg(parse_term()));
      }
      expect(Tok::RParen, "')' closing a context step");
    }
    expect(Tok::RParen, "')' closing a context path");
    for (size_t k = 0; k < pushed; ++k) path_scope_.pop_back();
    return path;
  }
};

}  // namespace

std::optional<VarName> Declarations::lookup(const std::string& id) const {
  for (const auto& v : vars)
    if (v.id == id) return v;
  return std::nullopt;
}

TypeExpr parse_type(const std::string& text) {
  return Parser(text).run_type();
}

ParsedUnit parse_unit(const std::string& text) { return Parser(text).run(); }

Term parse_term_file(const std::string& text) {
  ParsedUnit u = parse_unit(text);
  if (!u.is_term()) throw ParseError("expected a term body");
  return u.term();
}

Sequent parse_sequent_file(const std::string& text) {
  ParsedUnit u = parse_unit(text);
  if (u.is_term()) return Sequent({}, u.term());
  if (!u.is_sequent()) throw ParseError("expected a sequent body");
  return u.sequent();
}

DerivPtr parse_derivation_file(const std::string& text) {
  ParsedUnit u = parse_unit(text);
  if (!u.is_derivation()) throw ParseError("expected a derivation body");
  return u.derivation();
}

namespace {

struct ValueParser {
  const std::string& src;
  size_t i = 0;

  void skip() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i])))
      ++i;
  }

  [[noreturn]] void error(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(i) +
                     " in value literal '" + src + "'");
  }

  Value parse(const TypeExpr& type, std::uint64_t guard) {
    skip();
    if (type.is_base()) {
      if (i < src.size() && (src[i] == '0' || src[i] == '1'))
        return Value::bit(src[i++] - '0');
      error("expected '0' or '1'");
    }
    if (i >= src.size() || src[i] != '[') error("expected '['");
    ++i;
    std::uint64_t n = value_count(type.domain(), guard);
    std::vector<Value> entries;
    for (std::uint64_t k = 0; k < n; ++k) {
      if (k) {
        skip();
        if (i >= src.size() || src[i] != ',') error("expected ','");
        ++i;
      }
      entries.push_back(parse(type.codomain(), guard));
    }
    skip();
    if (i >= src.size() || src[i] != ']') error("expected ']'");
    ++i;
    return Value::table(type.domain(), std::move(entries));
  }
};

}  // namespace

Value parse_value(const std::string& text, const TypeExpr& type,
                  std::uint64_t guard) {
  ValueParser p{text};
  Value v = p.parse(type, guard);
  p.skip();
  if (p.i != text.size())
    throw ParseError("trailing characters in value literal '" + text + "'");
  return v;
}

}  // namespace ptt
