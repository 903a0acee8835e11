#include "dialectica/fol_text.hpp"

#include <cctype>
#include <sstream>

namespace dialectica::fol {

namespace {

enum class Tok { Ident, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Symbol, "->", i});
      i += 2;
      continue;
    }
    static const std::string_view singles = "()<>,.:&|~*@\\1";
    if (singles.find(c) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "exists" || s == "forall" || s == "true" || s == "false" || s == "fst" || s == "snd";
}

class Parser {
 public:
  Parser(std::string_view src, const Signature& sig, std::vector<Var> context, ParseOptions options)
      : tokens_(tokenize(src)), sig_(sig), scope_(std::move(context)), options_(options) {}

  Formula whole_formula() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Sort whole_sort() {
    Sort s = sort();
    expect_end();
    return s;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(std::string_view sym) const { return peek().kind != Tok::End && peek().text == sym; }
  bool at_ident() const { return peek().kind == Tok::Ident && !is_keyword(peek().text); }
  Token take() { return tokens_[pos_++]; }

  void expect(std::string_view sym) {
    if (!at(sym)) fail("expected '" + std::string(sym) + "'");
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
    throw ParseError(what + ", found " + found, peek().pos);
  }

  std::string identifier(const char* role) {
    if (!at_ident()) fail(std::string("expected ") + role);
    return take().text;
  }

  // -- sorts ---------------------------------------------------------------

  Sort sort() {
    Sort s = sort_factor();
    if (at("->")) {
      ++pos_;
      return Sort::function(s, sort());
    }
    return s;
  }

  Sort sort_factor() {
    Sort s = sort_atom();
    if (at("*")) {
      ++pos_;
      return Sort::product(s, sort_factor());
    }
    return s;
  }

  Sort sort_atom() {
    if (at("1")) {
      ++pos_;
      return Sort::unit();
    }
    if (at("(")) {
      ++pos_;
      Sort s = sort();
      expect(")");
      return s;
    }
    std::size_t where = peek().pos;
    std::string name = identifier("sort");
    if (!sig_.has_sort(name)) {
      if (!options_.infer_symbols) throw ParseError("unknown sort " + name, where);
      sig_.add_sort(name);
    }
    return Sort::base(name);
  }

  // -- terms ---------------------------------------------------------------

  const Var* lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  std::vector<Term> argument_list() {
    std::vector<Term> args;
    expect("(");
    if (!at(")")) {
      args.push_back(term());
      while (at(",")) {
        ++pos_;
        args.push_back(term());
      }
    }
    expect(")");
    return args;
  }

  Term term() {
    Term t = term_primary();
    while (at("@")) {
      std::size_t where = peek().pos;
      ++pos_;
      Term arg = term_primary();
      try {
        t = Term::eval(t, arg);
      } catch (const SortError& e) {
        throw SortError(std::string("sort error at ") + std::to_string(where) + ": " + e.what());
      }
    }
    return t;
  }

  Term term_primary() {
    std::size_t where = peek().pos;
    if (at("<")) {
      ++pos_;
      Term a = term();
      expect(",");
      Term b = term();
      expect(">");
      return Term::pair(a, b);
    }
    if (at("(")) {
      ++pos_;
      Term t = term();
      expect(")");
      return t;
    }
    if (at("\\")) {
      ++pos_;
      std::string name = identifier("variable");
      expect(":");
      Sort s = sort();
      expect(".");
      scope_.push_back(Var{name, s});
      Term body = term();
      scope_.pop_back();
      return Term::lambda(Var{name, s}, body);
    }
    if (peek().kind == Tok::Ident && (peek().text == "fst" || peek().text == "snd")) {
      bool first = take().text == "fst";
      expect("(");
      Term t = term();
      expect(")");
      try {
        return first ? Term::first(t) : Term::second(t);
      } catch (const SortError& e) {
        throw SortError(std::string("sort error at ") + std::to_string(where) + ": " + e.what());
      }
    }
    std::string name = identifier("term");
    if (const Var* v = lookup(name)) {
      if (at("(")) throw ParseError("variable " + name + " cannot take an argument list; use '@'", peek().pos);
      return Term::variable(*v);
    }
    const FunctionDecl* fn = sig_.function(name);
    if (!fn) throw ParseError("unknown identifier " + name, where);
    std::vector<Term> args;
    if (at("(")) args = argument_list();
    check_arguments(name, fn->args, args, where);
    return Term::apply(name, std::move(args), fn->result);
  }

  void check_arguments(const std::string& symbol, const std::vector<Sort>& expected, const std::vector<Term>& args,
                       std::size_t where) const {
    if (expected.size() != args.size())
      throw SortError("sort error at " + std::to_string(where) + ": " + symbol + " expects " +
                      std::to_string(expected.size()) + " argument(s), got " + std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].sort() != expected[i])
        throw SortError("sort error at " + std::to_string(where) + ": argument " + std::to_string(i + 1) + " of " +
                        symbol + ": term '" + to_string(args[i]) + "' has sort " + to_string(args[i].sort()) +
                        ", expected " + to_string(expected[i]));
    }
  }

  // -- formulas ------------------------------------------------------------

  Formula formula() {
    Formula lhs = disjunction();
    if (at("->")) {
      ++pos_;
      return Formula::implies(lhs, formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at("|")) {
      ++pos_;
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at("&")) {
      ++pos_;
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    if (at("~")) {
      ++pos_;
      return Formula::negation(unary());
    }
    if (peek().kind == Tok::Ident && (peek().text == "exists" || peek().text == "forall")) {
      bool existential = take().text == "exists";
      std::vector<Var> binders;
      do {
        if (!binders.empty()) ++pos_;  // ','
        std::string name = identifier("bound variable");
        expect(":");
        binders.push_back(Var{name, sort()});
      } while (at(","));
      expect(".");
      for (const auto& v : binders) scope_.push_back(v);
      Formula body = formula();
      scope_.resize(scope_.size() - binders.size());
      return existential ? exists_block(binders, body) : forall_block(binders, body);
    }
    if (peek().kind == Tok::Ident && peek().text == "true") {
      ++pos_;
      return Formula::top();
    }
    if (peek().kind == Tok::Ident && peek().text == "false") {
      ++pos_;
      return Formula::bottom();
    }
    if (at("(")) {
      ++pos_;
      Formula f = formula();
      expect(")");
      return f;
    }
    std::size_t where = peek().pos;
    std::string name = identifier("formula");
    std::vector<Term> args;
    if (at("(")) args = argument_list();
    const PredicateDecl* decl = sig_.predicate(name);
    if (!decl) {
      if (!options_.infer_symbols) throw ParseError("unknown predicate " + name, where);
      PredicateDecl inferred{name, {}};
      for (const auto& a : args) inferred.args.push_back(a.sort());
      sig_.add_predicate(inferred);
      decl = sig_.predicate(name);
    }
    check_arguments(name, decl->args, args, where);
    return Formula::atom(name, std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Signature sig_;
  std::vector<Var> scope_;
  ParseOptions options_;
};

// -- printing ---------------------------------------------------------------

std::string sort_text(const Sort& s) {
  switch (s.kind()) {
    case Sort::Kind::Unit:
      return "1";
    case Sort::Kind::Base:
      return s.name();
    case Sort::Kind::Product: {
      std::string l = sort_text(s.left());
      if (s.left().kind() == Sort::Kind::Product || s.left().kind() == Sort::Kind::Function) l = "(" + l + ")";
      std::string r = sort_text(s.right());
      if (s.right().kind() == Sort::Kind::Function) r = "(" + r + ")";
      return l + " * " + r;
    }
    case Sort::Kind::Function: {
      std::string d = sort_text(s.domain());
      if (s.domain().kind() == Sort::Kind::Function) d = "(" + d + ")";
      return d + " -> " + sort_text(s.codomain());
    }
  }
  return "?";
}

std::string term_text(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      return t.var().name;
    case Term::Kind::Apply: {
      if (t.children().empty()) return t.symbol();
      std::string out = t.symbol() + "(";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ", ";
        out += term_text(t.children()[i]);
      }
      return out + ")";
    }
    case Term::Kind::Pair:
      return "<" + term_text(t.children()[0]) + ", " + term_text(t.children()[1]) + ">";
    case Term::Kind::First:
      return "fst(" + term_text(t.children()[0]) + ")";
    case Term::Kind::Second:
      return "snd(" + term_text(t.children()[0]) + ")";
    case Term::Kind::Lambda:
      return "(\\" + t.var().name + ":" + sort_text(t.var().sort) + ". " + term_text(t.children()[0]) + ")";
    case Term::Kind::Eval: {
      std::string arg = term_text(t.children()[1]);
      if (t.children()[1].kind() == Term::Kind::Eval) arg = "(" + arg + ")";
      return term_text(t.children()[0]) + " @ " + arg;
    }
  }
  return "?";
}

// Precedence: quantifier 0, implication 1, disjunction 2, conjunction 3, negation 4.
std::string formula_text(const Formula& f, int context) {
  auto wrap = [&](int own, std::string s) { return context > own ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (f.terms().empty()) return f.predicate();
      std::string out = f.predicate() + "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ", ";
        out += term_text(f.terms()[i]);
      }
      return out + ")";
    }
    case Formula::Kind::Top:
      return "true";
    case Formula::Kind::Bottom:
      return "false";
    case Formula::Kind::Implies:
      if (f.is_negation()) return "~" + formula_text(f.lhs(), 5);
      return wrap(1, formula_text(f.lhs(), 2) + " -> " + formula_text(f.rhs(), 1));
    case Formula::Kind::Or:
      return wrap(2, formula_text(f.lhs(), 2) + " | " + formula_text(f.rhs(), 3));
    case Formula::Kind::And:
      return wrap(3, formula_text(f.lhs(), 3) + " & " + formula_text(f.rhs(), 4));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      Formula::Kind k = f.kind();
      std::string out = k == Formula::Kind::Exists ? "exists " : "forall ";
      const Formula* cur = &f;
      bool first = true;
      while (cur->kind() == k) {
        if (!first) out += ", ";
        first = false;
        out += cur->bound().name + ":" + sort_text(cur->bound().sort);
        cur = &cur->body();
      }
      return wrap(0, out + ". " + formula_text(*cur, 0));
    }
  }
  return "?";
}

std::string sort_latex(const Sort& s) {
  switch (s.kind()) {
    case Sort::Kind::Unit:
      return "1";
    case Sort::Kind::Base:
      return s.name();
    case Sort::Kind::Product: {
      std::string l = sort_latex(s.left());
      if (s.left().kind() != Sort::Kind::Base && s.left().kind() != Sort::Kind::Unit) l = "(" + l + ")";
      std::string r = sort_latex(s.right());
      if (s.right().kind() == Sort::Kind::Function) r = "(" + r + ")";
      return l + " \\times " + r;
    }
    case Sort::Kind::Function: {
      std::string d = sort_latex(s.domain());
      if (s.domain().kind() == Sort::Kind::Function) d = "(" + d + ")";
      return d + " \\to " + sort_latex(s.codomain());
    }
  }
  return "?";
}

// Arguments of an evaluation print as the flattened tuple: X(u,y).
void flatten_pairs(const Term& t, std::vector<Term>& out) {
  if (t.kind() == Term::Kind::Pair) {
    flatten_pairs(t.children()[0], out);
    flatten_pairs(t.children()[1], out);
  } else {
    out.push_back(t);
  }
}

std::string term_latex(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      return t.var().name;
    case Term::Kind::Apply: {
      if (t.children().empty()) return t.symbol();
      std::string out = t.symbol() + "(";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ",";
        out += term_latex(t.children()[i]);
      }
      return out + ")";
    }
    case Term::Kind::Pair:
      return "\\langle " + term_latex(t.children()[0]) + "," + term_latex(t.children()[1]) + "\\rangle";
    case Term::Kind::First:
      return "\\pi_1(" + term_latex(t.children()[0]) + ")";
    case Term::Kind::Second:
      return "\\pi_2(" + term_latex(t.children()[0]) + ")";
    case Term::Kind::Lambda:
      return "(\\lambda " + t.var().name + "." + term_latex(t.children()[0]) + ")";
    case Term::Kind::Eval: {
      std::vector<Term> args;
      flatten_pairs(t.children()[1], args);
      std::string out = term_latex(t.children()[0]) + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += term_latex(args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string formula_latex(const Formula& f, int context) {
  auto wrap = [&](int own, std::string s) { return context > own ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (f.terms().empty()) return f.predicate();
      std::string out = f.predicate() + "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ",";
        out += term_latex(f.terms()[i]);
      }
      return out + ")";
    }
    case Formula::Kind::Top:
      return "\\top";
    case Formula::Kind::Bottom:
      return "\\bot";
    case Formula::Kind::Implies:
      if (f.is_negation()) return "\\neg " + formula_latex(f.lhs(), 5);
      return wrap(1, formula_latex(f.lhs(), 2) + "\\rightarrow " + formula_latex(f.rhs(), 1));
    case Formula::Kind::Or:
      return wrap(2, formula_latex(f.lhs(), 2) + "\\vee " + formula_latex(f.rhs(), 3));
    case Formula::Kind::And:
      return wrap(3, formula_latex(f.lhs(), 3) + "\\wedge " + formula_latex(f.rhs(), 4));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      Formula::Kind k = f.kind();
      std::string out = k == Formula::Kind::Exists ? "\\exists " : "\\forall ";
      const Formula* cur = &f;
      bool first = true;
      while (cur->kind() == k) {
        if (!first) out += ",";
        first = false;
        out += cur->bound().name;
        cur = &cur->body();
      }
      return wrap(0, out + ".\\," + formula_latex(*cur, 0));
    }
  }
  return "?";
}

}  // namespace

Formula parse_formula(std::string_view src, const Signature& sig, const std::vector<Var>& context,
                      ParseOptions options) {
  return Parser(src, sig, context, options).whole_formula();
}

Term parse_term(std::string_view src, const Signature& sig, const std::vector<Var>& context) {
  return Parser(src, sig, context, {}).whole_term();
}

Sort parse_sort(std::string_view src) {
  Signature any;
  return Parser(src, any, {}, ParseOptions{true}).whole_sort();
}

std::string to_string(const Sort& s) { return sort_text(s); }
std::string to_string(const Term& t) { return term_text(t); }
std::string to_string(const Formula& f) { return formula_text(f, 0); }
std::string to_string(const Var& v) { return v.name + ":" + sort_text(v.sort); }

std::string to_latex(const Sort& s) { return sort_latex(s); }
std::string to_latex(const Term& t) { return term_latex(t); }
std::string to_latex(const Formula& f) { return formula_latex(f, 0); }

namespace {

Sort declared_sort(const Signature& sig, const std::string& text) {
  Sort s = parse_sort(text);
  // parse_sort accepts any base name; check against the signature here.
  std::vector<Sort> stack{s};
  while (!stack.empty()) {
    Sort cur = stack.back();
    stack.pop_back();
    if (cur.kind() == Sort::Kind::Base && !sig.has_sort(cur.name())) throw SortError("unknown sort " + cur.name());
    if (cur.kind() == Sort::Kind::Product || cur.kind() == Sort::Kind::Function) {
      stack.push_back(cur.left());
      stack.push_back(cur.right());
    }
  }
  return s;
}

}  // namespace

Signature signature_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error("signature must be a JSON object");
  Signature sig;
  for (const auto& s : doc.value("sorts", nlohmann::json::array())) sig.add_sort(s.get<std::string>());
  for (const auto& p : doc.value("predicates", nlohmann::json::array())) {
    PredicateDecl decl{p.at("name").get<std::string>(), {}};
    for (const auto& a : p.value("args", nlohmann::json::array()))
      decl.args.push_back(declared_sort(sig, a.get<std::string>()));
    sig.add_predicate(std::move(decl));
  }
  for (const auto& f : doc.value("functions", nlohmann::json::array())) {
    FunctionDecl decl{f.at("name").get<std::string>(), {}, declared_sort(sig, f.at("result").get<std::string>())};
    for (const auto& a : f.value("args", nlohmann::json::array()))
      decl.args.push_back(declared_sort(sig, a.get<std::string>()));
    sig.add_function(std::move(decl));
  }
  return sig;
}

nlohmann::json to_json(const Signature& sig) {
  nlohmann::json doc;
  doc["sorts"] = nlohmann::json::array();
  for (const auto& s : sig.sorts()) doc["sorts"].push_back(s);
  doc["predicates"] = nlohmann::json::array();
  for (const auto& [name, decl] : sig.predicates()) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& a : decl.args) args.push_back(to_string(a));
    doc["predicates"].push_back({{"name", name}, {"args", args}});
  }
  doc["functions"] = nlohmann::json::array();
  for (const auto& [name, decl] : sig.functions()) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& a : decl.args) args.push_back(to_string(a));
    doc["functions"].push_back({{"name", name}, {"args", args}, {"result", to_string(decl.result)}});
  }
  return doc;
}

}  // namespace dialectica::fol
