#include "dialectica/fol.hpp"

#include <algorithm>

#include "dialectica/fol_text.hpp"

namespace dialectica::fol {

// ---------------------------------------------------------------------------
// Sort

struct Sort::Node {
  Kind kind;
  std::string name;
  std::vector<Sort> children;
};

Sort::Sort() : node_(nullptr) {}

Sort Sort::base(std::string name) {
  if (name.empty()) throw SortError("base sort needs a name");
  return Sort(std::make_shared<const Node>(Node{Kind::Base, std::move(name), {}}));
}

Sort Sort::product(Sort left, Sort right) {
  return Sort(std::make_shared<const Node>(Node{Kind::Product, {}, {std::move(left), std::move(right)}}));
}

Sort Sort::function(Sort domain, Sort codomain) {
  return Sort(std::make_shared<const Node>(Node{Kind::Function, {}, {std::move(domain), std::move(codomain)}}));
}

Sort::Kind Sort::kind() const noexcept { return node_ ? node_->kind : Kind::Unit; }

const std::string& Sort::name() const {
  if (kind() != Kind::Base) throw SortError("sort " + to_string(*this) + " is not a base sort");
  return node_->name;
}

const Sort& Sort::left() const {
  if (kind() != Kind::Product && kind() != Kind::Function)
    throw SortError("sort " + to_string(*this) + " has no components");
  return node_->children[0];
}

const Sort& Sort::right() const {
  if (kind() != Kind::Product && kind() != Kind::Function)
    throw SortError("sort " + to_string(*this) + " has no components");
  return node_->children[1];
}

bool operator==(const Sort& a, const Sort& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Sort::Kind::Unit:
      return true;
    case Sort::Kind::Base:
      return a.node_->name == b.node_->name;
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  Sort sort;
  Var var;
  std::string symbol;
  std::vector<Term> children;
};

Term Term::variable(Var v) {
  Sort s = v.sort;
  return Term(std::make_shared<const Node>(Node{Kind::Variable, std::move(s), std::move(v), {}, {}}));
}

Term Term::apply(std::string symbol, std::vector<Term> args, Sort result) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Apply, std::move(result), Var{}, std::move(symbol), std::move(args)}));
}

Term Term::pair(Term first, Term second) {
  Sort s = Sort::product(first.sort(), second.sort());
  return Term(std::make_shared<const Node>(Node{Kind::Pair, std::move(s), Var{}, {}, {std::move(first), std::move(second)}}));
}

Term Term::first(Term t) {
  if (!t.sort().is_product()) throw SortError("fst applied to '" + to_string(t) + "' of non-product sort " + to_string(t.sort()));
  Sort s = t.sort().left();
  return Term(std::make_shared<const Node>(Node{Kind::First, std::move(s), Var{}, {}, {std::move(t)}}));
}

Term Term::second(Term t) {
  if (!t.sort().is_product()) throw SortError("snd applied to '" + to_string(t) + "' of non-product sort " + to_string(t.sort()));
  Sort s = t.sort().right();
  return Term(std::make_shared<const Node>(Node{Kind::Second, std::move(s), Var{}, {}, {std::move(t)}}));
}

Term Term::lambda(Var param, Term body) {
  Sort s = Sort::function(param.sort, body.sort());
  return Term(std::make_shared<const Node>(Node{Kind::Lambda, std::move(s), std::move(param), {}, {std::move(body)}}));
}

Term Term::eval(Term fn, Term arg) {
  if (!fn.sort().is_function())
    throw SortError("evaluation head '" + to_string(fn) + "' has non-function sort " + to_string(fn.sort()));
  if (fn.sort().domain() != arg.sort())
    throw SortError("argument '" + to_string(arg) + "' has sort " + to_string(arg.sort()) + ", expected " +
                    to_string(fn.sort().domain()));
  Sort s = fn.sort().codomain();
  return Term(std::make_shared<const Node>(Node{Kind::Eval, std::move(s), Var{}, {}, {std::move(fn), std::move(arg)}}));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }
const Sort& Term::sort() const noexcept { return node_->sort; }
const std::vector<Term>& Term::children() const noexcept { return node_->children; }

const Var& Term::var() const {
  if (kind() != Kind::Variable && kind() != Kind::Lambda) throw Error("term has no variable");
  return node_->var;
}

const std::string& Term::symbol() const {
  if (kind() != Kind::Apply) throw Error("term is not a function application");
  return node_->symbol;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string predicate;
  std::vector<Term> terms;
  Var bound;
  std::vector<Formula> children;
};

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(predicate), std::move(args), Var{}, {}}));
}

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{Kind::Top, {}, {}, Var{}, {}}));
  return t;
}

Formula Formula::bottom() {
  static const Formula b(std::make_shared<const Node>(Node{Kind::Bottom, {}, {}, Var{}, {}}));
  return b;
}

Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, {}, Var{}, {std::move(a), std::move(b)}}));
}

Formula Formula::disj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, Var{}, {std::move(a), std::move(b)}}));
}

Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Kind::Implies, {}, {}, Var{}, {std::move(a), std::move(b)}}));
}

Formula Formula::exists(Var v, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Kind::Exists, {}, {}, std::move(v), {std::move(body)}}));
}

Formula Formula::forall(Var v, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Kind::Forall, {}, {}, std::move(v), {std::move(body)}}));
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

bool Formula::is_negation() const noexcept {
  return kind() == Kind::Implies && node_->children[1].kind() == Kind::Bottom;
}

const std::string& Formula::predicate() const {
  if (kind() != Kind::Atom) throw Error("formula is not atomic");
  return node_->predicate;
}

const std::vector<Term>& Formula::terms() const {
  if (kind() != Kind::Atom) throw Error("formula is not atomic");
  return node_->terms;
}

const Formula& Formula::lhs() const {
  if (node_->children.size() != 2) throw Error("formula is not a binary connective");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (node_->children.size() != 2) throw Error("formula is not a binary connective");
  return node_->children[1];
}

const Var& Formula::bound() const {
  if (!is_quantifier()) throw Error("formula is not quantified");
  return node_->bound;
}

const Formula& Formula::body() const {
  if (!is_quantifier()) throw Error("formula is not quantified");
  return node_->children[0];
}

Formula exists_block(const std::vector<Var>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, std::move(body));
  return body;
}

Formula forall_block(const std::vector<Var>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, std::move(body));
  return body;
}

// ---------------------------------------------------------------------------
// Free variables and names

namespace {

void collect_free(const Term& t, std::set<std::string>& bound, std::map<std::string, Sort>& out) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      if (!bound.count(t.var().name)) out.emplace(t.var().name, t.var().sort);
      return;
    case Term::Kind::Lambda: {
      bool fresh = bound.insert(t.var().name).second;
      collect_free(t.children()[0], bound, out);
      if (fresh) bound.erase(t.var().name);
      return;
    }
    default:
      for (const auto& c : t.children()) collect_free(c, bound, out);
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::map<std::string, Sort>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (const auto& t : f.terms()) collect_free(t, bound, out);
      return;
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool fresh = bound.insert(f.bound().name).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.bound().name);
      return;
    }
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.kind() == Term::Kind::Variable || t.kind() == Term::Kind::Lambda) out.insert(t.var().name);
  for (const auto& c : t.children()) collect_names(c, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (const auto& t : f.terms()) collect_names(t, out);
      return;
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      out.insert(f.bound().name);
      collect_names(f.body(), out);
      return;
    default:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
  }
}

}  // namespace

std::map<std::string, Sort> free_variables(const Term& t) {
  std::set<std::string> bound;
  std::map<std::string, Sort> out;
  collect_free(t, bound, out);
  return out;
}

std::map<std::string, Sort> free_variables(const Formula& f) {
  std::set<std::string> bound;
  std::map<std::string, Sort> out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string name = base;
  while (avoid.count(name)) name += '\'';
  return name;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

using NameMap = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const NameMap& sigma, const std::string& name) {
  for (const auto& [n, t] : sigma)
    if (n == name) return &t;
  return nullptr;
}

NameMap without(const NameMap& sigma, const std::string& name) {
  NameMap out;
  for (const auto& entry : sigma)
    if (entry.first != name) out.push_back(entry);
  return out;
}

// Names free in the substituted terms for variables that actually occur free in the body.
std::set<std::string> range_names(const NameMap& sigma, const std::map<std::string, Sort>& body_free) {
  std::set<std::string> out;
  for (const auto& [n, t] : sigma) {
    if (!body_free.count(n)) continue;
    for (const auto& [fv, s] : free_variables(t)) out.insert(fv);
  }
  return out;
}

Term subst_term(const Term& t, const NameMap& sigma);

// Handles a binder over `body`: returns the (possibly renamed) bound variable and
// the substitution to apply below it.
template <typename Body>
std::pair<Var, NameMap> enter_binder(const Var& bound, const Body& body, const NameMap& sigma) {
  NameMap inner = without(sigma, bound.name);
  if (inner.empty()) return {bound, inner};
  auto body_free = free_variables(body);
  auto clash = range_names(inner, body_free);
  if (!clash.count(bound.name)) return {bound, inner};
  std::set<std::string> avoid = clash;
  for (const auto& n : all_names(body)) avoid.insert(n);
  for (const auto& [n, t] : inner) avoid.insert(n);
  Var renamed{fresh_name(bound.name, avoid), bound.sort};
  inner.emplace_back(bound.name, Term::variable(renamed));
  return {renamed, inner};
}

Term subst_term(const Term& t, const NameMap& sigma) {
  if (sigma.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Variable: {
      const Term* r = lookup(sigma, t.var().name);
      return r ? *r : t;
    }
    case Term::Kind::Apply: {
      std::vector<Term> args;
      for (const auto& a : t.children()) args.push_back(subst_term(a, sigma));
      return Term::apply(t.symbol(), std::move(args), t.sort());
    }
    case Term::Kind::Pair:
      return Term::pair(subst_term(t.children()[0], sigma), subst_term(t.children()[1], sigma));
    case Term::Kind::First:
      return Term::first(subst_term(t.children()[0], sigma));
    case Term::Kind::Second:
      return Term::second(subst_term(t.children()[0], sigma));
    case Term::Kind::Eval:
      return Term::eval(subst_term(t.children()[0], sigma), subst_term(t.children()[1], sigma));
    case Term::Kind::Lambda: {
      auto [param, inner] = enter_binder(t.var(), t.children()[0], sigma);
      return Term::lambda(param, subst_term(t.children()[0], inner));
    }
  }
  return t;
}

Formula subst_formula(const Formula& f, const NameMap& sigma) {
  if (sigma.empty()) return f;
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(subst_term(a, sigma));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return f;
    case Formula::Kind::And:
      return Formula::conj(subst_formula(f.lhs(), sigma), subst_formula(f.rhs(), sigma));
    case Formula::Kind::Or:
      return Formula::disj(subst_formula(f.lhs(), sigma), subst_formula(f.rhs(), sigma));
    case Formula::Kind::Implies:
      return Formula::implies(subst_formula(f.lhs(), sigma), subst_formula(f.rhs(), sigma));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      auto [bound, inner] = enter_binder(f.bound(), f.body(), sigma);
      Formula body = subst_formula(f.body(), inner);
      return f.kind() == Formula::Kind::Exists ? Formula::exists(bound, body) : Formula::forall(bound, body);
    }
  }
  return f;
}

NameMap checked(const Substitution& sigma) {
  NameMap out;
  for (const auto& [x, t] : sigma) {
    if (x.sort != t.sort())
      throw SortError("cannot substitute '" + to_string(t) + "' of sort " + to_string(t.sort()) + " for " + x.name +
                      " of sort " + to_string(x.sort));
    out.emplace_back(x.name, t);
  }
  return out;
}

}  // namespace

Term substitute(const Term& t, const Substitution& sigma) { return subst_term(t, checked(sigma)); }

Formula substitute(const Formula& f, const Substitution& sigma) { return subst_formula(f, checked(sigma)); }

Formula substitute(const Formula& f, const Var& x, const Term& t) { return substitute(f, Substitution{{x, t}}); }

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

using Env = std::vector<std::string>;

std::optional<std::size_t> depth_of(const Env& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == name) return env.size() - 1 - i;
  return std::nullopt;
}

bool alpha_term(const Term& a, Env& ea, const Term& b, Env& eb) {
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  switch (a.kind()) {
    case Term::Kind::Variable: {
      auto da = depth_of(ea, a.var().name);
      auto db = depth_of(eb, b.var().name);
      if (da.has_value() != db.has_value()) return false;
      return da ? *da == *db : a.var().name == b.var().name;
    }
    case Term::Kind::Lambda: {
      if (a.var().sort != b.var().sort) return false;
      ea.push_back(a.var().name);
      eb.push_back(b.var().name);
      bool ok = alpha_term(a.children()[0], ea, b.children()[0], eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    case Term::Kind::Apply:
      if (a.symbol() != b.symbol()) return false;
      [[fallthrough]];
    default:
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!alpha_term(a.children()[i], ea, b.children()[i], eb)) return false;
      return true;
  }
}

bool alpha_formula(const Formula& a, Env& ea, const Formula& b, Env& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Atom:
      if (a.predicate() != b.predicate() || a.terms().size() != b.terms().size()) return false;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!alpha_term(a.terms()[i], ea, b.terms()[i], eb)) return false;
      return true;
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return true;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (a.bound().sort != b.bound().sort) return false;
      ea.push_back(a.bound().name);
      eb.push_back(b.bound().name);
      bool ok = alpha_formula(a.body(), ea, b.body(), eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    default:
      return alpha_formula(a.lhs(), ea, b.lhs(), eb) && alpha_formula(a.rhs(), ea, b.rhs(), eb);
  }
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  Env ea, eb;
  return alpha_term(a, ea, b, eb);
}

bool alpha_equal(const Formula& a, const Formula& b) {
  Env ea, eb;
  return alpha_formula(a, ea, b, eb);
}

bool identical(const Formula& a, const Formula& b) { return alpha_equal(a, b) && to_string(a) == to_string(b); }

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Occurrences {
  bool exists = false;
  bool forall = false;
  bool disjunction = false;
};

void scan(const Formula& f, Occurrences& occ) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Exists:
      occ.exists = true;
      scan(f.body(), occ);
      return;
    case Formula::Kind::Forall:
      occ.forall = true;
      scan(f.body(), occ);
      return;
    case Formula::Kind::Or:
      occ.disjunction = true;
      [[fallthrough]];
    default:
      scan(f.lhs(), occ);
      scan(f.rhs(), occ);
  }
}

}  // namespace

SyntacticClass classify_syntactic(const Formula& f) {
  Occurrences occ;
  scan(f, occ);
  if (occ.exists || occ.disjunction) return SyntacticClass::Neither;
  if (occ.forall) return SyntacticClass::ExistsFree;
  return SyntacticClass::QuantifierFree;
}

const char* to_string(SyntacticClass c) {
  switch (c) {
    case SyntacticClass::QuantifierFree:
      return "quantifier_free";
    case SyntacticClass::ExistsFree:
      return "exists_free";
    case SyntacticClass::Neither:
      return "neither";
  }
  return "neither";
}

std::optional<Sort> tuple_sort(const std::vector<Var>& vars) {
  if (vars.empty()) return std::nullopt;
  Sort s = vars.back().sort;
  for (std::size_t i = vars.size() - 1; i-- > 0;) s = Sort::product(vars[i].sort, s);
  return s;
}

std::optional<Term> tuple_term(const std::vector<Var>& vars) {
  if (vars.empty()) return std::nullopt;
  Term t = Term::variable(vars.back());
  for (std::size_t i = vars.size() - 1; i-- > 0;) t = Term::pair(Term::variable(vars[i]), t);
  return t;
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() {
  sorts_.insert(kBitSort);
  predicates_.emplace(kBitZero, PredicateDecl{kBitZero, {Sort::base(kBitSort)}});
  predicates_.emplace(kBitOne, PredicateDecl{kBitOne, {Sort::base(kBitSort)}});
}

void Signature::add_sort(const std::string& name) {
  if (name.empty()) throw SortError("empty sort name");
  if (!sorts_.insert(name).second && name != kBitSort) throw SortError("duplicate sort " + name);
}

namespace {

void require_declared(const Signature& sig, const Sort& s, const std::string& owner) {
  switch (s.kind()) {
    case Sort::Kind::Unit:
      return;
    case Sort::Kind::Base:
      if (!sig.has_sort(s.name())) throw SortError("unknown sort " + s.name() + " in declaration of " + owner);
      return;
    default:
      require_declared(sig, s.left(), owner);
      require_declared(sig, s.right(), owner);
  }
}

}  // namespace

void Signature::add_predicate(PredicateDecl decl) {
  for (const auto& s : decl.args) require_declared(*this, s, decl.name);
  if (predicates_.count(decl.name)) {
    if (decl.name == kBitZero || decl.name == kBitOne) return;
    throw SortError("duplicate predicate " + decl.name);
  }
  std::string key = decl.name;
  predicates_.emplace(std::move(key), std::move(decl));
}

void Signature::add_function(FunctionDecl decl) {
  for (const auto& s : decl.args) require_declared(*this, s, decl.name);
  require_declared(*this, decl.result, decl.name);
  if (functions_.count(decl.name)) throw SortError("duplicate function " + decl.name);
  std::string key = decl.name;
  functions_.emplace(std::move(key), std::move(decl));
}

const PredicateDecl* Signature::predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

const FunctionDecl* Signature::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

}  // namespace dialectica::fol
