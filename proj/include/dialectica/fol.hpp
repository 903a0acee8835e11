#pragma once

// Many-sorted first-order formulas over a simply typed term language.
//
// All values are immutable handles onto shared trees; copying is cheap and
// every operation below is pure.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dialectica/error.hpp"

namespace dialectica::fol {

class Sort {
 public:
  enum class Kind { Unit, Base, Product, Function };

  Sort();  // the unit sort
  static Sort unit() { return Sort(); }
  static Sort base(std::string name);
  static Sort product(Sort left, Sort right);
  static Sort function(Sort domain, Sort codomain);

  Kind kind() const noexcept;
  bool is_function() const noexcept { return kind() == Kind::Function; }
  bool is_product() const noexcept { return kind() == Kind::Product; }

  // Base only.
  const std::string& name() const;
  // Product: factors; Function: domain / codomain.
  const Sort& left() const;
  const Sort& right() const;
  const Sort& domain() const { return left(); }
  const Sort& codomain() const { return right(); }

  friend bool operator==(const Sort& a, const Sort& b);
  friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }

 private:
  struct Node;
  explicit Sort(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Var {
  std::string name;
  Sort sort;

  friend bool operator==(const Var& a, const Var& b) { return a.name == b.name && a.sort == b.sort; }
};

class Term {
 public:
  enum class Kind { Variable, Apply, Pair, First, Second, Lambda, Eval };

  static Term variable(Var v);
  static Term variable(std::string name, Sort sort) { return variable(Var{std::move(name), std::move(sort)}); }
  // Function-symbol application; the caller supplies the declared result sort.
  static Term apply(std::string symbol, std::vector<Term> args, Sort result);
  static Term pair(Term first, Term second);
  static Term first(Term t);
  static Term second(Term t);
  static Term lambda(Var param, Term body);
  static Term eval(Term fn, Term arg);

  Kind kind() const noexcept;
  const Sort& sort() const noexcept;
  // Variable: the variable; Lambda: the parameter.
  const Var& var() const;
  // Apply only.
  const std::string& symbol() const;
  // Apply: arguments; Pair: {first, second}; First/Second: {operand};
  // Lambda: {body}; Eval: {function, argument}.
  const std::vector<Term>& children() const noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Formula {
 public:
  enum class Kind { Atom, Top, Bottom, And, Or, Implies, Exists, Forall };

  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula top();
  static Formula bottom();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  // ~a is stored as a -> false.
  static Formula negation(Formula a) { return implies(std::move(a), bottom()); }
  static Formula exists(Var v, Formula body);
  static Formula forall(Var v, Formula body);

  Kind kind() const noexcept;
  bool is_quantifier() const noexcept { return kind() == Kind::Exists || kind() == Kind::Forall; }
  bool is_negation() const noexcept;

  const std::string& predicate() const;   // Atom
  const std::vector<Term>& terms() const;  // Atom
  const Formula& lhs() const;              // And / Or / Implies
  const Formula& rhs() const;
  const Var& bound() const;                // Exists / Forall
  const Formula& body() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Quantifier prefix builders; an empty block returns the body unchanged.
Formula exists_block(const std::vector<Var>& vars, Formula body);
Formula forall_block(const std::vector<Var>& vars, Formula body);

// ---------------------------------------------------------------------------
// Variables and substitution

std::map<std::string, Sort> free_variables(const Term& t);
std::map<std::string, Sort> free_variables(const Formula& f);
// Every variable name occurring in f, free or bound.
std::set<std::string> all_names(const Formula& f);
std::set<std::string> all_names(const Term& t);

// First of base, base', base'', ... not in avoid.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

using Substitution = std::vector<std::pair<Var, Term>>;

// Simultaneous capture-avoiding substitution. Throws SortError when a term's
// sort differs from the sort of the variable it replaces.
Term substitute(const Term& t, const Substitution& sigma);
Formula substitute(const Formula& f, const Substitution& sigma);
Formula substitute(const Formula& f, const Var& x, const Term& t);

bool alpha_equal(const Term& a, const Term& b);
bool alpha_equal(const Formula& a, const Formula& b);

// Structural equality including bound names.
bool identical(const Formula& a, const Formula& b);

// ---------------------------------------------------------------------------
// Classification

enum class SyntacticClass { QuantifierFree, ExistsFree, Neither };

// QuantifierFree: no quantifier and no disjunction.
// ExistsFree: no existential quantifier and no disjunction; universal allowed.
SyntacticClass classify_syntactic(const Formula& f);
const char* to_string(SyntacticClass c);

// Tuple helpers shared by the translation and the chain: a list of variables
// becomes a right-nested pairing <a,<b,c>> of sort A * (B * C). The empty list
// has no tuple.
std::optional<Sort> tuple_sort(const std::vector<Var>& vars);
std::optional<Term> tuple_term(const std::vector<Var>& vars);

// ---------------------------------------------------------------------------
// Signatures

struct PredicateDecl {
  std::string name;
  std::vector<Sort> args;
};

struct FunctionDecl {
  std::string name;
  std::vector<Sort> args;
  Sort result;
};

// Base sorts, predicate symbols and function symbols. Every signature carries
// the two-element sort Bit with the tests bit0(z) and bit1(z).
class Signature {
 public:
  Signature();

  void add_sort(const std::string& name);
  void add_predicate(PredicateDecl decl);
  void add_function(FunctionDecl decl);

  bool has_sort(const std::string& name) const { return sorts_.count(name) != 0; }
  const PredicateDecl* predicate(const std::string& name) const;
  const FunctionDecl* function(const std::string& name) const;

  const std::set<std::string>& sorts() const noexcept { return sorts_; }
  const std::map<std::string, PredicateDecl>& predicates() const noexcept { return predicates_; }
  const std::map<std::string, FunctionDecl>& functions() const noexcept { return functions_; }

 private:
  std::set<std::string> sorts_;
  std::map<std::string, PredicateDecl> predicates_;
  std::map<std::string, FunctionDecl> functions_;
};

inline const char* kBitSort = "Bit";
inline const char* kBitZero = "bit0";
inline const char* kBitOne = "bit1";

}  // namespace dialectica::fol
