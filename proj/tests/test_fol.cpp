#include <random>

#include "dialectica/fol_text.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::fol;

namespace {

Signature sample_signature() {
  Signature sig;
  sig.add_sort("A");
  sig.add_sort("B");
  sig.add_predicate({"p", {Sort::base("A")}});
  sig.add_predicate({"r", {Sort::base("A"), Sort::base("B")}});
  sig.add_function({"f", {Sort::base("A")}, Sort::base("B")});
  return sig;
}

Formula parse(const std::string& s, const std::vector<Var>& ctx = {}) { return parse_formula(s, sample_signature(), ctx); }

// Random well-sorted formulas over the sample signature.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Formula formula(int depth, std::vector<Var> env) {
    int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 7)(rng_);
    switch (pick) {
      case 0:
      case 1:
        return atom(env);
      case 2:
        return Formula::conj(formula(depth - 1, env), formula(depth - 1, env));
      case 3:
        return Formula::disj(formula(depth - 1, env), formula(depth - 1, env));
      case 4:
        return Formula::implies(formula(depth - 1, env), formula(depth - 1, env));
      case 5:
        return Formula::negation(formula(depth - 1, env));
      default: {
        Var v{names_[std::uniform_int_distribution<int>(0, 3)(rng_)], sort()};
        env.push_back(v);
        Formula body = formula(depth - 1, env);
        return pick == 6 ? Formula::exists(v, body) : Formula::forall(v, body);
      }
    }
  }

 private:
  Sort sort() { return std::uniform_int_distribution<int>(0, 1)(rng_) ? Sort::base("A") : Sort::base("B"); }

  std::optional<Term> pick(const std::vector<Var>& env, const Sort& s) {
    std::vector<Var> ok;
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool shadowed = false;
      for (const auto& o : ok) shadowed = shadowed || o.name == it->name;
      for (auto jt = env.rbegin(); jt != it; ++jt) shadowed = shadowed || jt->name == it->name;
      if (!shadowed && it->sort == s) ok.push_back(*it);
    }
    if (ok.empty()) return std::nullopt;
    return Term::variable(ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng_)]);
  }

  Formula atom(const std::vector<Var>& env) {
    auto a = pick(env, Sort::base("A"));
    auto b = pick(env, Sort::base("B"));
    if (a && b) return Formula::atom("r", {*a, *b});
    if (a) return Formula::atom("r", {*a, Term::apply("f", {*a}, Sort::base("B"))});
    return std::uniform_int_distribution<int>(0, 1)(rng_) ? Formula::top() : Formula::bottom();
  }

  std::mt19937_64 rng_;
  const char* names_[4] = {"x", "y", "z", "w"};
};

}  // namespace

TEST_CASE("sorts parse and print") {
  CHECK(to_string(parse_sort("A * B -> C")) == "A * B -> C");
  CHECK(parse_sort("A -> B -> C") == Sort::function(Sort::base("A"), Sort::function(Sort::base("B"), Sort::base("C"))));
  CHECK(parse_sort("(A -> B) -> C").domain().is_function());
  CHECK(parse_sort("1") == Sort::unit());
}

TEST_CASE("formulas print with minimal parentheses") {
  CHECK(to_string(parse("forall x:A. exists y:B. r(x, y)")) == "forall x:A. exists y:B. r(x, y)");
  CHECK(to_string(parse("(forall x:A. p(x)) -> false")) == "~(forall x:A. p(x))");
  CHECK(to_string(parse("forall x:A. p(x) & p(x) | false")) == "forall x:A. p(x) & p(x) | false");
  CHECK(to_string(parse("forall x:A. (p(x) -> p(x)) -> p(x)")) == "forall x:A. (p(x) -> p(x)) -> p(x)");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("forall x:A. p(x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 15);
  }
  CHECK_THROWS_AS(parse("p(x)"), Error);
  CHECK_THROWS_AS(parse("exists x:B. p(x)"), SortError);
  CHECK_THROWS_AS(parse("exists x:A. q(x)"), Error);
}

TEST_CASE("symbols are inferred on request") {
  Signature empty;
  ParseOptions opts;
  opts.infer_symbols = true;
  Formula f = parse_formula("exists u:U. forall x:X. p(u, x)", empty, {}, opts);
  CHECK(free_variables(f).empty());
  CHECK_THROWS_AS(parse_formula("exists u:U. p(u) & p(u, u)", empty, {}, opts), SortError);
}

TEST_CASE("capture-avoiding substitution") {
  Var x{"x", Sort::base("A")}, y{"y", Sort::base("A")};
  Formula f = parse("exists y:A. r(x, f(y))", {x});
  Formula g = substitute(f, x, Term::variable(y));
  auto fv = free_variables(g);
  CHECK(fv.count("y") == 1);
  CHECK(fv.count("x") == 0);
  CHECK(g.kind() == Formula::Kind::Exists);
  CHECK(g.bound().name != "y");
  CHECK_THROWS_AS(substitute(f, x, Term::variable("b", Sort::base("B"))), SortError);
}

TEST_CASE("alpha equality ignores bound names only") {
  CHECK(alpha_equal(parse("forall x:A. p(x)"), parse("forall z:A. p(z)")));
  CHECK_FALSE(identical(parse("forall x:A. p(x)"), parse("forall z:A. p(z)")));
  CHECK_FALSE(alpha_equal(parse("forall x:A. exists y:B. r(x, y)"), parse("exists y:B. forall x:A. r(x, y)")));
  Var x{"x", Sort::base("A")}, z{"z", Sort::base("A")};
  CHECK_FALSE(alpha_equal(parse("p(x)", {x}), parse("p(z)", {z})));
}

TEST_CASE("syntactic classes") {
  CHECK(classify_syntactic(parse("forall x:A. p(x) -> p(x)")) == SyntacticClass::ExistsFree);
  CHECK(classify_syntactic(parse("forall x:A. p(x)")) == SyntacticClass::ExistsFree);
  CHECK(classify_syntactic(parse("true & ~false")) == SyntacticClass::QuantifierFree);
  CHECK(classify_syntactic(parse("true | false")) == SyntacticClass::Neither);
  CHECK(classify_syntactic(parse("exists x:A. p(x)")) == SyntacticClass::Neither);
}

TEST_CASE("fresh names skip taken primes") {
  CHECK(fresh_name("X", {"X", "X'"}) == "X''");
  CHECK(fresh_name("V", {}) == "V");
}

TEST_CASE("terms with functions, pairs and abstraction") {
  Signature sig = sample_signature();
  Var h{"h", Sort::function(Sort::base("A"), Sort::base("B"))}, a{"a", Sort::base("A")};
  Term t = parse_term("h @ a", sig, {h, a});
  CHECK(t.sort() == Sort::base("B"));
  Term l = parse_term("\\z:A. f(z)", sig);
  CHECK(l.sort() == Sort::function(Sort::base("A"), Sort::base("B")));
  Term p = parse_term("fst(<a, f(a)>)", sig, {a});
  CHECK(p.sort() == Sort::base("A"));
  CHECK_THROWS_AS(parse_term("a @ a", sig, {a}), SortError);
}

TEST_CASE("signature round trip through JSON") {
  Signature sig = sample_signature();
  Signature back = signature_from_json(to_json(sig));
  CHECK(back.sorts() == sig.sorts());
  CHECK(back.predicates().size() == sig.predicates().size());
  CHECK(back.function("f")->result == Sort::base("B"));
}

TEST_CASE("property: printing then parsing is the identity") {
  Gen gen(7);
  Signature sig = sample_signature();
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(4, {});
    Formula back = parse_formula(to_string(f), sig);
    CHECK_MESSAGE(identical(f, back), to_string(f));
  }
}

TEST_CASE("property: substitution laws") {
  Gen gen(11);
  Var x{"x", Sort::base("A")};
  Var fresh{"fresh", Sort::base("A")};
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.formula(4, {x});
    // Substituting a variable for itself changes nothing.
    CHECK(alpha_equal(substitute(f, x, Term::variable(x)), f));
    // Renaming to a fresh variable and back is the identity up to alpha.
    Formula there = substitute(f, x, Term::variable(fresh));
    CHECK(free_variables(there).count("x") == 0);
    CHECK(alpha_equal(substitute(there, fresh, Term::variable(x)), f));
  }
}
