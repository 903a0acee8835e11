#include "dialectica/fol_text.hpp"
#include "dialectica/translate.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::fol;

namespace {

Signature uxvy() {
  Signature sig;
  for (const char* s : {"U", "X", "V", "Y", "A", "B"}) sig.add_sort(s);
  sig.add_predicate({"p", {Sort::base("U"), Sort::base("X")}});
  sig.add_predicate({"q", {Sort::base("V"), Sort::base("Y")}});
  sig.add_predicate({"a", {Sort::base("A")}});
  sig.add_predicate({"b", {Sort::base("B")}});
  sig.add_predicate({"c", {Sort::base("A"), Sort::base("B")}});
  return sig;
}

Formula parse(const std::string& s) { return parse_formula(s, uxvy()); }

const char* kImplication = "(exists u:U. forall x:X. p(u, x)) -> (exists v:V. forall y:Y. q(v, y))";

}  // namespace

TEST_CASE("quantifier-free formulas are their own translation") {
  DialecticaForm d = translate(parse("forall u:U. exists x:X. p(u, x) & true"));
  CHECK(d.witness.size() == 1);
  CHECK(d.counter.size() == 1);
  DialecticaForm q = translate(parse("true -> false"));
  CHECK(q.witness.empty());
  CHECK(q.counter.empty());
  CHECK(alpha_equal(q.matrix, parse("true -> false")));
}

TEST_CASE("conjunction merges the blocks") {
  DialecticaForm d = translate(parse("(exists u:U. forall x:X. p(u, x)) & (exists v:V. forall y:Y. q(v, y))"));
  CHECK(alpha_equal(d.as_formula(), parse("exists u:U, v:V. forall x:X, y:Y. p(u, x) & q(v, y)")));
}

TEST_CASE("disjunction adds a Bit witness") {
  DialecticaForm d = translate(parse("(exists u:U. forall x:X. p(u, x)) | (forall y:Y. exists v:V. q(v, y))"));
  REQUIRE(d.witness.size() == 3);
  CHECK(d.witness.front().sort == Sort::base("Bit"));
  CHECK(classify_syntactic(d.matrix) == SyntacticClass::QuantifierFree);
}

TEST_CASE("universal quantifier turns witnesses into functions") {
  DialecticaForm d = translate(parse("forall y:Y. exists v:V. q(v, y)"));
  REQUIRE(d.witness.size() == 1);
  CHECK(d.witness[0].sort == Sort::function(Sort::base("Y"), Sort::base("V")));
  CHECK(d.counter.size() == 1);
}

TEST_CASE("implication clause golden") {
  DialecticaForm d = translate(parse(kImplication));
  Formula golden = parse("exists V:U -> V, X:U * Y -> X. forall u:U, y:Y. p(u, X @ <u, y>) -> q(V @ u, y)");
  CHECK(alpha_equal(d.as_formula(), golden));
  CHECK(classify_syntactic(d.matrix) == SyntacticClass::QuantifierFree);
}

TEST_CASE("implication clause with multi-variable blocks") {
  DialecticaForm d = translate(parse("(exists a1:A, a2:A. forall b1:B. c(a1, b1) & a(a2)) -> (exists b2:B. b(b2))"));
  // V : A * A -> B, X : A * A -> B (the conclusion has no counter variables).
  REQUIRE(d.witness.size() == 2);
  CHECK(d.witness[0].sort == Sort::function(Sort::product(Sort::base("A"), Sort::base("A")), Sort::base("B")));
  CHECK(d.counter.size() == 2);
}

TEST_CASE("chain goldens and labels") {
  Formula src = parse(kImplication);
  Chain chain = implication_chain(translate(src.lhs()), translate(src.rhs()));
  const char* golden[6] = {
      "forall u:U. (forall x:X. p(u, x)) -> (exists v:V. forall y:Y. q(v, y))",
      "forall u:U. exists v:V. (forall x:X. p(u, x)) -> (forall y:Y. q(v, y))",
      "forall u:U. exists v:V. forall y:Y. (forall x:X. p(u, x)) -> q(v, y)",
      "forall u:U. exists v:V. forall y:Y. exists x:X. p(u, x) -> q(v, y)",
      "exists V:U -> V. forall u:U, y:Y. exists x:X. p(u, x) -> q(V @ u, y)",
      "exists V:U -> V, X:U * Y -> X. forall u:U, y:Y. p(u, X @ <u, y>) -> q(V @ u, y)",
  };
  const Justification labels[6] = {Justification::ClassicalEquiv, Justification::IPStar,
                                   Justification::IntuitionisticEquiv, Justification::MP, Justification::AC,
                                   Justification::AC};
  REQUIRE(chain.steps.size() == 6);
  CHECK(alpha_equal(chain.source, src));
  for (int i = 0; i < 6; ++i) {
    CHECK_MESSAGE(alpha_equal(chain.steps[i].formula, parse(golden[i])), to_string(chain.steps[i].formula));
    CHECK(chain.steps[i].justification == labels[i]);
  }
  CHECK(alpha_equal(chain.steps[5].formula, translate(src).as_formula()));
}

TEST_CASE("each chain step replays from its predecessor") {
  for (const char* src : {kImplication, "(exists u:U, a1:A. forall x:X. p(u, x) & a(a1)) -> (forall y:Y. q(v, y))"}) {
    Signature sig = uxvy();
    std::vector<Var> ctx = {{"v", Sort::base("V")}};
    Formula f = parse_formula(src, sig, ctx);
    Chain chain = implication_chain(translate(f.lhs()), translate(f.rhs()));
    Formula prev = chain.source;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      Formula next = replay_step(prev, i + 1, chain.shape);
      CHECK(alpha_equal(next, chain.steps[i].formula));
      prev = chain.steps[i].formula;
    }
  }
}

TEST_CASE("chain renames the two sides apart") {
  Formula f = parse("(exists u:U. forall x:X. p(u, x)) -> (exists u:U. forall x:X. p(u, x))");
  Chain chain = implication_chain(translate(f.lhs()), translate(f.rhs()));
  CHECK(alpha_equal(chain.steps[5].formula, translate(f).as_formula()));
}

TEST_CASE("principle statements enforce their side conditions") {
  Var x{"x", Sort::base("X")}, v{"v", Sort::base("V")}, y{"y", Sort::base("Y")}, u{"u", Sort::base("U")};
  PrincipleParts parts;
  parts.theta = parse_formula("p(u, x)", uxvy(), {u, x});
  parts.eta = parse_formula("q(v, y)", uxvy(), {v, y});
  parts.x = {x};
  parts.v = {v};
  parts.y = {y};
  CHECK(std::holds_alternative<Formula>(state_principle(PrincipleName::IPStar, parts)));

  PrincipleParts bad = parts;
  bad.theta = parse_formula("exists x:X. p(u, x)", uxvy(), {u});
  CHECK_THROWS_AS(state_principle(PrincipleName::IPStar, bad), SideConditionError);
  CHECK_THROWS_AS(state_principle(PrincipleName::MP, bad), SideConditionError);

  PrincipleParts ip;
  ip.theta = parse_formula("forall x:X. p(u, x)", uxvy(), {u});
  ip.eta = parse_formula("q(v, y)", uxvy(), {v, y});
  ip.u = {v};
  CHECK(std::holds_alternative<Rule>(state_principle(PrincipleName::IPR, ip)));
  ip.theta = parse_formula("forall x:X. p(u, x) | p(u, x)", uxvy(), {u});
  CHECK_THROWS_AS(state_principle(PrincipleName::IP, ip), SideConditionError);

  PrincipleParts ac;
  ac.theta = parse_formula("q(v, y)", uxvy(), {v, y});
  ac.y = {y};
  ac.v = {v};
  Formula stmt = std::get<Formula>(state_principle(PrincipleName::AC, ac));
  CHECK(alpha_equal(stmt.rhs(), parse("exists V:Y -> V. forall y:Y. q(V @ y, y)")));
}

TEST_CASE("property: translations are prenex with quantifier-free matrices") {
  const char* sources[] = {
      "forall u:U. exists x:X. p(u, x) -> (exists v:V. q(v, y))",
      "~(forall x:X. exists u:U. p(u, x)) | (exists v:V. forall y:Y. q(v, y))",
      "(forall u:U. p(u, x)) -> (forall y:Y. exists v:V. q(v, y)) & true",
      "((exists v:V. q(v, y)) -> false) -> (forall u:U. p(u, x))",
  };
  Signature sig = uxvy();
  std::vector<Var> ctx = {{"x", Sort::base("X")}, {"y", Sort::base("Y")}};
  for (const char* s : sources) {
    Formula f = parse_formula(s, sig, ctx);
    DialecticaForm d = translate(f);
    CHECK(classify_syntactic(d.matrix) == SyntacticClass::QuantifierFree);
    auto fv = free_variables(d.as_formula());
    auto orig = free_variables(f);
    CHECK(fv == orig);
    // The translation of a translation is the same prenex form.
    CHECK(alpha_equal(translate(d.as_formula()).as_formula(), d.as_formula()));
  }
}
