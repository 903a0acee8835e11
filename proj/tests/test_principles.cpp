#include <map>
#include <tuple>

#include "dialectica/doctrine_json.hpp"
#include "dialectica/principles.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::rules;
using cat::sized_object;
using cat::unit_object;

namespace {

const Rule kAll[] = {Rule::Skolemisation, Rule::IndependenceOfPremise, Rule::ModifiedMarkov,
                     Rule::Markov,        Rule::Counterexample,        Rule::Choice};

RuleOptions diagnostic() {
  RuleOptions o;
  o.diagnostic = true;
  return o;
}

}  // namespace

TEST_CASE("rule names") {
  for (Rule r : kAll) CHECK(rule_from_string(to_string(r)) == r);
  CHECK(rule_from_string("ip") == Rule::IndependenceOfPremise);
  CHECK_FALSE(rule_from_string("nope"));
}

TEST_CASE("Skolemisation over 2 * 2 with B = 2") {
  auto d = doc::powerset_example({2});
  doc::Freeness f(d);
  RuleOptions o;
  o.record_outcomes = true;
  RuleReport r = check_skolemisation(f, o);
  CHECK(r.pass);
  CHECK(r.instances == 256);
  CHECK(r.outcomes.size() == 256);
  CHECK(revalidate(*d, r));
}

TEST_CASE("powerset passes every rule in both modes") {
  auto d = doc::powerset_example({1, 2});
  doc::Freeness f(d);
  for (Rule rule : kAll)
    for (bool diag : {false, true}) {
      CAPTURE(to_string(rule));
      CAPTURE(diag);
      RuleOptions o;
      o.diagnostic = diag;
      RuleReport r = check_rule(rule, f, o);
      CHECK(r.pass);
      CHECK(r.violation_count == 0);
      CHECK(r.hypotheses_hold());
      CHECK(revalidate(*d, r));
    }
}

TEST_CASE("chain frame passes every rule in both modes") {
  auto d = doc::kripke_example(doc::FinitePoset::chain(2), {1, 2});
  doc::Freeness f(d);
  for (Rule rule : kAll) {
    CAPTURE(to_string(rule));
    CHECK(check_rule(rule, f).pass);
    CHECK(check_rule(rule, f, diagnostic()).pass);
  }
}

TEST_CASE("antichain frame: unrestricted IP fails with a re-checkable violation") {
  auto d = doc::kripke_example(doc::FinitePoset::antichain(2), {1, 2});
  doc::Freeness f(d);
  RuleReport strict = check_ip_rule(f);
  CHECK(strict.pass);
  CHECK(revalidate(*d, strict));

  RuleReport r = check_ip_rule(f, diagnostic());
  CHECK_FALSE(r.pass);
  CHECK(r.violation_count > 0);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(revalidate(*d, r));
  // The violating premise is never existential-free.
  for (const auto& v : r.violations) CHECK_FALSE(f.base().existential_free(v.a, v.alpha));
  // Keeping the existential in the conclusion always works.
  CHECK(r.weak_failures == 0);
}

TEST_CASE("antichain frame: hypotheses are reported") {
  auto d = doc::kripke_example(doc::FinitePoset::antichain(2), {1, 2});
  doc::Freeness f(d);
  for (Rule rule : {Rule::Markov, Rule::Counterexample, Rule::Choice}) {
    CAPTURE(to_string(rule));
    RuleReport r = check_rule(rule, f);
    REQUIRE(r.hypotheses.size() == 1);
    CHECK_FALSE(r.hypotheses[0].holds);
    CHECK_FALSE(r.pass);
    CHECK(revalidate(*d, r));
  }
  CHECK(check_modified_markov(f).pass);
  CHECK(check_skolemisation(f).pass);
}

TEST_CASE("Markov is modified Markov at bottom") {
  auto d = doc::kripke_example(doc::FinitePoset::chain(2), {1, 2});
  doc::Freeness f(d);
  RuleOptions o;
  o.record_outcomes = true;
  RuleReport mmr = check_modified_markov(f, o);
  RuleReport mp = check_markov(f, o);
  std::map<std::tuple<std::string, std::string, Elem>, bool> at_bottom;
  for (const auto& out : mmr.outcomes) {
    const FinObj& a = *std::find_if(d->universe().begin(), d->universe().end(),
                                    [&](const FinObj& o) { return o.name() == out.a; });
    if (out.beta == d->bottom(a)) at_bottom[{out.a, out.b, out.alpha}] = out.holds;
  }
  REQUIRE(mp.outcomes.size() == at_bottom.size());
  for (const auto& out : mp.outcomes) CHECK(at_bottom.at({out.a, out.b, out.alpha}) == out.holds);
}

TEST_CASE("direct conclusions") {
  auto d = doc::powerset_example({1, 2});
  FinObj one = unit_object(), two = sized_object(2);
  RuleInstance choice;
  choice.a = one;
  choice.b = two;
  // alpha = {(0,1)} over 1 * 2: only the term picking 1 works.
  choice.alpha = d->encode({d->algebra().bottom, d->algebra().top});
  CHECK(premise_holds(*d, Rule::Choice, choice));
  CHECK_FALSE(conclusion_holds(*d, Rule::Choice, choice, cat::FinMor(one, two, {0})));
  CHECK(conclusion_holds(*d, Rule::Choice, choice, cat::FinMor(one, two, {1})));
  choice.alpha = d->bottom(sized_object(2));
  CHECK_FALSE(premise_holds(*d, Rule::Choice, choice));
  CHECK(premise_holds(*d, Rule::Counterexample, choice));
}
