// One line per acceptance criterion. The exit status is nonzero when a
// result differs from its recorded expectation; criteria recorded as
// unattainable still print FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dialectica/dial.hpp"
#include "dialectica/doctrine_json.hpp"
#include "dialectica/fol_text.hpp"
#include "dialectica/principles.hpp"
#include "dialectica/translate.hpp"

using namespace dialectica;
using cat::FinObj;
using cat::sized_object;
using cat::unit_object;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  bool expected;  // false: recorded as unattainable
  std::function<Outcome()> run;
};

const char* kImplication = "(exists u:U. forall x:X. p(u, x)) -> (exists v:V. forall y:Y. q(v, y))";

fol::Formula parse(const std::string& s) {
  fol::ParseOptions o;
  o.infer_symbols = true;
  return fol::parse_formula(s, fol::Signature{}, {}, o);
}

Outcome implication_clause() {
  fol::Formula f = parse(kImplication);
  fol::Formula golden = parse("exists V:U -> V, X:U * Y -> X. forall u:U, y:Y. p(u, X @ <u, y>) -> q(V @ u, y)");
  fol::Formula got = fol::translate(f).as_formula();
  return {fol::alpha_equal(got, golden), fol::to_string(got)};
}

Outcome chain_fidelity() {
  const char* golden[6] = {
      "forall u:U. (forall x:X. p(u, x)) -> (exists v:V. forall y:Y. q(v, y))",
      "forall u:U. exists v:V. (forall x:X. p(u, x)) -> (forall y:Y. q(v, y))",
      "forall u:U. exists v:V. forall y:Y. (forall x:X. p(u, x)) -> q(v, y)",
      "forall u:U. exists v:V. forall y:Y. exists x:X. p(u, x) -> q(v, y)",
      "exists V:U -> V. forall u:U, y:Y. exists x:X. p(u, x) -> q(V @ u, y)",
      "exists V:U -> V, X:U * Y -> X. forall u:U, y:Y. p(u, X @ <u, y>) -> q(V @ u, y)",
  };
  const char* labels[6] = {"ClassicalEquiv", "IPStar", "IntuitionisticEquiv", "MP", "AC", "AC"};
  fol::Formula f = parse(kImplication);
  fol::Chain c = fol::implication_chain(fol::translate(f.lhs()), fol::translate(f.rhs()));
  if (c.steps.size() != 6) return {false, std::to_string(c.steps.size()) + " steps"};
  int ok = 0;
  std::string bad;
  for (int i = 0; i < 6; ++i) {
    bool same = fol::alpha_equal(c.steps[i].formula, parse(golden[i])) &&
                std::string(fol::to_string(c.steps[i].justification)) == labels[i];
    ok += same;
    if (!same && bad.empty()) bad = "; first mismatch at step " + std::to_string(i + 1);
  }
  return {ok == 6, std::to_string(ok) + "/6 steps and labels match" + bad};
}

Outcome implication_oracle() {
  auto d = doc::powerset_example({1, 2});
  doc::Freeness f(d);
  dial::Theorem2Sample s = dial::sample_theorem2(f, d->universe(), 200, 1);
  return {s.samples == 200 && s.discrepancies == 0,
          std::to_string(s.samples) + " pairs, " + std::to_string(s.discrepancies) + " discrepancies, " +
              std::to_string(s.lhs_true) + " with lhs true"};
}

std::string failed_parts(const doc::GodelReport& r) {
  std::string s;
  for (std::size_t i = 0; i < r.parts.size(); ++i)
    if (!r.parts[i].pass) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
  return s.empty() ? "none" : s;
}

Outcome godel_verdicts() {
  doc::GodelReport p = doc::is_godel_doctrine(doc::Freeness(doc::powerset_example({1, 2})));
  doc::GodelReport k = doc::is_godel_doctrine(doc::Freeness(doc::kripke_example(doc::FinitePoset::antichain(2), {1, 2})));
  doc::FinitePoset bowtie;
  bowtie.elements = {"a", "b", "c", "d"};
  bowtie.leq = {{true, false, true, true}, {false, true, true, true}, {false, false, true, false}, {false, false, false, true}};
  doc::GodelReport b = doc::is_godel_doctrine(doc::Freeness(doc::kripke_example(bowtie, {1, 2})));
  std::string detail = std::string("powerset ") + (p.pass ? "passes" : "fails parts " + failed_parts(p)) +
                       "; antichain:2 failing parts: " + failed_parts(k) +
                       " (expected at least one); bowtie frame failing parts: " + failed_parts(b);
  return {p.pass && !k.pass, detail};
}

Outcome skolemisation() {
  auto d = doc::powerset_example({2});
  doc::Freeness f(d);
  rules::RuleReport r = rules::check_skolemisation(f);
  return {r.pass && r.instances == 256 && rules::revalidate(*d, r),
          std::to_string(r.instances) + " predicates, " + std::to_string(r.violation_count) + " unequal"};
}

Outcome principle_suite() {
  struct Case {
    std::string name;
    std::shared_ptr<const doc::Doctrine> d;
    bool diagnostic;
  };
  std::vector<Case> cases = {
      {"powerset", doc::powerset_example({1, 2}), false},
      {"chain:2", doc::kripke_example(doc::FinitePoset::chain(2), {1, 2}), false},
      {"chain:3", doc::kripke_example(doc::FinitePoset::chain(3), {1, 2}), false},
      {"powerset (no preconditions)", doc::powerset_example({1, 2}), true},
  };
  const rules::Rule suite[] = {rules::Rule::IndependenceOfPremise, rules::Rule::ModifiedMarkov, rules::Rule::Markov,
                               rules::Rule::Counterexample, rules::Rule::Choice};
  bool all = true;
  std::uint64_t instances = 0;
  std::string bad;
  for (const auto& c : cases) {
    doc::Freeness f(c.d);
    if (!c.diagnostic) {
      bool eligible = doc::is_godel_doctrine(f).pass;
      for (const auto& a : c.d->universe())
        eligible = eligible && f.quantifier_free(a, c.d->bottom(a)) && f.base().existential_free(a, c.d->top(a));
      if (!eligible) {
        all = false;
        bad += " " + c.name + " not eligible;";
        continue;
      }
    }
    rules::RuleOptions o;
    o.diagnostic = c.diagnostic;
    for (rules::Rule r : suite) {
      rules::RuleReport rep = rules::check_rule(r, f, o);
      instances += rep.instances;
      if (!rep.pass || !rules::revalidate(*c.d, rep)) {
        all = false;
        bad += std::string(" ") + c.name + "/" + rules::to_string(r) + ";";
      }
    }
  }
  return {all, std::to_string(cases.size()) + " doctrine runs, " + std::to_string(instances) +
                   " premise instances certified" + (bad.empty() ? "" : "; failed:" + bad)};
}

Outcome completion_laws() {
  auto d = doc::powerset_example({1, 2});
  std::vector<FinObj> bound = {unit_object(), sized_object(2)};
  std::string detail;
  bool ok = true;
  for (const FinObj& i : bound) {
    dial::DialFibre f = dial::build_dial_fibre(*d, i, bound);
    ok = ok && f.reflexive && f.transitive && !f.failure;
    detail += "over " + i.name() + ": " + std::to_string(f.elements.size()) + " quadruples, " +
              std::to_string(f.composed) + " composed pairs; ";
  }
  doc::Freeness fr(d);
  dial::Theorem4Report t = dial::check_theorem4(fr, bound);
  ok = ok && t.pass;
  detail += std::string("order isomorphism ") + (t.pass ? "holds" : "fails");
  return {ok, detail};
}

Outcome lattice_hygiene() {
  std::vector<std::pair<std::string, std::shared_ptr<const doc::Doctrine>>> ds = {
      {"powerset", doc::powerset_example({1, 2})},
      {"kripke chain:2", doc::kripke_example(doc::FinitePoset::chain(2), {1, 2})},
      {"kripke antichain:2", doc::kripke_example(doc::FinitePoset::antichain(2), {1, 2})},
  };
  bool ok = true;
  std::string bad;
  for (const auto& [name, d] : ds) {
    bool r = doc::check_residuation(*d).pass, a = doc::check_adjoints(*d).pass, b = doc::beck_chevalley(*d).pass;
    ok = ok && r && a && b;
    if (!(r && a && b)) bad += " " + name;
  }
  return {ok, std::to_string(ds.size()) + " doctrines checked" + (bad.empty() ? "" : "; failed:" + bad)};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "implication clause", 1, true, implication_clause},
      {2, "chain fidelity", 1, true, chain_fidelity},
      {3, "implication oracle equivalence", 60, true, implication_oracle},
      {4, "Goedel-doctrine verdicts", 120, false, godel_verdicts},
      {5, "Skolemisation", 30, true, skolemisation},
      {6, "principle suite", 120, true, principle_suite},
      {7, "completion laws", 120, true, completion_laws},
      {8, "lattice hygiene", 60, true, lattice_hygiene},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s < c.limit_s;
    bool pass = o.pass && in_time;
    std::printf("%s  %d %s (%.2f s, limit %.0f s): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, s, c.limit_s,
                o.detail.c_str(), in_time ? "" : " [over time]");
    if (pass != c.expected) ++unexpected;
    if (!c.expected) std::printf("      recorded as unattainable over the finite universe; see README\n");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
