#pragma once

// Semantic rule checkers. A sequent T |- phi is read as top <= phi in the
// fibre. Every rule is scanned over all context objects A and bound objects
// B of the universe, with pi : A * B -> A and <1,t> : A -> A * B.
//
// Strict mode restricts the predicates to those the rule's hypotheses allow
// and checks the doctrine-wide side conditions first. Diagnostic mode drops
// both, so that failures of the unrestricted rules become visible.

#include <optional>
#include <string>
#include <vector>

#include "dialectica/freeness.hpp"

namespace dialectica::rules {

using doc::Doctrine;
using doc::Elem;
using cat::FinMor;
using cat::FinObj;
using cat::Product;

enum class Rule { Skolemisation, IndependenceOfPremise, ModifiedMarkov, Markov, Counterexample, Choice };

const char* to_string(Rule r);
// Accepts the CLI names skolem, ip, mmr, markov, cex, choice.
std::optional<Rule> rule_from_string(const std::string& s);

struct RuleOptions {
  bool diagnostic = false;
  bool record_outcomes = false;
  SearchOptions search;
};

struct Hypothesis {
  std::string name;
  bool holds = true;
  std::string detail;
};

// One premise instance. For Skolemisation: a = A1, c = A2, b = B, with the
// two sides in P(A1).
struct RuleInstance {
  FinObj a, b;
  std::optional<FinObj> c;
  Elem alpha = 0;
  std::optional<Elem> beta;
  std::optional<FinMor> term;      // t : A -> B, absent when none works
  std::optional<bool> weak;        // conclusion with the quantifier kept
  std::optional<Elem> lhs, rhs;
};

struct Outcome {
  std::string a, b;
  Elem alpha = 0;
  std::optional<Elem> beta;
  bool premise = false;
  bool holds = true;
};

struct RuleReport {
  Rule rule = Rule::Skolemisation;
  bool diagnostic = false;
  std::vector<Hypothesis> hypotheses;
  bool pass = true;
  std::uint64_t scanned = 0;
  std::uint64_t instances = 0;  // premise true
  std::uint64_t weak_failures = 0;
  std::vector<RuleInstance> witnesses;   // first kMaxWitnesses
  std::vector<RuleInstance> violations;  // first kMaxViolations
  std::uint64_t violation_count = 0;
  std::vector<Outcome> outcomes;  // when requested
  std::string universe_note;

  static constexpr std::size_t kMaxWitnesses = 32;
  static constexpr std::size_t kMaxViolations = 20;
  bool hypotheses_hold() const;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

RuleReport check_skolemisation(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_ip_rule(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_modified_markov(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_markov(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_counterexample_property(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_rule_of_choice(const doc::Freeness& f, const RuleOptions& o = {});
RuleReport check_rule(Rule r, const doc::Freeness& f, const RuleOptions& o = {});

// Each witness must satisfy its conclusion with its term, each violation
// must have a true premise and no term at all.
bool revalidate(const Doctrine& d, const RuleReport& r);

// The conclusion of a term-witnessed rule for one term, as top <= ... in P(A).
// Exposed for tests.
bool conclusion_holds(const Doctrine& d, Rule r, const RuleInstance& inst, const FinMor& t);
bool premise_holds(const Doctrine& d, Rule r, const RuleInstance& inst);

}  // namespace dialectica::rules
