#include "dialectica/principles.hpp"

namespace dialectica::rules {

using nlohmann::ordered_json;
using doc::Projection;
using doc::Side;

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Skolemisation:
      return "skolem";
    case Rule::IndependenceOfPremise:
      return "ip";
    case Rule::ModifiedMarkov:
      return "mmr";
    case Rule::Markov:
      return "markov";
    case Rule::Counterexample:
      return "cex";
    case Rule::Choice:
      return "choice";
  }
  return "?";
}

std::optional<Rule> rule_from_string(const std::string& s) {
  for (Rule r : {Rule::Skolemisation, Rule::IndependenceOfPremise, Rule::ModifiedMarkov, Rule::Markov,
                 Rule::Counterexample, Rule::Choice})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

bool RuleReport::hypotheses_hold() const {
  for (const auto& h : hypotheses)
    if (!h.holds) return false;
  return true;
}

namespace {

Elem must(std::optional<Elem> v, const char* what, const Projection& p) {
  if (!v) throw DoctrineError(std::string(what) + " along " + p.describe() + " does not exist");
  return *v;
}

Elem ex(const Doctrine& d, const Projection& p, Elem x) { return must(d.exists(p, x), "exists", p); }
Elem all(const Doctrine& d, const Projection& p, Elem x) { return must(d.forall(p, x), "forall", p); }

bool valid(const Doctrine& d, const FinObj& a, Elem x) { return d.leq(a, d.top(a), x); }

Elem section(const Doctrine& d, const Projection& p, const FinMor& t, Elem x) {
  return d.reindex(p.product.pair(cat::identity(p.target()), t), x);
}

// Objects the alpha and beta of an instance live over.
FinObj alpha_object(const Doctrine& d, Rule r, const RuleInstance& inst) {
  if (r == Rule::IndependenceOfPremise) return inst.a;
  if (r == Rule::Skolemisation)
    return cat::product(cat::product(inst.a, *inst.c, d.cap()).object, inst.b, d.cap()).object;
  return d.projection(inst.a, inst.b, Side::Left).source();
}

FinObj beta_object(const Doctrine& d, Rule r, const RuleInstance& inst) {
  if (r == Rule::IndependenceOfPremise) return d.projection(inst.a, inst.b, Side::Left).source();
  return inst.a;
}

std::optional<bool> weak_holds(const Doctrine& d, Rule r, const RuleInstance& inst) {
  Projection p = d.projection(inst.a, inst.b, Side::Left);
  const FinObj& ab = p.source();
  switch (r) {
    case Rule::IndependenceOfPremise:
      return valid(d, inst.a, ex(d, p, d.implies(ab, d.reindex(p.map(), inst.alpha), *inst.beta)));
    case Rule::ModifiedMarkov:
    case Rule::Markov:
      return valid(d, inst.a, ex(d, p, d.implies(ab, inst.alpha, d.reindex(p.map(), *inst.beta))));
    default:
      return std::nullopt;
  }
}

struct SkolemSides {
  Elem lhs, rhs;
};

SkolemSides skolem_sides(const Doctrine& d, const FinObj& a1, const FinObj& a2, const FinObj& b, Elem alpha,
                         std::uint64_t cap) {
  cat::Exponential e = cat::exponential(b, a2, cap);
  Product ia = cat::product(a1, a2, cap);
  Product iab = cat::product(ia.object, b, cap);
  Product ie = cat::product(a1, e.object, cap);
  Product iea = cat::product(ie.object, a2, cap);
  std::size_t n2 = a2.size(), ne = e.object.size();
  std::vector<std::size_t> h(iea.object.size());
  for (std::size_t q = 0; q < h.size(); ++q) {
    std::size_t c = q / n2, x2 = q % n2;
    h[q] = iab.index(ia.index(c / ne, x2), e.eval(e.eval_domain.index(c % ne, x2)));
  }
  FinMor hm(iea.object, iab.object, std::move(h));
  Elem lhs = all(d, Projection{ia, Side::Left}, ex(d, Projection{iab, Side::Left}, alpha));
  Elem rhs = ex(d, Projection{ie, Side::Left}, all(d, Projection{iea, Side::Left}, d.reindex(hm, alpha)));
  return {lhs, rhs};
}

std::string universe_note(const Doctrine& d) {
  std::string names;
  for (const auto& a : d.universe()) names += (names.empty() ? "" : ", ") + a.name();
  return "A and B range over the declared universe {" + names + "}";
}

RuleInstance make_instance(const FinObj& a, const FinObj& b, std::optional<FinObj> c, Elem alpha) {
  RuleInstance i;
  i.a = a;
  i.b = b;
  i.c = std::move(c);
  i.alpha = alpha;
  return i;
}

RuleReport start(Rule rule, const Doctrine& d, const RuleOptions& o) {
  RuleReport r;
  r.rule = rule;
  r.diagnostic = o.diagnostic;
  r.universe_note = universe_note(d);
  return r;
}

template <class T>
void keep(std::vector<T>& v, std::size_t limit, T x) {
  if (v.size() < limit) v.push_back(std::move(x));
}

RuleReport skolemisation(const doc::Freeness& f, const RuleOptions& o) {
  const Doctrine& d = f.doctrine();
  RuleReport r = start(Rule::Skolemisation, d, o);
  const std::uint64_t cap = o.search.cap;
  for (const auto& a1 : d.universe())
    for (const auto& a2 : d.universe())
      for (const auto& b : d.universe()) {
        FinObj over = cat::product(cat::product(a1, a2, cap).object, b, cap).object;
        Elem n = doc::enumerable_fibre(d, over);
        std::vector<SkolemSides> sides(n);
        parallel_for(n, o.search.jobs, [&](std::size_t x) { sides[x] = skolem_sides(d, a1, a2, b, x, cap); });
        for (Elem x = 0; x < n; ++x) {
          RuleInstance inst = make_instance(a1, b, a2, x);
          inst.lhs = sides[x].lhs;
          inst.rhs = sides[x].rhs;
          bool ok = d.equal(a1, sides[x].lhs, sides[x].rhs);
          ++r.scanned;
          ++r.instances;
          if (o.record_outcomes) r.outcomes.push_back({a1.name() + "," + a2.name(), b.name(), x, std::nullopt, true, ok});
          if (ok) {
            keep(r.witnesses, RuleReport::kMaxWitnesses, std::move(inst));
          } else {
            ++r.violation_count;
            keep(r.violations, RuleReport::kMaxViolations, std::move(inst));
          }
        }
      }
  r.pass = r.violation_count == 0;
  return r;
}

struct Result {
  bool premise = false;
  std::optional<std::size_t> term;
  std::optional<bool> weak;
};

RuleReport term_rule(const doc::Freeness& f, Rule rule, const RuleOptions& o) {
  const Doctrine& d = f.doctrine();
  if (!d.has_heyting()) throw DoctrineError("the rule checks need Heyting fibres");
  RuleReport r = start(rule, d, o);
  const std::uint64_t cap = o.search.cap;
  const bool strict = !o.diagnostic;

  auto hypothesis = [&](std::string name, auto&& test) {
    Hypothesis h{std::move(name), true, ""};
    for (const auto& a : d.universe())
      if (!test(a)) {
        h.holds = false;
        h.detail = "fails over " + a.name();
        break;
      }
    if (h.holds) h.detail = "holds over every universe object";
    if (!strict) h.detail += " (not enforced in diagnostic mode)";
    r.hypotheses.push_back(std::move(h));
  };
  if (rule == Rule::Markov || rule == Rule::Counterexample)
    hypothesis("bottom is quantifier-free", [&](const FinObj& a) { return f.quantifier_free(a, d.bottom(a)); });
  if (rule == Rule::Choice)
    hypothesis("top is existential-free", [&](const FinObj& a) { return f.base().existential_free(a, d.top(a)); });

  for (const auto& a : d.universe())
    for (const auto& b : d.universe()) {
      Projection p = d.projection(a, b, Side::Left);
      const FinObj& ab = p.source();
      std::vector<FinMor> terms = cat::enumerate_morphisms(a, b, cap);

      std::vector<Elem> alphas, betas;
      const FinObj& over_alpha = rule == Rule::IndependenceOfPremise ? a : ab;
      Elem na = doc::enumerable_fibre(d, over_alpha);
      bool ex_free_alpha = strict && rule != Rule::Counterexample;
      for (Elem x = 0; x < na; ++x)
        if (!ex_free_alpha || f.base().existential_free(over_alpha, x)) alphas.push_back(x);
      switch (rule) {
        case Rule::IndependenceOfPremise:
          for (Elem y = 0; y < doc::enumerable_fibre(d, ab); ++y) betas.push_back(y);
          break;
        case Rule::ModifiedMarkov:
          for (Elem y = 0; y < doc::enumerable_fibre(d, a); ++y)
            if (!strict || f.quantifier_free(a, y)) betas.push_back(y);
          break;
        case Rule::Markov:
          betas.push_back(d.bottom(a));
          break;
        default:
          break;
      }
      const bool has_beta = !betas.empty() || rule == Rule::IndependenceOfPremise || rule == Rule::ModifiedMarkov;
      const std::size_t nb = has_beta ? betas.size() : 1;
      const std::size_t total = alphas.size() * nb;

      std::vector<Result> results(total);
      parallel_for(total, o.search.jobs, [&](std::size_t k) {
        RuleInstance inst = make_instance(a, b, std::nullopt, alphas[k / nb]);
        if (has_beta) inst.beta = betas[k % nb];
        Result& res = results[k];
        res.premise = premise_holds(d, rule, inst);
        if (!res.premise) return;
        for (std::size_t t = 0; t < terms.size() && !res.term; ++t)
          if (conclusion_holds(d, rule, inst, terms[t])) res.term = t;
        res.weak = weak_holds(d, rule, inst);
      });

      for (std::size_t k = 0; k < total; ++k) {
        RuleInstance inst = make_instance(a, b, std::nullopt, alphas[k / nb]);
        if (has_beta) inst.beta = betas[k % nb];
        const Result& res = results[k];
        ++r.scanned;
        if (o.record_outcomes)
          r.outcomes.push_back({a.name(), b.name(), inst.alpha, inst.beta, res.premise, !res.premise || res.term});
        if (!res.premise) continue;
        ++r.instances;
        inst.weak = res.weak;
        if (res.weak && !*res.weak) ++r.weak_failures;
        if (res.term) {
          inst.term = terms[*res.term];
          keep(r.witnesses, RuleReport::kMaxWitnesses, std::move(inst));
        } else {
          ++r.violation_count;
          keep(r.violations, RuleReport::kMaxViolations, std::move(inst));
        }
      }
    }
  r.pass = r.violation_count == 0 && (!strict || r.hypotheses_hold());
  return r;
}

ordered_json elem(const Doctrine& d, const FinObj& a, Elem x) {
  return {{"object", a.name()}, {"index", x}, {"label", d.label(a, x)}};
}

}  // namespace

bool premise_holds(const Doctrine& d, Rule r, const RuleInstance& inst) {
  Projection p = d.projection(inst.a, inst.b, Side::Left);
  const FinObj& a = inst.a;
  switch (r) {
    case Rule::IndependenceOfPremise:
      return valid(d, a, d.implies(a, inst.alpha, ex(d, p, *inst.beta)));
    case Rule::ModifiedMarkov:
    case Rule::Markov:
      return valid(d, a, d.implies(a, all(d, p, inst.alpha), *inst.beta));
    case Rule::Counterexample:
      return d.leq(a, all(d, p, inst.alpha), d.bottom(a));
    case Rule::Choice:
      return valid(d, a, ex(d, p, inst.alpha));
    case Rule::Skolemisation:
      return true;
  }
  return false;
}

bool conclusion_holds(const Doctrine& d, Rule r, const RuleInstance& inst, const FinMor& t) {
  Projection p = d.projection(inst.a, inst.b, Side::Left);
  const FinObj& a = inst.a;
  switch (r) {
    case Rule::IndependenceOfPremise:
      return valid(d, a, d.implies(a, inst.alpha, section(d, p, t, *inst.beta)));
    case Rule::ModifiedMarkov:
    case Rule::Markov:
      return valid(d, a, d.implies(a, section(d, p, t, inst.alpha), *inst.beta));
    case Rule::Counterexample:
      return d.leq(a, section(d, p, t, inst.alpha), d.bottom(a));
    case Rule::Choice:
      return valid(d, a, section(d, p, t, inst.alpha));
    case Rule::Skolemisation:
      return true;
  }
  return false;
}

RuleReport check_skolemisation(const doc::Freeness& f, const RuleOptions& o) { return skolemisation(f, o); }
RuleReport check_ip_rule(const doc::Freeness& f, const RuleOptions& o) {
  return term_rule(f, Rule::IndependenceOfPremise, o);
}
RuleReport check_modified_markov(const doc::Freeness& f, const RuleOptions& o) {
  return term_rule(f, Rule::ModifiedMarkov, o);
}
RuleReport check_markov(const doc::Freeness& f, const RuleOptions& o) { return term_rule(f, Rule::Markov, o); }
RuleReport check_counterexample_property(const doc::Freeness& f, const RuleOptions& o) {
  return term_rule(f, Rule::Counterexample, o);
}
RuleReport check_rule_of_choice(const doc::Freeness& f, const RuleOptions& o) { return term_rule(f, Rule::Choice, o); }

RuleReport check_rule(Rule r, const doc::Freeness& f, const RuleOptions& o) {
  return r == Rule::Skolemisation ? skolemisation(f, o) : term_rule(f, r, o);
}

bool revalidate(const Doctrine& d, const RuleReport& r) {
  if (r.rule == Rule::Skolemisation) {
    auto same = [&](const RuleInstance& i) {
      SkolemSides s = skolem_sides(d, i.a, *i.c, i.b, i.alpha, d.cap());
      return d.equal(i.a, s.lhs, s.rhs) && s.lhs == *i.lhs && s.rhs == *i.rhs;
    };
    for (const auto& w : r.witnesses)
      if (!same(w)) return false;
    for (const auto& v : r.violations)
      if (same(v)) return false;
    return true;
  }
  for (const auto& w : r.witnesses)
    if (!w.term || !premise_holds(d, r.rule, w) || !conclusion_holds(d, r.rule, w, *w.term)) return false;
  for (const auto& v : r.violations) {
    if (v.term || !premise_holds(d, r.rule, v)) return false;
    for (const FinMor& t : cat::enumerate_morphisms(v.a, v.b, d.cap()))
      if (conclusion_holds(d, r.rule, v, t)) return false;
  }
  return true;
}

ordered_json RuleReport::to_json(const Doctrine& d) const {
  auto instance = [&](const RuleInstance& i) {
    ordered_json j;
    j["A"] = i.a.name();
    if (i.c) j["A2"] = i.c->name();
    j["B"] = i.b.name();
    j["alpha"] = elem(d, alpha_object(d, rule, i), i.alpha);
    if (i.beta) j["beta"] = elem(d, beta_object(d, rule, i), *i.beta);
    if (rule == Rule::Skolemisation) {
      j["lhs"] = elem(d, i.a, *i.lhs);
      j["rhs"] = elem(d, i.a, *i.rhs);
    } else {
      j["term"] = i.term ? ordered_json{{"key", i.term->key()}, {"table", i.term->table()}} : ordered_json(nullptr);
      j["weak"] = i.weak ? ordered_json(*i.weak) : ordered_json(nullptr);
    }
    return j;
  };
  ordered_json out;
  out["rule"] = to_string(rule);
  out["mode"] = diagnostic ? "diagnostic" : "strict";
  out["pass"] = pass;
  out["hypotheses"] = ordered_json::array();
  for (const auto& h : hypotheses) out["hypotheses"].push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
  out["scanned"] = scanned;
  out["instances"] = instances;
  if (rule == Rule::IndependenceOfPremise || rule == Rule::ModifiedMarkov || rule == Rule::Markov)
    out["weak_failures"] = weak_failures;
  out["violation_count"] = violation_count;
  out["witnesses"] = ordered_json::array();
  for (const auto& w : witnesses) out["witnesses"].push_back(instance(w));
  out["violations"] = ordered_json::array();
  for (const auto& v : violations) out["violations"].push_back(instance(v));
  out["universe_note"] = universe_note;
  return out;
}

}  // namespace dialectica::rules
