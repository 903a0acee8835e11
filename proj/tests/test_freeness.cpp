#include "dialectica/doctrine_json.hpp"
#include "dialectica/freeness.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::doc;
using cat::sized_object;
using cat::unit_object;

namespace {

FinitePoset bowtie() {
  FinitePoset p;
  p.elements = {"a", "b", "c", "d"};
  p.leq = {{true, false, true, true}, {false, true, true, true}, {false, false, true, false}, {false, false, false, true}};
  return p;
}

// The atom of the antichain algebra holding world w only, over 1.
Elem atom(const ValuedDoctrine& d, std::size_t w) {
  const auto& h = d.algebra();
  for (std::size_t i = 0; i < h.n; ++i)
    if (h.worlds[i] == std::vector<std::size_t>{w}) return d.encode({i});
  FAIL("no atom");
  return 0;
}

}  // namespace

TEST_CASE("every powerset predicate is quantifier-free") {
  auto d = powerset_example({1, 2});
  Freeness f(d);
  for (const auto& a : d->working_objects()) {
    for (Elem x = 0; x < d->fibre_size(a); ++x) {
      CHECK(f.base().existential_free(a, x));
      CHECK(f.base().universal_free(a, x));
      CHECK(f.quantifier_free(a, x));
    }
  }
}

TEST_CASE("antichain frame: top is not existential-free") {
  auto d = kripke_example(FinitePoset::antichain(2), {1, 2});
  Freeness f(d);
  FinObj one = unit_object();
  const FreenessAnalyzer& an = f.base();
  FreenessReport r = an.report(FreenessProperty::ExistentialFree, one, d->top(one));
  CHECK_FALSE(r.verdict);
  REQUIRE(r.failure);
  CHECK(r.failure->b.size() == 2);
  CHECK(revalidate(an, r));

  std::vector<Elem> free = an.existential_free_elements(one);
  std::vector<Elem> expected = {d->bottom(one), atom(*d, 0), atom(*d, 1)};
  std::sort(expected.begin(), expected.end());
  CHECK(free == expected);

  // Bottom is existential-free but not universal-free among the
  // existential-free predicates.
  CHECK_FALSE(f.quantifier_free(one, d->bottom(one)));
  CHECK(f.quantifier_free(one, atom(*d, 0)));
  FreenessReport u = f.sub_analyzer().report(FreenessProperty::UniversalFree, one,
                                             *f.sub().from_base(one, d->bottom(one)));
  CHECK_FALSE(u.verdict);
  CHECK(revalidate(f.sub_analyzer(), u));
}

TEST_CASE("positive reports carry re-checkable witnesses") {
  auto d = kripke_example(FinitePoset::chain(2), {1, 2});
  Freeness f(d);
  FinObj two = sized_object(2);
  for (Elem x = 0; x < d->fibre_size(two); ++x)
    for (FreenessProperty p : {FreenessProperty::ExistentialSplitting, FreenessProperty::UniversalSplitting,
                               FreenessProperty::ExistentialFree, FreenessProperty::UniversalFree}) {
      FreenessReport r = f.base().report(p, two, x);
      CHECK(r.verdict);
      CHECK(revalidate(f.base(), r));
    }
}

TEST_CASE("the existential-free subdoctrine") {
  auto d = kripke_example(FinitePoset::antichain(2), {1, 2});
  Freeness f(d);
  const SubDoctrine& s = f.sub();
  CHECK(s.fibre_size(unit_object()) == 3);
  CHECK(s.fibre_size(sized_object(2)) == 9);
  CHECK(check_doctrine(s).pass);
  // Joins of atoms leave the subdoctrine, so existential quantifiers are
  // missing there.
  CheckReport a = check_adjoints(s);
  CHECK_FALSE(a.pass);
  bool missing = false;
  for (const auto& v : a.violations) missing = missing || v.kind == "missing_adjoint";
  CHECK(missing);
  Projection p = s.projection(unit_object(), sized_object(2), Side::Left);
  for (Elem x = 0; x < s.fibre_size(p.source()); ++x) CHECK(s.forall(p, x).has_value());
}

TEST_CASE("enough free predicates") {
  auto d = powerset_example({1, 2});
  Freeness f(d);
  CoverReport e = has_enough_existential_free(f.base());
  CHECK(e.pass);
  CHECK(e.covers.size() == 2 + 4);
  for (const auto& c : e.covers) {
    Projection p = d->projection(c.object, *c.via, Side::Left);
    CHECK(d->equal(c.object, *d->exists(p, *c.beta), c.alpha));
  }
  CHECK(has_enough_universal_free(f.sub_analyzer()).pass);
}

TEST_CASE("Goedel verdicts") {
  SUBCASE("powerset") {
    GodelReport r = is_godel_doctrine(Freeness(powerset_example({1, 2})));
    CHECK(r.pass);
    CHECK(r.parts.size() == 5);
  }
  SUBCASE("chain frames") {
    for (std::size_t n : {2, 3}) CHECK(is_godel_doctrine(Freeness(kripke_example(FinitePoset::chain(n), {1, 2}))).pass);
  }
  SUBCASE("two-world antichain passes over the universe {1,2}") {
    GodelReport r = is_godel_doctrine(Freeness(kripke_example(FinitePoset::antichain(2), {1, 2})));
    CHECK(r.pass);
  }
  SUBCASE("three-world antichain lacks existential-free covers") {
    GodelReport r = is_godel_doctrine(Freeness(kripke_example(FinitePoset::antichain(3), {1, 2})));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.parts[2].pass);
    CHECK(r.parts[2].witness["alpha"]["object"].is_string());
  }
  SUBCASE("bowtie frame breaks stability under forall") {
    auto d = kripke_example(bowtie(), {1, 2});
    Freeness f(d);
    GodelReport r = is_godel_doctrine(f);
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.parts[3].pass);
    const auto& w = r.parts[3].witness;
    // Re-check the witness: beta existential-free, its forall not.
    std::string src = w["beta"]["object"], dst = w["forall_beta"]["object"];
    std::optional<FinObj> a, b;
    for (const auto& o : d->working_objects()) {
      if (o.name() == src) a = o;
      if (o.name() == dst) b = o;
    }
    REQUIRE(a);
    REQUIRE(b);
    CHECK(f.base().existential_free(*a, w["beta"]["index"].get<Elem>()));
    CHECK_FALSE(f.base().existential_free(*b, w["forall_beta"]["index"].get<Elem>()));
  }
}

TEST_CASE("non-cartesian-closed universes are reported, not fatal") {
  auto d = powerset_example({1, 2, 3});
  SearchOptions tight;
  tight.cap = 64;
  GodelReport r = is_godel_doctrine(Freeness(load_doctrine(nlohmann::json{{"generator", d->generator()}}, 64), tight));
  CHECK_FALSE(r.parts[0].pass);
  CHECK(r.parts[0].detail.find("cap") != std::string::npos);
}

TEST_CASE("prenex forms") {
  auto d = kripke_example(FinitePoset::antichain(2), {1, 2});
  Freeness f(d);
  FinObj one = unit_object();
  auto top = prenex_form(f, one, d->top(one), d->universe());
  REQUIRE(top);
  CHECK(top->u.size() == 2);
  CHECK(d->equal(one, exists_forall(*d, top->iu, top->iux, top->alpha_d), d->top(one)));
  CHECK(f.quantifier_free(top->iux.object, top->alpha_d));

  auto p = powerset_example({1, 2});
  Freeness fp(p);
  FinObj two = sized_object(2);
  for (Elem x = 0; x < 4; ++x) {
    auto pf = prenex_form(fp, two, x, p->universe());
    REQUIRE(pf);
    CHECK(pf->u.size() == 1);
    CHECK(pf->x.size() == 1);
  }
}
