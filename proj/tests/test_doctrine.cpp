#include "dialectica/doctrine.hpp"
#include "dialectica/doctrine_json.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::doc;
using nlohmann::json;
using cat::sized_object;
using cat::unit_object;

namespace {

bool has_kind(const CheckReport& r, const std::string& kind) {
  for (const auto& v : r.violations)
    if (v.kind == kind) return true;
  return false;
}

// Membership of point a in the subset coded by x, for the powerset doctrine.
bool member(const ValuedDoctrine& d, const FinObj& obj, Elem x, std::size_t a) {
  return d.values(obj.size(), x)[a] == d.algebra().top;
}

}  // namespace

TEST_CASE("finite Heyting algebras of up-sets") {
  CHECK(FiniteHeyting::up_sets(FinitePoset::chain(2)).n == 3);
  CHECK(FiniteHeyting::up_sets(FinitePoset::antichain(2)).n == 4);
  CHECK(FiniteHeyting::up_sets(FinitePoset::chain(3)).n == 4);
  FiniteHeyting h = FiniteHeyting::up_sets(FinitePoset::chain(2));
  for (std::size_t a = 0; a < h.n; ++a)
    for (std::size_t b = 0; b < h.n; ++b)
      for (std::size_t c = 0; c < h.n; ++c)
        CHECK(h.leq(h.meet[a * h.n + b], c) == h.leq(a, h.imp[b * h.n + c]));
}

TEST_CASE("poset defects are reported") {
  FinitePoset p;
  p.elements = {"a", "b"};
  p.leq = {{true, true}, {true, true}};
  REQUIRE(p.defect());
  CHECK(p.defect()->kind == "antisymmetry");
  p.leq = {{false, false}, {false, true}};
  CHECK(p.defect()->kind == "reflexivity");
  CHECK_FALSE(FinitePoset::chain(3).defect());
}

TEST_CASE("example doctrines satisfy the doctrine laws") {
  std::vector<std::shared_ptr<const Doctrine>> ds = {powerset_example({1, 2}),
                                                     kripke_example(FinitePoset::chain(2), {1, 2}),
                                                     kripke_example(FinitePoset::antichain(2), {1, 2})};
  for (const auto& d : ds) {
    CAPTURE(d->kind());
    CheckReport c = check_doctrine(*d);
    CHECK(c.pass);
    CHECK(check_residuation(*d).pass);
    CheckReport a = check_adjoints(*d);
    CHECK(a.pass);
    CheckReport bc = beck_chevalley(*d);
    CHECK(bc.pass);
    CHECK(bc.checked["left_pass"] == true);
    CHECK(bc.checked["right_pass"] == true);
  }
}

TEST_CASE("powerset quantifiers are image and dual image") {
  auto d = powerset_example({1, 2});
  FinObj two = sized_object(2);
  for (Side keep : {Side::Left, Side::Right}) {
    Projection p = d->projection(two, two, keep);
    for (Elem x = 0; x < 16; ++x) {
      Elem e = *d->exists(p, x), a = *d->forall(p, x);
      for (std::size_t t = 0; t < 2; ++t) {
        bool some = false, every = true;
        for (std::size_t o = 0; o < 2; ++o) {
          std::size_t point = keep == Side::Left ? p.product.index(t, o) : p.product.index(o, t);
          bool in = member(*d, p.source(), x, point);
          some = some || in;
          every = every && in;
        }
        CHECK(member(*d, two, e, t) == some);
        CHECK(member(*d, two, a, t) == every);
      }
    }
  }
}

TEST_CASE("closed-form quantifiers agree with the exhaustive search") {
  auto d = kripke_example(FinitePoset::chain(3), {1, 2});
  FinObj two = sized_object(2);
  Projection p = d->projection(two, two, Side::Left);
  for (Quantifier q : {Quantifier::Exists, Quantifier::Forall}) {
    AdjointSearch s = adjoint(*d, p, q);
    REQUIRE(s.witness);
    for (Elem x = 0; x < s.witness->table.size(); ++x) CHECK(s.witness->table[x] == *d->quantify(q, p, x));
  }
}

TEST_CASE("labels") {
  auto d = powerset_example({1, 2});
  FinObj two = sized_object(2);
  CHECK(d->label(two, d->bottom(two)) == "{}");
  CHECK(d->label(two, d->top(two)) == "{0,1}");
  auto k = kripke_example(FinitePoset::chain(2), {1});
  CHECK(k->label(unit_object(), k->top(unit_object())) == "{(w0,*),(w1,*)}");
}

TEST_CASE("explicit tables round trip") {
  auto d = kripke_example(FinitePoset::chain(2), {1, 2});
  json doc = doctrine_to_json(*d);
  doc.erase("generator");
  auto e = load_doctrine(doc);
  CHECK(e->kind() == "explicit");
  CHECK(check_doctrine(*e).pass);
  CHECK(check_adjoints(*e).pass);
  CHECK(beck_chevalley(*e).pass);
  FinObj two = sized_object(2);
  Projection p = d->projection(two, two, Side::Right);
  for (Elem x = 0; x < d->fibre_size(p.source()); ++x) {
    CHECK(*e->exists(p, x) == *d->exists(p, x));
    CHECK(*e->forall(p, x) == *d->forall(p, x));
  }
  for (const auto& f : cat::enumerate_morphisms(two, two))
    for (Elem y = 0; y < d->fibre_size(two); ++y) CHECK(e->reindex(f, y) == d->reindex(f, y));
  CHECK(doctrine_to_json(*e) == doc);
}

TEST_CASE("generator documents rebuild the doctrine") {
  auto d = kripke_example(FinitePoset::antichain(2), {1, 2});
  auto back = load_doctrine(json{{"generator", d->generator()}});
  CHECK(back->kind() == "kripke");
  CHECK(doctrine_to_json(*back) == doctrine_to_json(*d));
}

TEST_CASE("broken tables are caught by the checks") {
  auto d = powerset_example({1});
  json doc = doctrine_to_json(*d);
  doc.erase("generator");
  doc.erase("heyting");
  doc["reindex"]["1->1#0"] = json::array({1, 0});
  auto e = load_doctrine(doc);
  CheckReport c = check_doctrine(*e);
  CHECK_FALSE(c.pass);
  CHECK(has_kind(c, "functoriality_identity"));
  CHECK(has_kind(c, "monotonicity"));
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(load_doctrine(json::array()), DoctrineError);
  CHECK_THROWS_AS(load_doctrine(json{{"universe", json::array()}}), DoctrineError);
  CHECK_THROWS_AS(load_doctrine(json{{"generator", {{"kind", "nope"}}}}), DoctrineError);
  json doc = doctrine_to_json(*powerset_example({1}));
  doc.erase("generator");
  doc["reindex"]["1->1#7"] = json::array({0, 1});
  CHECK_THROWS_AS(load_doctrine(doc), DoctrineError);
  doc = doctrine_to_json(*powerset_example({1}));
  doc.erase("generator");
  doc["fibres"]["1"]["leq"] = json::array({json::array({1})});
  CHECK_THROWS_AS(load_doctrine(doc), DoctrineError);
}
