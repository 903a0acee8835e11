#include "dialectica/dial.hpp"
#include "dialectica/doctrine_json.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::dial;
using cat::sized_object;
using cat::unit_object;

namespace {

const std::uint64_t kCap = cat::kDefaultCap;

// The predicate on (I * U) * X given pointwise by fn(i, u, x).
template <class Fn>
Elem pointwise(const doc::ValuedDoctrine& d, const DialObject& a, Fn fn) {
  Product iu = a.iu(kCap), iux = a.iux(kCap);
  std::vector<std::size_t> v(iux.object.size());
  for (std::size_t i = 0; i < a.i.size(); ++i)
    for (std::size_t u = 0; u < a.u.size(); ++u)
      for (std::size_t x = 0; x < a.x.size(); ++x) v[iux.index(iu.index(i, u), x)] = fn(i, u, x);
  return d.encode(v);
}

DialObject quad(std::size_t i, std::size_t u, std::size_t x) {
  DialObject a;
  a.i = sized_object(i);
  a.u = sized_object(u);
  a.x = sized_object(x);
  return a;
}

// Brute force over every (f0, f1), without the library search.
bool oracle_leq(const doc::Doctrine& d, const DialObject& a, const DialObject& b) {
  Product iu = a.iu(kCap), iuy = cat::product(iu.object, b.x, kCap);
  for (const auto& f0 : cat::enumerate_morphisms(iu.object, b.u))
    for (const auto& f1 : cat::enumerate_morphisms(iuy.object, a.x))
      if (validate_pair(d, a, b, WitnessPair{f0, f1})) return true;
  return false;
}

}  // namespace

TEST_CASE("diagonal and full predicates over 1, U = X = 2") {
  auto d = doc::powerset_example({1, 2});
  const auto& h = d->algebra();
  DialObject diag = quad(1, 2, 2), full = quad(1, 2, 2);
  diag.alpha = pointwise(*d, diag, [&](auto, auto u, auto x) { return u == x ? h.top : h.bottom; });
  full.alpha = d->top(full.iux(kCap).object);
  validate(*d, diag);
  validate(*d, full);

  auto w = dial_leq(*d, diag, full);
  REQUIRE(w);
  CHECK(w->f0.index() == 0);
  CHECK(w->f1.index() == 0);

  CHECK_FALSE(dial_leq(*d, full, diag));
  CHECK_FALSE(oracle_leq(*d, full, diag));
}

TEST_CASE("identity and composed pairs validate") {
  auto d = doc::kripke_example(doc::FinitePoset::chain(2), {1, 2});
  const auto& h = d->algebra();
  DialObject a = quad(1, 1, 2), b = quad(1, 2, 1), c = quad(1, 2, 2);
  a.alpha = pointwise(*d, a, [&](auto, auto, auto x) { return x == 0 ? h.bottom : h.top; });
  b.alpha = pointwise(*d, b, [&](auto, auto u, auto) { return u == 1 ? h.top : h.bottom; });
  c.alpha = pointwise(*d, c, [&](auto, auto u, auto x) { return u >= x ? h.top : h.bottom; });
  for (const auto* q : {&a, &b, &c}) CHECK(validate_pair(*d, *q, *q, identity_pair(*q)));
  auto ab = dial_leq(*d, a, b), bc = dial_leq(*d, b, c);
  REQUIRE(ab);
  REQUIRE(bc);
  CHECK(validate_pair(*d, a, c, compose_pairs(a, b, c, *ab, *bc)));
}

TEST_CASE("library search agrees with brute force") {
  auto d = doc::kripke_example(doc::FinitePoset::chain(2), {1, 2});
  DialFibre f = build_dial_fibre(*d, unit_object(), {unit_object(), sized_object(2)});
  // Spot-check every pair with the smaller shapes.
  for (std::size_t p = 0; p < f.elements.size(); ++p)
    for (std::size_t q = 0; q < f.elements.size(); ++q) {
      const auto& a = f.elements[p];
      const auto& b = f.elements[q];
      if (a.u.size() * a.x.size() * b.u.size() * b.x.size() > 4) continue;
      CHECK(f.leq[p][q].has_value() == oracle_leq(*d, a, b));
    }
}

TEST_CASE("bounded fibres are preorders") {
  auto d = doc::powerset_example({1, 2});
  DialFibre f = build_dial_fibre(*d, unit_object(), {unit_object(), sized_object(2)});
  CHECK(f.elements.size() == 26);
  CHECK(f.reflexive);
  CHECK(f.transitive);
  CHECK_FALSE(f.failure);
  CHECK(f.composed > 0);
  CHECK(f.classes == 2);
  for (std::size_t p = 0; p < f.elements.size(); ++p)
    for (std::size_t q = 0; q < f.elements.size(); ++q)
      if (f.leq[p][q]) CHECK(validate_pair(*d, f.elements[p], f.elements[q], *f.leq[p][q]));
}

TEST_CASE("reindexing is functorial and monotone") {
  auto d = doc::kripke_example(doc::FinitePoset::chain(2), {1, 2});
  FinObj one = unit_object(), two = sized_object(2);
  std::vector<DialObject> elems;
  for (FinObj u : {one, two}) {
    DialObject a = quad(2, u.size(), 1);
    for (Elem x = 0; x < d->fibre_size(a.iux(kCap).object); x += u == one ? 1 : 11) {
      a.alpha = x;
      elems.push_back(a);
    }
  }
  auto maps = cat::enumerate_morphisms(two, two);
  for (const auto& a : elems) {
    DialObject same = dial_reindex(*d, cat::identity(two), a);
    CHECK(same.alpha == a.alpha);
    for (const auto& g : maps)
      for (const auto& h : maps) {
        DialObject lhs = dial_reindex(*d, cat::compose(g, h), a);
        DialObject rhs = dial_reindex(*d, h, dial_reindex(*d, g, a));
        CHECK(lhs.alpha == rhs.alpha);
      }
    for (const auto& b : elems)
      if (dial_leq(*d, a, b))
        for (const auto& g : maps) CHECK(dial_leq(*d, dial_reindex(*d, g, a), dial_reindex(*d, g, b)));
  }
}

TEST_CASE("the search cap is enforced") {
  auto d = doc::powerset_example({1, 2});
  DialObject a = quad(2, 2, 2), b = quad(2, 2, 2);
  a.alpha = d->top(a.iux(kCap).object);
  b.alpha = a.alpha;
  SearchOptions tiny;
  tiny.cap = 8;
  CHECK_THROWS_AS(dial_leq(*d, a, b, tiny), SizeCapError);
}

TEST_CASE("implication characterisation") {
  auto d = doc::powerset_example({1, 2});
  doc::Freeness f(d);
  Theorem2Sample s = sample_theorem2(f, d->universe(), 40, 5);
  CHECK(s.samples == 40);
  CHECK(s.discrepancies == 0);
  CHECK(s.lhs_true > 0);
  CHECK(s.lhs_true < 40);
  Theorem2Sample again = sample_theorem2(f, d->universe(), 40, 5);
  CHECK(again.to_json(*d) == s.to_json(*d));

  // Over the antichain frame bottom is not quantifier-free.
  auto k = doc::kripke_example(doc::FinitePoset::antichain(2), {1, 2});
  doc::Freeness fk(k);
  DialObject z = quad(1, 1, 1);
  z.alpha = k->bottom(z.iux(kCap).object);
  CHECK_THROWS_AS(check_theorem2(fk, z, z), SideConditionError);
  CHECK_NOTHROW(check_theorem2(fk, z, z, {}, false));
}

TEST_CASE("quantifier-free completion matches the base order") {
  auto d = doc::powerset_example({1, 2});
  doc::Freeness f(d);
  Theorem4Report r = check_theorem4(f, {unit_object(), sized_object(2)});
  CHECK(r.pass);
  CHECK(r.not_found == 0);
  REQUIRE(r.fibres.size() == 2);
  for (const auto& fib : r.fibres) {
    CHECK(fib.order_mismatches == 0);
    CHECK(fib.cross_mismatches == 0);
    CHECK(fib.unmatched == 0);
    CHECK(fib.pairs == fib.images.size() * fib.images.size());
  }
}
