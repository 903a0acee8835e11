#include <random>

#include "dialectica/fincat.hpp"
#include "dialectica/parallel.hpp"
#include "doctest.h"

using namespace dialectica;
using namespace dialectica::cat;

TEST_CASE("objects and morphisms") {
  FinObj two = sized_object(2), three = sized_object(3);
  CHECK(unit_object().size() == 1);
  CHECK(sized_object(1) == unit_object());
  CHECK(FinObj().size() == 0);
  CHECK(count_morphisms(three, two) == 8);
  CHECK(count_morphisms(FinObj(), two) == 1);
  CHECK(count_morphisms(two, FinObj()) == 0);
  CHECK_THROWS_AS(FinMor(two, three, {0, 3}), Error);
  CHECK_THROWS_AS(enumerate_morphisms(sized_object(13), two, 4096), SizeCapError);

  auto all = enumerate_morphisms(two, three);
  REQUIRE(all.size() == 9);
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(all[k].index() == k);
    CHECK(morphism_at(two, three, k) == all[k]);
  }
  CHECK(all[1].table() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("products pair and project") {
  FinObj two = sized_object(2), three = sized_object(3);
  Product p = product(two, three);
  CHECK(p.object.size() == 6);
  CHECK(p.object.name() == "2*3");
  CHECK(p.object.label(p.index(1, 2)) == "(1,2)");
  for (const auto& f : enumerate_morphisms(three, two))
    for (const auto& g : enumerate_morphisms(three, three)) {
      FinMor h = p.pair(f, g);
      CHECK(compose(p.proj_left, h) == f);
      CHECK(compose(p.proj_right, h) == g);
    }
  CHECK_THROWS_AS(product(sized_object(100), sized_object(100), 4096), SizeCapError);
}

TEST_CASE("exponentials evaluate and curry") {
  FinObj two = sized_object(2), three = sized_object(3);
  Exponential e = exponential(three, two);
  CHECK(e.object.size() == 9);
  for (const auto& h : enumerate_morphisms(two, three)) {
    std::size_t k = e.element_of(h);
    for (std::size_t a = 0; a < 2; ++a) CHECK(e.eval(e.eval_domain.index(k, a)) == h(a));
  }
  Product ca = product(two, two);
  for (const auto& g : enumerate_morphisms(ca.object, three)) {
    FinMor h = e.curry(ca, g);
    CHECK(compose(e.eval, product_map(ca, e.eval_domain, h, identity(two))) == g);
  }
}

TEST_CASE("property: composition is associative and unital") {
  std::mt19937_64 rng(3);
  FinObj objs[] = {sized_object(1), sized_object(2), sized_object(3)};
  auto any = [&](const FinObj& a, const FinObj& b) {
    std::uint64_t n = count_morphisms(a, b);
    return morphism_at(a, b, std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng));
  };
  for (int i = 0; i < 300; ++i) {
    const FinObj& a = objs[rng() % 3];
    const FinObj& b = objs[rng() % 3];
    const FinObj& c = objs[rng() % 3];
    const FinObj& d = objs[rng() % 3];
    FinMor f = any(a, b), g = any(b, c), h = any(c, d);
    CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
    CHECK(compose(identity(b), f) == f);
    CHECK(compose(f, identity(a)) == f);
    CHECK(compose(terminal_map(b), f) == terminal_map(a));
  }
  CHECK_THROWS_AS(compose(identity(objs[0]), identity(objs[1])), Error);
}

TEST_CASE("parallel search is deterministic") {
  for (unsigned jobs : {1u, 2u, 8u}) {
    auto hit = parallel_find_first(10000, jobs, [](std::size_t i) { return i % 977 == 976 || i == 5000; });
    CHECK(hit == std::optional<std::size_t>(976));
    CHECK_FALSE(parallel_find_first(100, jobs, [](std::size_t) { return false; }));
  }
  CHECK_THROWS_AS(parallel_for(50, 4, [](std::size_t i) { if (i == 7) throw Error("x"); }), Error);
}
