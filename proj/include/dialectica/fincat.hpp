#pragma once

// Finite sets and total functions: products, projections, pairing,
// exponentials, evaluation and currying.
//
// Elements are addressed by position. Morphism tables are enumerated in
// lexicographic order with table[0] the most significant digit, so the k-th
// element of an exponential B^A is the k-th morphism A -> B.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dialectica/error.hpp"

namespace dialectica::cat {

inline constexpr std::uint64_t kDefaultCap = 4096;

class FinObj {
 public:
  FinObj();  // the empty set named "0"
  FinObj(std::string name, std::vector<std::string> labels);

  const std::string& name() const noexcept;
  std::size_t size() const noexcept;
  const std::vector<std::string>& labels() const noexcept;
  const std::string& label(std::size_t i) const;
  std::optional<std::size_t> index_of(const std::string& label) const;

  friend bool operator==(const FinObj& a, const FinObj& b);
  friend bool operator!=(const FinObj& a, const FinObj& b) { return !(a == b); }

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

FinObj unit_object();                // "1" = {*}
FinObj sized_object(std::size_t n);  // "n" = {0, ..., n-1}

class FinMor {
 public:
  FinMor(FinObj dom, FinObj cod, std::vector<std::size_t> table);

  const FinObj& dom() const noexcept { return dom_; }
  const FinObj& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }
  std::size_t operator()(std::size_t i) const { return table_[i]; }

  // Position in enumerate_morphisms(dom, cod).
  std::uint64_t index() const;
  // "dom->cod#index"
  std::string key() const;

  friend bool operator==(const FinMor& a, const FinMor& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.table_ == b.table_;
  }

 private:
  FinObj dom_, cod_;
  std::vector<std::size_t> table_;
};

FinMor identity(const FinObj& a);
// g after f. Throws Error when cod(f) != dom(g).
FinMor compose(const FinMor& g, const FinMor& f);
FinMor terminal_map(const FinObj& a, const FinObj& terminal = unit_object());
// The constant map a -> b with value `point`.
FinMor constant_map(const FinObj& a, const FinObj& b, std::size_t point);

// |B|^|A|, saturating at UINT64_MAX.
std::uint64_t count_morphisms(const FinObj& a, const FinObj& b);
// Throws SizeCapError when |B|^|A| > cap.
std::vector<FinMor> enumerate_morphisms(const FinObj& a, const FinObj& b, std::uint64_t cap = kDefaultCap);
FinMor morphism_at(const FinObj& a, const FinObj& b, std::uint64_t index);

// Calls fn(table) for each morphism a -> b in canonical order until fn
// returns false. Returns false if stopped early.
template <class Fn>
bool for_each_table(std::size_t dom_size, std::size_t cod_size, Fn&& fn) {
  if (cod_size == 0 && dom_size > 0) return true;
  std::vector<std::size_t> t(dom_size, 0);
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(t))) return false;
    bool advanced = false;
    for (std::size_t i = dom_size; i > 0 && !advanced; --i) {
      if (++t[i - 1] < cod_size)
        advanced = true;
      else
        t[i - 1] = 0;
    }
    if (!advanced) return true;
  }
}

struct Product {
  FinObj left, right, object;
  FinMor proj_left, proj_right;

  std::size_t index(std::size_t a, std::size_t b) const { return a * right.size() + b; }
  // <f, g> : C -> left * right
  FinMor pair(const FinMor& f, const FinMor& g) const;
};

// Memoised; elements "(a,b)" in lexicographic order. Throws SizeCapError when
// |A|*|B| > cap.
Product product(const FinObj& a, const FinObj& b, std::uint64_t cap = kDefaultCap);

// f * g : src.object -> dst.object
FinMor product_map(const Product& src, const Product& dst, const FinMor& f, const FinMor& g);

struct Exponential {
  FinObj base;      // B
  FinObj exponent;  // A
  FinObj object;    // B^A
  Product eval_domain;  // B^A * A
  FinMor eval;          // B^A * A -> B

  std::size_t element_of(const FinMor& h) const;  // h : A -> B
  // The unique h : C -> B^A with eval . (h * id) = g, for g : C * A -> B.
  FinMor curry(const Product& c_times_a, const FinMor& g) const;
};

// Throws SizeCapError when |B|^|A| > cap.
Exponential exponential(const FinObj& b, const FinObj& a, std::uint64_t cap = kDefaultCap);

}  // namespace dialectica::cat
