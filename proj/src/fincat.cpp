#include "dialectica/fincat.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>

namespace dialectica::cat {

struct FinObj::Data {
  std::string name;
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> positions;
};

FinObj::FinObj() : FinObj("0", {}) {}

FinObj::FinObj(std::string name, std::vector<std::string> labels) {
  auto d = std::make_shared<Data>();
  d->name = std::move(name);
  d->labels = std::move(labels);
  for (std::size_t i = 0; i < d->labels.size(); ++i) {
    if (!d->positions.emplace(d->labels[i], i).second)
      throw Error("object " + d->name + ": duplicate element label " + d->labels[i]);
  }
  d_ = std::move(d);
}

const std::string& FinObj::name() const noexcept { return d_->name; }
std::size_t FinObj::size() const noexcept { return d_->labels.size(); }
const std::vector<std::string>& FinObj::labels() const noexcept { return d_->labels; }

const std::string& FinObj::label(std::size_t i) const {
  if (i >= d_->labels.size()) throw Error("object " + d_->name + " has no element " + std::to_string(i));
  return d_->labels[i];
}

std::optional<std::size_t> FinObj::index_of(const std::string& label) const {
  auto it = d_->positions.find(label);
  if (it == d_->positions.end()) return std::nullopt;
  return it->second;
}

bool operator==(const FinObj& a, const FinObj& b) {
  return a.d_ == b.d_ || (a.d_->name == b.d_->name && a.d_->labels == b.d_->labels);
}

FinObj unit_object() {
  static const FinObj unit("1", {"*"});
  return unit;
}

FinObj sized_object(std::size_t n) {
  if (n == 1) return unit_object();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FinObj(std::to_string(n), std::move(labels));
}

// -- morphisms --------------------------------------------------------------

FinMor::FinMor(FinObj dom, FinObj cod, std::vector<std::size_t> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != dom_.size())
    throw Error("morphism " + dom_.name() + " -> " + cod_.name() + ": table has " + std::to_string(table_.size()) +
                " entries, domain has " + std::to_string(dom_.size()));
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] >= cod_.size())
      throw Error("morphism " + dom_.name() + " -> " + cod_.name() + ": image of " + dom_.label(i) +
                  " is outside the codomain");
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

std::uint64_t FinMor::index() const {
  std::uint64_t idx = 0;
  for (std::size_t v : table_) {
    std::uint64_t next = checked_mul(idx, cod_.size());
    if (next == std::numeric_limits<std::uint64_t>::max()) throw SizeCapError("morphism index overflows");
    idx = next + v;
  }
  return idx;
}

std::string FinMor::key() const { return dom_.name() + "->" + cod_.name() + "#" + std::to_string(index()); }

FinMor identity(const FinObj& a) {
  std::vector<std::size_t> t(a.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
  return FinMor(a, a, std::move(t));
}

FinMor compose(const FinMor& g, const FinMor& f) {
  if (f.cod() != g.dom())
    throw Error("cannot compose " + f.dom().name() + " -> " + f.cod().name() + " with " + g.dom().name() + " -> " +
                g.cod().name());
  std::vector<std::size_t> t(f.dom().size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = g(f(i));
  return FinMor(f.dom(), g.cod(), std::move(t));
}

FinMor terminal_map(const FinObj& a, const FinObj& terminal) {
  if (terminal.size() != 1) throw Error("terminal_map: " + terminal.name() + " is not a singleton");
  return FinMor(a, terminal, std::vector<std::size_t>(a.size(), 0));
}

FinMor constant_map(const FinObj& a, const FinObj& b, std::size_t point) {
  return FinMor(a, b, std::vector<std::size_t>(a.size(), point));
}

std::uint64_t count_morphisms(const FinObj& a, const FinObj& b) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < a.size(); ++i) n = checked_mul(n, b.size());
  return n;
}

std::vector<FinMor> enumerate_morphisms(const FinObj& a, const FinObj& b, std::uint64_t cap) {
  std::uint64_t n = count_morphisms(a, b);
  if (n > cap)
    throw SizeCapError("enumerating morphisms " + a.name() + " -> " + b.name() + " needs " +
                       (n == std::numeric_limits<std::uint64_t>::max() ? std::string("too many") : std::to_string(n)) +
                       " tables, cap is " + std::to_string(cap));
  std::vector<FinMor> out;
  out.reserve(n);
  for_each_table(a.size(), b.size(), [&](const std::vector<std::size_t>& t) {
    out.emplace_back(a, b, t);
    return true;
  });
  return out;
}

FinMor morphism_at(const FinObj& a, const FinObj& b, std::uint64_t index) {
  if (index >= count_morphisms(a, b))
    throw Error("no morphism " + a.name() + " -> " + b.name() + " with index " + std::to_string(index));
  std::vector<std::size_t> t(a.size());
  for (std::size_t i = a.size(); i > 0; --i) {
    t[i - 1] = index % b.size();
    index /= b.size();
  }
  return FinMor(a, b, std::move(t));
}

// -- products ---------------------------------------------------------------

namespace {

std::string wrap(const FinObj& a) {
  const std::string& n = a.name();
  if (n.find_first_of("*^") != std::string::npos) return "(" + n + ")";
  return n;
}

struct ProductCache {
  std::shared_mutex mutex;
  std::map<std::pair<std::string, std::string>, std::vector<Product>> entries;
};

ProductCache& product_cache() {
  static ProductCache cache;
  return cache;
}

Product build_product(const FinObj& a, const FinObj& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  std::vector<std::size_t> pl, pr;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      labels.push_back("(" + a.label(i) + "," + b.label(j) + ")");
      pl.push_back(i);
      pr.push_back(j);
    }
  FinObj obj(wrap(a) + "*" + wrap(b), std::move(labels));
  return Product{a, b, obj, FinMor(obj, a, std::move(pl)), FinMor(obj, b, std::move(pr))};
}

}  // namespace

FinMor Product::pair(const FinMor& f, const FinMor& g) const {
  if (f.dom() != g.dom()) throw Error("pairing needs a common domain");
  if (f.cod() != left || g.cod() != right) throw Error("pairing: codomains do not match the product factors");
  std::vector<std::size_t> t(f.dom().size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = index(f(i), g(i));
  return FinMor(f.dom(), object, std::move(t));
}

Product product(const FinObj& a, const FinObj& b, std::uint64_t cap) {
  if (checked_mul(a.size(), b.size()) > cap)
    throw SizeCapError("product " + a.name() + " * " + b.name() + " has " + std::to_string(a.size() * b.size()) +
                       " elements, cap is " + std::to_string(cap));
  auto& cache = product_cache();
  auto key = std::make_pair(a.name(), b.name());
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end())
      for (const auto& p : it->second)
        if (p.left == a && p.right == b) return p;
  }
  Product p = build_product(a, b);
  std::unique_lock lock(cache.mutex);
  auto& bucket = cache.entries[key];
  for (const auto& q : bucket)
    if (q.left == a && q.right == b) return q;
  bucket.push_back(p);
  return p;
}

FinMor product_map(const Product& src, const Product& dst, const FinMor& f, const FinMor& g) {
  if (f.dom() != src.left || g.dom() != src.right || f.cod() != dst.left || g.cod() != dst.right)
    throw Error("product_map: factor types do not match");
  std::vector<std::size_t> t(src.object.size());
  for (std::size_t i = 0; i < src.left.size(); ++i)
    for (std::size_t j = 0; j < src.right.size(); ++j) t[src.index(i, j)] = dst.index(f(i), g(j));
  return FinMor(src.object, dst.object, std::move(t));
}

// -- exponentials -----------------------------------------------------------

std::size_t Exponential::element_of(const FinMor& h) const {
  if (h.dom() != exponent || h.cod() != base) throw Error("exponential: element has the wrong type");
  return static_cast<std::size_t>(h.index());
}

FinMor Exponential::curry(const Product& c_times_a, const FinMor& g) const {
  if (c_times_a.right != exponent || g.dom() != c_times_a.object || g.cod() != base)
    throw Error("curry: g must have type C * A -> B");
  const FinObj& c = c_times_a.left;
  std::vector<std::size_t> t(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::size_t> row(exponent.size());
    for (std::size_t a = 0; a < exponent.size(); ++a) row[a] = g(c_times_a.index(i, a));
    t[i] = static_cast<std::size_t>(FinMor(exponent, base, std::move(row)).index());
  }
  return FinMor(c, object, std::move(t));
}

Exponential exponential(const FinObj& b, const FinObj& a, std::uint64_t cap) {
  std::uint64_t n = count_morphisms(a, b);
  if (n > cap)
    throw SizeCapError("exponential " + b.name() + "^" + a.name() + " exceeds the cap of " + std::to_string(cap));
  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<std::vector<std::size_t>> tables;
  for_each_table(a.size(), b.size(), [&](const std::vector<std::size_t>& t) {
    std::string l = "[";
    for (std::size_t i = 0; i < t.size(); ++i) l += (i ? "," : "") + b.label(t[i]);
    labels.push_back(l + "]");
    tables.push_back(t);
    return true;
  });
  FinObj obj(wrap(b) + "^" + wrap(a), std::move(labels));
  Product dom = product(obj, a, std::max<std::uint64_t>(cap, obj.size() * a.size()));
  std::vector<std::size_t> ev(dom.object.size());
  for (std::size_t f = 0; f < obj.size(); ++f)
    for (std::size_t x = 0; x < a.size(); ++x) ev[dom.index(f, x)] = tables[f][x];
  return Exponential{b, a, obj, dom, FinMor(dom.object, b, std::move(ev))};
}

}  // namespace dialectica::cat
