#pragma once

// Doctrines P : C^op -> Pos over a finite universe of finite sets.
//
// A fibre element is an index into the fibre's canonical enumeration. All
// doctrines are immutable once built; the search caches are synchronised.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dialectica/fincat.hpp"
#include "dialectica/parallel.hpp"
#include "json.hpp"

namespace dialectica::doc {

using cat::FinMor;
using cat::FinObj;
using cat::Product;
using Elem = std::uint64_t;

// Largest fibre any doctrine will enumerate.
inline constexpr Elem kFibreLimit = Elem{1} << 20;
// Largest order or operation table written out explicitly.
inline constexpr Elem kTableLimit = Elem{1} << 20;

enum class Side { Left, Right };
enum class Quantifier { Exists, Forall };

const char* to_string(Side s);
const char* to_string(Quantifier q);

struct Projection {
  Product product;
  Side keep;

  const FinObj& source() const { return product.object; }
  const FinObj& target() const { return keep == Side::Left ? product.left : product.right; }
  const FinObj& other() const { return keep == Side::Left ? product.right : product.left; }
  const FinMor& map() const { return keep == Side::Left ? product.proj_left : product.proj_right; }
  std::string describe() const;
};

Projection make_projection(const FinObj& a, const FinObj& b, Side keep, std::uint64_t cap = cat::kDefaultCap);

struct FinitePoset {
  std::vector<std::string> elements;
  std::vector<std::vector<bool>> leq;  // leq[i][j]: i <= j

  std::size_t size() const { return elements.size(); }
  bool le(std::size_t i, std::size_t j) const { return leq[i][j]; }

  // First failing axiom as (kind, detail, witness indices), if any.
  struct Defect {
    std::string kind;
    std::string detail;
    std::vector<std::size_t> witness;
  };
  std::optional<Defect> defect() const;

  static FinitePoset chain(std::size_t n);
  static FinitePoset antichain(std::size_t n);
};

class Doctrine {
 public:
  explicit Doctrine(std::uint64_t cap = cat::kDefaultCap) : cap_(cap) {}
  virtual ~Doctrine() = default;
  Doctrine(const Doctrine&) = delete;
  Doctrine& operator=(const Doctrine&) = delete;

  virtual std::string kind() const = 0;
  virtual const std::vector<FinObj>& universe() const = 0;
  // Objects with a fibre that the checks enumerate: by default the universe
  // and the binary products of its members.
  virtual std::vector<FinObj> working_objects() const;

  virtual bool has_fibre(const FinObj& a) const = 0;
  virtual Elem fibre_size(const FinObj& a) const = 0;
  virtual bool leq(const FinObj& a, Elem x, Elem y) const = 0;
  // P_f : P(cod f) -> P(dom f)
  virtual Elem reindex(const FinMor& f, Elem y) const = 0;
  virtual std::string label(const FinObj&, Elem x) const { return std::to_string(x); }

  // Adjoints to reindexing along a projection, or nullopt when the value
  // does not exist. The default implementation is the exhaustive search.
  virtual std::optional<Elem> exists(const Projection& p, Elem x) const;
  virtual std::optional<Elem> forall(const Projection& p, Elem x) const;
  std::optional<Elem> quantify(Quantifier q, const Projection& p, Elem x) const {
    return q == Quantifier::Exists ? exists(p, x) : forall(p, x);
  }

  virtual bool has_heyting() const { return false; }
  // Defaults locate the extremal elements by search; the binary operations
  // throw DoctrineError unless the doctrine provides them.
  virtual Elem top(const FinObj& a) const;
  virtual Elem bottom(const FinObj& a) const;
  virtual Elem meet(const FinObj& a, Elem x, Elem y) const;
  virtual Elem join(const FinObj& a, Elem x, Elem y) const;
  virtual Elem implies(const FinObj& a, Elem x, Elem y) const;

  // Parameters a loader can use to rebuild this doctrine, or null.
  virtual nlohmann::json generator() const { return nullptr; }

  bool equal(const FinObj& a, Elem x, Elem y) const { return leq(a, x, y) && leq(a, y, x); }
  std::uint64_t cap() const noexcept { return cap_; }
  Projection projection(const FinObj& a, const FinObj& b, Side keep) const {
    return make_projection(a, b, keep, cap_);
  }

 protected:
  std::uint64_t cap_;

 private:
  using Rows = std::vector<std::optional<Elem>>;
  const Rows& search_rows(const Projection& p, Quantifier q) const;

  mutable std::mutex search_mutex_;
  mutable std::map<std::string, std::shared_ptr<const Rows>> search_cache_;
};

// -- adjoint search ---------------------------------------------------------

struct AdjointWitness {
  Quantifier direction;
  Projection along;
  std::vector<Elem> table;  // indexed by elements of P(source)
};

struct AdjointSearch {
  std::optional<AdjointWitness> witness;
  // When no adjoint exists: an element of P(source) with no admissible value.
  std::optional<Elem> missing;
};

// Exhaustive: for each x in P(A*B) the value must be the unique y in P(A)
// with (y <= z iff x <= P_pi z) for all z (left), or (z <= y iff P_pi z <= x)
// (right). Ignores any closed form the doctrine provides.
AdjointSearch adjoint(const Doctrine& d, const Projection& p, Quantifier q);

// Per-row form of the same search.
std::optional<Elem> search_adjoint_value(const Doctrine& d, const Projection& p, Quantifier q, Elem x);

// -- reports ------------------------------------------------------------------

struct Violation {
  std::string kind;
  std::string detail;
  nlohmann::json witness;
};

struct CheckReport {
  std::string check;
  bool pass = true;
  std::vector<Violation> violations;  // at most kMaxViolations recorded
  std::uint64_t violation_count = 0;
  nlohmann::ordered_json checked = nlohmann::ordered_json::object();  // instance counts
  std::vector<std::string> notes;

  static constexpr std::size_t kMaxViolations = 20;
  void add(Violation v);
  void merge(const CheckReport& other);
  nlohmann::ordered_json to_json() const;
};

// Poset axioms, monotonicity and functoriality of reindexing, and when
// present the Heyting laws and their preservation.
CheckReport check_doctrine(const Doctrine& d, const SearchOptions& opts = {});

// Adjunction equivalences, unit/counit inequalities, and agreement of the
// doctrine's quantifiers with the exhaustive search, along every projection
// between universe objects.
CheckReport check_adjoints(const Doctrine& d, const SearchOptions& opts = {});

// Both orientations of every square of projections over the universe.
CheckReport beck_chevalley(const Doctrine& d, const SearchOptions& opts = {});

// Residuation a & b <= c iff a <= b -> c on every working fibre.
CheckReport check_residuation(const Doctrine& d, const SearchOptions& opts = {});

// -- finite Heyting algebras and pointwise doctrines --------------------------

struct FiniteHeyting {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> worlds;  // up-set members per element, when built from a frame
  std::size_t n = 0, top = 0, bottom = 0;
  std::vector<std::uint8_t> le;
  std::vector<std::size_t> meet, join, imp;  // n * n

  bool leq(std::size_t a, std::size_t b) const { return le[a * n + b] != 0; }
  static FiniteHeyting up_sets(const FinitePoset& frame);
};

// P(A) = H^A ordered pointwise, reindexing by precomposition. Element x
// encodes the values v_a as sum v_a * |H|^a. Quantifiers are pointwise joins
// and meets over the projected coordinate.
class ValuedDoctrine : public Doctrine {
 public:
  ValuedDoctrine(std::string kind, FinitePoset frame, std::vector<FinObj> universe, nlohmann::json generator,
                 std::uint64_t cap = cat::kDefaultCap);

  std::string kind() const override { return kind_; }
  const std::vector<FinObj>& universe() const override { return universe_; }
  bool has_fibre(const FinObj& a) const override;
  Elem fibre_size(const FinObj& a) const override;
  bool leq(const FinObj& a, Elem x, Elem y) const override;
  Elem reindex(const FinMor& f, Elem y) const override;
  std::string label(const FinObj& a, Elem x) const override;
  std::optional<Elem> exists(const Projection& p, Elem x) const override;
  std::optional<Elem> forall(const Projection& p, Elem x) const override;
  bool has_heyting() const override { return true; }
  Elem top(const FinObj& a) const override;
  Elem bottom(const FinObj& a) const override;
  Elem meet(const FinObj& a, Elem x, Elem y) const override;
  Elem join(const FinObj& a, Elem x, Elem y) const override;
  Elem implies(const FinObj& a, Elem x, Elem y) const override;
  nlohmann::json generator() const override { return generator_; }

  const FiniteHeyting& algebra() const { return h_; }
  const FinitePoset& frame() const { return frame_; }
  std::vector<std::size_t> values(std::size_t points, Elem x) const;
  Elem encode(const std::vector<std::size_t>& values) const;

 private:
  template <class Op>
  Elem pointwise(const FinObj& a, Elem x, Elem y, Op op) const;
  Elem fold(const Projection& p, Elem x, bool join) const;

  std::string kind_;
  FinitePoset frame_;
  FiniteHeyting h_;
  std::vector<FinObj> universe_;
  nlohmann::json generator_;
};

// Universe = one object of each listed size; fibres are all subsets.
std::shared_ptr<ValuedDoctrine> powerset_example(const std::vector<std::size_t>& sizes,
                                                 std::uint64_t cap = cat::kDefaultCap);
// Fibre over A = subsets of W * A upward closed in W.
std::shared_ptr<ValuedDoctrine> kripke_example(const FinitePoset& frame, const std::vector<std::size_t>& sizes,
                                               std::uint64_t cap = cat::kDefaultCap);

// -- explicit doctrines ---------------------------------------------------------

struct HeytingTables {
  Elem top = 0, bottom = 0;
  std::vector<Elem> meet, join, implies;  // n * n
};

class ExplicitDoctrine : public Doctrine {
 public:
  struct Fibre {
    FinObj object;
    FinitePoset poset;
    std::optional<HeytingTables> heyting;
  };

  ExplicitDoctrine(std::vector<FinObj> universe, std::vector<FinObj> derived, std::map<std::string, Fibre> fibres,
                   std::map<std::string, std::vector<Elem>> reindex, std::uint64_t cap = cat::kDefaultCap);

  std::string kind() const override { return "explicit"; }
  const std::vector<FinObj>& universe() const override { return universe_; }
  std::vector<FinObj> working_objects() const override;
  bool has_fibre(const FinObj& a) const override;
  Elem fibre_size(const FinObj& a) const override;
  bool leq(const FinObj& a, Elem x, Elem y) const override;
  Elem reindex(const FinMor& f, Elem y) const override;
  std::string label(const FinObj& a, Elem x) const override;
  bool has_heyting() const override { return heyting_; }
  Elem top(const FinObj& a) const override;
  Elem bottom(const FinObj& a) const override;
  Elem meet(const FinObj& a, Elem x, Elem y) const override;
  Elem join(const FinObj& a, Elem x, Elem y) const override;
  Elem implies(const FinObj& a, Elem x, Elem y) const override;

  const std::vector<FinObj>& derived() const { return derived_; }
  const std::map<std::string, Fibre>& fibres() const { return fibres_; }
  const std::map<std::string, std::vector<Elem>>& reindex_tables() const { return reindex_; }

 private:
  const Fibre& fibre(const FinObj& a) const;
  const HeytingTables& tables(const FinObj& a) const;

  std::vector<FinObj> universe_, derived_;
  std::map<std::string, Fibre> fibres_;
  std::map<std::string, std::vector<Elem>> reindex_;
  bool heyting_ = false;
};

// All elements of a fibre, 0 .. fibre_size - 1, after checking the fibre
// limit.
Elem enumerable_fibre(const Doctrine& d, const FinObj& a);

}  // namespace dialectica::doc
