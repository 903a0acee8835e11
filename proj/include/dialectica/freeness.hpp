#pragma once

// Existential and universal splittings, free predicates, the subdoctrine of
// existential-free predicates, and the five conditions of a Goedel doctrine.
//
// Every quantification over objects ranges over the doctrine's declared
// universe, so all verdicts are relative to it.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dialectica/doctrine.hpp"

namespace dialectica::doc {

enum class FreenessProperty { ExistentialSplitting, ExistentialFree, UniversalSplitting, UniversalFree };

const char* to_string(FreenessProperty p);

// One instance of the weak universal property: over A, the cover beta in
// P(A * B), and the term g : A -> B (absent when no g works).
struct SplitInstance {
  FinObj b;
  Elem beta = 0;
  std::optional<FinMor> g;
};

struct FreenessReport {
  FreenessProperty property;
  FinObj object;
  Elem predicate = 0;
  std::string label;
  bool verdict = true;
  // For the free variants: the reindexing f : A' -> object under which a
  // splitting failed.
  std::optional<FinMor> along;
  std::vector<SplitInstance> witnesses;  // first kMaxWitnesses positive instances
  std::uint64_t instances = 0;
  std::optional<SplitInstance> failure;
  std::string universe_note;

  static constexpr std::size_t kMaxWitnesses = 32;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

class FreenessAnalyzer {
 public:
  explicit FreenessAnalyzer(const Doctrine& d, SearchOptions opts = {});

  const Doctrine& doctrine() const { return d_; }
  const SearchOptions& options() const { return opts_; }
  // Universe sorted by ascending size, then by position.
  const std::vector<FinObj>& search_objects() const { return objects_; }

  bool existential_splitting(const FinObj& a, Elem alpha) const;
  bool universal_splitting(const FinObj& a, Elem alpha) const;
  bool existential_free(const FinObj& a, Elem alpha) const;
  bool universal_free(const FinObj& a, Elem alpha) const;

  FreenessReport report(FreenessProperty p, const FinObj& a, Elem alpha) const;

  std::vector<Elem> existential_free_elements(const FinObj& a) const;
  std::vector<Elem> universal_free_elements(const FinObj& a) const;

 private:
  bool splitting(FreenessProperty p, const FinObj& a, Elem alpha, FreenessReport* out) const;
  bool free_property(FreenessProperty p, const FinObj& a, Elem alpha, FreenessReport* out) const;
  std::optional<bool> cached(int table, const FinObj& a, Elem x) const;
  void store(int table, const FinObj& a, Elem x, bool v) const;

  const Doctrine& d_;
  SearchOptions opts_;
  std::vector<FinObj> objects_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<std::int8_t>> memo_[4];
};

// Checks a report against the doctrine again: positive instances must satisfy
// their inequality, a failure must admit no g at all.
bool revalidate(const FreenessAnalyzer& a, const FreenessReport& r);

// P' : existential-free elements of each fibre, with the order and
// reindexing of P. Quantifiers are located by search inside P'.
class SubDoctrine : public Doctrine {
 public:
  explicit SubDoctrine(const FreenessAnalyzer& base);

  std::string kind() const override { return "existential-free(" + base_.doctrine().kind() + ")"; }
  const std::vector<FinObj>& universe() const override { return base_.doctrine().universe(); }
  std::vector<FinObj> working_objects() const override { return base_.doctrine().working_objects(); }
  bool has_fibre(const FinObj& a) const override { return base_.doctrine().has_fibre(a); }
  Elem fibre_size(const FinObj& a) const override { return members(a).size(); }
  bool leq(const FinObj& a, Elem x, Elem y) const override;
  Elem reindex(const FinMor& f, Elem y) const override;
  std::string label(const FinObj& a, Elem x) const override;

  const std::vector<Elem>& members(const FinObj& a) const;
  Elem to_base(const FinObj& a, Elem x) const { return members(a).at(x); }
  std::optional<Elem> from_base(const FinObj& a, Elem x) const;

 private:
  const FreenessAnalyzer& base_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const std::vector<Elem>>> members_;
};

// Bundles the analyzers for P and P' over one doctrine.
class Freeness {
 public:
  explicit Freeness(std::shared_ptr<const Doctrine> d, SearchOptions opts = {});

  const Doctrine& doctrine() const { return *d_; }
  const FreenessAnalyzer& base() const { return base_; }
  const SubDoctrine& sub() const { return sub_; }
  const FreenessAnalyzer& sub_analyzer() const { return sub_analyzer_; }

  // Existential-free in P and universal-free in P'.
  bool quantifier_free(const FinObj& a, Elem x) const;
  std::vector<Elem> quantifier_free_elements(const FinObj& a) const;

 private:
  std::shared_ptr<const Doctrine> d_;
  FreenessAnalyzer base_;
  SubDoctrine sub_;
  FreenessAnalyzer sub_analyzer_;
};

// -- enough free predicates -----------------------------------------------------

struct Cover {
  FinObj object;  // I
  Elem alpha = 0;
  std::optional<FinObj> via;  // A
  std::optional<Elem> beta;   // in P(I * A), in the analysed doctrine's indexing
};

struct CoverReport {
  std::string check;
  bool pass = true;
  std::vector<Cover> covers;
  std::optional<Cover> uncovered;
  std::string universe_note;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

// alpha = exists_{pi_I} beta with beta existential-free, for every I and alpha.
CoverReport has_enough_existential_free(const FreenessAnalyzer& a);
// alpha = forall_{pi_I} beta with beta universal-free; pass the analyzer of
// P' to check the subdoctrine.
CoverReport has_enough_universal_free(const FreenessAnalyzer& a);

// -- Goedel doctrines ---------------------------------------------------------

struct GodelPart {
  int index;
  std::string name;
  bool pass = true;
  std::string detail;
  nlohmann::ordered_json witness;
};

struct GodelReport {
  bool pass = true;
  std::vector<GodelPart> parts;
  std::string universe_note;
  nlohmann::ordered_json to_json() const;
};

GodelReport is_godel_doctrine(const Freeness& f);

// -- prenex forms -------------------------------------------------------------

struct Prenex {
  FinObj u, x;
  Product iu;   // I * U
  Product iux;  // (I * U) * X
  Elem alpha_d = 0;
};

// The first quantifier-free alpha_D over (I * U) * X, with U, X from `bound`
// ordered by (|U|, |X|) and then by index, such that
// alpha = exists_U forall_X alpha_D.
std::optional<Prenex> prenex_form(const Freeness& f, const FinObj& i, Elem alpha, const std::vector<FinObj>& bound);

// exists_{I*U -> I} forall_{(I*U)*X -> I*U} of a predicate over (I*U)*X.
Elem exists_forall(const Doctrine& d, const Product& iu, const Product& iux, Elem x);

}  // namespace dialectica::doc
