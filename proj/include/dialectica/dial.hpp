#pragma once

// The bounded Dialectica completion of a doctrine.
//
// A quadruple (I, U, X, alpha) has alpha in P((I * U) * X). Over a fixed I,
// (I, U, X, alpha) <= (I, V, Y, beta) when some f0 : I * U -> V and
// f1 : (I * U) * Y -> X give
//   alpha((i,u), f1((i,u),y)) <= beta((i, f0(i,u)), y)
// in P((I * U) * Y). U and X range over a caller-supplied bound.

#include <optional>
#include <string>
#include <vector>

#include "dialectica/doctrine.hpp"
#include "dialectica/freeness.hpp"

namespace dialectica::dial {

using doc::Doctrine;
using doc::Elem;
using cat::FinMor;
using cat::FinObj;
using cat::Product;

struct DialObject {
  FinObj i, u, x;
  Elem alpha = 0;

  Product iu(std::uint64_t cap) const { return cat::product(i, u, cap); }
  Product iux(std::uint64_t cap) const { return cat::product(iu(cap).object, x, cap); }
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

struct WitnessPair {
  FinMor f0;  // I * U -> V
  FinMor f1;  // (I * U) * Y -> X
  nlohmann::ordered_json to_json() const;
};

// Throws Error when the quadruple is not over a fibre of d.
void validate(const Doctrine& d, const DialObject& a);

// Checks the defining inequality for the given pair.
bool validate_pair(const Doctrine& d, const DialObject& a, const DialObject& b, const WitnessPair& w);

// Exhaustive search for (f0, f1); the first pair in (f0, f1) index order.
// Throws SizeCapError when either function space exceeds the cap.
std::optional<WitnessPair> dial_leq(const Doctrine& d, const DialObject& a, const DialObject& b,
                                    const SearchOptions& opts = {});

// (id_U projection, X projection) witnessing a <= a.
WitnessPair identity_pair(const DialObject& a, std::uint64_t cap = cat::kDefaultCap);

// From a <= b by w and b <= c by v: f0'' = v0 . <pi_I, w0>,
// f1''((i,u),z) = w1((i,u), v1((i, w0(i,u)), z)).
WitnessPair compose_pairs(const DialObject& a, const DialObject& b, const DialObject& c, const WitnessPair& w,
                          const WitnessPair& v, std::uint64_t cap = cat::kDefaultCap);

// alpha reindexed along (f * id_U) * id_X.
DialObject dial_reindex(const Doctrine& d, const FinMor& f, const DialObject& a, std::uint64_t cap = cat::kDefaultCap);

struct DialFibre {
  FinObj i;
  std::vector<FinObj> bound;
  std::vector<DialObject> elements;
  std::vector<std::vector<std::optional<WitnessPair>>> leq;
  std::vector<std::size_t> class_of;  // poset reflection
  std::size_t classes = 0;

  bool reflexive = true;
  bool transitive = true;
  std::uint64_t composed = 0;  // composed pairs re-validated
  std::optional<std::vector<std::size_t>> failure;  // offending element indices

  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

// All quadruples with U, X from the bound, the preorder with its witnesses,
// and the checks of reflexivity and transitivity by composition.
DialFibre build_dial_fibre(const Doctrine& d, const FinObj& i, const std::vector<FinObj>& bound,
                           const SearchOptions& opts = {});

// -- characterisation of implication -------------------------------------------

struct Theorem2Report {
  DialObject psi, phi;
  Elem lhs_psi = 0, lhs_phi = 0;  // exists-forall of each side in P(I)
  bool lhs = false;
  std::optional<WitnessPair> rhs;
  bool agree = false;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

// Both predicates must be quantifier-free; otherwise SideConditionError.
Theorem2Report check_theorem2(const doc::Freeness& f, const DialObject& psi, const DialObject& phi,
                              const SearchOptions& opts = {}, bool require_quantifier_free = true);

struct Theorem2Sample {
  std::uint64_t samples = 0;
  std::uint64_t discrepancies = 0;
  std::uint64_t lhs_true = 0;
  std::optional<Theorem2Report> first_discrepancy;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

// Random quadruples with all four objects drawn from `sorts` and I too.
Theorem2Sample sample_theorem2(const doc::Freeness& f, const std::vector<FinObj>& sorts, std::uint64_t samples,
                               std::uint64_t seed, const SearchOptions& opts = {});

// -- the completion of the quantifier-free predicates ------------------------------

struct Theorem4Fibre {
  FinObj i;
  std::vector<std::optional<doc::Prenex>> images;  // per alpha in P(I)
  std::uint64_t pairs = 0;
  std::uint64_t order_mismatches = 0;
  std::uint64_t cross_mismatches = 0;  // order vs the implication check
  std::uint64_t quadruples = 0;        // bounded fibre elements matched to an image
  std::uint64_t unmatched = 0;         // quadruples equivalent to no image
  std::optional<nlohmann::ordered_json> witness;
};

struct Theorem4Report {
  bool pass = true;
  std::vector<Theorem4Fibre> fibres;
  std::uint64_t not_found = 0;  // alphas without a prenex form in the bound
  std::string universe_note;
  nlohmann::ordered_json to_json(const Doctrine& d) const;
};

// For each universe object I: alpha -> (I, U, X, alpha_D) by the prenex
// search, alpha <= beta iff the images are ordered in the completion, and
// every quadruple over quantifier-free predicates in the bound is equivalent
// to some image.
Theorem4Report check_theorem4(const doc::Freeness& f, const std::vector<FinObj>& bound, const SearchOptions& opts = {});

}  // namespace dialectica::dial
