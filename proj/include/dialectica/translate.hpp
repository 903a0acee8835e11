#pragma once

// The Dialectica translation phi -> exists u. forall x. phi_D and the
// principle-annotated equivalence chain for an implication between two
// translated formulas.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dialectica/fol.hpp"

namespace dialectica::fol {

struct DialecticaForm {
  std::vector<Var> witness;  // the exists-block
  std::vector<Var> counter;  // the forall-block
  Formula matrix;            // quantifier-free

  Formula as_formula() const { return exists_block(witness, forall_block(counter, matrix)); }
};

// Clauses: atoms and constants translate to themselves; & merges blocks;
// | adds a Bit witness z with matrix (bit0(z) -> A) & (bit1(z) -> B); exists
// prepends to the witnesses; forall z turns each witness u into U : Z -> sort(u)
// and prepends z to the counters; A -> B follows the functional clause with
// V : U -> V and X : U * Y -> X. Bound names are kept where possible and
// primed on clashes.
DialecticaForm translate(const Formula& phi);

enum class Justification { Adjunction, ClassicalEquiv, IPStar, IntuitionisticEquiv, MP, AC };

const char* to_string(Justification j);

struct ChainStep {
  Formula formula;
  Justification justification;
};

// Block sizes of the two forms, in the order u, x (premise) and v, y
// (conclusion). Needed to replay a step on a bare formula.
struct ChainShape {
  std::size_t nu = 0, nx = 0, nv = 0, ny = 0;
};

struct Chain {
  Formula source;                // psi^D -> phi^D
  std::vector<ChainStep> steps;  // always six
  ChainShape shape;
};

Chain implication_chain(const DialecticaForm& psi, const DialecticaForm& phi);

// Applies the rewrite of step `index` (1-based) to `previous`. Throws Error if
// `previous` does not have the expected shape.
Formula replay_step(const Formula& previous, std::size_t index, const ChainShape& shape);

// forall a1..am. exists b1..bk. body  ~>  exists F1..Fk. forall a1..am. body[b := F @ <a>].
// Function names capitalise the bound name and avoid every name in `previous`.
Formula skolemise(const Formula& previous, std::size_t m, std::size_t k);

// -- principle schemas ------------------------------------------------------

enum class PrincipleName { IPStar, IP, IPR, MP, MR, AC };

std::optional<PrincipleName> principle_from_string(const std::string& s);

struct Rule {
  Formula premise;
  Formula conclusion;
};

// Parts used by each schema:
//   IPStar: theta(x), eta(v, y), blocks x, v, y
//   IP, IPR: theta, eta(u), block u
//   MP, MR: theta(x), block x
//   AC: theta(y, v), blocks y (universal), v (existential)
struct PrincipleParts {
  std::optional<Formula> theta;
  std::optional<Formula> eta;
  std::vector<Var> x, u, v, y;
};

// Throws SideConditionError when the parts violate the schema's side
// conditions (theta not exists-free for IP/IPR, not quantifier-free for
// IPStar/MP/MR, a witness variable free in theta).
std::variant<Formula, Rule> state_principle(PrincipleName name, const PrincipleParts& parts);

}  // namespace dialectica::fol
