#pragma once

// Concrete syntax for sorts, terms and formulas.
//
//   formula  := implication
//   implication := disjunction ['->' implication]
//   disjunction := conjunction ('|' conjunction)*
//   conjunction := unary ('&' unary)*
//   unary    := '~' unary | ('exists'|'forall') binder (',' binder)* '.' formula
//             | 'true' | 'false' | '(' formula ')' | pred ['(' term (',' term)* ')']
//   binder   := ident ':' sort
//   term     := primary ('@' primary)*
//   primary  := ident ['(' term (',' term)* ')'] | '<' term ',' term '>'
//             | 'fst' '(' term ')' | 'snd' '(' term ')' | '\' ident ':' sort '.' term
//             | '(' term ')'
//   sort     := factor ['->' sort]
//   factor   := atom ['*' factor]
//   atom     := ident | '1' | '(' sort ')'

#include <string>
#include <string_view>
#include <vector>

#include "dialectica/fol.hpp"
#include "json.hpp"

namespace dialectica::fol {

struct ParseOptions {
  // Declare unknown base sorts and predicate symbols on first use instead of
  // rejecting them. Function symbols are never inferred.
  bool infer_symbols = false;
};

// `context` lists the free variables the source may mention.
Formula parse_formula(std::string_view src, const Signature& sig, const std::vector<Var>& context = {},
                      ParseOptions options = {});
Term parse_term(std::string_view src, const Signature& sig, const std::vector<Var>& context = {});
Sort parse_sort(std::string_view src);

std::string to_string(const Sort& s);
std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Var& v);

std::string to_latex(const Sort& s);
std::string to_latex(const Term& t);
std::string to_latex(const Formula& f);

Signature signature_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Signature& sig);

}  // namespace dialectica::fol
