#include "dialectica/translate.hpp"

#include <algorithm>
#include <cctype>

namespace dialectica::fol {

namespace {

std::string capitalise(const std::string& name) {
  std::string out = name;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::vector<Var> concat(std::vector<Var> a, const std::vector<Var>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// A variable of sort `result` when `domain` is empty, otherwise a function
// F : tuple(domain) -> result applied to the tuple.
struct Functional {
  Var var;
  Term applied;
};

Functional make_functional(const std::string& name, const std::vector<Var>& domain, const Sort& result) {
  auto dom_sort = tuple_sort(domain);
  if (!dom_sort) {
    Var v{name, result};
    return {v, Term::variable(v)};
  }
  Var f{name, Sort::function(*dom_sort, result)};
  return {f, Term::eval(Term::variable(f), *tuple_term(domain))};
}

class Translator {
 public:
  explicit Translator(const Formula& phi) {
    for (const auto& [name, sort] : free_variables(phi)) taken_.insert(name);
  }

  DialecticaForm run(const Formula& phi) {
    switch (phi.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Top:
      case Formula::Kind::Bottom:
        return {{}, {}, phi};
      case Formula::Kind::And: {
        DialecticaForm a = run(phi.lhs());
        DialecticaForm b = run(phi.rhs());
        return {concat(a.witness, b.witness), concat(a.counter, b.counter), Formula::conj(a.matrix, b.matrix)};
      }
      case Formula::Kind::Or: {
        Var z{fresh("z"), Sort::base(kBitSort)};
        DialecticaForm a = run(phi.lhs());
        DialecticaForm b = run(phi.rhs());
        Formula matrix = Formula::conj(Formula::implies(Formula::atom(kBitZero, {Term::variable(z)}), a.matrix),
                                       Formula::implies(Formula::atom(kBitOne, {Term::variable(z)}), b.matrix));
        return {concat({z}, concat(a.witness, b.witness)), concat(a.counter, b.counter), matrix};
      }
      case Formula::Kind::Implies:
        return implication(run(phi.lhs()), run(phi.rhs()));
      case Formula::Kind::Exists: {
        auto [z, body] = open_binder(phi);
        DialecticaForm r = run(body);
        return {concat({z}, r.witness), r.counter, r.matrix};
      }
      case Formula::Kind::Forall: {
        auto [z, body] = open_binder(phi);
        DialecticaForm r = run(body);
        std::vector<Var> witness;
        Substitution sigma;
        for (const auto& u : r.witness) {
          Functional f = make_functional(fresh(capitalise(u.name)), {z}, u.sort);
          witness.push_back(f.var);
          sigma.emplace_back(u, f.applied);
        }
        return {witness, concat({z}, r.counter), substitute(r.matrix, sigma)};
      }
    }
    throw Error("translate: unknown formula kind");
  }

 private:
  DialecticaForm implication(const DialecticaForm& a, const DialecticaForm& b) {
    const auto& u = a.witness;
    const auto& x = a.counter;
    const auto& v = b.witness;
    const auto& y = b.counter;
    std::vector<Var> witness;
    Substitution on_phi, on_psi;
    for (const auto& vj : v) {
      Functional f = make_functional(fresh(capitalise(vj.name)), u, vj.sort);
      witness.push_back(f.var);
      on_phi.emplace_back(vj, f.applied);
    }
    std::vector<Var> uy = concat(u, y);
    for (const auto& xk : x) {
      Functional f = make_functional(fresh(capitalise(xk.name)), uy, xk.sort);
      witness.push_back(f.var);
      on_psi.emplace_back(xk, f.applied);
    }
    return {witness, uy, Formula::implies(substitute(a.matrix, on_psi), substitute(b.matrix, on_phi))};
  }

  std::pair<Var, Formula> open_binder(const Formula& q) {
    Var z = q.bound();
    Formula body = q.body();
    if (taken_.count(z.name)) {
      Var renamed{fresh_name(z.name, taken_), z.sort};
      body = substitute(body, z, Term::variable(renamed));
      z = renamed;
    }
    taken_.insert(z.name);
    return {z, body};
  }

  std::string fresh(const std::string& base) {
    std::string name = fresh_name(base, taken_);
    taken_.insert(name);
    return name;
  }

  std::set<std::string> taken_;
};

Formula peel(const Formula& f, Formula::Kind kind, std::size_t n, std::vector<Var>& out, std::size_t step) {
  Formula cur = f;
  for (std::size_t i = 0; i < n; ++i) {
    if (cur.kind() != kind)
      throw Error("step " + std::to_string(step) + ": expected " + std::to_string(n) +
                  (kind == Formula::Kind::Exists ? " existential" : " universal") + " quantifier(s)");
    out.push_back(cur.bound());
    cur = cur.body();
  }
  return cur;
}

const Formula& expect_implication(const Formula& f, std::size_t step) {
  if (f.kind() != Formula::Kind::Implies) throw Error("step " + std::to_string(step) + ": expected an implication");
  return f;
}

Formula skolemise_avoiding(const Formula& previous, std::size_t m, std::size_t k, std::set<std::string> avoid) {
  std::vector<Var> a, b;
  Formula rest = peel(previous, Formula::Kind::Forall, m, a, 0);
  Formula body = peel(rest, Formula::Kind::Exists, k, b, 0);
  std::vector<Var> functions;
  Substitution sigma;
  for (const auto& bj : b) {
    std::string name = fresh_name(capitalise(bj.name), avoid);
    avoid.insert(name);
    Functional f = make_functional(name, a, bj.sort);
    functions.push_back(f.var);
    sigma.emplace_back(bj, f.applied);
  }
  return exists_block(functions, forall_block(a, substitute(body, sigma)));
}

// Renames the block variables of `d` away from `avoid`, recording the new names in it.
DialecticaForm rename_apart(const DialecticaForm& d, std::set<std::string>& avoid) {
  DialecticaForm out{{}, {}, d.matrix};
  Substitution sigma;
  auto rename = [&](const Var& v) {
    Var w = v;
    if (avoid.count(v.name)) {
      w.name = fresh_name(v.name, avoid);
      sigma.emplace_back(v, Term::variable(w));
    }
    avoid.insert(w.name);
    return w;
  };
  for (const auto& v : d.witness) out.witness.push_back(rename(v));
  for (const auto& v : d.counter) out.counter.push_back(rename(v));
  out.matrix = substitute(d.matrix, sigma);
  return out;
}

}  // namespace

DialecticaForm translate(const Formula& phi) { return Translator(phi).run(phi); }

const char* to_string(Justification j) {
  switch (j) {
    case Justification::Adjunction:
      return "Adjunction";
    case Justification::ClassicalEquiv:
      return "ClassicalEquiv";
    case Justification::IPStar:
      return "IPStar";
    case Justification::IntuitionisticEquiv:
      return "IntuitionisticEquiv";
    case Justification::MP:
      return "MP";
    case Justification::AC:
      return "AC";
  }
  return "?";
}

Formula skolemise(const Formula& previous, std::size_t m, std::size_t k) {
  return skolemise_avoiding(previous, m, k, all_names(previous));
}

Chain implication_chain(const DialecticaForm& psi_in, const DialecticaForm& phi_in) {
  std::set<std::string> avoid;
  for (const auto& [name, sort] : free_variables(psi_in.as_formula())) avoid.insert(name);
  for (const auto& [name, sort] : free_variables(phi_in.as_formula())) avoid.insert(name);
  DialecticaForm psi = rename_apart(psi_in, avoid);
  for (const auto& name : all_names(psi.matrix)) avoid.insert(name);
  DialecticaForm phi = rename_apart(phi_in, avoid);

  const auto& u = psi.witness;
  const auto& x = psi.counter;
  const auto& v = phi.witness;
  const auto& y = phi.counter;
  const Formula& pd = psi.matrix;
  const Formula& fd = phi.matrix;

  Chain chain{Formula::implies(psi.as_formula(), phi.as_formula()), {}, {u.size(), x.size(), v.size(), y.size()}};

  Formula all_x_psi = forall_block(x, pd);
  Formula f2 = forall_block(u, Formula::implies(all_x_psi, phi.as_formula()));
  Formula f3 = forall_block(u, exists_block(v, Formula::implies(all_x_psi, forall_block(y, fd))));
  Formula f4 = forall_block(u, exists_block(v, forall_block(y, Formula::implies(all_x_psi, fd))));
  Formula f5 = forall_block(u, exists_block(v, forall_block(y, exists_block(x, Formula::implies(pd, fd)))));
  Formula f5s = skolemise(f5, u.size(), v.size());
  std::vector<Var> functions;
  Formula rest = peel(f5s, Formula::Kind::Exists, v.size(), functions, 6);
  Formula f6 = exists_block(functions, skolemise_avoiding(rest, u.size() + y.size(), x.size(), all_names(f5s)));

  chain.steps = {{f2, Justification::ClassicalEquiv}, {f3, Justification::IPStar},
                 {f4, Justification::IntuitionisticEquiv}, {f5, Justification::MP},
                 {f5s, Justification::AC}, {f6, Justification::AC}};
  return chain;
}

Formula replay_step(const Formula& previous, std::size_t index, const ChainShape& s) {
  std::vector<Var> u, v, x, y;
  switch (index) {
    case 1: {
      const Formula& imp = expect_implication(previous, 1);
      Formula lhs = peel(imp.lhs(), Formula::Kind::Exists, s.nu, u, 1);
      return forall_block(u, Formula::implies(lhs, imp.rhs()));
    }
    case 2: {
      const Formula& imp = expect_implication(peel(previous, Formula::Kind::Forall, s.nu, u, 2), 2);
      Formula rhs = peel(imp.rhs(), Formula::Kind::Exists, s.nv, v, 2);
      return forall_block(u, exists_block(v, Formula::implies(imp.lhs(), rhs)));
    }
    case 3: {
      Formula body = peel(peel(previous, Formula::Kind::Forall, s.nu, u, 3), Formula::Kind::Exists, s.nv, v, 3);
      const Formula& imp = expect_implication(body, 3);
      Formula rhs = peel(imp.rhs(), Formula::Kind::Forall, s.ny, y, 3);
      return forall_block(u, exists_block(v, forall_block(y, Formula::implies(imp.lhs(), rhs))));
    }
    case 4: {
      Formula body = peel(peel(previous, Formula::Kind::Forall, s.nu, u, 4), Formula::Kind::Exists, s.nv, v, 4);
      const Formula& imp = expect_implication(peel(body, Formula::Kind::Forall, s.ny, y, 4), 4);
      Formula lhs = peel(imp.lhs(), Formula::Kind::Forall, s.nx, x, 4);
      return forall_block(u, exists_block(v, forall_block(y, exists_block(x, Formula::implies(lhs, imp.rhs())))));
    }
    case 5:
      return skolemise(previous, s.nu, s.nv);
    case 6: {
      Formula rest = peel(previous, Formula::Kind::Exists, s.nv, v, 6);
      return exists_block(v, skolemise_avoiding(rest, s.nu + s.ny, s.nx, all_names(previous)));
    }
    default:
      throw Error("chain has no step " + std::to_string(index));
  }
}

std::optional<PrincipleName> principle_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "ipstar" || k == "ip*") return PrincipleName::IPStar;
  if (k == "ip") return PrincipleName::IP;
  if (k == "ipr") return PrincipleName::IPR;
  if (k == "mp") return PrincipleName::MP;
  if (k == "mr") return PrincipleName::MR;
  if (k == "ac") return PrincipleName::AC;
  return std::nullopt;
}

namespace {

const Formula& need(const std::optional<Formula>& f, const char* what) {
  if (!f) throw SideConditionError(std::string("missing part ") + what);
  return *f;
}

void require_class(const Formula& f, bool exists_free_enough, const char* name) {
  SyntacticClass c = classify_syntactic(f);
  bool ok = exists_free_enough ? c != SyntacticClass::Neither : c == SyntacticClass::QuantifierFree;
  if (!ok)
    throw SideConditionError(std::string(name) + ": theta must be " +
                             (exists_free_enough ? "exists-free" : "quantifier-free") + ", got " + to_string(c));
}

void require_not_free(const Formula& f, const std::vector<Var>& vars, const char* name) {
  auto fv = free_variables(f);
  for (const auto& v : vars)
    if (fv.count(v.name)) throw SideConditionError(std::string(name) + ": " + v.name + " occurs free in theta");
}

}  // namespace

std::variant<Formula, Rule> state_principle(PrincipleName name, const PrincipleParts& p) {
  switch (name) {
    case PrincipleName::IPStar: {
      const Formula& theta = need(p.theta, "theta");
      const Formula& eta = need(p.eta, "eta");
      require_class(theta, false, "IPStar");
      Formula premise = forall_block(p.x, theta);
      require_not_free(premise, p.v, "IPStar");
      return Formula::implies(Formula::implies(premise, exists_block(p.v, forall_block(p.y, eta))),
                              exists_block(p.v, Formula::implies(premise, forall_block(p.y, eta))));
    }
    case PrincipleName::IP:
    case PrincipleName::IPR: {
      const char* label = name == PrincipleName::IP ? "IP" : "IPR";
      const Formula& theta = need(p.theta, "theta");
      const Formula& eta = need(p.eta, "eta");
      require_class(theta, true, label);
      require_not_free(theta, p.u, label);
      Formula lhs = Formula::implies(theta, exists_block(p.u, eta));
      Formula rhs = exists_block(p.u, Formula::implies(theta, eta));
      if (name == PrincipleName::IP) return Formula::implies(lhs, rhs);
      return Rule{lhs, rhs};
    }
    case PrincipleName::MP:
    case PrincipleName::MR: {
      const Formula& theta = need(p.theta, "theta");
      require_class(theta, false, name == PrincipleName::MP ? "MP" : "MR");
      Formula lhs = Formula::negation(forall_block(p.x, theta));
      Formula rhs = exists_block(p.x, Formula::negation(theta));
      if (name == PrincipleName::MP) return Formula::implies(lhs, rhs);
      return Rule{lhs, rhs};
    }
    case PrincipleName::AC: {
      const Formula& theta = need(p.theta, "theta");
      Formula lhs = forall_block(p.y, exists_block(p.v, theta));
      return Formula::implies(lhs, skolemise(lhs, p.y.size(), p.v.size()));
    }
  }
  throw Error("unknown principle");
}

}  // namespace dialectica::fol
