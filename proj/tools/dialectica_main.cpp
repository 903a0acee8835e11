// dialectica: command-line front end.
//
// Exit status: 0 when every check passes, 1 when a check fails (the report
// is still written), 2 on usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dialectica/dial.hpp"
#include "dialectica/doctrine_json.hpp"
#include "dialectica/fol_text.hpp"
#include "dialectica/freeness.hpp"
#include "dialectica/principles.hpp"
#include "dialectica/translate.hpp"
#include "json.hpp"

namespace {

using namespace dialectica;
using nlohmann::json;
using nlohmann::ordered_json;

struct Config {
  std::uint64_t cap = cat::kDefaultCap;
  std::uint64_t seed = 1;
  std::string format = "json";
  bool diagnostic = false;
  unsigned jobs = 0;
  std::string output;

  std::string formula;
  std::string signature;
  std::vector<std::string> vars;

  std::string doctrine;
  std::string predicate;

  std::string fibre;
  std::string bound;
  std::uint64_t samples = 200;

  std::string rule = "all";

  std::size_t size = 2;
  std::string frame = "chain:2";
  bool allow_empty = false;
  bool pipe = false;

  SearchOptions search() const { return SearchOptions{cap, jobs}; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DoctrineError(std::string("malformed JSON in ") + (path.empty() || path == "-" ? "stdin" : path) + ": " +
                        e.what());
  }
}

void emit_text(std::ostream& out, const ordered_json& j, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) emit_text(out, v, path.empty() ? k : path + "." + k);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) emit_text(out, j[i], path + "[" + std::to_string(i) + "]");
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

class Output {
 public:
  explicit Output(const Config& c) : c_(c) {
    if (!c.output.empty()) {
      file_.open(c.output);
      if (!file_) throw UsageError("cannot write " + c.output);
    }
  }
  std::ostream& stream() { return c_.output.empty() ? std::cout : file_; }

  void report(const ordered_json& j) {
    if (c_.format == "json")
      stream() << j.dump(2) << "\n";
    else
      emit_text(stream(), j, "");
  }

 private:
  const Config& c_;
  std::ofstream file_;
};

// -- formulas ----------------------------------------------------------------

struct Parsed {
  fol::Formula formula;
  fol::Signature signature;
};

Parsed parse_input(const Config& c) {
  if (c.formula.empty()) throw UsageError("--formula is required");
  fol::Signature sig;
  fol::ParseOptions opts;
  if (!c.signature.empty())
    sig = fol::signature_from_json(read_json(c.signature));
  else
    opts.infer_symbols = true;
  std::vector<fol::Var> context;
  for (const auto& v : c.vars) {
    auto colon = v.find(':');
    if (colon == std::string::npos) throw UsageError("--var expects name:Sort, got " + v);
    context.push_back(fol::Var{v.substr(0, colon), fol::parse_sort(v.substr(colon + 1))});
  }
  return Parsed{fol::parse_formula(c.formula, sig, context, opts), sig};
}

ordered_json vars_json(const std::vector<fol::Var>& vs) {
  ordered_json out = ordered_json::array();
  for (const auto& v : vs) out.push_back({{"name", v.name}, {"sort", fol::to_string(v.sort)}});
  return out;
}

int run_translate(const Config& c) {
  Parsed p = parse_input(c);
  fol::DialecticaForm d = fol::translate(p.formula);
  Output out(c);
  if (c.format == "latex") {
    out.stream() << fol::to_latex(d.as_formula()) << "\n";
    return 0;
  }
  if (c.format == "text") {
    out.stream() << fol::to_string(d.as_formula()) << "\n";
    return 0;
  }
  ordered_json j;
  j["input"] = fol::to_string(p.formula);
  j["witness"] = vars_json(d.witness);
  j["counter"] = vars_json(d.counter);
  j["matrix"] = fol::to_string(d.matrix);
  j["formula"] = fol::to_string(d.as_formula());
  out.report(j);
  return 0;
}

int run_chain(const Config& c) {
  Parsed p = parse_input(c);
  if (p.formula.kind() != fol::Formula::Kind::Implies) throw UsageError("chain expects an implication");
  fol::Chain chain = fol::implication_chain(fol::translate(p.formula.lhs()), fol::translate(p.formula.rhs()));
  Output out(c);
  if (c.format != "json") {
    auto show = [&](const fol::Formula& f) { return c.format == "latex" ? fol::to_latex(f) : fol::to_string(f); };
    out.stream() << "0 source " << show(chain.source) << "\n";
    for (std::size_t i = 0; i < chain.steps.size(); ++i)
      out.stream() << i + 1 << " " << fol::to_string(chain.steps[i].justification) << " "
                   << show(chain.steps[i].formula) << "\n";
    return 0;
  }
  ordered_json j;
  j["source"] = fol::to_string(chain.source);
  j["steps"] = ordered_json::array();
  for (std::size_t i = 0; i < chain.steps.size(); ++i)
    j["steps"].push_back({{"index", i + 1},
                          {"justification", fol::to_string(chain.steps[i].justification)},
                          {"formula", fol::to_string(chain.steps[i].formula)}});
  out.report(j);
  return 0;
}

// -- doctrines -------------------------------------------------------------------

std::shared_ptr<const doc::Doctrine> load(const Config& c) { return doc::load_doctrine(read_json(c.doctrine), c.cap); }

std::pair<cat::FinObj, doc::Elem> parse_predicate(const doc::Doctrine& d, const std::string& spec) {
  auto colon = spec.rfind(':');
  if (colon == std::string::npos) throw UsageError("--predicate expects <fibre>:<element>");
  std::string name = spec.substr(0, colon), element = spec.substr(colon + 1);
  std::optional<cat::FinObj> obj;
  for (const auto& a : d.working_objects())
    if (a.name() == name) obj = a;
  if (!obj) throw UsageError("no fibre named " + name);
  doc::Elem n = doc::enumerable_fibre(d, *obj);
  if (!element.empty() && element.find_first_not_of("0123456789") == std::string::npos) {
    doc::Elem x = std::stoull(element);
    if (x >= n) throw UsageError("element " + element + " out of range for " + name);
    return {*obj, x};
  }
  for (doc::Elem x = 0; x < n; ++x)
    if (d.label(*obj, x) == element) return {*obj, x};
  throw UsageError("no element labelled " + element + " in " + name);
}

int run_doctrine(const std::string& what, const Config& c) {
  auto d = load(c);
  Output out(c);
  ordered_json j;
  j["doctrine"] = d->kind();
  bool pass = true;
  if (what == "check") {
    doc::CheckReport r = doc::check_doctrine(*d, c.search());
    j["checks"] = ordered_json::array({r.to_json()});
    pass = r.pass;
    if (d->has_heyting()) {
      doc::CheckReport h = doc::check_residuation(*d, c.search());
      j["checks"].push_back(h.to_json());
      pass = pass && h.pass;
    }
  } else if (what == "adjoints") {
    doc::CheckReport a = doc::check_adjoints(*d, c.search());
    doc::CheckReport b = doc::beck_chevalley(*d, c.search());
    j["checks"] = ordered_json::array({a.to_json(), b.to_json()});
    pass = a.pass && b.pass;
  } else if (what == "free") {
    if (c.predicate.empty()) throw UsageError("--predicate is required");
    doc::Freeness fr(d, c.search());
    auto [obj, x] = parse_predicate(*d, c.predicate);
    j["existential_free"] = fr.base().report(doc::FreenessProperty::ExistentialFree, obj, x).to_json(*d);
    j["universal_free"] = fr.base().report(doc::FreenessProperty::UniversalFree, obj, x).to_json(*d);
    j["quantifier_free"] = fr.quantifier_free(obj, x);
  } else if (what == "godel") {
    doc::Freeness fr(d, c.search());
    doc::GodelReport r = doc::is_godel_doctrine(fr);
    j["report"] = r.to_json();
    pass = r.pass;
  }
  j["pass"] = pass;
  out.report(j);
  return pass ? 0 : 1;
}

std::vector<cat::FinObj> parse_bound(const doc::Doctrine& d, const std::string& spec) {
  if (spec.empty()) return d.universe();
  std::vector<cat::FinObj> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::optional<cat::FinObj> found;
    for (const auto& a : d.universe())
      if (a.name() == item) found = a;
    if (!found) throw UsageError("bound object " + item + " is not in the universe");
    out.push_back(*found);
  }
  return out;
}

cat::FinObj universe_object(const doc::Doctrine& d, const std::string& name) {
  for (const auto& a : d.universe())
    if (a.name() == name) return a;
  throw UsageError("object " + name + " is not in the universe");
}

int run_dial(const std::string& what, const Config& c) {
  auto d = load(c);
  Output out(c);
  ordered_json j;
  bool pass = true;
  if (what == "complete") {
    if (c.fibre.empty()) throw UsageError("--fibre is required");
    dial::DialFibre f = dial::build_dial_fibre(*d, universe_object(*d, c.fibre), parse_bound(*d, c.bound), c.search());
    j = f.to_json(*d);
    pass = f.reflexive && f.transitive;
  } else if (what == "implication") {
    doc::Freeness fr(d, c.search());
    dial::Theorem2Sample s = dial::sample_theorem2(fr, parse_bound(*d, c.bound), c.samples, c.seed, c.search());
    j = s.to_json(*d);
    j["seed"] = c.seed;
    pass = s.discrepancies == 0;
  } else if (what == "iso") {
    doc::Freeness fr(d, c.search());
    dial::Theorem4Report r = dial::check_theorem4(fr, parse_bound(*d, c.bound), c.search());
    j = r.to_json(*d);
    pass = r.pass;
  }
  out.report(j);
  return pass ? 0 : 1;
}

int run_principles(const Config& c) {
  auto d = load(c);
  doc::Freeness fr(d, c.search());
  rules::RuleOptions o;
  o.diagnostic = c.diagnostic;
  o.search = c.search();
  std::vector<rules::Rule> selected;
  if (c.rule == "all") {
    selected = {rules::Rule::Skolemisation, rules::Rule::IndependenceOfPremise, rules::Rule::ModifiedMarkov,
                rules::Rule::Markov,        rules::Rule::Counterexample,        rules::Rule::Choice};
  } else {
    auto r = rules::rule_from_string(c.rule);
    if (!r) throw UsageError("unknown rule " + c.rule);
    selected = {*r};
  }
  ordered_json j;
  j["doctrine"] = d->kind();
  j["reports"] = ordered_json::array();
  bool pass = true;
  for (rules::Rule r : selected) {
    rules::RuleReport rep = rules::check_rule(r, fr, o);
    pass = pass && rep.pass;
    j["reports"].push_back(rep.to_json(*d));
  }
  j["pass"] = pass;
  Output(c).report(j);
  return pass ? 0 : 1;
}

doc::FinitePoset parse_frame(const std::string& spec) {
  auto sized = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (spec.rfind(prefix, 0) != 0) return std::nullopt;
    std::string n = spec.substr(prefix.size());
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("bad frame size in " + spec);
    return std::stoul(n);
  };
  if (auto n = sized("chain:")) return doc::FinitePoset::chain(*n);
  if (auto n = sized("antichain:")) return doc::FinitePoset::antichain(*n);
  return doc::poset_from_json(read_json(spec));
}

int run_examples(const std::string& what, const Config& c) {
  if (c.size == 0) throw UsageError("--size must be positive");
  std::vector<std::size_t> sizes;
  if (c.allow_empty) sizes.push_back(0);
  for (std::size_t n = 1; n <= c.size; ++n) sizes.push_back(n);
  std::shared_ptr<const doc::Doctrine> d;
  if (what == "powerset")
    d = doc::powerset_example(sizes, c.cap);
  else
    d = doc::kripke_example(parse_frame(c.frame), sizes, c.cap);
  Output out(c);
  if (c.pipe)
    out.stream() << json{{"generator", d->generator()}}.dump() << "\n";
  else
    out.stream() << doc::doctrine_to_json(*d, c.cap).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Dialectica translation and finite doctrine checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--cap", c.cap, "size cap for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "seed for sampled checks");
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text", "latex"}));
  app.add_flag("--diagnostic", c.diagnostic, "drop the rule preconditions");
  app.add_option("--jobs", c.jobs, "worker threads (0: all cores)");
  app.add_option("-o,--output", c.output, "write the report to a file");

  auto formula_opts = [&](CLI::App* sub) {
    sub->add_option("--formula,formula", c.formula, "formula source")->required();
    sub->add_option("--signature", c.signature, "signature JSON; symbols are inferred without one");
    sub->add_option("--var", c.vars, "free variable name:Sort");
  };
  auto* translate = app.add_subcommand("translate", "Dialectica translation of a formula");
  formula_opts(translate);
  auto* chain = app.add_subcommand("chain", "derivation chain for an implication");
  formula_opts(chain);

  auto* doctrine = app.add_subcommand("doctrine", "checks on a doctrine document");
  doctrine->require_subcommand(1);
  std::string doctrine_cmd;
  for (const char* name : {"check", "adjoints", "free", "godel"}) {
    auto* sub = doctrine->add_subcommand(name);
    sub->add_option("--doctrine", c.doctrine, "doctrine JSON (stdin when absent)");
    if (std::string(name) == "free") sub->add_option("--predicate", c.predicate, "<fibre>:<element>")->required();
    sub->callback([&doctrine_cmd, name] { doctrine_cmd = name; });
  }

  auto* dial = app.add_subcommand("dial", "bounded Dialectica completion");
  dial->require_subcommand(1);
  std::string dial_cmd;
  for (const char* name : {"complete", "implication", "iso"}) {
    auto* sub = dial->add_subcommand(name);
    sub->add_option("--doctrine", c.doctrine, "doctrine JSON (stdin when absent)");
    sub->add_option("--bound", c.bound, "comma-separated universe objects");
    if (std::string(name) == "complete") sub->add_option("--fibre", c.fibre, "base object I")->required();
    if (std::string(name) == "implication") sub->add_option("--samples", c.samples, "number of random pairs");
    sub->callback([&dial_cmd, name] { dial_cmd = name; });
  }

  auto* principles = app.add_subcommand("principles", "rule checkers");
  principles->add_option("--doctrine", c.doctrine, "doctrine JSON (stdin when absent)");
  principles->add_option("--rule", c.rule, "ip|markov|mmr|skolem|cex|choice|all")
      ->check(CLI::IsMember({"ip", "markov", "mmr", "skolem", "cex", "choice", "all"}));
  principles->add_flag("--diagnostic", c.diagnostic, "drop the rule preconditions");

  auto* examples = app.add_subcommand("examples", "generate example doctrines");
  examples->require_subcommand(1);
  std::string example_cmd;
  for (const char* name : {"powerset", "kripke"}) {
    auto* sub = examples->add_subcommand(name);
    sub->add_option("--size", c.size, "largest universe object");
    sub->add_flag("--allow-empty", c.allow_empty, "include the empty set");
    sub->add_flag("--pipe", c.pipe, "emit only the generator, on one line");
    if (std::string(name) == "kripke")
      sub->add_option("--frame", c.frame, "chain:N, antichain:N or a poset JSON file");
    sub->callback([&example_cmd, name] { example_cmd = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*translate) return run_translate(c);
    if (*chain) return run_chain(c);
    if (*doctrine) return run_doctrine(doctrine_cmd, c);
    if (*dial) return run_dial(dial_cmd, c);
    if (*principles) return run_principles(c);
    if (*examples) return run_examples(example_cmd, c);
  } catch (const ParseError& e) {
    std::cerr << "dialectica: " << e.what() << "\n";
  } catch (const SortError& e) {
    std::cerr << "dialectica: " << e.what() << "\n";
  } catch (const SizeCapError& e) {
    std::cerr << "dialectica: size cap exceeded: " << e.what() << "\n";
  } catch (const DoctrineError& e) {
    std::cerr << "dialectica: doctrine error: " << e.what() << "\n";
  } catch (const SideConditionError& e) {
    std::cerr << "dialectica: side condition: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << "dialectica: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "dialectica: input error: " << e.what() << "\n";
  }
  return 2;
}
