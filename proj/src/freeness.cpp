#include "dialectica/freeness.hpp"

#include <algorithm>

namespace dialectica::doc {

using nlohmann::ordered_json;

const char* to_string(FreenessProperty p) {
  switch (p) {
    case FreenessProperty::ExistentialSplitting:
      return "existential_splitting";
    case FreenessProperty::ExistentialFree:
      return "existential_free";
    case FreenessProperty::UniversalSplitting:
      return "universal_splitting";
    case FreenessProperty::UniversalFree:
      return "universal_free";
  }
  return "?";
}

namespace {

std::string universe_note(const Doctrine& d) {
  std::string names;
  for (const auto& a : d.universe()) names += (names.empty() ? "" : ", ") + a.name();
  return "objects and arrows range over the declared universe {" + names + "} only";
}

ordered_json elem_json(const Doctrine& d, const FinObj& a, Elem x) {
  return {{"object", a.name()}, {"index", x}, {"label", d.label(a, x)}};
}

ordered_json mor_json(const FinMor& f) {
  return {{"key", f.key()}, {"dom", f.dom().name()}, {"cod", f.cod().name()}, {"table", f.table()}};
}

bool is_existential(FreenessProperty p) {
  return p == FreenessProperty::ExistentialSplitting || p == FreenessProperty::ExistentialFree;
}

}  // namespace

ordered_json FreenessReport::to_json(const Doctrine& d) const {
  ordered_json out;
  out["property"] = to_string(property);
  out["predicate"] = elem_json(d, object, predicate);
  out["verdict"] = verdict;
  if (along) out["along"] = mor_json(*along);
  const FinObj& over = along ? along->dom() : object;
  auto instance = [&](const SplitInstance& s) {
    ordered_json j;
    j["B"] = s.b.name();
    j["beta"] = elem_json(d, cat::product(over, s.b, d.cap()).object, s.beta);
    j["g"] = s.g ? mor_json(*s.g) : ordered_json(nullptr);
    return j;
  };
  out["instances"] = instances;
  out["witnesses"] = ordered_json::array();
  for (const auto& w : witnesses) out["witnesses"].push_back(instance(w));
  out["failure"] = failure ? instance(*failure) : ordered_json(nullptr);
  out["universe_note"] = universe_note;
  return out;
}

// -- analyzer -------------------------------------------------------------------

FreenessAnalyzer::FreenessAnalyzer(const Doctrine& d, SearchOptions opts) : d_(d), opts_(opts) {
  objects_ = d.universe();
  std::stable_sort(objects_.begin(), objects_.end(),
                   [](const FinObj& a, const FinObj& b) { return a.size() < b.size(); });
}

std::optional<bool> FreenessAnalyzer::cached(int table, const FinObj& a, Elem x) const {
  std::lock_guard lock(mutex_);
  auto it = memo_[table].find(a.name());
  if (it == memo_[table].end() || x >= it->second.size() || it->second[x] < 0) return std::nullopt;
  return it->second[x] != 0;
}

void FreenessAnalyzer::store(int table, const FinObj& a, Elem x, bool v) const {
  Elem n = d_.fibre_size(a);
  std::lock_guard lock(mutex_);
  auto& row = memo_[table][a.name()];
  if (row.size() != n) row.assign(n, -1);
  row[x] = v ? 1 : 0;
}

bool FreenessAnalyzer::splitting(FreenessProperty p, const FinObj& a, Elem alpha, FreenessReport* out) const {
  const bool ex = is_existential(p);
  for (const auto& b : objects_) {
    Projection pr = d_.projection(a, b, Side::Left);
    Elem n = enumerable_fibre(d_, pr.source());
    std::vector<FinMor> sections;
    for (const FinMor& g : cat::enumerate_morphisms(a, b, opts_.cap))
      sections.push_back(pr.product.pair(cat::identity(a), g));
    for (Elem beta = 0; beta < n; ++beta) {
      auto q = ex ? d_.exists(pr, beta) : d_.forall(pr, beta);
      if (!q)
        throw DoctrineError(std::string(ex ? "exists" : "forall") + " along " + pr.describe() + " does not exist");
      bool premise = ex ? d_.leq(a, alpha, *q) : d_.leq(a, *q, alpha);
      if (!premise) continue;
      std::optional<std::size_t> found;
      for (std::size_t gi = 0; gi < sections.size() && !found; ++gi) {
        Elem inst = d_.reindex(sections[gi], beta);
        if (ex ? d_.leq(a, alpha, inst) : d_.leq(a, inst, alpha)) found = gi;
      }
      if (out) ++out->instances;
      if (!found) {
        if (out) {
          out->verdict = false;
          out->failure = SplitInstance{b, beta, std::nullopt};
        }
        return false;
      }
      if (out && out->witnesses.size() < FreenessReport::kMaxWitnesses)
        out->witnesses.push_back(SplitInstance{b, beta, cat::morphism_at(a, b, *found)});
    }
  }
  return true;
}

bool FreenessAnalyzer::free_property(FreenessProperty p, const FinObj& a, Elem alpha, FreenessReport* out) const {
  const bool ex = is_existential(p);
  for (const auto& src : objects_) {
    for (const FinMor& f : cat::enumerate_morphisms(src, a, opts_.cap)) {
      Elem x = d_.reindex(f, alpha);
      bool ok = ex ? existential_splitting(src, x) : universal_splitting(src, x);
      if (out) ++out->instances;
      if (!ok) {
        if (out) {
          out->verdict = false;
          out->along = f;
          FreenessReport inner;
          splitting(ex ? FreenessProperty::ExistentialSplitting : FreenessProperty::UniversalSplitting, src, x, &inner);
          out->failure = inner.failure;
        }
        return false;
      }
    }
  }
  return true;
}

bool FreenessAnalyzer::existential_splitting(const FinObj& a, Elem alpha) const {
  if (auto c = cached(0, a, alpha)) return *c;
  bool v = splitting(FreenessProperty::ExistentialSplitting, a, alpha, nullptr);
  store(0, a, alpha, v);
  return v;
}

bool FreenessAnalyzer::universal_splitting(const FinObj& a, Elem alpha) const {
  if (auto c = cached(1, a, alpha)) return *c;
  bool v = splitting(FreenessProperty::UniversalSplitting, a, alpha, nullptr);
  store(1, a, alpha, v);
  return v;
}

bool FreenessAnalyzer::existential_free(const FinObj& a, Elem alpha) const {
  if (auto c = cached(2, a, alpha)) return *c;
  bool v = free_property(FreenessProperty::ExistentialFree, a, alpha, nullptr);
  store(2, a, alpha, v);
  return v;
}

bool FreenessAnalyzer::universal_free(const FinObj& a, Elem alpha) const {
  if (auto c = cached(3, a, alpha)) return *c;
  bool v = free_property(FreenessProperty::UniversalFree, a, alpha, nullptr);
  store(3, a, alpha, v);
  return v;
}

FreenessReport FreenessAnalyzer::report(FreenessProperty p, const FinObj& a, Elem alpha) const {
  FreenessReport r{p, a, alpha, d_.label(a, alpha), true, std::nullopt, {}, 0, std::nullopt, universe_note(d_)};
  if (p == FreenessProperty::ExistentialSplitting || p == FreenessProperty::UniversalSplitting)
    splitting(p, a, alpha, &r);
  else
    free_property(p, a, alpha, &r);
  return r;
}

std::vector<Elem> FreenessAnalyzer::existential_free_elements(const FinObj& a) const {
  std::vector<Elem> out;
  Elem n = enumerable_fibre(d_, a);
  for (Elem x = 0; x < n; ++x)
    if (existential_free(a, x)) out.push_back(x);
  return out;
}

std::vector<Elem> FreenessAnalyzer::universal_free_elements(const FinObj& a) const {
  std::vector<Elem> out;
  Elem n = enumerable_fibre(d_, a);
  for (Elem x = 0; x < n; ++x)
    if (universal_free(a, x)) out.push_back(x);
  return out;
}

bool revalidate(const FreenessAnalyzer& an, const FreenessReport& r) {
  const Doctrine& d = an.doctrine();
  const bool ex = is_existential(r.property);
  const FinObj& a = r.along ? r.along->dom() : r.object;
  Elem alpha = r.along ? d.reindex(*r.along, r.predicate) : r.predicate;
  auto holds = [&](const SplitInstance& s, const FinMor& g) {
    Projection pr = d.projection(a, s.b, Side::Left);
    Elem inst = d.reindex(pr.product.pair(cat::identity(a), g), s.beta);
    return ex ? d.leq(a, alpha, inst) : d.leq(a, inst, alpha);
  };
  for (const auto& w : r.witnesses)
    if (!w.g || !holds(w, *w.g)) return false;
  if (r.failure) {
    Projection pr = d.projection(a, r.failure->b, Side::Left);
    auto q = ex ? d.exists(pr, r.failure->beta) : d.forall(pr, r.failure->beta);
    if (!q) return false;
    if (!(ex ? d.leq(a, alpha, *q) : d.leq(a, *q, alpha))) return false;
    for (const FinMor& g : cat::enumerate_morphisms(a, r.failure->b, an.options().cap))
      if (holds(*r.failure, g)) return false;
  }
  bool verdict = false;
  switch (r.property) {
    case FreenessProperty::ExistentialSplitting:
      verdict = an.existential_splitting(r.object, r.predicate);
      break;
    case FreenessProperty::UniversalSplitting:
      verdict = an.universal_splitting(r.object, r.predicate);
      break;
    case FreenessProperty::ExistentialFree:
      verdict = an.existential_free(r.object, r.predicate);
      break;
    case FreenessProperty::UniversalFree:
      verdict = an.universal_free(r.object, r.predicate);
      break;
  }
  return verdict == r.verdict && (r.verdict || r.failure.has_value());
}

// -- subdoctrine ------------------------------------------------------------------

SubDoctrine::SubDoctrine(const FreenessAnalyzer& base) : Doctrine(base.doctrine().cap()), base_(base) {}

const std::vector<Elem>& SubDoctrine::members(const FinObj& a) const {
  {
    std::lock_guard lock(mutex_);
    auto it = members_.find(a.name());
    if (it != members_.end()) return *it->second;
  }
  auto m = std::make_shared<const std::vector<Elem>>(base_.existential_free_elements(a));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = members_.emplace(a.name(), std::move(m));
  return *it->second;
}

std::optional<Elem> SubDoctrine::from_base(const FinObj& a, Elem x) const {
  const auto& m = members(a);
  auto it = std::lower_bound(m.begin(), m.end(), x);
  if (it == m.end() || *it != x) return std::nullopt;
  return static_cast<Elem>(it - m.begin());
}

bool SubDoctrine::leq(const FinObj& a, Elem x, Elem y) const {
  return base_.doctrine().leq(a, to_base(a, x), to_base(a, y));
}

Elem SubDoctrine::reindex(const FinMor& f, Elem y) const {
  Elem x = base_.doctrine().reindex(f, to_base(f.cod(), y));
  auto s = from_base(f.dom(), x);
  if (!s) throw DoctrineError("reindexing along " + f.key() + " leaves the existential-free predicates");
  return *s;
}

std::string SubDoctrine::label(const FinObj& a, Elem x) const { return base_.doctrine().label(a, to_base(a, x)); }

Freeness::Freeness(std::shared_ptr<const Doctrine> d, SearchOptions opts)
    : d_(std::move(d)), base_(*d_, opts), sub_(base_), sub_analyzer_(sub_, opts) {}

bool Freeness::quantifier_free(const FinObj& a, Elem x) const {
  if (!base_.existential_free(a, x)) return false;
  auto s = sub_.from_base(a, x);
  return s && sub_analyzer_.universal_free(a, *s);
}

std::vector<Elem> Freeness::quantifier_free_elements(const FinObj& a) const {
  std::vector<Elem> out;
  Elem n = enumerable_fibre(*d_, a);
  for (Elem x = 0; x < n; ++x)
    if (quantifier_free(a, x)) out.push_back(x);
  return out;
}

// -- covers -----------------------------------------------------------------------

ordered_json CoverReport::to_json(const Doctrine& d) const {
  auto cover = [&](const Cover& c) {
    ordered_json j;
    j["alpha"] = elem_json(d, c.object, c.alpha);
    j["via"] = c.via ? ordered_json(c.via->name()) : ordered_json(nullptr);
    if (c.via && c.beta) j["beta"] = elem_json(d, cat::product(c.object, *c.via, d.cap()).object, *c.beta);
    return j;
  };
  ordered_json out;
  out["check"] = check;
  out["pass"] = pass;
  out["covers"] = ordered_json::array();
  for (const auto& c : covers) out["covers"].push_back(cover(c));
  out["uncovered"] = uncovered ? cover(*uncovered) : ordered_json(nullptr);
  out["universe_note"] = universe_note;
  return out;
}

namespace {

CoverReport enough(const FreenessAnalyzer& an, bool ex) {
  const Doctrine& d = an.doctrine();
  CoverReport r;
  r.check = ex ? "enough_existential_free" : "enough_universal_free";
  r.universe_note = universe_note(d);
  for (const auto& i : an.search_objects()) {
    Elem n = enumerable_fibre(d, i);
    for (Elem alpha = 0; alpha < n; ++alpha) {
      std::optional<Cover> found;
      for (const auto& a : an.search_objects()) {
        if (found) break;
        Projection p = d.projection(i, a, Side::Left);
        Elem m = enumerable_fibre(d, p.source());
        for (Elem beta = 0; beta < m && !found; ++beta) {
          auto q = ex ? d.exists(p, beta) : d.forall(p, beta);
          if (!q || !d.equal(i, *q, alpha)) continue;
          bool free = ex ? an.existential_free(p.source(), beta) : an.universal_free(p.source(), beta);
          if (free) found = Cover{i, alpha, a, beta};
        }
      }
      if (!found) {
        r.pass = false;
        r.uncovered = Cover{i, alpha, std::nullopt, std::nullopt};
        return r;
      }
      r.covers.push_back(*found);
    }
  }
  return r;
}

}  // namespace

CoverReport has_enough_existential_free(const FreenessAnalyzer& a) { return enough(a, true); }
CoverReport has_enough_universal_free(const FreenessAnalyzer& a) { return enough(a, false); }

// -- Goedel doctrines -------------------------------------------------------------

ordered_json GodelReport::to_json() const {
  ordered_json out;
  out["check"] = "godel_doctrine";
  out["pass"] = pass;
  out["parts"] = ordered_json::array();
  for (const auto& p : parts)
    out["parts"].push_back(
        {{"index", p.index}, {"name", p.name}, {"pass", p.pass}, {"detail", p.detail}, {"witness", p.witness}});
  out["universe_note"] = universe_note;
  return out;
}

namespace {

GodelPart cartesian_closed(const Doctrine& d, std::uint64_t cap) {
  GodelPart part{1, "cartesian closed base", true, "", nullptr};
  std::uint64_t checked = 0;
  auto fail = [&](std::string detail, ordered_json w) {
    part.pass = false;
    part.detail = std::move(detail);
    part.witness = std::move(w);
  };
  for (const auto& a : d.universe())
    for (const auto& b : d.universe()) {
      Product p = cat::product(a, b, cap);
      cat::Exponential e = cat::exponential(b, a, cap);
      for (const auto& c : d.universe()) {
        for (const FinMor& f : cat::enumerate_morphisms(c, a, cap))
          for (const FinMor& g : cat::enumerate_morphisms(c, b, cap)) {
            FinMor h = p.pair(f, g);
            if (!(cat::compose(p.proj_left, h) == f) || !(cat::compose(p.proj_right, h) == g)) {
              fail("pairing does not satisfy the product equations", {{"f", f.key()}, {"g", g.key()}});
              return part;
            }
            std::uint64_t solutions = 0;
            for (const FinMor& k : cat::enumerate_morphisms(c, p.object, cap))
              if (cat::compose(p.proj_left, k) == f && cat::compose(p.proj_right, k) == g) ++solutions;
            if (solutions != 1) {
              fail("pairing is not unique", {{"f", f.key()}, {"g", g.key()}, {"solutions", solutions}});
              return part;
            }
            ++checked;
          }
        Product ca = cat::product(c, a, cap);
        for (const FinMor& g : cat::enumerate_morphisms(ca.object, b, cap)) {
          FinMor h = e.curry(ca, g);
          std::uint64_t solutions = 0;
          bool curried = false;
          for (const FinMor& k : cat::enumerate_morphisms(c, e.object, cap)) {
            FinMor back = cat::compose(e.eval, cat::product_map(ca, e.eval_domain, k, cat::identity(a)));
            if (back == g) {
              ++solutions;
              curried = curried || k == h;
            }
          }
          if (solutions != 1 || !curried) {
            fail("currying is not unique", {{"g", g.key()}, {"solutions", solutions}});
            return part;
          }
          ++checked;
        }
      }
    }
  part.detail = std::to_string(checked) + " universal-property instances";
  return part;
}

template <class Fn>
GodelPart guarded(int index, std::string name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return GodelPart{index, std::move(name), false, e.what(), nullptr};
  }
}

}  // namespace

GodelReport is_godel_doctrine(const Freeness& fr) {
  const Doctrine& d = fr.doctrine();
  const FreenessAnalyzer& an = fr.base();
  const std::uint64_t cap = an.options().cap;
  GodelReport r;
  r.universe_note = universe_note(d);

  r.parts.push_back(guarded(1, "cartesian closed base", [&] { return cartesian_closed(d, cap); }));

  r.parts.push_back(guarded(2, "existential and universal adjoints with Beck-Chevalley", [&] {
    GodelPart part{2, "existential and universal adjoints with Beck-Chevalley", true, "", nullptr};
    CheckReport adj = check_adjoints(d, an.options());
    CheckReport bc = beck_chevalley(d, an.options());
    part.pass = adj.pass && bc.pass;
    part.detail = std::to_string(adj.checked.value("projections", std::uint64_t{0})) + " projections, " +
                  std::to_string(bc.checked.value("instances", std::uint64_t{0})) + " square instances";
    if (!adj.pass) part.witness = adj.to_json()["violations"][0];
    else if (!bc.pass) part.witness = bc.to_json()["violations"][0];
    return part;
  }));

  r.parts.push_back(guarded(3, "enough existential-free predicates", [&] {
    GodelPart part{3, "enough existential-free predicates", true, "", nullptr};
    CoverReport c = has_enough_existential_free(an);
    part.pass = c.pass;
    part.detail = std::to_string(c.covers.size()) + " predicates covered";
    if (!c.pass) part.witness = c.to_json(d)["uncovered"];
    return part;
  }));

  r.parts.push_back(guarded(4, "universal quantification preserves existential-free predicates", [&] {
    GodelPart part{4, "universal quantification preserves existential-free predicates", true, "", nullptr};
    std::uint64_t checked = 0;
    for (const auto& a : d.universe())
      for (const auto& b : d.universe())
        for (Side keep : {Side::Left, Side::Right}) {
          Projection p = d.projection(a, b, keep);
          Elem n = enumerable_fibre(d, p.source());
          for (Elem beta = 0; beta < n; ++beta) {
            if (!an.existential_free(p.source(), beta)) continue;
            auto v = d.forall(p, beta);
            if (!v) throw DoctrineError("forall along " + p.describe() + " does not exist");
            ++checked;
            if (!an.existential_free(p.target(), *v)) {
              part.pass = false;
              part.detail = "forall of an existential-free predicate is not existential-free";
              part.witness = {{"projection", p.describe()},
                              {"beta", elem_json(d, p.source(), beta)},
                              {"forall_beta", elem_json(d, p.target(), *v)},
                              {"failure", an.report(FreenessProperty::ExistentialFree, p.target(), *v).to_json(d)}};
              return part;
            }
          }
        }
    part.detail = std::to_string(checked) + " existential-free predicates quantified";
    return part;
  }));

  r.parts.push_back(guarded(5, "enough universal-free predicates in the existential-free subdoctrine", [&] {
    GodelPart part{5, "enough universal-free predicates in the existential-free subdoctrine", true, "", nullptr};
    CoverReport c = has_enough_universal_free(fr.sub_analyzer());
    part.pass = c.pass;
    part.detail = std::to_string(c.covers.size()) + " predicates of the subdoctrine covered";
    if (!c.pass) part.witness = c.to_json(fr.sub())["uncovered"];
    return part;
  }));

  for (const auto& p : r.parts) r.pass = r.pass && p.pass;
  return r;
}

// -- prenex forms -------------------------------------------------------------------

Elem exists_forall(const Doctrine& d, const Product& iu, const Product& iux, Elem x) {
  auto inner = d.forall(Projection{iux, Side::Left}, x);
  if (!inner) throw DoctrineError("forall along " + Projection{iux, Side::Left}.describe() + " does not exist");
  auto outer = d.exists(Projection{iu, Side::Left}, *inner);
  if (!outer) throw DoctrineError("exists along " + Projection{iu, Side::Left}.describe() + " does not exist");
  return *outer;
}

std::optional<Prenex> prenex_form(const Freeness& f, const FinObj& i, Elem alpha, const std::vector<FinObj>& bound) {
  const Doctrine& d = f.doctrine();
  const std::uint64_t cap = f.base().options().cap;
  std::vector<std::pair<FinObj, FinObj>> shapes;
  for (const auto& u : bound)
    for (const auto& x : bound) shapes.emplace_back(u, x);
  std::stable_sort(shapes.begin(), shapes.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.first.size(), a.second.size()) < std::make_pair(b.first.size(), b.second.size());
  });
  for (const auto& [u, x] : shapes) {
    Product iu = cat::product(i, u, cap);
    Product iux = cat::product(iu.object, x, cap);
    Elem n = enumerable_fibre(d, iux.object);
    for (Elem ad = 0; ad < n; ++ad) {
      if (!d.equal(i, exists_forall(d, iu, iux, ad), alpha)) continue;
      if (f.quantifier_free(iux.object, ad)) return Prenex{u, x, iu, iux, ad};
    }
  }
  return std::nullopt;
}

}  // namespace dialectica::doc
