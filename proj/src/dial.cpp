#include "dialectica/dial.hpp"

#include <random>

namespace dialectica::dial {

using nlohmann::ordered_json;

namespace {

ordered_json mor_json(const FinMor& f) {
  return {{"key", f.key()}, {"dom", f.dom().name()}, {"cod", f.cod().name()}, {"table", f.table()}};
}

void require_within(const FinObj& a, const FinObj& b, std::uint64_t cap, const char* what) {
  if (cat::count_morphisms(a, b) > cap)
    throw SizeCapError(std::string(what) + " space " + a.name() + " -> " + b.name() + " exceeds the cap of " +
                       std::to_string(cap));
}

// Shapes shared by the search and the validation of a pair.
struct Frame {
  Product iu, iux, iv, ivy, iuy;
  Frame(const DialObject& a, const DialObject& b, std::uint64_t cap)
      : iu(cat::product(a.i, a.u, cap)),
        iux(cat::product(iu.object, a.x, cap)),
        iv(cat::product(b.i, b.u, cap)),
        ivy(cat::product(iv.object, b.x, cap)),
        iuy(cat::product(iu.object, b.x, cap)) {}

  // ((i,u),y) -> ((i,u), f1((i,u),y))
  FinMor left(const FinMor& f1) const {
    std::vector<std::size_t> t(iuy.object.size());
    std::size_t ny = iuy.right.size();
    for (std::size_t p = 0; p < t.size(); ++p) t[p] = iux.index(p / ny, f1(p));
    return FinMor(iuy.object, iux.object, std::move(t));
  }
  // ((i,u),y) -> ((i, f0(i,u)), y)
  FinMor right(const FinMor& f0) const {
    std::vector<std::size_t> t(iuy.object.size());
    std::size_t ny = iuy.right.size(), nu = iu.right.size();
    for (std::size_t p = 0; p < t.size(); ++p) {
      std::size_t c = p / ny;
      t[p] = ivy.index(iv.index(c / nu, f0(c)), p % ny);
    }
    return FinMor(iuy.object, ivy.object, std::move(t));
  }
};

}  // namespace

ordered_json DialObject::to_json(const Doctrine& d) const {
  FinObj over = cat::product(cat::product(i, u, d.cap()).object, x, d.cap()).object;
  return {{"I", i.name()}, {"X", x.name()}, {"U", u.name()}, {"alpha", {{"index", alpha}, {"label", d.label(over, alpha)}}}};
}

ordered_json WitnessPair::to_json() const { return {{"f0", mor_json(f0)}, {"f1", mor_json(f1)}}; }

void validate(const Doctrine& d, const DialObject& a) {
  FinObj over = a.iux(d.cap()).object;
  if (!d.has_fibre(over)) throw DoctrineError("no fibre over " + over.name());
  if (a.alpha >= d.fibre_size(over)) throw DoctrineError("predicate index out of range over " + over.name());
}

bool validate_pair(const Doctrine& d, const DialObject& a, const DialObject& b, const WitnessPair& w) {
  if (a.i != b.i) return false;
  Frame fr(a, b, d.cap());
  if (w.f0.dom() != fr.iu.object || w.f0.cod() != b.u) return false;
  if (w.f1.dom() != fr.iuy.object || w.f1.cod() != a.x) return false;
  return d.leq(fr.iuy.object, d.reindex(fr.left(w.f1), a.alpha), d.reindex(fr.right(w.f0), b.alpha));
}

std::optional<WitnessPair> dial_leq(const Doctrine& d, const DialObject& a, const DialObject& b,
                                    const SearchOptions& opts) {
  if (a.i != b.i) throw Error("quadruples over different objects " + a.i.name() + " and " + b.i.name());
  validate(d, a);
  validate(d, b);
  Frame fr(a, b, opts.cap);
  require_within(fr.iu.object, b.u, opts.cap, "f0");
  require_within(fr.iuy.object, a.x, opts.cap, "f1");
  std::uint64_t n0 = cat::count_morphisms(fr.iu.object, b.u);
  std::uint64_t n1 = cat::count_morphisms(fr.iuy.object, a.x);

  std::vector<Elem> lefts(n1);
  for (std::uint64_t k = 0; k < n1; ++k)
    lefts[k] = d.reindex(fr.left(cat::morphism_at(fr.iuy.object, a.x, k)), a.alpha);

  std::vector<std::uint64_t> chosen(n0, 0);
  auto hit = parallel_find_first(n0, opts.jobs, [&](std::size_t j) {
    Elem r = d.reindex(fr.right(cat::morphism_at(fr.iu.object, b.u, j)), b.alpha);
    for (std::uint64_t k = 0; k < n1; ++k)
      if (d.leq(fr.iuy.object, lefts[k], r)) {
        chosen[j] = k;
        return true;
      }
    return false;
  });
  if (!hit) return std::nullopt;
  return WitnessPair{cat::morphism_at(fr.iu.object, b.u, *hit), cat::morphism_at(fr.iuy.object, a.x, chosen[*hit])};
}

WitnessPair identity_pair(const DialObject& a, std::uint64_t cap) {
  Product iu = a.iu(cap);
  Product iux = cat::product(iu.object, a.x, cap);
  return WitnessPair{iu.proj_right, iux.proj_right};
}

WitnessPair compose_pairs(const DialObject& a, const DialObject& b, const DialObject& c, const WitnessPair& w,
                          const WitnessPair& v, std::uint64_t cap) {
  Product iu = a.iu(cap), iv = b.iu(cap);
  Product iuz = cat::product(iu.object, c.x, cap);
  Product iuy = cat::product(iu.object, b.x, cap);
  Product ivz = cat::product(iv.object, c.x, cap);
  std::size_t nu = a.u.size(), nz = c.x.size();
  std::vector<std::size_t> f0(iu.object.size()), f1(iuz.object.size());
  for (std::size_t p = 0; p < f0.size(); ++p) f0[p] = v.f0(iv.index(p / nu, w.f0(p)));
  for (std::size_t p = 0; p < f1.size(); ++p) {
    std::size_t q = p / nz, z = p % nz;
    std::size_t y = v.f1(ivz.index(iv.index(q / nu, w.f0(q)), z));
    f1[p] = w.f1(iuy.index(q, y));
  }
  return WitnessPair{FinMor(iu.object, c.u, std::move(f0)), FinMor(iuz.object, a.x, std::move(f1))};
}

DialObject dial_reindex(const Doctrine& d, const FinMor& f, const DialObject& a, std::uint64_t cap) {
  if (f.cod() != a.i) throw Error("reindexing map " + f.key() + " does not land in " + a.i.name());
  Product iux = a.iux(cap), iu = a.iu(cap);
  Product ju = cat::product(f.dom(), a.u, cap);
  Product jux = cat::product(ju.object, a.x, cap);
  std::size_t nu = a.u.size(), nx = a.x.size();
  std::vector<std::size_t> t(jux.object.size());
  for (std::size_t p = 0; p < t.size(); ++p) {
    std::size_t q = p / nx;
    t[p] = iux.index(iu.index(f(q / nu), q % nu), p % nx);
  }
  return DialObject{f.dom(), a.u, a.x, d.reindex(FinMor(jux.object, iux.object, std::move(t)), a.alpha)};
}

// -- bounded fibres -------------------------------------------------------------

DialFibre build_dial_fibre(const Doctrine& d, const FinObj& i, const std::vector<FinObj>& bound,
                           const SearchOptions& opts) {
  DialFibre fib;
  fib.i = i;
  fib.bound = bound;
  for (const auto& u : bound)
    for (const auto& x : bound) {
      FinObj over = cat::product(cat::product(i, u, opts.cap).object, x, opts.cap).object;
      Elem n = doc::enumerable_fibre(d, over);
      for (Elem alpha = 0; alpha < n; ++alpha) fib.elements.push_back(DialObject{i, u, x, alpha});
    }
  const std::size_t n = fib.elements.size();
  if (static_cast<std::uint64_t>(n) * n > opts.cap * opts.cap)
    throw SizeCapError("bounded fibre has " + std::to_string(n) + " quadruples, too many for the cap");
  fib.leq.assign(n, std::vector<std::optional<WitnessPair>>(n));
  SearchOptions inner = opts;
  inner.jobs = 1;
  parallel_for(n, opts.jobs, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) fib.leq[a][b] = dial_leq(d, fib.elements[a], fib.elements[b], inner);
  });

  for (std::size_t a = 0; a < n && fib.reflexive; ++a) {
    const DialObject& e = fib.elements[a];
    if (!fib.leq[a][a] || !validate_pair(d, e, e, identity_pair(e, opts.cap))) {
      fib.reflexive = false;
      fib.failure = std::vector<std::size_t>{a};
    }
  }

  std::vector<std::uint64_t> composed(n, 0);
  std::vector<std::optional<std::vector<std::size_t>>> broken(n);
  parallel_for(n, opts.jobs, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!fib.leq[a][b]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (!fib.leq[b][c]) continue;
        WitnessPair w = compose_pairs(fib.elements[a], fib.elements[b], fib.elements[c], *fib.leq[a][b],
                                      *fib.leq[b][c], opts.cap);
        ++composed[a];
        if (!validate_pair(d, fib.elements[a], fib.elements[c], w) || !fib.leq[a][c]) {
          broken[a] = std::vector<std::size_t>{a, b, c};
          return;
        }
      }
    }
  });
  for (std::size_t a = 0; a < n; ++a) {
    fib.composed += composed[a];
    if (broken[a] && fib.transitive) {
      fib.transitive = false;
      if (!fib.failure) fib.failure = broken[a];
    }
  }

  fib.class_of.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    std::optional<std::size_t> same;
    for (std::size_t b = 0; b < a && !same; ++b)
      if (fib.leq[a][b] && fib.leq[b][a]) same = fib.class_of[b];
    fib.class_of[a] = same ? *same : fib.classes++;
  }
  return fib;
}

ordered_json DialFibre::to_json(const Doctrine& d) const {
  ordered_json out;
  out["I"] = i.name();
  out["bound"] = ordered_json::array();
  for (const auto& b : bound) out["bound"].push_back(b.name());
  out["quadruples"] = ordered_json::array();
  for (const auto& e : elements) out["quadruples"].push_back(e.to_json(d));
  out["preorder"] = ordered_json::array();
  out["witnesses"] = ordered_json::array();
  for (std::size_t a = 0; a < leq.size(); ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t b = 0; b < leq.size(); ++b) {
      row.push_back(leq[a][b] ? 1 : 0);
      if (leq[a][b]) out["witnesses"].push_back({{"from", a}, {"to", b}, {"pair", leq[a][b]->to_json()}});
    }
    out["preorder"].push_back(row);
  }
  out["reflection"] = {{"classes", classes}, {"class_of", class_of}};
  out["reflexive"] = reflexive;
  out["transitive"] = transitive;
  out["composed_pairs_validated"] = composed;
  out["failure"] = failure ? ordered_json(*failure) : ordered_json(nullptr);
  return out;
}

// -- implication -------------------------------------------------------------------

ordered_json Theorem2Report::to_json(const Doctrine& d) const {
  ordered_json out;
  out["psi"] = psi.to_json(d);
  out["phi"] = phi.to_json(d);
  out["lhs"] = {{"psi", d.label(psi.i, lhs_psi)}, {"phi", d.label(phi.i, lhs_phi)}, {"leq", lhs}};
  out["rhs"] = rhs ? rhs->to_json() : ordered_json(nullptr);
  out["agree"] = agree;
  return out;
}

Theorem2Report check_theorem2(const doc::Freeness& f, const DialObject& psi, const DialObject& phi,
                              const SearchOptions& opts, bool require_quantifier_free) {
  const Doctrine& d = f.doctrine();
  validate(d, psi);
  validate(d, phi);
  if (require_quantifier_free) {
    if (!f.quantifier_free(psi.iux(opts.cap).object, psi.alpha))
      throw SideConditionError("psi_D is not quantifier-free");
    if (!f.quantifier_free(phi.iux(opts.cap).object, phi.alpha))
      throw SideConditionError("phi_D is not quantifier-free");
  }
  Theorem2Report r;
  r.psi = psi;
  r.phi = phi;
  r.lhs_psi = doc::exists_forall(d, psi.iu(opts.cap), psi.iux(opts.cap), psi.alpha);
  r.lhs_phi = doc::exists_forall(d, phi.iu(opts.cap), phi.iux(opts.cap), phi.alpha);
  r.lhs = d.leq(psi.i, r.lhs_psi, r.lhs_phi);
  r.rhs = dial_leq(d, psi, phi, opts);
  r.agree = r.lhs == r.rhs.has_value();
  return r;
}

ordered_json Theorem2Sample::to_json(const Doctrine& d) const {
  ordered_json out;
  out["check"] = "implication_characterisation";
  out["pass"] = discrepancies == 0;
  out["samples"] = samples;
  out["lhs_true"] = lhs_true;
  out["discrepancies"] = discrepancies;
  out["first_discrepancy"] = first_discrepancy ? first_discrepancy->to_json(d) : ordered_json(nullptr);
  return out;
}

Theorem2Sample sample_theorem2(const doc::Freeness& f, const std::vector<FinObj>& sorts, std::uint64_t samples,
                               std::uint64_t seed, const SearchOptions& opts) {
  if (sorts.empty()) throw Error("no sorts to sample from");
  const Doctrine& d = f.doctrine();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sorts.size() - 1);
  auto draw = [&](const FinObj& i) {
    DialObject q{i, sorts[pick(rng)], sorts[pick(rng)], 0};
    Elem n = doc::enumerable_fibre(d, q.iux(opts.cap).object);
    q.alpha = std::uniform_int_distribution<Elem>(0, n - 1)(rng);
    return q;
  };
  Theorem2Sample s;
  const std::uint64_t max_draws = samples * 64;
  for (std::uint64_t draws = 0; s.samples < samples && draws < max_draws; ++draws) {
    FinObj i = sorts[pick(rng)];
    DialObject psi = draw(i), phi = draw(i);
    if (!f.quantifier_free(psi.iux(opts.cap).object, psi.alpha) ||
        !f.quantifier_free(phi.iux(opts.cap).object, phi.alpha))
      continue;
    Theorem2Report r = check_theorem2(f, psi, phi, opts, false);
    ++s.samples;
    if (r.lhs) ++s.lhs_true;
    if (!r.agree) {
      ++s.discrepancies;
      if (!s.first_discrepancy) s.first_discrepancy = r;
    }
  }
  return s;
}

// -- completion of the quantifier-free part -----------------------------------------

namespace {

DialObject quadruple(const FinObj& i, const doc::Prenex& p) { return DialObject{i, p.u, p.x, p.alpha_d}; }

}  // namespace

Theorem4Report check_theorem4(const doc::Freeness& f, const std::vector<FinObj>& bound, const SearchOptions& opts) {
  const Doctrine& d = f.doctrine();
  Theorem4Report r;
  std::string names;
  for (const auto& b : bound) names += (names.empty() ? "" : ", ") + b.name();
  r.universe_note = "fibres over the declared universe; U and X range over {" + names + "}";
  SearchOptions inner = opts;
  inner.jobs = 1;

  for (const auto& i : d.universe()) {
    Theorem4Fibre fib;
    fib.i = i;
    Elem n = doc::enumerable_fibre(d, i);
    fib.images.resize(n);
    parallel_for(n, opts.jobs, [&](std::size_t a) { fib.images[a] = doc::prenex_form(f, i, a, bound); });
    for (const auto& img : fib.images)
      if (!img) ++r.not_found;

    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        if (!fib.images[a] || !fib.images[b]) continue;
        DialObject qa = quadruple(i, *fib.images[a]), qb = quadruple(i, *fib.images[b]);
        bool order = d.leq(i, a, b);
        auto pair = dial_leq(d, qa, qb, opts);
        ++fib.pairs;
        if (order != pair.has_value()) {
          ++fib.order_mismatches;
          if (!fib.witness)
            fib.witness = ordered_json{{"alpha", d.label(i, a)}, {"beta", d.label(i, b)}, {"leq", order},
                                       {"dial_leq", pair.has_value()}};
        }
        Theorem2Report t = check_theorem2(f, qa, qb, inner, false);
        if (!t.agree || t.lhs != order) ++fib.cross_mismatches;
      }

    std::vector<std::pair<FinObj, FinObj>> shapes;
    for (const auto& u : bound)
      for (const auto& x : bound) shapes.emplace_back(u, x);
    for (const auto& [u, x] : shapes) {
      DialObject q{i, u, x, 0};
      Product iu = q.iu(opts.cap), iux = q.iux(opts.cap);
      Elem m = doc::enumerable_fibre(d, iux.object);
      for (Elem ad = 0; ad < m; ++ad) {
        if (!f.quantifier_free(iux.object, ad)) continue;
        q.alpha = ad;
        Elem value = doc::exists_forall(d, iu, iux, ad);
        const auto& img = fib.images[value];
        ++fib.quadruples;
        bool matched = img && dial_leq(d, q, quadruple(i, *img), opts) && dial_leq(d, quadruple(i, *img), q, opts);
        if (!matched) {
          ++fib.unmatched;
          if (!fib.witness) fib.witness = ordered_json{{"quadruple", q.to_json(d)}, {"value", d.label(i, value)}};
        }
      }
    }
    if (fib.order_mismatches || fib.cross_mismatches || fib.unmatched) r.pass = false;
    r.fibres.push_back(std::move(fib));
  }
  if (r.not_found) r.pass = false;
  return r;
}

ordered_json Theorem4Report::to_json(const Doctrine& d) const {
  ordered_json out;
  out["check"] = "completion_isomorphism";
  out["pass"] = pass;
  out["not_found"] = not_found;
  out["fibres"] = ordered_json::array();
  for (const auto& fib : fibres) {
    ordered_json images = ordered_json::array();
    for (std::size_t a = 0; a < fib.images.size(); ++a) {
      const auto& img = fib.images[a];
      images.push_back({{"alpha", d.label(fib.i, a)},
                        {"image", img ? quadruple(fib.i, *img).to_json(d) : ordered_json(nullptr)}});
    }
    out["fibres"].push_back({{"I", fib.i.name()},
                             {"images", images},
                             {"pairs", fib.pairs},
                             {"order_mismatches", fib.order_mismatches},
                             {"cross_mismatches", fib.cross_mismatches},
                             {"quadruples", fib.quadruples},
                             {"unmatched", fib.unmatched},
                             {"witness", fib.witness ? *fib.witness : ordered_json(nullptr)}});
  }
  out["universe_note"] = universe_note;
  return out;
}

}  // namespace dialectica::dial
