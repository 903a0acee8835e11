#include "dialectica/doctrine.hpp"

#include <algorithm>
#include <set>

namespace dialectica::doc {

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }
const char* to_string(Quantifier q) { return q == Quantifier::Exists ? "exists" : "forall"; }

std::string Projection::describe() const {
  return std::string("pi_") + (keep == Side::Left ? "1" : "2") + ": " + source().name() + " -> " + target().name();
}

Projection make_projection(const FinObj& a, const FinObj& b, Side keep, std::uint64_t cap) {
  return Projection{cat::product(a, b, cap), keep};
}

// -- posets -------------------------------------------------------------------

std::optional<FinitePoset::Defect> FinitePoset::defect() const {
  const std::size_t n = elements.size();
  if (leq.size() != n) return Defect{"shape", "leq has " + std::to_string(leq.size()) + " rows", {}};
  for (std::size_t i = 0; i < n; ++i)
    if (leq[i].size() != n) return Defect{"shape", "leq row " + std::to_string(i) + " has the wrong length", {i}};
  for (std::size_t i = 0; i < n; ++i)
    if (!leq[i][i]) return Defect{"reflexivity", elements[i] + " is not below itself", {i}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i])
        return Defect{"antisymmetry", elements[i] + " and " + elements[j] + " are mutually below", {i, j}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!leq[i][j]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (leq[j][k] && !leq[i][k])
          return Defect{"transitivity",
                        elements[i] + " <= " + elements[j] + " <= " + elements[k] + " but not " + elements[i] +
                            " <= " + elements[k],
                        {i, j, k}};
    }
  return std::nullopt;
}

FinitePoset FinitePoset::chain(std::size_t n) {
  FinitePoset p;
  for (std::size_t i = 0; i < n; ++i) p.elements.push_back("w" + std::to_string(i));
  p.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) p.leq[i][j] = true;
  return p;
}

FinitePoset FinitePoset::antichain(std::size_t n) {
  FinitePoset p;
  for (std::size_t i = 0; i < n; ++i) p.elements.push_back("w" + std::to_string(i));
  p.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) p.leq[i][i] = true;
  return p;
}

// -- doctrine defaults ----------------------------------------------------------

std::vector<FinObj> Doctrine::working_objects() const {
  std::vector<FinObj> out;
  std::set<std::string> seen;
  auto add = [&](const FinObj& o) {
    if (seen.insert(o.name()).second) out.push_back(o);
  };
  for (const auto& a : universe()) add(a);
  for (const auto& a : universe())
    for (const auto& b : universe()) add(cat::product(a, b, cap_).object);
  return out;
}

Elem enumerable_fibre(const Doctrine& d, const FinObj& a) {
  Elem n = d.fibre_size(a);
  if (n > kFibreLimit)
    throw SizeCapError("fibre over " + a.name() + " has " + std::to_string(n) + " elements, limit is " +
                       std::to_string(kFibreLimit));
  return n;
}

namespace {

using Rows = std::vector<std::optional<Elem>>;

// Candidate-per-row adjoint search. For the left adjoint the value at x is the
// y whose up-set equals {z : x <= P_pi z}; for the right adjoint the y whose
// down-set equals {z : P_pi z <= x}.
class RowSearch {
 public:
  RowSearch(const Doctrine& d, const Projection& p, Quantifier q) : d_(d), p_(p), q_(q) {
    nt_ = enumerable_fibre(d, p.target());
    enumerable_fibre(d, p.source());
    pulled_.resize(nt_);
    for (Elem z = 0; z < nt_; ++z) pulled_[z] = d.reindex(p.map(), z);
    cone_.assign(nt_, std::vector<bool>(nt_));
    for (Elem y = 0; y < nt_; ++y)
      for (Elem z = 0; z < nt_; ++z)
        cone_[y][z] = q == Quantifier::Exists ? d.leq(p.target(), y, z) : d.leq(p.target(), z, y);
  }

  std::optional<Elem> row(Elem x) const {
    std::vector<bool> want(nt_);
    for (Elem z = 0; z < nt_; ++z)
      want[z] = q_ == Quantifier::Exists ? d_.leq(p_.source(), x, pulled_[z]) : d_.leq(p_.source(), pulled_[z], x);
    for (Elem y = 0; y < nt_; ++y)
      if (cone_[y] == want) return y;
    return std::nullopt;
  }

 private:
  const Doctrine& d_;
  const Projection& p_;
  Quantifier q_;
  Elem nt_ = 0;
  std::vector<Elem> pulled_;
  std::vector<std::vector<bool>> cone_;
};

std::string cache_key(const Projection& p, Quantifier q) {
  return std::string(to_string(q)) + "|" + p.source().name() + "|" + to_string(p.keep);
}

}  // namespace

const Doctrine::Rows& Doctrine::search_rows(const Projection& p, Quantifier q) const {
  std::string key = cache_key(p, q);
  {
    std::lock_guard lock(search_mutex_);
    auto it = search_cache_.find(key);
    if (it != search_cache_.end()) return *it->second;
  }
  RowSearch search(*this, p, q);
  Elem ns = enumerable_fibre(*this, p.source());
  auto rows = std::make_shared<Rows>(ns);
  for (Elem x = 0; x < ns; ++x) (*rows)[x] = search.row(x);
  std::lock_guard lock(search_mutex_);
  auto [it, inserted] = search_cache_.emplace(key, std::move(rows));
  return *it->second;
}

std::optional<Elem> Doctrine::exists(const Projection& p, Elem x) const {
  return search_rows(p, Quantifier::Exists).at(x);
}

std::optional<Elem> Doctrine::forall(const Projection& p, Elem x) const {
  return search_rows(p, Quantifier::Forall).at(x);
}

Elem Doctrine::top(const FinObj& a) const {
  Elem n = enumerable_fibre(*this, a);
  for (Elem x = 0; x < n; ++x) {
    bool greatest = true;
    for (Elem y = 0; y < n && greatest; ++y) greatest = leq(a, y, x);
    if (greatest) return x;
  }
  throw DoctrineError("fibre over " + a.name() + " has no top element");
}

Elem Doctrine::bottom(const FinObj& a) const {
  Elem n = enumerable_fibre(*this, a);
  for (Elem x = 0; x < n; ++x) {
    bool least = true;
    for (Elem y = 0; y < n && least; ++y) least = leq(a, x, y);
    if (least) return x;
  }
  throw DoctrineError("fibre over " + a.name() + " has no bottom element");
}

Elem Doctrine::meet(const FinObj& a, Elem, Elem) const {
  throw DoctrineError("doctrine has no Heyting structure on " + a.name());
}
Elem Doctrine::join(const FinObj& a, Elem, Elem) const {
  throw DoctrineError("doctrine has no Heyting structure on " + a.name());
}
Elem Doctrine::implies(const FinObj& a, Elem, Elem) const {
  throw DoctrineError("doctrine has no Heyting structure on " + a.name());
}

AdjointSearch adjoint(const Doctrine& d, const Projection& p, Quantifier q) {
  RowSearch search(d, p, q);
  Elem ns = enumerable_fibre(d, p.source());
  AdjointWitness w{q, p, {}};
  w.table.reserve(ns);
  for (Elem x = 0; x < ns; ++x) {
    auto y = search.row(x);
    if (!y) return AdjointSearch{std::nullopt, x};
    w.table.push_back(*y);
  }
  return AdjointSearch{std::move(w), std::nullopt};
}

std::optional<Elem> search_adjoint_value(const Doctrine& d, const Projection& p, Quantifier q, Elem x) {
  return RowSearch(d, p, q).row(x);
}

// -- reports ------------------------------------------------------------------

void CheckReport::add(Violation v) {
  pass = false;
  ++violation_count;
  if (violations.size() < kMaxViolations) violations.push_back(std::move(v));
}

void CheckReport::merge(const CheckReport& other) {
  pass = pass && other.pass;
  violation_count += other.violation_count;
  for (const auto& v : other.violations)
    if (violations.size() < kMaxViolations) violations.push_back(v);
  for (auto it = other.checked.begin(); it != other.checked.end(); ++it) {
    if (checked.contains(it.key()) && checked[it.key()].is_number_unsigned() && it->is_number_unsigned())
      checked[it.key()] = checked[it.key()].get<std::uint64_t>() + it->get<std::uint64_t>();
    else
      checked[it.key()] = *it;
  }
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json out;
  out["check"] = check;
  out["pass"] = pass;
  out["checked"] = checked;
  out["violation_count"] = violation_count;
  out["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations)
    out["violations"].push_back({{"kind", v.kind}, {"detail", v.detail}, {"witness", v.witness}});
  out["notes"] = notes;
  return out;
}

// -- check_doctrine -------------------------------------------------------------

namespace {

constexpr Elem kQuadraticLimit = 4096;
constexpr Elem kCubicLimit = 512;

void bump(CheckReport& r, const char* key, std::uint64_t n = 1) {
  std::uint64_t cur = r.checked.contains(key) ? r.checked[key].get<std::uint64_t>() : 0;
  r.checked[key] = cur + n;
}

nlohmann::json elem_json(const Doctrine& d, const FinObj& a, Elem x) {
  return {{"object", a.name()}, {"index", x}, {"label", d.label(a, x)}};
}

std::vector<std::uint8_t> leq_matrix(const Doctrine& d, const FinObj& a, Elem n) {
  std::vector<std::uint8_t> m(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) m[x * n + y] = d.leq(a, x, y);
  return m;
}

void check_poset(const Doctrine& d, const FinObj& a, Elem n, const std::vector<std::uint8_t>& le, CheckReport& r) {
  for (Elem x = 0; x < n; ++x)
    if (!le[x * n + x])
      r.add({"reflexivity", a.name() + ": element not below itself", {{"x", elem_json(d, a, x)}}});
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (le[x * n + y] && le[y * n + x])
        r.add({"antisymmetry", a.name() + ": distinct elements below each other",
               {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}}});
  if (n > kCubicLimit) {
    r.notes.push_back("transitivity on " + a.name() + " skipped: fibre has " + std::to_string(n) + " elements");
    return;
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (!le[x * n + y]) continue;
      for (Elem z = 0; z < n; ++z)
        if (le[y * n + z] && !le[x * n + z])
          r.add({"transitivity", a.name() + ": x <= y <= z but not x <= z",
                 {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}, {"z", elem_json(d, a, z)}}});
    }
  bump(r, "poset_triples", n * n * n);
}

struct Fibre {
  FinObj obj;
  Elem n = 0;
  std::vector<std::uint8_t> le;
  bool enumerable = false;
};

void check_heyting_fibre(const Doctrine& d, const Fibre& f, CheckReport& r) {
  const FinObj& a = f.obj;
  const Elem n = f.n;
  auto le = [&](Elem x, Elem y) { return f.le[x * n + y] != 0; };
  Elem top = d.top(a), bot = d.bottom(a);
  for (Elem x = 0; x < n; ++x) {
    if (!le(x, top)) r.add({"heyting_top", a.name() + ": element not below top", {{"x", elem_json(d, a, x)}}});
    if (!le(bot, x)) r.add({"heyting_bottom", a.name() + ": bottom not below element", {{"x", elem_json(d, a, x)}}});
  }
  if (n > kCubicLimit) {
    r.notes.push_back("lattice laws on " + a.name() + " skipped: fibre has " + std::to_string(n) + " elements");
    return;
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      Elem m = d.meet(a, x, y), j = d.join(a, x, y), i = d.implies(a, x, y);
      if (!le(m, x) || !le(m, y)) r.add({"heyting_meet", a.name() + ": meet is not a lower bound",
                                         {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}}});
      if (!le(x, j) || !le(y, j)) r.add({"heyting_join", a.name() + ": join is not an upper bound",
                                         {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}}});
      for (Elem z = 0; z < n; ++z) {
        if (le(z, x) && le(z, y) && !le(z, m))
          r.add({"heyting_meet", a.name() + ": meet is not the greatest lower bound",
                 {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}, {"z", elem_json(d, a, z)}}});
        if (le(x, z) && le(y, z) && !le(j, z))
          r.add({"heyting_join", a.name() + ": join is not the least upper bound",
                 {{"x", elem_json(d, a, x)}, {"y", elem_json(d, a, y)}, {"z", elem_json(d, a, z)}}});
        // residuation with a = z, b = x, c = y
        if (le(d.meet(a, z, x), y) != le(z, i))
          r.add({"residuation", a.name() + ": a & b <= c and a <= b -> c disagree",
                 {{"a", elem_json(d, a, z)}, {"b", elem_json(d, a, x)}, {"c", elem_json(d, a, y)}}});
      }
    }
  bump(r, "heyting_triples", n * n * n);
}

}  // namespace

CheckReport check_doctrine(const Doctrine& d, const SearchOptions& opts) {
  CheckReport r;
  r.check = "doctrine";
  std::vector<Fibre> fibres;
  for (const auto& a : d.working_objects()) {
    Fibre f{a, 0, {}, false};
    if (!d.has_fibre(a)) {
      r.add({"missing_fibre", "no fibre for object " + a.name(), {{"object", a.name()}}});
      continue;
    }
    f.n = d.fibre_size(a);
    f.enumerable = f.n <= kQuadraticLimit;
    if (!f.enumerable) {
      r.notes.push_back("fibre over " + a.name() + " has " + std::to_string(f.n) + " elements; checks skipped");
      fibres.push_back(std::move(f));
      continue;
    }
    f.le = leq_matrix(d, a, f.n);
    check_poset(d, a, f.n, f.le, r);
    bump(r, "fibres");
    fibres.push_back(std::move(f));
  }

  // Reindexing tables per (A, B) pair, indexed by morphism index.
  const std::size_t k = fibres.size();
  std::vector<std::vector<std::vector<Elem>>> tables(k * k);
  std::vector<bool> have(k * k, false);
  for (std::size_t ia = 0; ia < k; ++ia)
    for (std::size_t ib = 0; ib < k; ++ib) {
      const Fibre& fa = fibres[ia];
      const Fibre& fb = fibres[ib];
      if (!fa.enumerable || !fb.enumerable) continue;
      std::uint64_t count = cat::count_morphisms(fa.obj, fb.obj);
      if (count > opts.cap) {
        r.notes.push_back("morphisms " + fa.obj.name() + " -> " + fb.obj.name() + " exceed the cap; skipped");
        continue;
      }
      auto& slot = tables[ia * k + ib];
      slot.reserve(count);
      bool ok = true;
      cat::for_each_table(fa.obj.size(), fb.obj.size(), [&](const std::vector<std::size_t>& t) {
        FinMor f(fa.obj, fb.obj, t);
        std::vector<Elem> row(fb.n);
        try {
          for (Elem y = 0; y < fb.n; ++y) row[y] = d.reindex(f, y);
        } catch (const DoctrineError& e) {
          r.add({"missing_reindexing", e.what(), {{"morphism", f.key()}}});
          ok = false;
          return false;
        }
        for (Elem y = 0; y < fb.n; ++y)
          if (row[y] >= fa.n) {
            r.add({"reindex_range", "reindexing leaves the fibre", {{"morphism", f.key()}, {"y", y}}});
            ok = false;
            return false;
          }
        // monotonicity
        for (Elem y1 = 0; y1 < fb.n; ++y1)
          for (Elem y2 = 0; y2 < fb.n; ++y2)
            if (fb.le[y1 * fb.n + y2] && !fa.le[row[y1] * fa.n + row[y2]])
              r.add({"monotonicity", "reindexing along " + f.key() + " is not monotone",
                     {{"morphism", f.key()}, {"y1", elem_json(d, fb.obj, y1)}, {"y2", elem_json(d, fb.obj, y2)}}});
        bump(r, "morphisms");
        slot.push_back(std::move(row));
        return true;
      });
      have[ia * k + ib] = ok;
    }

  // Identities and composition.
  for (std::size_t ia = 0; ia < k; ++ia) {
    if (!have[ia * k + ia]) continue;
    const Fibre& fa = fibres[ia];
    const auto& row = tables[ia * k + ia][cat::identity(fa.obj).index()];
    for (Elem y = 0; y < fa.n; ++y)
      if (row[y] != y) {
        r.add({"functoriality_identity", "P_id is not the identity on " + fa.obj.name(),
               {{"object", fa.obj.name()}, {"y", elem_json(d, fa.obj, y)}}});
        break;
      }
  }
  for (std::size_t ia = 0; ia < k; ++ia)
    for (std::size_t ib = 0; ib < k; ++ib)
      for (std::size_t ic = 0; ic < k; ++ic) {
        if (!have[ia * k + ib] || !have[ib * k + ic] || !have[ia * k + ic]) continue;
        const Fibre& fa = fibres[ia];
        const Fibre& fb = fibres[ib];
        const Fibre& fc = fibres[ic];
        const auto& ab = tables[ia * k + ib];
        const auto& bc = tables[ib * k + ic];
        const auto& ac = tables[ia * k + ic];
        std::uint64_t fi = 0;
        cat::for_each_table(fa.obj.size(), fb.obj.size(), [&](const std::vector<std::size_t>& ft) {
          std::uint64_t gi = 0;
          cat::for_each_table(fb.obj.size(), fc.obj.size(), [&](const std::vector<std::size_t>& gt) {
            std::uint64_t comp = 0;
            for (std::size_t i = 0; i < ft.size(); ++i) comp = comp * fc.obj.size() + gt[ft[i]];
            const auto& pf = ab[fi];
            const auto& pg = bc[gi];
            const auto& pgf = ac[comp];
            for (Elem z = 0; z < fc.n; ++z)
              if (pgf[z] != pf[pg[z]]) {
                r.add({"functoriality_composition", "P_{g.f} differs from P_f . P_g",
                       {{"f", FinMor(fa.obj, fb.obj, ft).key()},
                        {"g", FinMor(fb.obj, fc.obj, gt).key()},
                        {"z", elem_json(d, fc.obj, z)}}});
                break;
              }
            bump(r, "composable_pairs");
            ++gi;
            return true;
          });
          ++fi;
          return true;
        });
      }

  if (d.has_heyting()) {
    for (const auto& f : fibres)
      if (f.enumerable) check_heyting_fibre(d, f, r);
    for (std::size_t ia = 0; ia < k; ++ia)
      for (std::size_t ib = 0; ib < k; ++ib) {
        if (!have[ia * k + ib]) continue;
        const Fibre& fa = fibres[ia];
        const Fibre& fb = fibres[ib];
        const auto& rows = tables[ia * k + ib];
        Elem ta = d.top(fa.obj), ba = d.bottom(fa.obj), tb = d.top(fb.obj), bb = d.bottom(fb.obj);
        std::vector<Elem> meet_b(fb.n * fb.n), join_b(fb.n * fb.n), imp_b(fb.n * fb.n);
        for (Elem y1 = 0; y1 < fb.n; ++y1)
          for (Elem y2 = 0; y2 < fb.n; ++y2) {
            meet_b[y1 * fb.n + y2] = d.meet(fb.obj, y1, y2);
            join_b[y1 * fb.n + y2] = d.join(fb.obj, y1, y2);
            imp_b[y1 * fb.n + y2] = d.implies(fb.obj, y1, y2);
          }
        std::vector<Elem> meet_a(fa.n * fa.n), join_a(fa.n * fa.n), imp_a(fa.n * fa.n);
        for (Elem x1 = 0; x1 < fa.n; ++x1)
          for (Elem x2 = 0; x2 < fa.n; ++x2) {
            meet_a[x1 * fa.n + x2] = d.meet(fa.obj, x1, x2);
            join_a[x1 * fa.n + x2] = d.join(fa.obj, x1, x2);
            imp_a[x1 * fa.n + x2] = d.implies(fa.obj, x1, x2);
          }
        for (std::size_t fi = 0; fi < rows.size(); ++fi) {
          const auto& row = rows[fi];
          auto key = [&] { return cat::morphism_at(fa.obj, fb.obj, fi).key(); };
          if (row[tb] != ta) r.add({"heyting_preservation", "reindexing does not preserve top", {{"morphism", key()}}});
          if (row[bb] != ba)
            r.add({"heyting_preservation", "reindexing does not preserve bottom", {{"morphism", key()}}});
          for (Elem y1 = 0; y1 < fb.n; ++y1)
            for (Elem y2 = 0; y2 < fb.n; ++y2) {
              Elem a1 = row[y1], a2 = row[y2];
              const char* op = nullptr;
              if (row[meet_b[y1 * fb.n + y2]] != meet_a[a1 * fa.n + a2])
                op = "meet";
              else if (row[join_b[y1 * fb.n + y2]] != join_a[a1 * fa.n + a2])
                op = "join";
              else if (row[imp_b[y1 * fb.n + y2]] != imp_a[a1 * fa.n + a2])
                op = "implication";
              if (op)
                r.add({"heyting_preservation", std::string("reindexing does not preserve ") + op,
                       {{"morphism", key()}, {"y1", elem_json(d, fb.obj, y1)}, {"y2", elem_json(d, fb.obj, y2)}}});
            }
          bump(r, "heyting_preservation_pairs", fb.n * fb.n);
        }
      }
  }
  return r;
}

CheckReport check_residuation(const Doctrine& d, const SearchOptions&) {
  CheckReport r;
  r.check = "residuation";
  if (!d.has_heyting()) {
    r.add({"no_heyting", "doctrine has no Heyting structure", nullptr});
    return r;
  }
  for (const auto& a : d.working_objects()) {
    Elem n = d.fibre_size(a);
    if (n > kCubicLimit) {
      r.notes.push_back("residuation on " + a.name() + " skipped: fibre has " + std::to_string(n) + " elements");
      continue;
    }
    auto le = leq_matrix(d, a, n);
    for (Elem x = 0; x < n; ++x)
      for (Elem b = 0; b < n; ++b) {
        Elem m = d.meet(a, x, b);
        for (Elem c = 0; c < n; ++c)
          if ((le[m * n + c] != 0) != (le[x * n + d.implies(a, b, c)] != 0))
            r.add({"residuation", a.name() + ": a & b <= c and a <= b -> c disagree",
                   {{"a", elem_json(d, a, x)}, {"b", elem_json(d, a, b)}, {"c", elem_json(d, a, c)}}});
      }
    bump(r, "triples", n * n * n);
  }
  return r;
}

// -- adjoints -----------------------------------------------------------------

CheckReport check_adjoints(const Doctrine& d, const SearchOptions&) {
  CheckReport r;
  r.check = "adjoints";
  for (const auto& a : d.universe())
    for (const auto& b : d.universe())
      for (Side keep : {Side::Left, Side::Right}) {
        Projection p = d.projection(a, b, keep);
        const FinObj& src = p.source();
        const FinObj& tgt = p.target();
        Elem ns = enumerable_fibre(d, src), nt = enumerable_fibre(d, tgt);
        std::vector<Elem> pulled(nt);
        for (Elem y = 0; y < nt; ++y) pulled[y] = d.reindex(p.map(), y);
        std::vector<std::optional<Elem>> ex(ns), fa(ns);
        bool complete = true;
        for (Elem x = 0; x < ns; ++x) {
          ex[x] = d.exists(p, x);
          fa[x] = d.forall(p, x);
          if (!ex[x] || !fa[x]) {
            complete = false;
            r.add({"missing_adjoint", std::string(!ex[x] ? "exists" : "forall") + " along " + p.describe() +
                                          " has no value",
                   {{"projection", p.describe()}, {"x", elem_json(d, src, x)}}});
          }
        }
        if (!complete) continue;
        for (Elem x = 0; x < ns; ++x) {
          if (!d.leq(src, x, pulled[*ex[x]]))
            r.add({"unit", "x <= P_pi exists x fails", {{"projection", p.describe()}, {"x", elem_json(d, src, x)}}});
          if (!d.leq(src, pulled[*fa[x]], x))
            r.add({"counit", "P_pi forall x <= x fails", {{"projection", p.describe()}, {"x", elem_json(d, src, x)}}});
          for (Elem y = 0; y < nt; ++y) {
            if (d.leq(tgt, *ex[x], y) != d.leq(src, x, pulled[y]))
              r.add({"adjunction_exists", "exists x <= y and x <= P_pi y disagree",
                     {{"projection", p.describe()}, {"x", elem_json(d, src, x)}, {"y", elem_json(d, tgt, y)}}});
            if (d.leq(tgt, y, *fa[x]) != d.leq(src, pulled[y], x))
              r.add({"adjunction_forall", "y <= forall x and P_pi y <= x disagree",
                     {{"projection", p.describe()}, {"x", elem_json(d, src, x)}, {"y", elem_json(d, tgt, y)}}});
          }
        }
        for (Elem y = 0; y < nt; ++y) {
          if (!d.leq(tgt, *ex[pulled[y]], y))
            r.add({"counit", "exists P_pi y <= y fails", {{"projection", p.describe()}, {"y", elem_json(d, tgt, y)}}});
          if (!d.leq(tgt, y, *fa[pulled[y]]))
            r.add({"unit", "y <= forall P_pi y fails", {{"projection", p.describe()}, {"y", elem_json(d, tgt, y)}}});
        }
        // The closed forms against the exhaustive search.
        for (Quantifier q : {Quantifier::Exists, Quantifier::Forall}) {
          AdjointSearch s = adjoint(d, p, q);
          if (!s.witness) {
            r.add({"oracle_mismatch", "search finds no adjoint but the doctrine returned one",
                   {{"projection", p.describe()}, {"direction", to_string(q)}}});
            continue;
          }
          for (Elem x = 0; x < ns; ++x) {
            Elem mine = q == Quantifier::Exists ? *ex[x] : *fa[x];
            if (!d.equal(tgt, mine, s.witness->table[x]))
              r.add({"oracle_mismatch", "closed form differs from the searched adjoint",
                     {{"projection", p.describe()}, {"direction", to_string(q)}, {"x", elem_json(d, src, x)}}});
          }
        }
        bump(r, "projections");
        bump(r, "instances", ns * nt);
      }
  return r;
}

CheckReport beck_chevalley(const Doctrine& d, const SearchOptions& opts) {
  CheckReport r;
  r.check = "beck_chevalley";
  bool left_ok = true, right_ok = true;
  for (const auto& a : d.universe())
    for (const auto& b : d.universe())
      for (const auto& a2 : d.universe()) {
        if (cat::count_morphisms(a2, a) > opts.cap) {
          r.notes.push_back("morphisms " + a2.name() + " -> " + a.name() + " exceed the cap; squares skipped");
          continue;
        }
        for (const FinMor& f : cat::enumerate_morphisms(a2, a, opts.cap))
          for (Side keep : {Side::Left, Side::Right}) {
            // keep Left: A*B -> A along f * id; keep Right: B*A -> A along id * f.
            Projection p = keep == Side::Left ? d.projection(a, b, keep) : d.projection(b, a, keep);
            Projection p2 = keep == Side::Left ? d.projection(a2, b, keep) : d.projection(b, a2, keep);
            FinMor f2 = keep == Side::Left ? cat::product_map(p2.product, p.product, f, cat::identity(b))
                                           : cat::product_map(p2.product, p.product, cat::identity(b), f);
            bool& ok = keep == Side::Left ? left_ok : right_ok;
            Elem n = enumerable_fibre(d, p.source());
            for (Elem beta = 0; beta < n; ++beta) {
              Elem pulled = d.reindex(f2, beta);
              auto e_top = d.exists(p, beta), e_bottom = d.exists(p2, pulled);
              auto a_top = d.forall(p, beta), a_bottom = d.forall(p2, pulled);
              nlohmann::json w = {{"orientation", to_string(keep)},
                                  {"f", f.key()},
                                  {"projection", p.describe()},
                                  {"beta", elem_json(d, p.source(), beta)}};
              if (!e_top || !e_bottom || !a_top || !a_bottom) {
                ok = false;
                r.add({"missing_adjoint", "a quantifier along the square has no value", w});
                continue;
              }
              Elem lhs_e = *e_bottom, rhs_e = d.reindex(f, *e_top);
              Elem lhs_a = d.reindex(f, *a_top), rhs_a = *a_bottom;
              if (!d.leq(a2, lhs_e, rhs_e)) {
                ok = false;
                r.add({"bc_inequality_exists", "exists P_f' beta <= P_f exists beta fails", w});
              } else if (!d.equal(a2, lhs_e, rhs_e)) {
                ok = false;
                r.add({"bc_exists", "exists P_f' beta differs from P_f exists beta", w});
              }
              if (!d.leq(a2, lhs_a, rhs_a)) {
                ok = false;
                r.add({"bc_inequality_forall", "P_f forall beta <= forall P_f' beta fails", w});
              } else if (!d.equal(a2, lhs_a, rhs_a)) {
                ok = false;
                r.add({"bc_forall", "P_f forall beta differs from forall P_f' beta", w});
              }
            }
            bump(r, keep == Side::Left ? "left_squares" : "right_squares");
            bump(r, "instances", n);
          }
      }
  r.checked["left_pass"] = left_ok;
  r.checked["right_pass"] = right_ok;
  return r;
}

// -- finite Heyting algebras ----------------------------------------------------

FiniteHeyting FiniteHeyting::up_sets(const FinitePoset& frame) {
  const std::size_t w = frame.size();
  if (w > 16) throw SizeCapError("frames are limited to 16 worlds");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << w); ++m) {
    bool up = true;
    for (std::size_t i = 0; i < w && up; ++i) {
      if (!(m >> i & 1)) continue;
      for (std::size_t j = 0; j < w && up; ++j)
        if (frame.le(i, j) && !(m >> j & 1)) up = false;
    }
    if (up) masks.push_back(m);
  }
  FiniteHeyting h;
  h.n = masks.size();
  std::map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < masks.size(); ++i) pos[masks[i]] = i;
  for (std::uint32_t m : masks) {
    std::string l = "{";
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < w; ++i)
      if (m >> i & 1) {
        if (members.size()) l += ",";
        l += frame.elements[i];
        members.push_back(i);
      }
    h.labels.push_back(l + "}");
    h.worlds.push_back(members);
  }
  h.bottom = pos.at(0);
  h.top = pos.at((1u << w) - 1);
  h.le.assign(h.n * h.n, 0);
  h.meet.assign(h.n * h.n, 0);
  h.join.assign(h.n * h.n, 0);
  h.imp.assign(h.n * h.n, 0);
  for (std::size_t a = 0; a < h.n; ++a)
    for (std::size_t b = 0; b < h.n; ++b) {
      std::uint32_t ma = masks[a], mb = masks[b];
      h.le[a * h.n + b] = (ma & ~mb) == 0;
      h.meet[a * h.n + b] = pos.at(ma & mb);
      h.join[a * h.n + b] = pos.at(ma | mb);
      std::uint32_t c = 0;
      for (std::size_t i = 0; i < w; ++i) {
        bool holds = true;
        for (std::size_t j = 0; j < w && holds; ++j)
          if (frame.le(i, j) && (ma >> j & 1) && !(mb >> j & 1)) holds = false;
        if (holds) c |= 1u << i;
      }
      h.imp[a * h.n + b] = pos.at(c);
    }
  return h;
}

// -- valued doctrines -----------------------------------------------------------

ValuedDoctrine::ValuedDoctrine(std::string kind, FinitePoset frame, std::vector<FinObj> universe,
                               nlohmann::json generator, std::uint64_t cap)
    : Doctrine(cap),
      kind_(std::move(kind)),
      frame_(std::move(frame)),
      h_(FiniteHeyting::up_sets(frame_)),
      universe_(std::move(universe)),
      generator_(std::move(generator)) {
  if (auto defect = frame_.defect()) throw DoctrineError("frame is not a poset: " + defect->detail);
}

namespace {

std::optional<Elem> checked_power(std::size_t base, std::size_t exp) {
  Elem n = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (n > kFibreLimit) return std::nullopt;
    n *= base;
  }
  if (n > kFibreLimit) return std::nullopt;
  return n;
}

}  // namespace

bool ValuedDoctrine::has_fibre(const FinObj& a) const { return checked_power(h_.n, a.size()).has_value(); }

Elem ValuedDoctrine::fibre_size(const FinObj& a) const {
  auto n = checked_power(h_.n, a.size());
  if (!n) throw SizeCapError("fibre over " + a.name() + " exceeds " + std::to_string(kFibreLimit) + " elements");
  return *n;
}

std::vector<std::size_t> ValuedDoctrine::values(std::size_t points, Elem x) const {
  std::vector<std::size_t> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = x % h_.n;
    x /= h_.n;
  }
  return v;
}

Elem ValuedDoctrine::encode(const std::vector<std::size_t>& v) const {
  Elem x = 0;
  for (std::size_t i = v.size(); i > 0; --i) x = x * h_.n + v[i - 1];
  return x;
}

bool ValuedDoctrine::leq(const FinObj& a, Elem x, Elem y) const {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!h_.leq(x % h_.n, y % h_.n)) return false;
    x /= h_.n;
    y /= h_.n;
  }
  return true;
}

Elem ValuedDoctrine::reindex(const FinMor& f, Elem y) const {
  std::vector<std::size_t> v = values(f.cod().size(), y);
  Elem x = 0;
  for (std::size_t i = f.dom().size(); i > 0; --i) x = x * h_.n + v[f(i - 1)];
  return x;
}

std::string ValuedDoctrine::label(const FinObj& a, Elem x) const {
  std::vector<std::size_t> v = values(a.size(), x);
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t w : h_.worlds[v[i]]) {
      if (!first) out += ",";
      first = false;
      out += frame_.size() == 1 ? a.label(i) : "(" + frame_.elements[w] + "," + a.label(i) + ")";
    }
  }
  return out + "}";
}

Elem ValuedDoctrine::fold(const Projection& p, Elem x, bool join) const {
  const std::size_t nl = p.product.left.size(), nr = p.product.right.size();
  std::vector<std::size_t> v = values(nl * nr, x);
  const std::size_t nt = p.target().size();
  std::vector<std::size_t> out(nt, join ? h_.bottom : h_.top);
  const auto& table = join ? h_.join : h_.meet;
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t r = 0; r < nr; ++r) {
      std::size_t t = p.keep == Side::Left ? l : r;
      out[t] = table[out[t] * h_.n + v[l * nr + r]];
    }
  return encode(out);
}

std::optional<Elem> ValuedDoctrine::exists(const Projection& p, Elem x) const { return fold(p, x, true); }
std::optional<Elem> ValuedDoctrine::forall(const Projection& p, Elem x) const { return fold(p, x, false); }

Elem ValuedDoctrine::top(const FinObj& a) const { return encode(std::vector<std::size_t>(a.size(), h_.top)); }
Elem ValuedDoctrine::bottom(const FinObj& a) const { return encode(std::vector<std::size_t>(a.size(), h_.bottom)); }

template <class Op>
Elem ValuedDoctrine::pointwise(const FinObj& a, Elem x, Elem y, Op op) const {
  Elem out = 0, scale = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += scale * op(x % h_.n, y % h_.n);
    x /= h_.n;
    y /= h_.n;
    scale *= h_.n;
  }
  return out;
}

Elem ValuedDoctrine::meet(const FinObj& a, Elem x, Elem y) const {
  return pointwise(a, x, y, [&](std::size_t p, std::size_t q) { return h_.meet[p * h_.n + q]; });
}
Elem ValuedDoctrine::join(const FinObj& a, Elem x, Elem y) const {
  return pointwise(a, x, y, [&](std::size_t p, std::size_t q) { return h_.join[p * h_.n + q]; });
}
Elem ValuedDoctrine::implies(const FinObj& a, Elem x, Elem y) const {
  return pointwise(a, x, y, [&](std::size_t p, std::size_t q) { return h_.imp[p * h_.n + q]; });
}

namespace {

std::vector<FinObj> sized_universe(std::vector<std::size_t> sizes) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<FinObj> out;
  for (std::size_t n : sizes) out.push_back(cat::sized_object(n));
  return out;
}

nlohmann::json poset_json(const FinitePoset& p) {
  nlohmann::json leq = nlohmann::json::array();
  for (const auto& row : p.leq) {
    nlohmann::json r = nlohmann::json::array();
    for (bool b : row) r.push_back(b ? 1 : 0);
    leq.push_back(r);
  }
  return {{"elements", p.elements}, {"leq", leq}};
}

}  // namespace

std::shared_ptr<ValuedDoctrine> powerset_example(const std::vector<std::size_t>& sizes, std::uint64_t cap) {
  FinitePoset point;
  point.elements = {"w"};
  point.leq = {{true}};
  std::vector<FinObj> u = sized_universe(sizes);
  nlohmann::json gen = {{"kind", "powerset"}, {"sizes", nlohmann::json::array()}};
  for (const auto& o : u) gen["sizes"].push_back(o.size());
  return std::make_shared<ValuedDoctrine>("powerset", point, u, gen, cap);
}

std::shared_ptr<ValuedDoctrine> kripke_example(const FinitePoset& frame, const std::vector<std::size_t>& sizes,
                                               std::uint64_t cap) {
  std::vector<FinObj> u = sized_universe(sizes);
  nlohmann::json gen = {{"kind", "kripke"}, {"sizes", nlohmann::json::array()}, {"frame", poset_json(frame)}};
  for (const auto& o : u) gen["sizes"].push_back(o.size());
  return std::make_shared<ValuedDoctrine>("kripke", frame, u, gen, cap);
}

// -- explicit doctrines -----------------------------------------------------------

ExplicitDoctrine::ExplicitDoctrine(std::vector<FinObj> universe, std::vector<FinObj> derived,
                                   std::map<std::string, Fibre> fibres, std::map<std::string, std::vector<Elem>> reindex,
                                   std::uint64_t cap)
    : Doctrine(cap),
      universe_(std::move(universe)),
      derived_(std::move(derived)),
      fibres_(std::move(fibres)),
      reindex_(std::move(reindex)) {
  heyting_ = !fibres_.empty();
  for (const auto& [name, f] : fibres_)
    if (!f.heyting) heyting_ = false;
}

std::vector<FinObj> ExplicitDoctrine::working_objects() const {
  std::vector<FinObj> out = universe_;
  out.insert(out.end(), derived_.begin(), derived_.end());
  return out;
}

const ExplicitDoctrine::Fibre& ExplicitDoctrine::fibre(const FinObj& a) const {
  auto it = fibres_.find(a.name());
  if (it == fibres_.end()) throw DoctrineError("no fibre for object " + a.name());
  if (it->second.object != a) throw DoctrineError("object " + a.name() + " does not match the declared elements");
  return it->second;
}

const HeytingTables& ExplicitDoctrine::tables(const FinObj& a) const {
  const Fibre& f = fibre(a);
  if (!f.heyting) throw DoctrineError("no Heyting tables for " + a.name());
  return *f.heyting;
}

bool ExplicitDoctrine::has_fibre(const FinObj& a) const {
  auto it = fibres_.find(a.name());
  return it != fibres_.end() && it->second.object == a;
}

Elem ExplicitDoctrine::fibre_size(const FinObj& a) const { return fibre(a).poset.size(); }

bool ExplicitDoctrine::leq(const FinObj& a, Elem x, Elem y) const {
  const Fibre& f = fibre(a);
  if (x >= f.poset.size() || y >= f.poset.size()) throw DoctrineError("element outside the fibre over " + a.name());
  return f.poset.le(x, y);
}

Elem ExplicitDoctrine::reindex(const FinMor& f, Elem y) const {
  std::string key = f.key();
  auto it = reindex_.find(key);
  if (it == reindex_.end()) throw DoctrineError("no reindexing for " + key);
  if (y >= it->second.size()) throw DoctrineError("reindexing " + key + " is not total");
  return it->second[y];
}

std::string ExplicitDoctrine::label(const FinObj& a, Elem x) const {
  const Fibre& f = fibre(a);
  return x < f.poset.size() ? f.poset.elements[x] : std::to_string(x);
}

Elem ExplicitDoctrine::top(const FinObj& a) const {
  if (!fibre(a).heyting) return Doctrine::top(a);
  return tables(a).top;
}

Elem ExplicitDoctrine::bottom(const FinObj& a) const {
  if (!fibre(a).heyting) return Doctrine::bottom(a);
  return tables(a).bottom;
}

Elem ExplicitDoctrine::meet(const FinObj& a, Elem x, Elem y) const {
  const auto& t = tables(a);
  return t.meet.at(x * fibre_size(a) + y);
}
Elem ExplicitDoctrine::join(const FinObj& a, Elem x, Elem y) const {
  const auto& t = tables(a);
  return t.join.at(x * fibre_size(a) + y);
}
Elem ExplicitDoctrine::implies(const FinObj& a, Elem x, Elem y) const {
  const auto& t = tables(a);
  return t.implies.at(x * fibre_size(a) + y);
}

}  // namespace dialectica::doc
