#include "dialectica/doctrine_json.hpp"

#include <set>

namespace dialectica::doc {

using nlohmann::json;

json object_json(const FinObj& a) { return {{"name", a.name()}, {"elements", a.labels()}}; }

FinObj object_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("elements"))
    throw DoctrineError("object needs \"name\" and \"elements\"");
  return FinObj(j.at("name").get<std::string>(), j.at("elements").get<std::vector<std::string>>());
}

FinitePoset poset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("elements") || !j.contains("leq"))
    throw DoctrineError("poset needs \"elements\" and \"leq\"");
  FinitePoset p;
  p.elements = j.at("elements").get<std::vector<std::string>>();
  const json& leq = j.at("leq");
  if (!leq.is_array() || leq.size() != p.elements.size())
    throw DoctrineError("leq must be a square matrix over the elements");
  for (const auto& row : leq) {
    if (!row.is_array() || row.size() != p.elements.size())
      throw DoctrineError("leq must be a square matrix over the elements");
    std::vector<bool> r;
    for (const auto& v : row) {
      if (!v.is_number_integer() && !v.is_boolean()) throw DoctrineError("leq entries must be 0/1");
      r.push_back(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
    }
    p.leq.push_back(std::move(r));
  }
  return p;
}

namespace {

json poset_json(const Doctrine& d, const FinObj& a, Elem n) {
  json elements = json::array();
  for (Elem x = 0; x < n; ++x) elements.push_back(d.label(a, x));
  json leq = json::array();
  for (Elem x = 0; x < n; ++x) {
    json row = json::array();
    for (Elem y = 0; y < n; ++y) row.push_back(d.leq(a, x, y) ? 1 : 0);
    leq.push_back(row);
  }
  return {{"elements", elements}, {"leq", leq}};
}

std::vector<Elem> table_from_json(const json& j, const char* what, Elem size, Elem range) {
  if (!j.is_array() || j.size() != size) throw DoctrineError(std::string(what) + " has the wrong length");
  std::vector<Elem> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) throw DoctrineError(std::string(what) + ": not an index");
    auto x = v.get<long long>();
    if (x < 0 || static_cast<Elem>(x) >= range) throw DoctrineError(std::string(what) + ": index out of range");
    out.push_back(static_cast<Elem>(x));
  }
  return out;
}

std::vector<Elem> matrix_from_json(const json& j, const char* what, Elem n) {
  if (!j.is_array() || j.size() != n) throw DoctrineError(std::string(what) + " must be an n x n table");
  std::vector<Elem> out;
  for (const auto& row : j) {
    auto r = table_from_json(row, what, n, n);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<std::size_t> sizes_from(const json& gen) {
  if (!gen.contains("sizes") || !gen.at("sizes").is_array()) throw DoctrineError("generator needs \"sizes\"");
  return gen.at("sizes").get<std::vector<std::size_t>>();
}

}  // namespace

std::shared_ptr<const Doctrine> load_doctrine(const json& doc, std::uint64_t cap) {
  if (!doc.is_object()) throw DoctrineError("doctrine document must be a JSON object");
  try {
    if (doc.contains("generator") && !doc.at("generator").is_null()) {
      const json& gen = doc.at("generator");
      std::string kind = gen.value("kind", "");
      if (kind == "powerset") return powerset_example(sizes_from(gen), cap);
      if (kind == "kripke") {
        if (!gen.contains("frame")) throw DoctrineError("kripke generator needs \"frame\"");
        return kripke_example(poset_from_json(gen.at("frame")), sizes_from(gen), cap);
      }
      throw DoctrineError("unknown generator kind \"" + kind + "\"");
    }

    std::vector<FinObj> universe, derived;
    std::map<std::string, FinObj> by_name;
    auto collect = [&](const char* field, std::vector<FinObj>& out) {
      if (!doc.contains(field)) return;
      for (const auto& o : doc.at(field)) {
        FinObj obj = object_from_json(o);
        if (!by_name.emplace(obj.name(), obj).second) throw DoctrineError("object " + obj.name() + " declared twice");
        out.push_back(obj);
      }
    };
    if (!doc.contains("universe")) throw DoctrineError("doctrine needs \"universe\"");
    collect("universe", universe);
    collect("derived", derived);

    std::map<std::string, ExplicitDoctrine::Fibre> fibres;
    if (!doc.contains("fibres") || !doc.at("fibres").is_object()) throw DoctrineError("doctrine needs \"fibres\"");
    for (const auto& [name, fj] : doc.at("fibres").items()) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw DoctrineError("fibre for undeclared object " + name);
      fibres.emplace(name, ExplicitDoctrine::Fibre{it->second, poset_from_json(fj), std::nullopt});
    }
    for (const auto& [name, obj] : by_name)
      if (!fibres.count(name)) throw DoctrineError("object " + name + " has no fibre");

    if (doc.contains("heyting")) {
      for (const auto& [name, hj] : doc.at("heyting").items()) {
        auto it = fibres.find(name);
        if (it == fibres.end()) throw DoctrineError("heyting tables for unknown fibre " + name);
        Elem n = it->second.poset.size();
        HeytingTables t;
        t.top = hj.at("top").get<Elem>();
        t.bottom = hj.at("bottom").get<Elem>();
        if (t.top >= n || t.bottom >= n) throw DoctrineError("heyting " + name + ": top/bottom out of range");
        t.meet = matrix_from_json(hj.at("meet"), "meet", n);
        t.join = matrix_from_json(hj.at("join"), "join", n);
        t.implies = matrix_from_json(hj.at("implies"), "implies", n);
        it->second.heyting = std::move(t);
      }
    }

    std::map<std::string, std::vector<Elem>> reindex;
    if (doc.contains("reindex")) {
      for (const auto& [key, tj] : doc.at("reindex").items()) {
        auto arrow = key.find("->");
        auto hash = key.rfind('#');
        if (arrow == std::string::npos || hash == std::string::npos || hash < arrow)
          throw DoctrineError("malformed reindex key " + key);
        std::string dom = key.substr(0, arrow), cod = key.substr(arrow + 2, hash - arrow - 2);
        if (!fibres.count(dom) || !fibres.count(cod)) throw DoctrineError("reindex key " + key + " names unknown objects");
        std::uint64_t index = std::stoull(key.substr(hash + 1));
        const FinObj& d = by_name.at(dom);
        const FinObj& c = by_name.at(cod);
        if (index >= cat::count_morphisms(d, c)) throw DoctrineError("reindex key " + key + " has no morphism");
        reindex.emplace(key, table_from_json(tj, key.c_str(), fibres.at(cod).poset.size(), fibres.at(dom).poset.size()));
      }
    }
    return std::make_shared<ExplicitDoctrine>(universe, derived, std::move(fibres), std::move(reindex), cap);
  } catch (const json::exception& e) {
    throw DoctrineError(std::string("malformed doctrine: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw DoctrineError("malformed doctrine: bad morphism index");
  }
}

json doctrine_to_json(const Doctrine& d, std::uint64_t cap) {
  json out;
  std::vector<FinObj> objects = d.working_objects();
  std::set<std::string> in_universe;
  out["universe"] = json::array();
  for (const auto& a : d.universe()) {
    out["universe"].push_back(object_json(a));
    in_universe.insert(a.name());
  }
  out["derived"] = json::array();
  for (const auto& a : objects)
    if (!in_universe.count(a.name())) out["derived"].push_back(object_json(a));

  out["fibres"] = json::object();
  std::map<std::string, Elem> sizes;
  for (const auto& a : objects) {
    Elem n = enumerable_fibre(d, a);
    if (n * n > kTableLimit)
      throw SizeCapError("explicit tables over " + a.name() + " would have " + std::to_string(n * n) +
                         " entries; export the generator instead (--pipe)");
    sizes[a.name()] = n;
    out["fibres"][a.name()] = poset_json(d, a, n);
  }

  out["reindex"] = json::object();
  for (const auto& a : objects)
    for (const auto& b : objects) {
      if (cat::count_morphisms(a, b) > cap) continue;
      for (const FinMor& f : cat::enumerate_morphisms(a, b, cap)) {
        json t = json::array();
        for (Elem y = 0; y < sizes[b.name()]; ++y) t.push_back(d.reindex(f, y));
        out["reindex"][f.key()] = t;
      }
    }

  if (d.has_heyting()) {
    out["heyting"] = json::object();
    for (const auto& a : objects) {
      Elem n = sizes[a.name()];
      json meet = json::array(), join = json::array(), imp = json::array();
      for (Elem x = 0; x < n; ++x) {
        json m = json::array(), j = json::array(), i = json::array();
        for (Elem y = 0; y < n; ++y) {
          m.push_back(d.meet(a, x, y));
          j.push_back(d.join(a, x, y));
          i.push_back(d.implies(a, x, y));
        }
        meet.push_back(m);
        join.push_back(j);
        imp.push_back(i);
      }
      out["heyting"][a.name()] = {{"top", d.top(a)}, {"bottom", d.bottom(a)}, {"meet", meet}, {"join", join}, {"implies", imp}};
    }
  }
  if (!d.generator().is_null()) out["generator"] = d.generator();
  return out;
}

}  // namespace dialectica::doc
