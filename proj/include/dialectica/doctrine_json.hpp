#pragma once

// Doctrine documents:
//
//   {"universe": [{"name": .., "elements": [..]}, ..],
//    "derived":  [objects with fibres that are not in the universe],
//    "fibres":   {name: {"elements": [..], "leq": [[0|1, ..], ..]}},
//    "reindex":  {"dom->cod#index": [image of each cod element in dom], ..},
//    "heyting":  {name: {"top", "bottom", "meet", "join", "implies"}},
//    "generator": {"kind": "powerset"|"kripke", "sizes": [..], "frame": poset}}
//
// A document with a generator is rebuilt from it; the explicit tables are
// then informational. Without one the tables define the doctrine.

#include <memory>

#include "dialectica/doctrine.hpp"
#include "json.hpp"

namespace dialectica::doc {

std::shared_ptr<const Doctrine> load_doctrine(const nlohmann::json& doc, std::uint64_t cap = cat::kDefaultCap);

// Tables cover the working objects and every morphism between them whose
// count is within the cap.
nlohmann::json doctrine_to_json(const Doctrine& d, std::uint64_t cap = cat::kDefaultCap);

nlohmann::json object_json(const FinObj& a);
FinObj object_from_json(const nlohmann::json& j);
FinitePoset poset_from_json(const nlohmann::json& j);

}  // namespace dialectica::doc
