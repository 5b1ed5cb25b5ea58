#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "coarsex/ctrl.hpp"
#include "coarsex/group.hpp"
#include "coarsex/report.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

using Json = nlohmann::json;

inline constexpr const char* kFormat = "coarsex/1";

// Parse failures raise Input errors naming the offending location, e.g. "entourages.U[2]".
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& doc);

GroupPtr parse_group(const Json& doc, const std::string& where = "group");
Json group_to_json(const FiniteGroup& g);

struct SpaceDocument {
  Space space;
  std::map<std::string, Relation> entourages;  // by name, as written
  std::map<std::string, SpaceMap> maps;
};
SpaceDocument parse_space_document(const Json& doc);
Space parse_space(const Json& doc);
Json space_to_json(const Space& s);

// {"format", "source": group, "target": group, "map": [element, ...]}
GroupHom parse_hom(const Json& doc);

// {"format", "space": space, "support": [...], "dims": {point: rank}, "cocycle": {element: {point: rows}}};
// missing cocycle entries are identities.
CtrlObject parse_ctrl_object(const Json& doc);
Json ctrl_object_to_json(const CtrlObject& c);
// {"format", "source": object, "target": object, "control": [[y, x], ...], "blocks": [{"y", "x", "matrix"}]}
CtrlMorphism parse_ctrl_morphism(const Json& doc);
Json ctrl_morphism_to_json(const CtrlMorphism& f);

Json matrix_to_json(const DenseMatrix& m);
DenseMatrix parse_matrix(const Json& doc, size_t rows, size_t cols, const std::string& where);

// Checks sorted by name; timings are kept apart from the deterministic part.
Json report_to_json(const Report& r, bool with_timing = true);

}  // namespace coarsex
