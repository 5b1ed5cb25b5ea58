#include "coarsex/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "coarsex/error.hpp"

namespace coarsex {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { fail(ErrorKind::Input, where + ": " + what); }

const Json& field(const Json& doc, const char* key, const std::string& where) {
  if (!doc.is_object()) bad(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

void check_format(const Json& doc, const std::string& where) {
  if (!doc.is_object()) bad(where, "expected an object");
  auto it = doc.find("format");
  if (it != doc.end() && (!it->is_string() || it->get<std::string>() != kFormat))
    bad(where + ".format", std::string("expected \"") + kFormat + "\"");
}

// An index, or a name looked up in `names`.
int ref(const Json& v, const std::vector<std::string>& names, const std::string& where) {
  if (v.is_number_integer()) {
    long i = v.get<long>();
    if (i < 0 || i >= static_cast<long>(names.size())) bad(where, "index out of range");
    return static_cast<int>(i);
  }
  if (v.is_string()) {
    auto it = std::find(names.begin(), names.end(), v.get<std::string>());
    if (it == names.end()) bad(where, "unknown name '" + v.get<std::string>() + "'");
    return static_cast<int>(it - names.begin());
  }
  bad(where, "expected an index or a name");
}

Int to_int(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Int(v.get<long>());
  if (v.is_string()) {
    Int out;
    if (out.set_str(v.get<std::string>(), 10) != 0) bad(where, "not an integer");
    return out;
  }
  bad(where, "expected an integer");
}

Json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

Relation parse_pairs(const Json& doc, const std::vector<std::string>& points, const std::string& where) {
  if (!doc.is_array()) bad(where, "expected a list of pairs");
  Relation r(static_cast<int>(points.size()));
  for (size_t i = 0; i < doc.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!doc[i].is_array() || doc[i].size() != 2) bad(w, "expected a pair");
    r.insert(ref(doc[i][0], points, w), ref(doc[i][1], points, w));
  }
  return r;
}

Json pairs_to_json(const Relation& r, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (auto [x, y] : r.pairs()) out.push_back({names[x], names[y]});
  return out;
}

Json names_of(const std::vector<int>& xs, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (int x : xs) out.push_back(names[x]);
  return out;
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Input, path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Input, path + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

void save_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Input, path + ": cannot write");
  out << doc.dump(2) << "\n";
}

// Closure of a set of permutations; elements are named by their image lists.
static GroupPtr group_from_generators(const Json& gens, const std::string& where) {
  using Perm = std::vector<int>;
  if (!gens.is_array()) bad(where, "expected a list of permutations");
  std::vector<Perm> g;
  size_t degree = 0;
  for (size_t i = 0; i < gens.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!gens[i].is_array() || gens[i].empty()) bad(w, "expected a permutation");
    Perm p;
    for (const auto& v : gens[i]) {
      if (!v.is_number_integer()) bad(w, "expected integer images");
      p.push_back(v.get<int>());
    }
    Perm sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); ++k)
      if (sorted[k] != static_cast<int>(k)) bad(w, "not a permutation of 0..n-1");
    if (i > 0 && p.size() != degree) bad(w, "permutations of different degrees");
    degree = p.size();
    g.push_back(p);
  }
  if (g.empty()) return make_group(FiniteGroup::trivial());
  auto mul = [](const Perm& a, const Perm& b) {  // a after b
    Perm c(b.size());
    for (size_t k = 0; k < b.size(); ++k) c[k] = a[b[k]];
    return c;
  };
  Perm id(degree);
  for (size_t k = 0; k < degree; ++k) id[k] = static_cast<int>(k);
  std::vector<Perm> elems{id};
  std::map<Perm, int> index{{id, 0}};
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& p : g) {
      Perm q = mul(p, elems[i]);
      if (index.emplace(q, static_cast<int>(elems.size())).second) {
        elems.push_back(q);
        if (elems.size() > 5040) bad(where, "generated group is too large");
      }
    }
  std::vector<std::string> names;
  for (const auto& e : elems) {
    std::string n = "[";
    for (size_t k = 0; k < e.size(); ++k) n += (k ? "," : "") + std::to_string(e[k]);
    names.push_back(n + "]");
  }
  names[0] = "e";
  std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
  for (size_t a = 0; a < elems.size(); ++a)
    for (size_t b = 0; b < elems.size(); ++b) table[a][b] = index.at(mul(elems[a], elems[b]));
  return make_group(FiniteGroup(names, table, ""));
}

GroupPtr parse_group(const Json& doc, const std::string& where) {
  if (doc.is_null()) return make_group(FiniteGroup::trivial());
  if (doc.is_string()) {
    try {
      return group_by_name(doc.get<std::string>());
    } catch (const Error& e) {
      bad(where, e.what());
    }
  }
  if (doc.is_object() && doc.contains("generators")) return group_from_generators(doc["generators"], where + ".generators");
  const Json& el = field(doc, "elements", where);
  const Json& tab = field(doc, "table", where);
  if (!el.is_array() || el.empty()) bad(where + ".elements", "expected a nonempty list of names");
  std::vector<std::string> names;
  for (size_t i = 0; i < el.size(); ++i) {
    if (!el[i].is_string()) bad(where + ".elements[" + std::to_string(i) + "]", "expected a name");
    names.push_back(el[i].get<std::string>());
  }
  if (!tab.is_array() || tab.size() != names.size()) bad(where + ".table", "expected one row per element");
  std::vector<std::vector<int>> table(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    const std::string w = where + ".table[" + std::to_string(i) + "]";
    if (!tab[i].is_array() || tab[i].size() != names.size()) bad(w, "row has the wrong length");
    for (size_t j = 0; j < names.size(); ++j) table[i].push_back(ref(tab[i][j], names, w + "[" + std::to_string(j) + "]"));
  }
  std::string label = doc.contains("label") && doc["label"].is_string() ? doc["label"].get<std::string>() : "";
  try {
    return make_group(FiniteGroup(names, table, label));
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json group_to_json(const FiniteGroup& g) {
  Json out;
  out["elements"] = g.names();
  out["table"] = g.table();
  if (!g.label().empty()) out["label"] = g.label();
  return out;
}

SpaceDocument parse_space_document(const Json& doc) {
  check_format(doc, "space");
  SpaceDocument out;
  const Json& pts = field(doc, "points", "space");
  if (!pts.is_array()) bad("points", "expected a list");
  std::vector<std::string> points;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].is_string()) points.push_back(pts[i].get<std::string>());
    else if (pts[i].is_number_integer()) points.push_back(std::to_string(pts[i].get<long>()));
    else bad("points[" + std::to_string(i) + "]", "expected a name");
  }
  {
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("points", "duplicate point name");
  }
  GroupPtr group = parse_group(doc.contains("group") ? doc["group"] : Json(), "group");
  const FiniteGroup& G = *group;
  const int n = static_cast<int>(points.size());
  ActionTable action = trivial_action(G, n);
  if (doc.contains("action")) {
    const Json& act = doc["action"];
    if (!act.is_object()) bad("action", "expected an object keyed by element");
    for (auto it = act.begin(); it != act.end(); ++it) {
      const std::string w = "action." + it.key();
      int g = ref(Json(it.key()), G.names(), w);
      if (!it->is_array() || static_cast<int>(it->size()) != n) bad(w, "expected a permutation of the points");
      for (int x = 0; x < n; ++x) action[g][x] = ref((*it)[x], points, w + "[" + std::to_string(x) + "]");
    }
  }
  std::vector<Relation> gens;
  if (doc.contains("entourages")) {
    const Json& ent = doc["entourages"];
    if (!ent.is_object()) bad("entourages", "expected an object keyed by name");
    for (auto it = ent.begin(); it != ent.end(); ++it) {
      Relation r = parse_pairs(*it, points, "entourages." + it.key());
      out.entourages[it.key()] = r;
      gens.push_back(r);
    }
  }
  std::vector<PointSet> born;
  if (doc.contains("bornology")) {
    const Json& b = doc["bornology"];
    if (!b.is_array()) bad("bornology", "expected a list of point lists");
    for (size_t i = 0; i < b.size(); ++i) {
      const std::string w = "bornology[" + std::to_string(i) + "]";
      if (!b[i].is_array()) bad(w, "expected a point list");
      PointSet s;
      for (size_t j = 0; j < b[i].size(); ++j) s.push_back(ref(b[i][j], points, w + "[" + std::to_string(j) + "]"));
      born.push_back(normalized(s));
    }
  } else {
    for (int x = 0; x < n; ++x) born.push_back({x});
  }
  out.space = make_space(points, group, action, gens, born);
  Report r = validate_space(out.space);
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail) bad("space", c.name + " fails: " + c.witness);
  if (doc.contains("maps")) {
    const Json& maps = doc["maps"];
    if (!maps.is_object()) bad("maps", "expected an object keyed by name");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
      const std::string w = "maps." + it.key();
      Space target = out.space;
      if (it->contains("target") && !((*it)["target"].is_string() && (*it)["target"] == "self"))
        target = parse_space((*it)["target"]);
      const Json& as = field(*it, "assign", w);
      if (!as.is_array() || static_cast<int>(as.size()) != n) bad(w + ".assign", "expected one image per point");
      std::vector<int> assign;
      for (int x = 0; x < n; ++x) assign.push_back(ref(as[x], target.points, w + ".assign[" + std::to_string(x) + "]"));
      out.maps.emplace(it.key(), make_map(out.space, target, assign));
    }
  }
  return out;
}

Space parse_space(const Json& doc) { return parse_space_document(doc).space; }

Json space_to_json(const Space& s) {
  Json out;
  out["format"] = kFormat;
  out["points"] = s.points;
  out["group"] = group_to_json(*s.group);
  Json act = Json::object();
  for (int g = 0; g < s.group->order(); ++g) act[s.group->name(g)] = names_of(s.action[g], s.points);
  out["action"] = act;
  Json ent = Json::object();
  for (size_t i = 0; i < s.coarseGenerators.size(); ++i) ent["U" + std::to_string(i)] = pairs_to_json(s.coarseGenerators[i], s.points);
  out["entourages"] = ent;
  Json born = Json::array();
  for (const auto& b : s.bornology) born.push_back(names_of(b, s.points));
  out["bornology"] = born;
  return out;
}

GroupHom parse_hom(const Json& doc) {
  check_format(doc, "hom");
  GroupPtr src = parse_group(field(doc, "source", "hom"), "source");
  GroupPtr tgt = parse_group(field(doc, "target", "hom"), "target");
  const Json& m = field(doc, "map", "hom");
  if (!m.is_array() || static_cast<int>(m.size()) != src->order()) bad("map", "expected one image per source element");
  std::vector<int> map;
  for (size_t i = 0; i < m.size(); ++i) map.push_back(ref(m[i], tgt->names(), "map[" + std::to_string(i) + "]"));
  try {
    return GroupHom(src, tgt, map);
  } catch (const Error& e) {
    bad("map", e.what());
  }
}

Json matrix_to_json(const DenseMatrix& m) {
  Json out = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m.at(i, j)));
    out.push_back(row);
  }
  return out;
}

DenseMatrix parse_matrix(const Json& doc, size_t rows, size_t cols, const std::string& where) {
  if (!doc.is_array() || doc.size() != rows) bad(where, "expected " + std::to_string(rows) + " rows");
  DenseMatrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!doc[i].is_array() || doc[i].size() != cols) bad(w, "expected " + std::to_string(cols) + " entries");
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = to_int(doc[i][j], w + "[" + std::to_string(j) + "]");
  }
  return m;
}

CtrlObject parse_ctrl_object(const Json& doc) {
  check_format(doc, "object");
  Space s = parse_space(field(doc, "space", "object"));
  const FiniteGroup& G = *s.group;
  const int n = s.size();
  std::vector<int> dims(n, 0);
  const Json& d = field(doc, "dims", "object");
  if (d.is_object()) {
    for (auto it = d.begin(); it != d.end(); ++it) {
      int x = ref(Json(it.key()), s.points, "dims." + it.key());
      if (!it->is_number_integer() || it->get<long>() < 0) bad("dims." + it.key(), "expected a rank");
      dims[x] = static_cast<int>(it->get<long>());
    }
  } else if (d.is_array() && static_cast<int>(d.size()) == n) {
    for (int x = 0; x < n; ++x) {
      if (!d[x].is_number_integer() || d[x].get<long>() < 0) bad("dims[" + std::to_string(x) + "]", "expected a rank");
      dims[x] = static_cast<int>(d[x].get<long>());
    }
  } else {
    bad("dims", "expected a map from points to ranks or one rank per point");
  }
  PointSet support;
  if (doc.contains("support")) {
    const Json& sp = doc["support"];
    if (!sp.is_array()) bad("support", "expected a point list");
    for (size_t i = 0; i < sp.size(); ++i) support.push_back(ref(sp[i], s.points, "support[" + std::to_string(i) + "]"));
  } else {
    for (int x = 0; x < n; ++x)
      if (dims[x] > 0) support.push_back(x);
  }
  std::vector<std::vector<DenseMatrix>> rho(G.order(), std::vector<DenseMatrix>(n));
  for (int g = 0; g < G.order(); ++g)
    for (int x = 0; x < n; ++x) {
      int gx = s.act(G.inv(g), x);
      rho[g][x] = dims[gx] == dims[x] ? DenseMatrix::identity(dims[x]) : DenseMatrix(dims[gx], dims[x]);
    }
  if (doc.contains("cocycle")) {
    const Json& co = doc["cocycle"];
    if (!co.is_object()) bad("cocycle", "expected an object keyed by element");
    for (auto it = co.begin(); it != co.end(); ++it) {
      int g = ref(Json(it.key()), G.names(), "cocycle." + it.key());
      if (!it->is_object()) bad("cocycle." + it.key(), "expected an object keyed by point");
      for (auto jt = it->begin(); jt != it->end(); ++jt) {
        const std::string w = "cocycle." + it.key() + "." + jt.key();
        int x = ref(Json(jt.key()), s.points, w);
        rho[g][x] = parse_matrix(*jt, dims[s.act(G.inv(g), x)], dims[x], w);
      }
    }
  }
  try {
    return make_ctrl_object(s, support, dims, rho);
  } catch (const Error& e) {
    bad("object", e.what());
  }
}

Json ctrl_object_to_json(const CtrlObject& c) {
  Json out;
  out["format"] = kFormat;
  out["space"] = space_to_json(c.space);
  out["support"] = names_of(c.support, c.space.points);
  Json dims = Json::object();
  for (int x = 0; x < c.space.size(); ++x) dims[c.space.points[x]] = c.dims[x];
  out["dims"] = dims;
  Json co = Json::object();
  for (int g = 0; g < c.space.group->order(); ++g) {
    Json per = Json::object();
    for (int x : c.support) per[c.space.points[x]] = matrix_to_json(c.rho(g, x));
    co[c.space.group->name(g)] = per;
  }
  out["cocycle"] = co;
  return out;
}

CtrlMorphism parse_ctrl_morphism(const Json& doc) {
  check_format(doc, "morphism");
  CtrlObject src = parse_ctrl_object(field(doc, "source", "morphism"));
  CtrlObject tgt = parse_ctrl_object(field(doc, "target", "morphism"));
  CtrlMorphism f = zero_morphism(src, tgt);
  f.control = parse_pairs(field(doc, "control", "morphism"), src.space.points, "control");
  const Json& bl = field(doc, "blocks", "morphism");
  if (!bl.is_array()) bad("blocks", "expected a list");
  for (size_t i = 0; i < bl.size(); ++i) {
    const std::string w = "blocks[" + std::to_string(i) + "]";
    int y = ref(field(bl[i], "y", w), src.space.points, w + ".y");
    int x = ref(field(bl[i], "x", w), src.space.points, w + ".x");
    f.block(y, x) = parse_matrix(field(bl[i], "matrix", w), tgt.dims[y], src.dims[x], w + ".matrix");
  }
  try {
    return make_ctrl_morphism(f.source, f.target, f.control, f.blocks);
  } catch (const Error& e) {
    bad("morphism", e.what());
  }
}

Json ctrl_morphism_to_json(const CtrlMorphism& f) {
  Json out;
  out["format"] = kFormat;
  out["source"] = ctrl_object_to_json(f.source);
  out["target"] = ctrl_object_to_json(f.target);
  out["control"] = pairs_to_json(f.control, f.source.space.points);
  Json blocks = Json::array();
  const int n = f.source.space.size();
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (!f.block(y, x).is_zero()) 
        blocks.push_back({{"y", f.source.space.points[y]},
                          {"x", f.source.space.points[x]},
                          {"matrix", matrix_to_json(f.block(y, x))}});
  out["blocks"] = blocks;
  return out;
}

Json report_to_json(const Report& r, bool with_timing) {
  std::vector<const Check*> sorted;
  for (const auto& c : r.checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Check* a, const Check* b) { return a->name < b->name; });
  Json checks = Json::array();
  Json timing = Json::object();
  for (const Check* c : sorted) {
    Json j = {{"name", c->name}, {"verdict", to_string(c->verdict)}};
    if (!c->witness.empty()) j["witness"] = c->witness;
    checks.push_back(j);
    if (with_timing && c->seconds > 0) timing[c->name] = c->seconds;
  }
  Json out;
  out["format"] = kFormat;
  out["passed"] = r.passed();
  out["counts"] = {{"pass", r.count(Verdict::Pass)}, {"fail", r.count(Verdict::Fail)}, {"unknown", r.count(Verdict::Unknown)}};
  out["checks"] = checks;
  if (with_timing) out["timing"] = timing;
  return out;
}

}  // namespace coarsex
