#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/harness.hpp"
#include "coarsex/io.hpp"

using namespace coarsex;

namespace {

std::string input_error(const Json& doc) {
  try {
    parse_space(doc);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("space documents round-trip") {
  SplitMix64 rng(3);
  for (int t = 0; t < 40; ++t) {
    Space s = gen_space(rng, group_by_name(t % 2 ? "S3" : "Z4"), 1, 5);
    Json doc = space_to_json(s);
    CHECK(doc["format"] == kFormat);
    Space back = parse_space(Json::parse(doc.dump()));
    CHECK(back.points == s.points);
    CHECK(back.action == s.action);
    CHECK(back.coarseMax == s.coarseMax);
    CHECK(back.group->same_as(*s.group));
    for (const auto& b : s.bornology) CHECK(back.is_bounded(b));
    for (const auto& b : back.bornology) CHECK(s.is_bounded(b));
  }
}

TEST_CASE("groups by name or by table") {
  CHECK(parse_group(Json()).get()->order() == 1);
  CHECK(parse_group(Json("S3"))->order() == 6);
  Json table = group_to_json(*group_by_name("Z3"));
  CHECK(parse_group(table)->same_as(*group_by_name("Z3")));
  Json bad = {{"elements", {"e", "a"}}, {"table", {{"e", "a"}, {"a", "a"}}}};
  CHECK_THROWS_AS(parse_group(bad), Error);

  GroupPtr s3 = parse_group(Json::parse(R"({"generators": [[1, 0, 2], [1, 2, 0]]})"));
  CHECK(s3->order() == 6);
  CHECK(s3->subgroup_classes().size() == group_by_name("S3")->subgroup_classes().size());
  CHECK(parse_group(Json::parse(R"({"generators": [[1, 2, 3, 0]]})"))->order() == 4);
  CHECK_THROWS_AS(parse_group(Json::parse(R"({"generators": [[0, 0]]})")), Error);
}

TEST_CASE("malformed documents name the offending location") {
  Json doc = Json::parse(R"({"format": "coarsex/1", "points": ["a", "b"], "entourages": {"U": [["a", "c"]]}})");
  CHECK(input_error(doc).find("entourages.U[0]") != std::string::npos);
  Json act = Json::parse(R"({"points": ["a", "b"], "group": "Z2", "action": {"1": ["a"]}})");
  CHECK(input_error(act).find("action.1") != std::string::npos);
  Json born = Json::parse(R"({"points": ["a"], "bornology": [["z"]]})");
  CHECK(input_error(born).find("bornology[0]") != std::string::npos);
  CHECK_THROWS_AS(load_json("/nonexistent/doc.json"), Error);
}

TEST_CASE("homomorphisms") {
  Json ok = Json::parse(R"({"format": "coarsex/1", "source": "Z2", "target": "Z4", "map": ["0", "2"]})");
  GroupHom h = parse_hom(ok);
  CHECK(h.map() == std::vector<int>{0, 2});
  Json bad = Json::parse(R"({"source": "Z2", "target": "Z4", "map": ["0", "1"]})");
  CHECK_THROWS_AS(parse_hom(bad), Error);
}

TEST_CASE("controlled objects and morphisms round-trip") {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    Space s = gen_space(rng, group_by_name(t % 2 ? "Z2" : "S3"), 1, 4);
    CtrlObject c = random_ctrl_object(rng, s, 2);
    CtrlObject back = parse_ctrl_object(Json::parse(ctrl_object_to_json(c).dump()));
    CHECK(back.dims == c.dims);
    CHECK(back.support == c.support);
    CHECK(back.cocycle == c.cocycle);
    HomLattice hom = hom_lattice(c, c);
    CtrlMorphism f = hom.rank() ? random_morphism(rng, hom) : identity_morphism(c);
    CtrlMorphism fb = parse_ctrl_morphism(Json::parse(ctrl_morphism_to_json(f).dump()));
    CHECK(same_blocks(fb, f));
  }
}

TEST_CASE("cocycles default to identities") {
  Json doc = Json::parse(R"({"space": {"points": ["a", "b"], "group": "Z2", "action": {"1": ["b", "a"]}},
                             "dims": {"a": 2, "b": 2}})");
  CtrlObject c = parse_ctrl_object(doc);
  CHECK(c.rho(1, 0).is_identity());
  CHECK(c.total_rank() == 4);
}

TEST_CASE("reports serialize deterministically") {
  Report r;
  r.add("b", true);
  r.add("a", false, "witness");
  r.checks[0].seconds = 0.5;
  Json j = report_to_json(r, false);
  CHECK(j["checks"][0]["name"] == "a");
  CHECK(j["checks"][0]["witness"] == "witness");
  CHECK_FALSE(j.contains("timing"));
  CHECK(report_to_json(r, true)["timing"]["b"] == 0.5);
}
