#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/space.hpp"

using namespace coarsex;

namespace {

GroupPtr trivial() { return group_by_name("trivial"); }

// Path metric on {0..n-1}, scale 1.
Space band(int n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = std::abs(i - j);
  return metric_space(numbered_points(n), trivial(), {}, d, {1});
}

Relation rel(int n, std::vector<std::pair<int, int>> pairs) { return Relation::from_pairs(n, pairs); }

}  // namespace

TEST_CASE("entourage algebra") {
  CHECK(compose(rel(3, {{0, 1}}), rel(3, {{1, 2}})) == rel(3, {{0, 2}}));
  CHECK(invert(rel(3, {{0, 1}, {2, 1}})) == rel(3, {{1, 0}, {1, 2}}));
  Relation b1(5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (std::abs(i - j) <= 1) b1.insert(i, j);
  CHECK(thicken(b1, {2}) == PointSet{1, 2, 3});
  Relation s = saturate({rel(3, {{0, 1}})}, *trivial(), trivial_action(*trivial(), 3), 3);
  CHECK(s == rel(3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}}));
}

TEST_CASE("saturation closes under translates") {
  GroupPtr z2 = group_by_name("Z2");
  Relation s = saturate({rel(3, {{0, 2}})}, *z2, {{0, 1, 2}, {1, 0, 2}}, 3);
  CHECK(s.contains(1, 2));
  CHECK(s.contains(2, 1));
  CHECK(s.contains(0, 1));  // through 2 by composition
}

TEST_CASE("validation") {
  CHECK(validate_space(max_max({"*"}, trivial())).all_pass());
  GroupPtr z2 = group_by_name("Z2");
  Space swap = make_space({"a", "b"}, z2, {{0, 1}, {1, 0}}, {rel(2, {{0, 0}})}, {{0}, {1}});
  CHECK(validate_space(swap).all_pass());
  CHECK(swap.coarseMax.contains(1, 1));
  Space uncovered = make_space({"a", "b"}, trivial(), trivial_action(*trivial(), 2), {}, {{0}});
  Report r = validate_space(uncovered);
  CHECK_FALSE(r.passed());
  const Check* c = r.find("bornology.covers");
  REQUIRE(c != nullptr);
  CHECK(c->verdict == Verdict::Fail);
  CHECK(c->witness.find("b") != std::string::npos);
}

TEST_CASE("identity is an equivalence") {
  Space s = band(4);
  SpaceMap id = identity_map(s);
  MapReport r = analyze_map(id, &id);
  CHECK(r.morphism());
  CHECK(r.equivalence == Verdict::Pass);
}

TEST_CASE("projection from the doubled space is an equivalence") {
  Space two = max_max({"0", "1"}, trivial());
  Space x = band(3);
  Space t = tensor(two, x);
  std::vector<int> proj(t.size()), sec(x.size());
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < x.size(); ++i) proj[a * x.size() + i] = i;
  for (int i = 0; i < x.size(); ++i) sec[i] = i;
  SpaceMap p = make_map(t, x, proj), s = make_map(x, t, sec);
  CHECK(analyze_map(p, &s).equivalence == Verdict::Pass);
  CHECK(analyze_map(s, &p).equivalence == Verdict::Pass);
}

TEST_CASE("no equivariant inverse without a fixed point") {
  GroupPtr z2 = group_by_name("Z2");
  Space ab = min_min({"a", "b"}, z2, {{0, 1}, {1, 0}});
  Space abc = min_min({"a", "b", "c"}, z2, {{0, 1, 2}, {1, 0, 2}});
  SpaceMap inc = make_map(ab, abc, {0, 1});
  bool exhausted = false;
  CHECK_FALSE(find_inverse(inc, 8, &exhausted).has_value());
  CHECK(exhausted);
  MapReport r = analyze_map(inc);
  CHECK(r.morphism());
  CHECK(r.equivalence == Verdict::Fail);
}

TEST_CASE("generated big family of a band space") {
  Space s = band(5);
  BigFamily fam = generated_family(s, {0});
  REQUIRE(fam.stages.size() >= 5);
  CHECK(fam.stages[0] == PointSet{0});
  CHECK(fam.stages[1] == PointSet{0, 1});
  CHECK(fam.stages[2] == PointSet{0, 1, 2});
  CHECK(fam.stages.back() == s.component(0));
  CHECK(fam.stabilized);
  CHECK(thicken(s.coarseMax, fam.stages.back()) == fam.stages.back());
  CHECK(check_big_family(s, fam).passed());
}

TEST_CASE("subset classification") {
  Space s = band(5);
  SubsetReport whole = classify_subsets(s, full_set(5));
  CHECK(whole.generated.stages.size() == 1);
  CHECK(whole.nice == Verdict::Pass);
  SubsetReport halves = classify_subsets(s, {0, 1, 2}, PointSet{2, 3, 4});
  REQUIRE(halves.excisive.has_value());
  CHECK(*halves.excisive);
}

TEST_CASE("exhaustions") {
  Space minimal = min_min({"a", "b", "c"}, trivial());
  ExhaustionReport all = classify_exhaustion(minimal, {full_set(3)});
  CHECK(all.trapping);
  CHECK(all.co_gamma_bounded);
  Space s = min_max({"a", "b", "c"}, trivial());
  ExhaustionReport partial = classify_exhaustion(s, {{0}, {0, 1}});
  CHECK_FALSE(partial.trapping);
  ExhaustionReport full = classify_exhaustion(s, {{0}, {0, 1}, {0, 1, 2}});
  CHECK(full.trapping);
  CHECK_THROWS_AS(classify_exhaustion(s, {{0}, {1}}), Error);
}

TEST_CASE("flasqueness of the shift") {
  ShiftFamily fam = standard_shift_family(point_space(trivial()));
  FlasquenessReport r = flasqueness_check(fam, shift_endo(fam), 20);
  CHECK(r.verified());
  CHECK(r.uniformly_controlled);
  CHECK(r.verdict == "verified up to horizon 20");
  Space finite = min_min({"a", "b"}, trivial());
  FlasquenessReport id = flasqueness_check(finite, identity_map(finite), 20);
  CHECK(id.close_to_identity);
  CHECK_FALSE(id.escapes_bounded);
  CHECK_THROWS_AS(flasqueness_check(fam, shift_endo(fam), 0), Error);
}
