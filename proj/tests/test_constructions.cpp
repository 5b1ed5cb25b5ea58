#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/harness.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const char* name) { return group_by_name(name); }

Space cycle(int n, std::vector<double> scales) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = std::min(std::abs(i - j), n - std::abs(i - j));
  return metric_space(numbered_points(n), G("trivial"), {}, d, scales);
}

bool all_subsets_bounded(const Space& s) {
  for (unsigned mask = 1; mask < (1u << s.size()); ++mask) {
    PointSet b;
    for (int x = 0; x < s.size(); ++x)
      if (mask >> x & 1) b.push_back(x);
    if (!s.is_bounded(b)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonical space of Z2") {
  SpaceSpec spec;
  spec.kind = SpaceKind::CanMin;
  spec.group = G("Z2");
  Space s = build(spec);
  CHECK(s.size() == 2);
  CHECK(s.coarseMax == Relation::full(2));
  CHECK(all_subsets_bounded(s));
  CHECK(validate_space(s).all_pass());
}

TEST_CASE("minimal coarse structure with maximal bornology") {
  Space s = min_max({"a", "b", "c"}, G("Z3"), {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  CHECK(s.coarseMax == Relation::diagonal(3));
  CHECK(all_subsets_bounded(s));
}

TEST_CASE("5-cycle metric at scale 1") {
  Space s = cycle(5, {1});
  REQUIRE(s.coarseGenerators.size() == 1);
  Relation band(5);
  for (int i = 0; i < 5; ++i)
    for (int d : {-1, 0, 1}) band.insert(i, (i + d + 5) % 5);
  CHECK(s.coarseGenerators[0] == band);
  CHECK(validate_space(s).all_pass());
}

TEST_CASE("free union of two points") {
  Space pt = point_space(G("trivial"));
  Space u = free_union({pt, pt});
  CHECK(u.size() == 2);
  CHECK(u.coarseMax == Relation::diagonal(2));
  CHECK(u.is_bounded({0}));
  CHECK(u.is_bounded({1}));
  CHECK(u.is_bounded({0, 1}));
  Space c = coproduct({pt, pt});
  CHECK(c.coarseMax == u.coarseMax);
  CHECK_THROWS_AS(free_union({}), Error);
}

TEST_CASE("tensor unit and fiber product of identities") {
  Space x = cycle(4, {1});
  Space t = tensor(point_space(G("trivial")), x);
  CHECK(t.coarseMax == x.coarseMax);
  Space f = fiber_product(identity_map(x), identity_map(x));
  CHECK(f.size() == x.size());
  CHECK(validate_space(f).all_pass());
}

TEST_CASE("quotient adjunction") {
  Space plain = min_min({"a", "b"}, G("trivial"));
  QuotientAdjunction q = quotient_adjunction(plain);
  CHECK(q.quotient.size() == 2);
  CHECK(q.unit.assign == std::vector<int>{0, 1});
  Space swap = min_min({"a", "b"}, G("Z2"), {{0, 1}, {1, 0}});
  QuotientAdjunction s = quotient_adjunction(swap);
  CHECK(s.quotient.size() == 1);
  CHECK(s.unit_report.morphism());
  Space can = canonical_space(G("S3"));
  QuotientAdjunction c = quotient_adjunction(can);
  CHECK(c.completion.coarseMax == can.coarseMax);
  CHECK(all_subsets_bounded(c.completion));
}

TEST_CASE("pushout of a coarsely excisive pair") {
  Space s = cycle(6, {1});
  Pushout p = pushout_excisive(s, {0, 1, 2, 3}, {3, 4, 5, 0});
  CHECK(p.report.passed());
  CHECK(analyze_map(p.from_first).morphism());
  CHECK(analyze_map(p.from_second).morphism());
  CHECK(compose(p.comparison, p.from_first).assign.size() == 4);
}

TEST_CASE("coequalizer along a subgroup") {
  Coequalizer c = coequalizer_H(canonical_space(G("Z4")), {0, 2});
  CHECK(c.report.passed());
  CHECK(c.colimit.size() == 2);
}

TEST_CASE("construction outputs validate, tensor is symmetric") {
  SplitMix64 rng(11);
  for (int t = 0; t < 25; ++t) {
    GroupPtr g = G(t % 2 ? "Z2" : "S3");
    Space x = gen_space(rng, g, 1, 3), y = gen_space(rng, g, 1, 3);
    Space xy = tensor(x, y), yx = tensor(y, x);
    CHECK(validate_space(xy).all_pass());
    CHECK(validate_space(cartesian(x, y)).all_pass());
    CHECK(validate_space(free_union({x, y})).all_pass());
    std::vector<int> swap(xy.size()), back(yx.size());
    for (int a = 0; a < x.size(); ++a)
      for (int b = 0; b < y.size(); ++b) {
        swap[a * y.size() + b] = b * x.size() + a;
        back[b * x.size() + a] = a * y.size() + b;
      }
    SpaceMap s = make_map(xy, yx, swap), r = make_map(yx, xy, back);
    CHECK(analyze_map(s, &r).equivalence == Verdict::Pass);
  }
}

TEST_CASE("associativity of tensoring with minimal sets") {
  GroupPtr z2 = G("Z2");
  Space y1 = min_min({"p", "q"}, z2, {{0, 1}, {1, 0}});
  Space y2 = min_min({"r", "s"}, z2);
  Space x = canonical_space(z2);
  Space left = tensor(min_min(cartesian(y1, y2).points, z2, cartesian(y1, y2).action), x);
  Space right = tensor(y1, tensor(y2, x));
  REQUIRE(left.size() == right.size());
  std::vector<int> id(left.size());
  for (int i = 0; i < left.size(); ++i) id[i] = i;
  // ((a, b), c) and (a, (b, c)) have the same index with these conventions.
  SpaceMap f = make_map(left, right, id), g = make_map(right, left, id);
  CHECK(analyze_map(f, &g).equivalence == Verdict::Pass);
}

TEST_CASE("identity of the underlying set between structures") {
  GroupPtr z3 = G("Z3");
  ActionTable rot{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::string> pts{"a", "b", "c"};
  Space mm = min_max(pts, z3, rot);
  std::vector<int> id{0, 1, 2};
  CHECK(analyze_map(make_map(mm, max_max(pts, z3, rot), id)).morphism());
  CHECK(analyze_map(make_map(mm, min_min(pts, z3, rot), id)).morphism());
}
