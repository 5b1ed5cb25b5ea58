#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/ctrl.hpp"
#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"
#include "coarsex/harness.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const char* name) { return group_by_name(name); }

Space band(int n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = std::abs(i - j);
  return metric_space(numbered_points(n), G("trivial"), {}, d, {1});
}

Relation band_relation(int n, int width) {
  Relation r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) <= width) r.insert(i, j);
  return r;
}

CtrlMorphism all_ones(const HomLattice& h) { return h.morphism(std::vector<Int>(h.rank(), 1)); }

std::vector<std::vector<DenseMatrix>> identity_cocycle(const Space& s, const std::vector<int>& dims) {
  std::vector<std::vector<DenseMatrix>> c(s.group->order());
  for (auto& row : c)
    for (int x = 0; x < s.size(); ++x) row.push_back(DenseMatrix::identity(dims[x]));
  return c;
}

}  // namespace

TEST_CASE("objects") {
  Space can = canonical_space(G("Z2"));
  CtrlObject zero = zero_object(can);
  CHECK(validate_ctrl_object(zero).all_pass());
  CHECK(zero.support_of({0, 1}).empty());
  CtrlObject free = trivial_object(can, {1, 1});
  CHECK(validate_ctrl_object(free).all_pass());
  CHECK(free.total_rank() == 2);
  CHECK_THROWS_AS(make_ctrl_object(can, {0, 1}, {1, 2}, identity_cocycle(can, {1, 2})), Error);
}

TEST_CASE("a broken cocycle entry is reported with a witness") {
  Space can = canonical_space(G("Z2"));
  auto cocycle = identity_cocycle(can, {1, 1});
  cocycle[1][0].at(0, 0) = 2;
  CtrlObject bad{can, {0, 1}, {1, 1}, cocycle};
  Report r = validate_ctrl_object(bad);
  CHECK_FALSE(r.passed());
  faults::Scope scope(faults::Injection{false, false, true});
  try {
    trivial_object(can, {1, 1});
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("(") != std::string::npos);
  }
}

TEST_CASE("morphism algebra") {
  Space s = band(4);
  CtrlObject c = trivial_object(s, {1, 2, 1, 1});
  HomLattice h = hom_lattice(c, c, band_relation(4, 1));
  CtrlMorphism f = all_ones(h);
  CHECK(validate_ctrl_morphism(f).all_pass());
  CHECK(same_blocks(compose(identity_morphism(c), f), f));
  CHECK(same_blocks(compose(f, identity_morphism(c)), f));
  CHECK(block_support(compose(f, f)).subset_of(compose(f.control, f.control)));
  CHECK(biproduct_checks(direct_sum({c, c})).all_pass());
}

TEST_CASE("pushforward to a point aggregates fibers") {
  Space s = min_min({"a", "b", "c"}, G("trivial"));
  Space pt = point_space(G("trivial"));
  CtrlObject c = trivial_object(s, {1, 1, 1});
  CtrlObject p = pushforward(c, make_map(s, pt, {0, 0, 0}));
  CHECK(p.dims == std::vector<int>{3});
  CHECK(validate_ctrl_object(p).all_pass());
}

TEST_CASE("restriction then inclusion is the projection onto the summand") {
  Space s = band(4);
  CtrlObject c = trivial_object(s, {1, 1, 2, 1});
  PointSet z{0, 1};
  CtrlMorphism e = compose(restriction_inclusion(c, z), restriction_projection(c, z));
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      bool inside = y == x && (x == 0 || x == 1);
      CHECK(e.block(y, x) == (inside ? DenseMatrix::identity(c.dims[x]) : DenseMatrix(c.dims[y], c.dims[x])));
    }
  CHECK(same_blocks(compose(restriction_projection(c, z), restriction_inclusion(c, z)),
                    identity_morphism(restrict_to(c, z))));
}

TEST_CASE("bh functor") {
  GroupPtr z2 = G("Z2");
  Space pt = coset_space(z2, {0, 1});
  CtrlObject sign = trivial_object(pt, {1});
  sign.cocycle[1][0] = DenseMatrix{{-1}};
  REQUIRE(validate_ctrl_object(sign).all_pass());
  Representation r = bh_functor(sign, {0, 1});
  CHECK(r.rank == 1);
  CHECK(r.of(1) == DenseMatrix{{-1}});
  CHECK(bh_round_trip(sign, {0, 1}).report.all_pass());

  // Trivial subgroup: the fiber at the base point.
  Space free = coset_space(z2, {0});
  CtrlObject c = trivial_object(free, {2, 2});
  Representation f = bh_functor(c, {0});
  CHECK(f.rank == 2);
  BHRoundTrip rt = bh_round_trip(c, {0});
  CHECK(rt.report.all_pass());
  CHECK(rt.rebuilt.dims == c.dims);
}

TEST_CASE("convolution functor is fully faithful for S3 on S3/<(12)>") {
  GroupPtr s3 = G("S3");
  Space x = coset_space(s3, {0, 1});
  Space conv = convolution_space(x);
  SplitMix64 rng(3);
  int certified = 0, sampled = 0;
  while (sampled < 10) {
    CtrlObject c = random_ctrl_object(rng, conv, 2);
    CtrlObject d = random_ctrl_object(rng, conv, 2);
    FullnessReport fr = convolution_fullness(c, d, x);
    if (fr.comparison.cols() == 0) continue;
    ++sampled;
    CHECK(fr.faithful);
    CHECK(fr.full);
    for (const auto& v : fr.diagonal) CHECK(v == 1);
    certified += fr.report.all_pass();
  }
  CHECK(certified == 10);
}

TEST_CASE("karoubi factorization on a band space") {
  Space s = band(6);
  BigFamily fam = generated_family(s, {0});
  REQUIRE(fam.stages.size() >= 3);
  CtrlObject a = trivial_object(s, {1, 0, 0, 0, 0, 0});
  CtrlObject b = trivial_object(s, {1, 1, 0, 0, 0, 0});
  CtrlObject c = trivial_object(s, {1, 1, 1, 1, 1, 1});
  Relation u = band_relation(6, 1);
  CtrlMorphism f = all_ones(hom_lattice(a, c, u));
  CtrlMorphism g = all_ones(hom_lattice(c, b, u));
  KaroubiDiagram k = karoubi_complete(f, g, fam);
  CHECK(k.report.all_pass());
  CHECK(k.source_stage == 1);
  CHECK(fam.stages[k.stage] == PointSet{0, 1, 2});
  CHECK(k.piece.support == PointSet{0, 1, 2});

  CtrlMorphism zf = zero_morphism(a, c), zg = zero_morphism(c, b);
  CHECK(karoubi_complete(zf, zg, fam).report.all_pass());

  BigFamily short_family{{fam.stages[0], fam.stages[1]}, false};
  CHECK_THROWS_WITH_AS(karoubi_complete(f, g, short_family), doctest::Contains("family not big"), Error);
}

TEST_CASE("quotient hom") {
  Space mx = max_max({"a", "b"}, G("trivial"));
  CtrlObject c = trivial_object(mx, {1, 1});
  QuotientHom all = quotient_hom(c, c, {0, 1});
  CHECK(all.quotient.is_zero());
  QuotientHom none = quotient_hom(c, c, {});
  CHECK(none.quotient.rank == static_cast<int>(none.hom_rank));
  QuotientHom one = quotient_hom(c, c, {0});
  CHECK(one.hom_rank == 4);
  CHECK(one.quotient.is_zero());
  CHECK_FALSE(one.factoring_in_vanishing);
  CHECK(one.report.count(Verdict::Unknown) == 1);

  Space mn = min_min({"a", "b"}, G("trivial"));
  CtrlObject d = trivial_object(mn, {1, 1});
  QuotientHom q = quotient_hom(d, d, {0});
  CHECK(q.quotient.str() == "Z");
  CHECK(q.vanishing_in_factoring);
  CHECK(q.factoring_in_vanishing);
  CHECK(quotient_hom_functoriality(d, d, {0}, {0, 1}).passed());
}

TEST_CASE("swindle ranks under the shift") {
  ShiftFamily fam = standard_shift_family(point_space(G("trivial")));
  SigmaReport r = flasque_sigma_check(fam, shift_endo(fam), 10);
  CHECK(r.report.all_pass());
  REQUIRE(r.sigma_ranks.size() == r.window.size());
  for (size_t i = 0; i < r.window.size(); ++i) {
    int m = r.window[i];
    CHECK(r.sigma_ranks[i] == std::min(m + 1, 11));
    CHECK(r.comparison_ranks[i] == r.sigma_ranks[i]);
  }
  Space finite = min_min({"a", "b"}, G("trivial"));
  CHECK_FALSE(flasque_sigma_check(finite, identity_map(finite), 10).report.passed());
  CHECK_THROWS_AS(flasque_sigma_check(fam, shift_endo(fam), 0), Error);
}
