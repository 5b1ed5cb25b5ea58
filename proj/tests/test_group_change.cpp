#include "doctest.h"

#include <algorithm>

#include "coarsex/constructions.hpp"
#include "coarsex/group_change.hpp"
#include "coarsex/harness.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const char* name) { return group_by_name(name); }

std::vector<size_t> orbit_sizes(const Space& s) {
  std::vector<size_t> out;
  for (const auto& o : s.orbits()) out.push_back(o.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("restriction along the identity") {
  Space x = canonical_space(G("S3"));
  Space r = change_group(ChangeKind::Res, x, GroupHom::identity(G("S3")));
  CHECK(r.coarseMax == x.coarseMax);
  CHECK(r.action == x.action);
}

TEST_CASE("quotient of the canonical space by the whole group") {
  GroupPtr z4 = G("Z4");
  Space q = change_group(ChangeKind::Qh, canonical_space(z4), GroupHom::identity(z4));
  CHECK(q.size() == 1);
  CHECK(validate_space(q).all_pass());
}

TEST_CASE("induction of a point is the coset space") {
  GroupPtr z4 = G("Z4"), z2 = G("Z2");
  GroupHom inc(z2, z4, {0, 2});
  Space ind = change_group(ChangeKind::Ind, point_space(z2), inc);
  CHECK(ind.size() == 2);
  CHECK(ind.coarseMax == Relation::diagonal(2));
  CHECK(ind.orbits().size() == 1);
  CHECK(ind.stabilizer(0) == std::vector<int>{0, 2});
  GroupHom s3inc(G("Z2"), G("S3"), {0, 1});
  Space s3ind = change_group(ChangeKind::Ind, point_space(G("Z2")), s3inc);
  CHECK(s3ind.size() == 3);
}

TEST_CASE("completion along a subgroup acts through the normalizer") {
  GroupPtr s3 = G("S3");
  GroupHom inc(G("Z2"), s3, {0, 1});
  Space b = change_group(ChangeKind::Bh, canonical_space(s3), inc);
  CHECK(b.group->order() == 2);  // the normalizer of <(12)> in S3 is itself
  CHECK(completion_restriction_certificate(canonical_space(s3), inc).passed());
}

TEST_CASE("Mackey decomposition") {
  GroupPtr s3 = G("S3");
  Subgroup h = make_subgroup(s3, {0, 1});
  MackeyReport m = mackey_check(point_space(h.group), h.inclusion, h.inclusion);
  CHECK(m.double_cosets.size() == 2);
  CHECK(m.representatives.front() == 0);
  CHECK(orbit_sizes(m.left) == std::vector<size_t>{1, 2});
  CHECK(m.conjugate_into_first.certified);
  CHECK(m.conjugate_into_second.certified);

  GroupPtr z4 = G("Z4");
  Subgroup k = make_subgroup(z4, {0, 2});
  MackeyReport z = mackey_check(point_space(k.group), k.inclusion, k.inclusion);
  CHECK(z.double_cosets.size() == 2);
  CHECK(orbit_sizes(z.left) == std::vector<size_t>{1, 1});
  CHECK(z.conjugate_into_first.certified);
  CHECK(z.conjugate_into_second.certified);

  MackeyReport trivial = mackey_check(canonical_space(z4), GroupHom::identity(z4), GroupHom::identity(z4));
  CHECK(trivial.double_cosets.size() == 1);
  CHECK(trivial.left.size() == 4);
}

TEST_CASE("induction adjunction") {
  GroupPtr z4 = G("Z4"), z2 = G("Z2");
  GroupHom inc(z2, z4, {0, 2});
  AdjunctionReport a = adjunction_check(inc, point_space(z2), canonical_space(z4));
  CHECK(a.report.passed());
  CHECK(a.unit.codomain.size() == 2);
  CHECK(a.counit_well_defined);
  CHECK(a.triangle_induced);
  CHECK(a.triangle_restricted);
  AdjunctionReport id = adjunction_check(GroupHom::identity(z4), canonical_space(z4), canonical_space(z4));
  CHECK(id.report.passed());
  CHECK(id.unit.assign == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("certificates on random spaces") {
  SplitMix64 rng(5);
  GroupPtr z4 = G("Z4"), z2 = G("Z2");
  GroupHom onto(z4, z2, {0, 1, 0, 1});
  GroupHom inc(z2, z4, {0, 2});
  for (int t = 0; t < 8; ++t) {
    Space x4 = gen_space(rng, z4, 1, 4);
    CHECK(induction_kernel_certificate(x4, onto).passed());
    CHECK(completion_restriction_certificate(x4, inc).passed());
    CHECK(quotient_coequalizer_certificate(x4, inc).passed());
    Space x2 = gen_space(rng, z2, 1, 3);
    CHECK(adjunction_check(inc, x2, x4).report.passed());
  }
}
