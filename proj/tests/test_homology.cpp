#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/ctrl.hpp"
#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"
#include "coarsex/group_change.hpp"
#include "coarsex/homology.hpp"
#include "oracle.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const char* name) { return group_by_name(name); }

ActionTable swap2() { return {{0, 1}, {1, 0}}; }

std::vector<std::string> strs(const std::vector<HomologyGroup>& hs) {
  std::vector<std::string> out;
  for (const auto& h : hs) out.push_back(h.str());
  return out;
}

std::vector<std::string> strs(const std::vector<oracle::Group>& hs) {
  std::vector<std::string> out;
  for (const auto& h : hs) out.push_back(h.str());
  return out;
}

oracle::Mat to_oracle(const SparseMatrix& m) {
  oracle::Mat out = oracle::zeros(m.rows(), m.cols());
  for (size_t c = 0; c < m.cols(); ++c)
    for (const auto& [r, v] : m.column(c)) out[r][c] = v.get_si();
  return out;
}

std::vector<oracle::Group> oracle_homology(const ChainComplex& c) {
  std::vector<size_t> dims;
  std::vector<oracle::Mat> bd;
  for (int n = 0; n <= c.top; ++n) {
    dims.push_back(c.dim(n));
    bd.push_back(n ? to_oracle(c.boundary[n]) : oracle::Mat{});
  }
  return oracle::homology(dims, bd);
}

Space cosets(const GroupPtr& g, const std::vector<int>& sub) {
  Space c = coset_space(g, sub);
  return min_max(c.points, g, c.action);
}

// Action of the generator of Z/n on G/K, read off a coset space.
std::vector<int> generator_action(const Space& s) { return s.action[1]; }

}  // namespace

TEST_CASE("alternating complex of the point") {
  ChainComplex c = chain_complex(point_space(G("trivial")), 3);
  for (int n = 0; n <= 3; ++n) CHECK(c.dim(n) == 1);
  CHECK(c.boundary[1].get(0, 0) == 0);
  CHECK(c.boundary[2].get(0, 0) == 1);
  CHECK(c.boundary[3].get(0, 0) == 0);
}

TEST_CASE("two points with the minimal structure admit only constant tuples") {
  ChainComplex c = chain_complex(min_min({"a", "b"}, G("trivial")), 1);
  CHECK(c.dim(0) == 2);
  CHECK(c.dim(1) == 2);
  CHECK(c.boundary[1].is_zero());
}

TEST_CASE("orbit bases for the swap with the maximal structure") {
  ChainComplex c = chain_complex(max_max({"a", "b"}, G("Z2"), swap2()), 1);
  CHECK(c.dim(0) == 1);
  CHECK(c.dim(1) == 2);
}

TEST_CASE("Smith normal form small cases") {
  CHECK(smith_invariants(DenseMatrix{{2, 0}, {0, 3}}) == std::vector<Int>{1, 6});
  CHECK(smith_invariants(DenseMatrix{{1, 1}, {1, 1}}) == std::vector<Int>{1});
  SmithResult r = smith_normal_form(DenseMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  CHECK(r.diagonal == std::vector<Int>{2, 6, 12});
  CHECK(r.P * DenseMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}} * r.Q == r.S);
  CHECK(oracle::invariant_factors({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == std::vector<long long>{2, 6, 12});
}

TEST_CASE("homology of small spaces") {
  CHECK(strs(homology(point_space(G("trivial")), 4)) == std::vector<std::string>{"Z", "0", "0", "0", "0"});
  CHECK(homology(min_min({"a", "b"}, G("trivial")), 1)[0].str() == "Z^2");
  auto two = homology(max_max({"a", "b"}, G("trivial")), 2);
  CHECK(strs(two) == strs(homology(point_space(G("trivial")), 2)));
  CHECK(strs(two) == std::vector<std::string>{"Z", "0", "0"});
}

TEST_CASE("library homology agrees with the oracle on the same complexes") {
  std::vector<Space> spaces{
      max_max({"a", "b"}, G("Z2"), swap2()),
      min_max({"a", "b", "c"}, G("trivial")),
      canonical_space(G("S3")),
      tensor(max_max({"0", "1"}, G("Z3")), canonical_space(G("Z3"))),
  };
  for (const auto& s : spaces) {
    ChainComplex c = chain_complex(s, 3);
    CHECK(strs(homology(c)) == strs(oracle_homology(c)));
  }
}

TEST_CASE("collapse to a point and close maps") {
  Space two = max_max({"a", "b"}, G("trivial"));
  Space pt = point_space(G("trivial"));
  SpaceMap collapse = make_map(two, pt, {0, 0});
  SpaceMap section = make_map(pt, two, {0});
  CHECK(equivalence_homology_check(collapse, section, 3).passed());
  SpaceMap c0 = make_map(pt, two, {0}), c1 = make_map(pt, two, {1});
  Report r = close_maps_check(c0, c1, 3);
  CHECK(r.passed());
  CHECK(r.count(Verdict::Pass) > 0);
}

TEST_CASE("standard group complex dimensions") {
  ChainComplex c = standard_group_complex(G("Z2"), point_space(G("Z2")), 4);
  for (int n = 0; n <= 4; ++n) CHECK(c.dim(n) == (1u << n));
}

TEST_CASE("group homology against the periodic resolution") {
  for (int n : {2, 3, 4}) {
    GroupPtr g = G(("Z" + std::to_string(n)).c_str());
    auto got = homology(standard_group_complex(g, point_space(g), 4));
    CHECK(strs(got) == strs(oracle::cyclic_group_homology(n, {0}, 3)));
  }
  CHECK(strs(homology(standard_group_complex(G("Z2"), point_space(G("Z2")), 4))) ==
        std::vector<std::string>{"Z", "Z/2", "0", "Z/2"});
  CHECK(strs(homology(standard_group_complex(G("Z3"), point_space(G("Z3")), 4))) ==
        std::vector<std::string>{"Z", "Z/3", "0", "Z/3"});
}

TEST_CASE("group homology with permutation coefficients") {
  // Z4 acting on Z4/Z2, and freely on itself.
  GroupPtr z4 = G("Z4");
  for (const std::vector<int>& sub : {std::vector<int>{0, 2}, std::vector<int>{0}}) {
    Space set = cosets(z4, sub);
    auto got = homology(standard_group_complex(z4, set, 4));
    CHECK(strs(got) == strs(oracle::cyclic_group_homology(4, generator_action(set), 3)));
  }
  // Shapiro: S3 on S3/<(12)> gives the homology of Z2.
  GroupPtr s3 = G("S3");
  Space s3_cosets = cosets(s3, {0, 1});
  CHECK(strs(homology(standard_group_complex(s3, s3_cosets, 4))) == strs(oracle::cyclic_group_homology(2, {0}, 3)));
}

TEST_CASE("phi and psi are inverse chain maps") {
  PhiPsiReport r = phi_psi(G("Z2"), point_space(G("Z2")), 3);
  CHECK(r.report.all_pass());
  REQUIRE(r.phi.size() == 5);
  for (int n = 0; n <= 4; ++n) {
    CHECK((r.psi[n] * r.phi[n]).to_dense().is_identity());
    CHECK((r.phi[n] * r.psi[n]).to_dense().is_identity());
  }
  GroupPtr s3 = G("S3");
  PhiPsiReport q = phi_psi(s3, cosets(s3, {0, 1}), 2);
  CHECK(q.report.all_pass());
  CHECK(strs(q.standard_groups) == strs(q.coarse_groups));
}

TEST_CASE("continuity for finite spaces with minimal bornology") {
  Space s = min_min({"a", "b", "c"}, G("trivial"));
  ContinuityReport r = hx_cont(s, 2);
  CHECK(r.report.passed());
  CHECK(strs(r.colimit) == strs(homology(s, 2)));
}

TEST_CASE("additivity for two points and for band spaces") {
  Space pt = point_space(G("trivial"));
  CHECK(additivity_factorization({pt, pt}, 2).all_pass());
  ChainComplex c = chain_complex(free_union({pt, pt}), 1);
  CHECK(c.dim(0) == 2);
  CHECK(c.boundary[1].is_zero());
  std::vector<Space> bands;
  for (int n : {2, 3, 4}) {
    ShiftFamily fam = standard_shift_family(pt);
    bands.push_back(shift_window(fam, n));
  }
  CHECK(additivity_factorization(bands, 2).all_pass());
}

TEST_CASE("chain-level transformations") {
  GroupPtr z4 = G("Z4"), z2 = G("Z2");
  GroupHom inc(z2, z4, {0, 2});
  ChainTransform ind = chain_transform(TransformKind::Ind, inc, point_space(z2), 2);
  CHECK(ind.report.all_pass());
  CHECK(!ind.inverse.empty());
  ChainTransform res = chain_transform(TransformKind::Res, inc, canonical_space(z4), 2);
  CHECK(res.report.passed());
  GroupHom id = GroupHom::identity(z4);
  ChainTransform qh = chain_transform(TransformKind::Qh, id, canonical_space(z4), 2);
  CHECK(qh.report.passed());
  CHECK(qh.target.dim(0) == 1);
  CHECK(!qh.map[0].is_zero());
}

TEST_CASE("a flipped boundary sign is detected") {
  faults::Scope scope(faults::Injection{true, false, false});
  CHECK_THROWS_AS(chain_complex(canonical_space(G("Z2")), 3), Error);
}
