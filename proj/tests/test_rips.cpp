#include "doctest.h"

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/rips.hpp"
#include "oracle.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const char* name) { return group_by_name(name); }

std::vector<std::vector<double>> cycle_metric(int n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = std::min(std::abs(i - j), n - std::abs(i - j));
  return d;
}

ActionTable rotations(int n) {
  ActionTable a(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) a[g][x] = (x + g) % n;
  return a;
}

// The cycle with the rotation action, coarse structure up to distance 2.
Space c5() { return metric_space(numbered_points(5), G("Z5"), rotations(5), cycle_metric(5), {1, 2}); }

Relation within(const std::vector<std::vector<double>>& d, double r) {
  const int n = static_cast<int>(d.size());
  Relation u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] <= r) u.insert(i, j);
  return u;
}

std::vector<std::string> strs(const std::vector<HomologyGroup>& hs) {
  std::vector<std::string> out;
  for (const auto& h : hs) out.push_back(h.str());
  return out;
}

// Simplicial homology from the simplex lists alone.
std::vector<std::string> oracle_homology(const SimplicialComplex& k, int top) {
  std::vector<size_t> dims;
  std::vector<oracle::Mat> bd;
  for (int n = 0; n <= top + 1; ++n) {
    dims.push_back(k.count(n));
    if (n == 0) {
      bd.push_back({});
      continue;
    }
    oracle::Mat m = oracle::zeros(k.count(n - 1), k.count(n));
    for (size_t c = 0; c < k.count(n); ++c) {
      const Simplex& s = k.simplices[n][c];
      for (size_t i = 0; i < s.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<long>(i));
        auto it = std::lower_bound(k.simplices[n - 1].begin(), k.simplices[n - 1].end(), face);
        m[it - k.simplices[n - 1].begin()][c] += i % 2 ? -1 : 1;
      }
    }
    bd.push_back(m);
  }
  std::vector<std::string> out;
  for (const auto& g : oracle::homology(dims, bd)) out.push_back(g.str());
  return out;
}

std::vector<std::vector<bool>> adjacency(const Relation& u) {
  const int n = u.carrier_size();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = u.contains(i, j) || u.contains(j, i);
  return a;
}

}  // namespace

TEST_CASE("Rips complexes of the 5-cycle") {
  Space s = c5();
  Relation u1 = within(cycle_metric(5), 1), u2 = within(cycle_metric(5), 2);
  RipsComplex r1 = rips_complex(s, u1, 4);
  CHECK(r1.complex.count(0) == 5);
  CHECK(r1.complex.count(1) == 5);
  CHECK(r1.complex.count(2) == 0);
  auto counts1 = oracle::clique_counts(5, adjacency(u1), 5);
  for (int d = 0; d <= 4; ++d) CHECK(r1.complex.count(d) == counts1[d]);
  CHECK(strs(simplicial_homology(r1.complex, 1)) == std::vector<std::string>{"Z", "Z"});

  RipsComplex r2 = rips_complex(s, u2, 4);
  const size_t binom[] = {5, 10, 10, 5, 1};
  for (int d = 0; d <= 4; ++d) CHECK(r2.complex.count(d) == binom[d]);
  CHECK(strs(simplicial_homology(r2.complex, 3)) == std::vector<std::string>{"Z", "0", "0", "0"});
  CHECK(validate_complex(r2.complex).all_pass());
  CHECK(rips_complex(s, u2, 2).complex.max_dim() == 2);
}

TEST_CASE("simplicial homology agrees with the oracle") {
  SimplicialComplex cyc = parse_complex("0 1\n1 2\n2 3\n3 4\n0 4\n0\n1\n2\n3\n4\n");
  CHECK(strs(simplicial_homology(cyc, 1)) == oracle_homology(cyc, 1));
  CHECK(strs(simplicial_homology(cyc, 1)) == std::vector<std::string>{"Z", "Z"});
  RipsComplex full = rips_complex(max_max(numbered_points(5), G("trivial")), Relation::full(5), 4);
  CHECK(strs(simplicial_homology(full.complex, 3)) == oracle_homology(full.complex, 3));
  // Two hollow triangles sharing a vertex, and a filled one.
  SimplicialComplex k = parse_complex("0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n4 5\n5 6\n4 6\n4 5 6\n");
  for (int v = 0; v <= 6; ++v) k.simplices[0].push_back({v});
  std::sort(k.simplices[0].begin(), k.simplices[0].end());
  k.simplices[0].erase(std::unique(k.simplices[0].begin(), k.simplices[0].end()), k.simplices[0].end());
  CHECK(validate_complex(k).all_pass());
  CHECK(strs(simplicial_homology(k, 1)) == std::vector<std::string>{"Z", "Z^2"});
  CHECK(strs(simplicial_homology(k, 1)) == oracle_homology(k, 1));
}

TEST_CASE("complex validation") {
  SimplicialComplex k = parse_complex("0 1 2\n");
  CHECK_FALSE(validate_complex(k).passed());
  CHECK_THROWS_AS(parse_complex("0 x\n"), Error);
}

TEST_CASE("Dirac equivalence") {
  std::vector<std::vector<double>> d(5, std::vector<double>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) d[i][j] = std::abs(i - j);
  Space band = metric_space(numbered_points(5), G("trivial"), {}, d, {1});
  DiracEquivalence e = dirac_equivalence(band, within(d, 1));
  CHECK(e.certified());
  CHECK(e.analysis.equivalence == Verdict::Pass);

  GroupPtr z2 = G("Z2");
  Space pt = point_space(z2);
  Space q = min_min({"q0", "q1"}, z2, {{0, 1}, {1, 0}});
  DiracEquivalence t = dirac_equivalence(pt, Relation::diagonal(1), q);
  CHECK(t.certified());
  CHECK(t.source.size() == 2);
  CHECK_THROWS_AS(dirac_equivalence(pt, Relation::diagonal(1)), Error);
  CHECK_THROWS_AS(dirac_equivalence(pt, Relation::diagonal(1), pt), Error);
}

TEST_CASE("rotation acts by simplicial automorphisms") {
  Space s = c5();
  Relation u1 = within(cycle_metric(5), 1);
  SpaceMap rot = make_map(s, s, {1, 2, 3, 4, 0});
  RipsMap m = rips_functorial(rot, u1, u1, 3);
  CHECK(m.report.all_pass());
  CHECK(m.vertex_map == std::vector<int>{1, 2, 3, 4, 0});
}

TEST_CASE("bounded geometry of a band") {
  std::vector<std::vector<double>> d(10, std::vector<double>(10));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) d[i][j] = std::abs(i - j);
  BoundedGeometry b = sbg_check(metric_space(numbered_points(10), G("trivial"), {}, d, {1}));
  CHECK(b.bound == 3);
  CHECK(b.minimal_bornology);
  CHECK_FALSE(sbg_check(max_max(numbered_points(3), G("trivial"))).minimal_bornology);
}

TEST_CASE("filtration along an increasing chain") {
  Space s = c5();
  RipsFiltration f = rips_filtration(s, {within(cycle_metric(5), 1), within(cycle_metric(5), 2)}, 3);
  CHECK(f.report.all_pass());
  REQUIRE(f.stages.size() == 2);
  CHECK(f.stages[0].complex.count(1) < f.stages[1].complex.count(1));
}
