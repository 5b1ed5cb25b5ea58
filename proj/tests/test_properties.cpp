#include "doctest.h"

#include <algorithm>

#include "coarsex/constructions.hpp"
#include "coarsex/ctrl.hpp"
#include "coarsex/harness.hpp"
#include "coarsex/homology.hpp"
#include "coarsex/rips.hpp"

using namespace coarsex;

namespace {

const std::vector<std::string> kMenu{"trivial", "Z2", "Z3", "S3"};

GroupPtr pick_group(SplitMix64& rng) { return group_by_name(kMenu[rng.uniform(0, 3)]); }

Relation random_relation(SplitMix64& rng, int n, int percent) {
  Relation r(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (rng.chance(percent)) r.insert(x, y);
  return r;
}

PointSet random_subset(SplitMix64& rng, int n) {
  PointSet b;
  for (int x = 0; x < n; ++x)
    if (rng.chance(50)) b.push_back(x);
  return b;
}

PointSet random_invariant(SplitMix64& rng, const Space& s) {
  PointSet z;
  for (const auto& o : s.orbits())
    if (rng.chance(50)) z = set_union(z, o);
  return z;
}

// All equivariant self-maps of a small space.
std::vector<std::vector<int>> equivariant_self_maps(const Space& s) {
  std::vector<std::vector<int>> out;
  const int n = s.size();
  std::vector<int> f(n, 0);
  while (true) {
    if (is_equivariant(s, s, f)) out.push_back(f);
    int i = 0;
    while (i < n && ++f[i] == n) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("saturation is idempotent and thickening respects composition") {
  SplitMix64 rng(101);
  for (int t = 0; t < 200; ++t) {
    GroupPtr g = pick_group(rng);
    const int n = rng.uniform(1, 6);
    ActionTable act = random_action(rng, *g, n);
    Relation r = random_relation(rng, n, 10);
    Relation s = saturate({r}, *g, act, n);
    CHECK(saturate({s}, *g, act, n) == s);
    CHECK(r.subset_of(s));
    Relation u = random_relation(rng, n, 30), v = random_relation(rng, n, 30);
    PointSet b = random_subset(rng, n);
    CHECK(thicken(compose(u, v), b) == thicken(u, thicken(v, b)));
  }
}

TEST_CASE("generated spaces validate") {
  SuiteConfig cfg;
  cfg.min_size = 2;
  cfg.max_size = 6;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Space s = gen_space(seed, cfg);
    REQUIRE(validate_space(s).all_pass());
  }
}

TEST_CASE("closeness is an equivalence relation") {
  SplitMix64 rng(7);
  for (int t = 0; t < 100; ++t) {
    Space y = gen_space(rng, pick_group(rng), 1, 5);
    const int n = rng.uniform(1, 4), m = y.size();
    std::vector<int> f(n), g(n), h(n);
    for (int x = 0; x < n; ++x) f[x] = rng.uniform(0, m - 1), g[x] = rng.uniform(0, m - 1), h[x] = rng.uniform(0, m - 1);
    CHECK(are_close(y, f, f));
    CHECK(are_close(y, f, g) == are_close(y, g, f));
    if (are_close(y, f, g) && are_close(y, g, h)) CHECK(are_close(y, f, h));
  }
}

TEST_CASE("certified equivalences are certified in both orders") {
  SplitMix64 rng(9);
  int certified = 0;
  for (int t = 0; t < 30; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 4);
    auto maps = equivariant_self_maps(s);
    for (size_t i = 0; i < maps.size() && i < 12; ++i)
      for (size_t j = 0; j < maps.size() && j < 12; ++j) {
        SpaceMap f = make_map(s, s, maps[i]), g = make_map(s, s, maps[j]);
        if (!analyze_map(f).morphism() || !analyze_map(g).morphism()) continue;
        bool fg = analyze_map(f, &g).equivalence == Verdict::Pass;
        bool gf = analyze_map(g, &f).equivalence == Verdict::Pass;
        CHECK(fg == gf);
        certified += fg;
      }
  }
  CHECK(certified > 0);
}

TEST_CASE("generated big families absorb thickening") {
  SplitMix64 rng(13);
  for (int t = 0; t < 100; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 6);
    PointSet a = random_invariant(rng, s);
    BigFamily fam = generated_family(s, a);
    CHECK(fam.stabilized);
    CHECK(thicken(s.coarseMax, fam.stages.back()) == fam.stages.back());
    for (size_t i = 1; i < fam.stages.size(); ++i) CHECK(is_subset(fam.stages[i - 1], fam.stages[i]));
    CHECK(check_big_family(s, fam).passed());
  }
}

TEST_CASE("co-Gamma-bounded exhaustions are trapping") {
  SplitMix64 rng(17);
  int co_bounded = 0;
  for (int t = 0; t < 100; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 5);
    std::vector<PointSet> fam;
    PointSet acc;
    for (const auto& o : s.orbits()) {
      acc = set_union(acc, o);
      if (rng.chance(60)) fam.push_back(acc);
    }
    if (fam.empty()) fam.push_back(acc);
    ExhaustionReport r = classify_exhaustion(s, fam);
    if (r.co_gamma_bounded) {
      ++co_bounded;
      CHECK(r.trapping);
    }
  }
  CHECK(co_bounded > 0);
}

TEST_CASE("boundaries square to zero and Smith transforms are unimodular") {
  SplitMix64 rng(19);
  for (int t = 0; t < 40; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 5);
    ChainComplex c = chain_complex(s, 3);
    for (int n = 2; n <= 3; ++n) CHECK((c.boundary[n - 1] * c.boundary[n]).is_zero());
  }
  for (int t = 0; t < 60; ++t) {
    const size_t r = rng.uniform(1, 5), k = rng.uniform(1, 5);
    DenseMatrix m(r, k);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < k; ++j) m.at(i, j) = rng.uniform(-6, 6);
    SmithResult s = smith_normal_form(m);
    CHECK(s.P * m * s.Q == s.S);
    CHECK(abs(determinant(s.P)) == 1);
    CHECK(abs(determinant(s.Q)) == 1);
    for (size_t i = 1; i < s.diagonal.size(); ++i) CHECK(s.diagonal[i] % s.diagonal[i - 1] == 0);
  }
}

TEST_CASE("homology-level axioms on random spaces") {
  SplitMix64 rng(23);
  for (int t = 0; t < 30; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 4);
    CHECK(coarse_invariance_check(s, 2).passed());
    CHECK(u_continuity_check(s, 2).passed());
    CHECK(homology(recoarsen(s, s.coarseMax), 2) == homology(s, 2));
    CHECK(homology(s, 0)[0].rank == component_orbit_count(s));
    PointSet z = random_invariant(rng, s);
    PointSet rest = set_difference(full_set(s.size()), z);
    if (!rest.empty()) CHECK(mayer_vietoris_check(s, z, generated_family(s, rest), 2).report.passed());
    std::vector<Space> family{s, gen_space(rng, s.group, 1, 3)};
    CHECK(additivity_factorization(family, 2).passed());
  }
}

TEST_CASE("close maps induce equal maps") {
  SplitMix64 rng(29);
  for (int t = 0; t < 20; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 4);
    auto maps = equivariant_self_maps(s);
    for (size_t i = 0; i < maps.size() && i < 6; ++i)
      for (size_t j = i + 1; j < maps.size() && j < 6; ++j) {
        SpaceMap f = make_map(s, s, maps[i]), g = make_map(s, s, maps[j]);
        if (!analyze_map(f).morphism() || !analyze_map(g).morphism() || !are_close(s, maps[i], maps[j])) continue;
        CHECK(close_maps_check(f, g, 2).passed());
      }
  }
}

TEST_CASE("controlled morphisms: associativity, bilinearity, biproducts") {
  SplitMix64 rng(31);
  int nontrivial = 0;
  for (int t = 0; t < 25; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 4);
    std::vector<CtrlObject> obj;
    for (int i = 0; i < 4; ++i) obj.push_back(random_ctrl_object(rng, s, 2));
    auto pick = [&](int i) {
      HomLattice h = hom_lattice(obj[i], obj[i + 1]);
      return h.rank() ? random_morphism(rng, h) : zero_morphism(obj[i], obj[i + 1]);
    };
    CtrlMorphism f = pick(0), g = pick(1), h = pick(2);
    CtrlMorphism f2 = pick(0);
    CtrlMorphism hgf = compose(h, compose(g, f));
    nontrivial += !same_blocks(hgf, zero_morphism(hgf.source, hgf.target));
    CHECK(same_blocks(compose(h, compose(g, f)), compose(compose(h, g), f)));
    CHECK(same_blocks(compose(g, add(f, f2)), add(compose(g, f), compose(g, f2))));
    CHECK(same_blocks(compose(g, scale(f, 3)), scale(compose(g, f), 3)));
    CHECK(block_support(compose(g, f)).subset_of(compose(g.control, f.control)));
    CHECK(validate_ctrl_morphism(compose(g, f)).passed());
    CHECK(biproduct_checks(direct_sum({obj[0], obj[1], obj[2]})).all_pass());
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("karoubi completion and quotient functoriality over big families") {
  SplitMix64 rng(37);
  for (int t = 0; t < 20; ++t) {
    KaroubiInstance k = random_karoubi_instance(rng, pick_group(rng));
    CHECK(karoubi_complete(k.f, k.g, k.family).report.all_pass());
  }
  for (int t = 0; t < 15; ++t) {
    Space s = gen_space(rng, pick_group(rng), 2, 4);
    BigFamily fam = generated_family(s, random_invariant(rng, s));
    CtrlObject c = random_ctrl_object(rng, s, 1), d = random_ctrl_object(rng, s, 1);
    for (size_t i = 1; i < fam.stages.size(); ++i)
      CHECK(quotient_hom_functoriality(c, d, fam.stages[i - 1], fam.stages[i]).passed());
  }
}

TEST_CASE("Rips complexes: closure, monotonicity, equivariance, discrete case") {
  SplitMix64 rng(41);
  for (int t = 0; t < 40; ++t) {
    Space s = gen_space(rng, pick_group(rng), 1, 6);
    const int n = s.size();
    Relation small = Relation::diagonal(n);
    for (auto [x, y] : s.coarseMax.pairs())
      if (rng.chance(40))
        for (int g = 0; g < s.group->order(); ++g) small.insert(s.act(g, x), s.act(g, y));
    RipsComplex a = rips_complex(s, small, 3), b = rips_complex(s, s.coarseMax, 3);
    CHECK(validate_complex(a.complex).all_pass());
    CHECK(validate_complex(b.complex).all_pass());
    for (const auto& layer : a.complex.simplices)
      for (const auto& simplex : layer) CHECK(b.complex.contains(simplex));
    RipsComplex discrete = rips_complex(s, Relation::diagonal(n), 2);
    CHECK(simplicial_homology(discrete.complex, 0)[0].rank == n);
    if (s.group->order() == 1) {
      DiracEquivalence e = dirac_equivalence(s, small);
      CHECK(e.analysis.controlled);
      CHECK(e.analysis.proper);
    }
  }
}
