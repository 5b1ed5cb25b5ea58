// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "coarsex/constructions.hpp"
#include "coarsex/ctrl.hpp"
#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"
#include "coarsex/group_change.hpp"
#include "coarsex/harness.hpp"
#include "coarsex/homology.hpp"
#include "coarsex/rips.hpp"
#include "oracle.hpp"

using namespace coarsex;

namespace {

GroupPtr G(const std::string& name) { return group_by_name(name); }

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

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::vector<std::vector<double>> line_metric(int n, bool cyclic) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = std::abs(i - j);
      d[i][j] = cyclic ? std::min(k, n - k) : k;
    }
  return d;
}

Relation within(const std::vector<std::vector<double>>& d, double r) {
  const int n = static_cast<int>(d.size());
  Relation u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] <= r) u.insert(i, j);
  return u;
}

bool failed_with_witness(const Report& r) {
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail && !c.witness.empty()) return true;
  return false;
}

Outcome point_homology() {
  Outcome o;
  auto h = strs(homology(point_space(G("trivial")), 4));
  o.require(h == std::vector<std::string>{"Z", "0", "0", "0", "0"}, "got " + join(h));
  return o;
}

Outcome cyclic_groups() {
  Outcome o;
  for (int n : {2, 3, 4}) {
    auto t0 = std::chrono::steady_clock::now();
    GroupPtr g = G("Z" + std::to_string(n));
    auto got = strs(homology(standard_group_complex(g, point_space(g), 4)));
    auto want = strs(oracle::cyclic_group_homology(n, {0}, 3));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(got == want, "Z" + std::to_string(n) + ": " + join(got) + " vs " + join(want));
    o.require(secs < 10, "Z" + std::to_string(n) + " exceeded 10 s");
  }
  return o;
}

Outcome comparison_maps() {
  Outcome o;
  for (const char* name : {"Z2", "Z3", "S3"}) {
    GroupPtr g = G(name);
    std::vector<Space> sets{point_space(g)};
    for (const auto& h : g->subgroup_classes()) sets.push_back(coset_space(g, h));
    for (const auto& s : sets) {
      PhiPsiReport r = phi_psi(g, s, 3);
      o.require(r.report.all_pass(), std::string(name) + " on a set of size " + std::to_string(s.size()));
    }
  }
  return o;
}

Outcome axioms() {
  Outcome o;
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.trials = 100;
  cfg.max_size = 6;
  cfg.max_degree = 2;
  Report r = axiom_suite(cfg);
  for (const auto& c : r.checks)
    o.require(c.verdict == Verdict::Pass, c.name + ": " + c.witness);
  if (o.ok) o.detail = std::to_string(r.checks.size()) + " checks";
  return o;
}

Outcome flasque() {
  Outcome o;
  ShiftFamily fam = standard_shift_family(point_space(G("trivial")));
  FlasquenessReport shift = flasqueness_check(fam, shift_endo(fam), 20);
  o.require(shift.verified(), "shift: " + shift.verdict);
  o.require(flasque_sigma_check(fam, shift_endo(fam), 10).report.all_pass(), "sigma at horizon 10");
  Space finite = min_min({"a", "b"}, G("trivial"));
  FlasquenessReport id = flasqueness_check(finite, identity_map(finite), 20);
  o.require(id.close_to_identity && id.uniformly_controlled && !id.escapes_bounded,
            "identity should fail only the escape condition");
  return o;
}

Outcome mackey() {
  Outcome o;
  for (auto [name, elems] : {std::pair<const char*, std::vector<int>>{"S3", {0, 1}}, {"Z4", {0, 2}}}) {
    Subgroup h = make_subgroup(G(name), elems);
    MackeyReport m = mackey_check(point_space(h.group), h.inclusion, h.inclusion);
    o.require(m.conjugate_into_first.certified && m.conjugate_into_second.certified,
              std::string(name) + ": " + m.conjugate_into_first.witness + m.conjugate_into_second.witness);
  }
  return o;
}

Outcome adjunction() {
  Outcome o;
  GroupPtr z2 = G("Z2"), z4 = G("Z4");
  GroupHom inc(z2, z4, {0, 2});
  SplitMix64 rng(7);
  for (int t = 0; t < 3; ++t) {
    Space x = gen_space(rng, z2, 1, 4), y = gen_space(rng, z4, 1, 4);
    AdjunctionReport a = adjunction_check(inc, x, y);
    o.require(a.report.passed() && a.counit_well_defined && a.triangle_induced && a.triangle_restricted,
              "space " + std::to_string(t));
  }
  return o;
}

Outcome rips() {
  Outcome o;
  auto d = line_metric(5, true);
  ActionTable rot(5, std::vector<int>(5));
  for (int g = 0; g < 5; ++g)
    for (int x = 0; x < 5; ++x) rot[g][x] = (x + g) % 5;
  Space c5 = metric_space(numbered_points(5), G("Z5"), rot, d, {1, 2});
  auto h1 = strs(simplicial_homology(rips_complex(c5, within(d, 1), 2).complex, 1));
  auto h2 = strs(simplicial_homology(rips_complex(c5, within(d, 2), 4).complex, 1));
  o.require(h1.size() == 2 && h1[1] == "Z", "U1: " + join(h1));
  o.require(h2.size() == 2 && h2[1] == "0", "U2: " + join(h2));

  auto b = line_metric(5, false);
  Space band = metric_space(numbered_points(5), G("trivial"), {}, b, {1});
  o.require(dirac_equivalence(band, within(b, 1)).certified(), "trivial band");
  GroupPtr z2 = G("Z2");
  Space q = min_min({"q0", "q1"}, z2, {{0, 1}, {1, 0}});
  o.require(dirac_equivalence(point_space(z2), Relation::diagonal(1), q).certified(), "Z2 point, free Q");
  return o;
}

Outcome controlled() {
  Outcome o;
  GroupPtr s3 = G("S3");
  Space x = coset_space(s3, {0, 1});
  Space conv = convolution_space(x);
  SplitMix64 rng(11);
  int sampled = 0;
  while (sampled < 10) {
    CtrlObject c = random_ctrl_object(rng, conv, 2), d = random_ctrl_object(rng, conv, 2);
    FullnessReport fr = convolution_fullness(c, d, x);
    if (fr.comparison.cols() == 0) continue;
    ++sampled;
    o.require(fr.full && fr.faithful && fr.report.all_pass(), "fullness pair " + std::to_string(sampled));
  }

  GroupPtr z2 = G("Z2");
  for (const auto& sub : z2->subgroup_classes()) {
    Space orbit = coset_space(z2, sub);
    for (int t = 0; t < 3; ++t) {
      CtrlObject c = random_ctrl_object(rng, orbit, 2);
      o.require(bh_round_trip(c, sub).report.all_pass(), "bh round trip");
    }
  }

  const std::vector<std::string> menu{"trivial", "Z2", "Z3", "S3"};
  for (int t = 0; t < 20; ++t) {
    KaroubiInstance k = random_karoubi_instance(rng, G(menu[t % menu.size()]));
    o.require(karoubi_complete(k.f, k.g, k.family).report.all_pass(), "karoubi instance " + std::to_string(t));
  }
  return o;
}

Outcome faults_detected() {
  Outcome o;
  SuiteConfig cfg;
  cfg.trials = 20;
  const std::pair<const char*, faults::Injection> cases[] = {{"flip_boundary_sign", {true, false, false}},
                                                            {"drop_entourage_pair", {false, true, false}},
                                                            {"break_cocycle", {false, false, true}}};
  for (const auto& [name, inj] : cases) {
    faults::Scope scope(inj);
    o.require(failed_with_witness(axiom_suite(cfg)), std::string(name) + " went undetected");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {{1, 1, point_homology}, {2, 30, cyclic_groups}, {3, 60, comparison_maps},
                                {4, 300, axioms},       {5, 10, flasque},       {6, 5, mackey},
                                {7, 5, adjunction},     {8, 5, rips},           {9, 60, controlled},
                                {10, 300, faults_detected}};
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("raised: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= c.limit) {
      o.ok = false;
      o.detail = "time limit " + std::to_string(c.limit) + " s exceeded";
    }
    failures += !o.ok;
    std::printf("criterion %d: %s (%.3f s)%s%s\n", c.id, o.ok ? "PASS" : "FAIL", secs, o.detail.empty() ? "" : " ",
                o.detail.c_str());
  }
  return failures ? 1 : 0;
}
