#include "coarsex/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/homology.hpp"

namespace coarsex {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int SplitMix64::uniform(int lo, int hi) {
  if (hi < lo) fail(ErrorKind::Domain, "empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

ActionTable random_action(SplitMix64& rng, const FiniteGroup& g, int n) {
  auto subs = g.subgroups();
  ActionTable action(g.order(), std::vector<int>(n));
  int filled = 0;
  while (filled < n) {
    std::vector<const std::vector<int>*> fits;
    for (const auto& k : subs)
      if (g.order() / static_cast<int>(k.size()) <= n - filled) fits.push_back(&k);
    const std::vector<int>& k = *fits[rng.uniform(0, static_cast<int>(fits.size()) - 1)];
    // Cosets gK in order of first appearance.
    std::vector<int> coset(g.order(), -1);
    std::vector<int> reps;
    for (int a = 0; a < g.order(); ++a) {
      if (coset[a] >= 0) continue;
      for (int h : k) coset[g.mul(a, h)] = static_cast<int>(reps.size());
      reps.push_back(a);
    }
    for (int a = 0; a < g.order(); ++a)
      for (size_t c = 0; c < reps.size(); ++c) action[a][filled + c] = filled + coset[g.mul(a, reps[c])];
    filled += static_cast<int>(reps.size());
  }
  return action;
}

Space gen_space(SplitMix64& rng, const GroupPtr& group, int min_size, int max_size) {
  const int n = rng.uniform(min_size, max_size);
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back("p" + std::to_string(i));
  ActionTable action = random_action(rng, *group, n);
  std::vector<Relation> gens;
  const int k = rng.uniform(0, 3);
  for (int i = 0; i < k; ++i) {
    Relation r(n);
    const int pairs = rng.uniform(1, 2);
    for (int j = 0; j < pairs; ++j) r.insert(rng.uniform(0, n - 1), rng.uniform(0, n - 1));
    gens.push_back(r);
  }
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<PointSet> born;
    switch (rng.uniform(0, 2)) {
      case 0:
        for (int x = 0; x < n; ++x) born.push_back({x});
        break;
      case 1:
        born.push_back(full_set(n));
        break;
      default: {
        for (int x = 0; x < n; ++x) born.push_back({x});
        Relation full = saturate(gens, *group, action, n);
        born.push_back(full.row(rng.uniform(0, n - 1)));
      }
    }
    Space s = make_space(points, group, action, gens, born);
    if (validate_space(s).passed()) return s;
  }
  std::vector<PointSet> born;
  for (int x = 0; x < n; ++x) born.push_back({x});
  return make_space(points, group, action, gens, born);
}

Space gen_space(std::uint64_t seed, const SuiteConfig& cfg) {
  if (cfg.groups.empty() || cfg.min_size < 1 || cfg.max_size < cfg.min_size)
    fail(ErrorKind::Precondition, "invalid suite configuration");
  SplitMix64 rng(seed);
  GroupPtr g = group_by_name(cfg.groups[rng.uniform(0, static_cast<int>(cfg.groups.size()) - 1)]);
  return gen_space(rng, g, cfg.min_size, cfg.max_size);
}

DenseMatrix random_unimodular(SplitMix64& rng, int n, DenseMatrix* inverse) {
  DenseMatrix m = DenseMatrix::identity(n), inv = DenseMatrix::identity(n);
  if (n >= 2)
    for (int step = 0; step < 2 * n; ++step) {
      int i = rng.uniform(0, n - 1), j = rng.uniform(0, n - 2);
      if (j >= i) ++j;
      int f = rng.uniform(1, 2) * (rng.chance(50) ? 1 : -1);
      m.add_row_multiple(i, j, f);        // E m
      inv.add_col_multiple(j, i, -f);     // inv E^-1
    }
  if (n >= 1 && rng.chance(50)) {
    int i = rng.uniform(0, n - 1);
    m.negate_row(i);
    inv.negate_col(i);
  }
  if (inverse) *inverse = inv;
  return m;
}

CtrlObject random_ctrl_object(SplitMix64& rng, const Space& space, int max_rank) {
  std::vector<CtrlObject> parts{zero_object(space)};
  for (const auto& orbit : space.orbits()) {
    int r = rng.uniform(0, max_rank);
    if (r == 0) continue;
    int m = orbit.front();
    auto stab = space.stabilizer(m);
    std::sort(stab.begin(), stab.end());
    parts.push_back(induced_object(space, m, trivial_representation(space.group, stab, r)));
  }
  CtrlObject c = direct_sum(parts).sum;
  std::vector<DenseMatrix> frames, inverses;
  for (int x = 0; x < space.size(); ++x) {
    DenseMatrix inv;
    frames.push_back(random_unimodular(rng, c.dims[x], &inv));
    inverses.push_back(inv);
  }
  return twist(c, frames, inverses);
}

CtrlMorphism random_morphism(SplitMix64& rng, const HomLattice& hom, int range) {
  std::vector<Int> coords(hom.rank());
  for (auto& v : coords) v = rng.uniform(-range, range);
  return hom.morphism(coords);
}

KaroubiInstance random_karoubi_instance(SplitMix64& rng, const GroupPtr& group, int horizon) {
  Space base = gen_space(rng, group, 1, 3);
  ShiftFamily fam = standard_shift_family(base, rng.uniform(1, 2));
  KaroubiInstance k;
  k.space = shift_window(fam, horizon);
  const int width = base.size();
  k.family = generated_family(k.space, full_set(width));
  const PointSet& first = k.family.stages.front();
  CtrlObject a = restrict_to(random_ctrl_object(rng, k.space, 2), first);
  CtrlObject c = random_ctrl_object(rng, k.space, 2);
  CtrlObject b = restrict_to(random_ctrl_object(rng, k.space, 2), first);
  Relation step = step_entourage(k.space);
  HomLattice ac = hom_lattice(a, c, step), cb = hom_lattice(c, b, step);
  k.f = ac.rank() ? random_morphism(rng, ac) : zero_morphism(a, c);
  k.g = cb.rank() ? random_morphism(rng, cb) : zero_morphism(c, b);
  return k;
}

int component_orbit_count(const Space& space) {
  const int n = space.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  };
  for (const auto& gen : space.coarseGenerators)
    for (auto [x, y] : gen.pairs())
      for (int g = 0; g < space.group->order(); ++g) unite(space.act(g, x), space.act(g, y));
  // Orbits of components: also join each point with its translates.
  for (int x = 0; x < n; ++x)
    for (int g = 0; g < space.group->order(); ++g) unite(x, space.act(g, x));
  int count = 0;
  for (int x = 0; x < n; ++x) count += find(x) == x;
  return count;
}

namespace {

std::string first_failure(const Report& r) {
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail) return c.name + (c.witness.empty() ? "" : ": " + c.witness);
  return {};
}

class Recorder {
 public:
  explicit Recorder(Report& out) : out_(out) {}

  void run(const std::string& name, const std::function<Report()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    c.name = name;
    try {
      Report r = body();
      c.verdict = r.passed() ? Verdict::Pass : Verdict::Fail;
      c.witness = first_failure(r);
    } catch (const std::exception& e) {
      c.verdict = Verdict::Fail;
      c.witness = std::string("raised: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out_.add(std::move(c));
  }

 private:
  Report& out_;
};

std::string trial_id(int t) {
  std::string s = std::to_string(t);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

PointSet random_invariant_subset(SplitMix64& rng, const Space& s) {
  PointSet z;
  for (const auto& orbit : s.orbits())
    if (rng.chance(50)) z = set_union(z, orbit);
  return z;
}

}  // namespace

Report axiom_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) fail(ErrorKind::Precondition, "trials must be positive");
  if (cfg.max_degree < 0 || cfg.max_degree > 4) fail(ErrorKind::Precondition, "degree must lie in 0..4");
  Report out;
  Recorder rec(out);
  SplitMix64 master(cfg.seed);
  const int deg = cfg.max_degree;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::string id = "/" + trial_id(t);
    const std::uint64_t trial_seed = master.next();
    SplitMix64 rng(trial_seed ^ 0x5DEECE66DULL);
    Space x;
    try {
      x = gen_space(trial_seed, cfg);
    } catch (const std::exception& e) {
      out.add("generate" + id, false, std::string("raised: ") + e.what());
      continue;
    }
    out.add("generate" + id, validate_space(x).passed(), first_failure(validate_space(x)));
    rec.run("coarse_invariance" + id, [&] { return coarse_invariance_check(x, deg); });
    PointSet z = random_invariant_subset(rng, x);
    rec.run("mayer_vietoris" + id, [&] {
      PointSet rest = set_difference(full_set(x.size()), z);
      PointSet zz = rest.empty() ? PointSet{} : z;
      BigFamily fam = generated_family(x, rest.empty() ? full_set(x.size()) : rest);
      return mayer_vietoris_check(x, zz, fam, deg).report;
    });
    rec.run("u_continuity" + id, [&] { return u_continuity_check(x, deg); });
    rec.run("continuity" + id, [&] { return hx_cont(x, deg).report; });
    rec.run("additivity" + id, [&] {
      std::vector<Space> family;
      const int parts = rng.uniform(1, 3);
      for (int i = 0; i < parts; ++i) family.push_back(gen_space(rng, x.group, 1, 3));
      return additivity_factorization(family, deg);
    });
    rec.run("components" + id, [&] {
      Report r;
      auto h = homology(x, 0);
      int expect = component_orbit_count(x);
      bool ok = h[0].rank == expect && h[0].torsion.empty();
      r.add("h0_counts_component_orbits", ok, ok ? "" : "H0 = " + h[0].str() + ", expected rank " + std::to_string(expect));
      return r;
    });
    rec.run("flasque" + id, [&] {
      Report r;
      ShiftFamily fam = standard_shift_family(x);
      ShiftEndo f = shift_endo(fam);
      r.absorb("shift", flasqueness_check(fam, f, cfg.flasque_horizon).report);
      r.absorb("sigma", flasque_sigma_check(fam, f, cfg.sigma_horizon).report);
      auto id_report = flasqueness_check(x, identity_map(x), cfg.flasque_horizon);
      r.add("identity_fails_escape", !id_report.escapes_bounded);
      return r;
    });
    if (cfg.ctrl) {
      rec.run("ctrl" + id, [&] {
        Report r;
        CtrlObject c = random_ctrl_object(rng, x, 2), d = random_ctrl_object(rng, x, 2);
        r.absorb("C", validate_ctrl_object(c));
        r.absorb("D", validate_ctrl_object(d));
        r.absorb("sum", biproduct_checks(direct_sum({c, d})));
        HomLattice hom = hom_lattice(c, d);
        bool valid = true;
        for (const auto& g : hom.generators) valid = valid && validate_ctrl_morphism(g).passed();
        r.add("hom.generators_valid", valid);
        if (hom.rank() > 0) {
          CtrlMorphism f = random_morphism(rng, hom);
          auto coords = hom.coordinates(f);
          r.add("hom.coordinates_round_trip", coords && hom.morphism(*coords).blocks == f.blocks);
        }
        return r;
      });
    }
  }
  if (cfg.phi_psi) {
    for (const auto& name : cfg.groups) {
      GroupPtr g = group_by_name(name);
      std::vector<std::pair<std::string, std::vector<int>>> sets;
      for (const auto& k : g->subgroup_classes()) sets.emplace_back("G/" + std::to_string(k.size()), k);
      for (const auto& [label, k] : sets)
        rec.run("phi_psi/" + name + "." + label, [&, k = k] {
          return phi_psi(g, coset_space(g, k), deg).report;
        });
    }
  }
  std::stable_sort(out.checks.begin(), out.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  return out;
}

}  // namespace coarsex
