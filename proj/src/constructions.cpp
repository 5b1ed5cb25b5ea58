#include "coarsex/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coarsex/error.hpp"

namespace coarsex {

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::CanMin: return "can_min";
    case SpaceKind::MinMin: return "min_min";
    case SpaceKind::MaxMax: return "max_max";
    case SpaceKind::MinMax: return "min_max";
    case SpaceKind::Metric: return "metric";
    case SpaceKind::Recoarsen: return "recoarsen";
    case SpaceKind::Subspace: return "subspace";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& s) {
  for (auto k : {SpaceKind::CanMin, SpaceKind::MinMin, SpaceKind::MaxMax, SpaceKind::MinMax, SpaceKind::Metric,
                 SpaceKind::Recoarsen, SpaceKind::Subspace})
    if (s == to_string(k)) return k;
  fail(ErrorKind::Input, "unknown space kind '" + s + "'");
}

const char* to_string(CombineKind k) {
  switch (k) {
    case CombineKind::Tensor: return "tensor";
    case CombineKind::Cartesian: return "cartesian";
    case CombineKind::Coproduct: return "coproduct";
    case CombineKind::FreeUnion: return "free_union";
    case CombineKind::FiberProduct: return "fiber_product";
    case CombineKind::PushoutExcisive: return "pushout_excisive";
    case CombineKind::CoequalizerH: return "coequalizer_H";
  }
  return "?";
}

std::vector<std::string> numbered_points(int n, const std::string& prefix) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace {

GroupPtr or_trivial(GroupPtr g) { return g ? g : make_group(FiniteGroup::trivial()); }

ActionTable or_trivial_action(ActionTable a, const FiniteGroup& g, int n) {
  return a.empty() ? trivial_action(g, n) : a;
}

std::vector<PointSet> singletons(int n) {
  std::vector<PointSet> out;
  for (int i = 0; i < n; ++i) out.push_back({i});
  return out;
}

std::vector<PointSet> whole(int n) {
  if (n == 0) return {};
  return {full_set(n)};
}

Space structured(std::vector<std::string> points, GroupPtr group, ActionTable action, bool coarse_max,
                 bool bornology_max) {
  group = or_trivial(std::move(group));
  const int n = static_cast<int>(points.size());
  action = or_trivial_action(std::move(action), *group, n);
  Relation gen = coarse_max ? Relation::full(n) : Relation::diagonal(n);
  return make_space(std::move(points), group, std::move(action), {gen}, bornology_max ? whole(n) : singletons(n));
}

PointSet bounded_union(const Space& s) {
  PointSet all;
  for (const auto& b : s.bornology) all = set_union(all, b);
  return all;
}

Relation product_relation(const Relation& a, const Relation& b) {
  const int na = a.carrier_size(), nb = b.carrier_size();
  Relation out(na * nb);
  for (auto [x, y] : a.pairs())
    for (auto [u, v] : b.pairs()) out.insert(x * nb + u, y * nb + v);
  return out;
}

void require_same_group(const Space& a, const Space& b, const char* what) {
  if (!same_group(a, b)) fail(ErrorKind::Precondition, std::string(what) + " needs spaces over the same group");
}

Space product_carrier(const Space& a, const Space& b) {
  Space s;
  s.group = a.group;
  const int na = a.size(), nb = b.size();
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) s.points.push_back("(" + a.points[i] + "," + b.points[j] + ")");
  s.action.assign(a.group->order(), std::vector<int>(na * nb));
  for (int g = 0; g < a.group->order(); ++g)
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) s.action[g][i * nb + j] = a.act(g, i) * nb + b.act(g, j);
  return s;
}

std::string failed_witnesses(const Report& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail) out += (out.empty() ? "" : "; ") + c.name + (c.witness.empty() ? "" : ": " + c.witness);
  return out;
}

}  // namespace

Space canonical_space(const GroupPtr& group) {
  const int n = group->order();
  ActionTable action(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) action[g][x] = group->mul(g, x);
  return make_space(group->names(), group, std::move(action), {Relation::full(n)}, singletons(n));
}

Space min_min(std::vector<std::string> p, GroupPtr g, ActionTable a) { return structured(std::move(p), g, a, false, false); }
Space max_max(std::vector<std::string> p, GroupPtr g, ActionTable a) { return structured(std::move(p), g, a, true, true); }
Space min_max(std::vector<std::string> p, GroupPtr g, ActionTable a) { return structured(std::move(p), g, a, false, true); }
Space max_min(std::vector<std::string> p, GroupPtr g, ActionTable a) { return structured(std::move(p), g, a, true, false); }

Space point_space(const GroupPtr& group) { return min_min({"*"}, group); }

Space metric_space(std::vector<std::string> points, GroupPtr group, ActionTable action,
                   const std::vector<std::vector<double>>& d, const std::vector<double>& scales) {
  group = or_trivial(std::move(group));
  const int n = static_cast<int>(points.size());
  action = or_trivial_action(std::move(action), *group, n);
  if (static_cast<int>(d.size()) != n) fail(ErrorKind::Precondition, "distance matrix must be n x n");
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(d[x].size()) != n) fail(ErrorKind::Precondition, "distance matrix must be n x n");
    if (d[x][x] != 0) fail(ErrorKind::Precondition, "distance matrix has a nonzero diagonal at " + points[x]);
    for (int y = 0; y < n; ++y) {
      if (std::isnan(d[x][y]) || d[x][y] < 0) fail(ErrorKind::Precondition, "distances must be nonnegative");
      if (d[x][y] != d[y][x])
        fail(ErrorKind::Precondition, "distance matrix is not symmetric at (" + points[x] + "," + points[y] + ")");
    }
  }
  if (static_cast<int>(action.size()) != group->order()) fail(ErrorKind::Domain, "action table size mismatch");
  for (int g = 0; g < group->order(); ++g)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (d[action[g][x]][action[g][y]] != d[x][y])
          fail(ErrorKind::Precondition, "distance is not invariant under " + group->name(g) + " at (" + points[x] +
                                            "," + points[y] + ")");
  if (scales.empty()) fail(ErrorKind::Precondition, "metric space needs at least one scale");
  std::vector<Relation> gens;
  for (double r : scales) {
    if (!(r >= 0) || std::isinf(r)) fail(ErrorKind::Precondition, "scales must be finite and nonnegative");
    Relation u(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (d[x][y] <= r) u.insert(x, y);
    gens.push_back(u);
  }
  return make_space(std::move(points), group, std::move(action), std::move(gens), singletons(n));
}

Space recoarsen(const Space& space, const Relation& entourage) {
  if (entourage.carrier_size() != space.size()) fail(ErrorKind::Domain, "entourage over a different carrier");
  Space s = make_space(space.points, space.group, space.action, {entourage}, space.bornology);
  Report r = validate_space(s);
  if (!r.passed()) fail(ErrorKind::Construction, "recoarsening is incompatible: " + failed_witnesses(r));
  return s;
}

Space with_maximal_bornology(const Space& space) {
  Space s = space;
  s.bornology = whole(space.size());
  return s;
}

Space build(const SpaceSpec& spec) {
  GroupPtr g = or_trivial(spec.group);
  Space s;
  switch (spec.kind) {
    case SpaceKind::CanMin: s = canonical_space(g); break;
    case SpaceKind::MinMin: s = min_min(spec.points, g, spec.action); break;
    case SpaceKind::MaxMax: s = max_max(spec.points, g, spec.action); break;
    case SpaceKind::MinMax: s = min_max(spec.points, g, spec.action); break;
    case SpaceKind::Metric: s = metric_space(spec.points, g, spec.action, spec.distance, spec.scales); break;
    case SpaceKind::Recoarsen:
      if (!spec.base) fail(ErrorKind::Precondition, "recoarsen needs a base space");
      s = recoarsen(*spec.base, spec.entourage);
      break;
    case SpaceKind::Subspace:
      if (!spec.base) fail(ErrorKind::Precondition, "subspace needs a base space");
      s = subspace(*spec.base, spec.subset);
      break;
  }
  Report r = validate_space(s);
  if (!r.passed()) fail(ErrorKind::Validation, std::string(to_string(spec.kind)) + ": " + failed_witnesses(r));
  return s;
}

Space tensor(const Space& a, const Space& b) {
  require_same_group(a, b, "tensor");
  Space s = product_carrier(a, b);
  s.coarseGenerators = {product_relation(a.coarseMax, b.coarseMax)};
  s.coarseMax = saturate(s.coarseGenerators, *s.group, s.action, s.size());
  const int nb = b.size();
  for (const auto& ba : a.bornology)
    for (const auto& bb : b.bornology) {
      PointSet p;
      for (int i : ba)
        for (int j : bb) p.push_back(i * nb + j);
      if (!p.empty()) s.bornology.push_back(normalized(p));
    }
  return s;
}

Space cartesian(const Space& a, const Space& b) {
  require_same_group(a, b, "cartesian product");
  Space s = product_carrier(a, b);
  s.coarseGenerators = {product_relation(a.coarseMax, b.coarseMax)};
  s.coarseMax = saturate(s.coarseGenerators, *s.group, s.action, s.size());
  const int na = a.size(), nb = b.size();
  for (const auto& ba : a.bornology) {
    PointSet p;
    for (int i : ba)
      for (int j = 0; j < nb; ++j) p.push_back(i * nb + j);
    if (!p.empty()) s.bornology.push_back(normalized(p));
  }
  for (const auto& bb : b.bornology) {
    PointSet p;
    for (int i = 0; i < na; ++i)
      for (int j : bb) p.push_back(i * nb + j);
    if (!p.empty()) s.bornology.push_back(normalized(p));
  }
  return s;
}

std::vector<int> summand_offsets(const std::vector<Space>& parts) {
  std::vector<int> off;
  int total = 0;
  for (const auto& p : parts) {
    off.push_back(total);
    total += p.size();
  }
  return off;
}

namespace {

Space disjoint_carrier(const std::vector<Space>& parts, const char* what) {
  if (parts.empty()) fail(ErrorKind::Precondition, std::string(what) + " needs a nonempty family");
  for (const auto& p : parts) require_same_group(parts.front(), p, what);
  auto off = summand_offsets(parts);
  Space s;
  s.group = parts.front().group;
  for (size_t i = 0; i < parts.size(); ++i)
    for (const auto& name : parts[i].points) s.points.push_back(std::to_string(i) + ":" + name);
  const int n = s.size();
  s.action.assign(s.group->order(), std::vector<int>(n));
  for (int g = 0; g < s.group->order(); ++g)
    for (size_t i = 0; i < parts.size(); ++i)
      for (int x = 0; x < parts[i].size(); ++x) s.action[g][off[i] + x] = off[i] + parts[i].act(g, x);
  for (size_t i = 0; i < parts.size(); ++i) {
    Relation u(n);
    for (auto [x, y] : parts[i].coarseMax.pairs()) u.insert(off[i] + x, off[i] + y);
    s.coarseGenerators.push_back(u);
  }
  s.coarseMax = saturate(s.coarseGenerators, *s.group, s.action, n);
  return s;
}

}  // namespace

Space coproduct(const std::vector<Space>& parts) {
  Space s = disjoint_carrier(parts, "coproduct");
  auto off = summand_offsets(parts);
  PointSet all;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int x : bounded_union(parts[i])) all.push_back(off[i] + x);
  if (!all.empty()) s.bornology.push_back(normalized(all));
  return s;
}

Space free_union(const std::vector<Space>& parts) {
  Space s = disjoint_carrier(parts, "free union");
  auto off = summand_offsets(parts);
  for (size_t i = 0; i < parts.size(); ++i)
    for (const auto& b : parts[i].bornology) {
      PointSet p;
      for (int x : b) p.push_back(off[i] + x);
      s.bornology.push_back(p);
    }
  return s;
}

Space fiber_product(const SpaceMap& f, const SpaceMap& g) {
  if (f.codomain.points != g.codomain.points || !same_group(f.codomain, g.codomain))
    fail(ErrorKind::Precondition, "fiber product needs maps into the same space");
  if (!f.equivariant || !g.equivariant) fail(ErrorKind::Precondition, "fiber product needs equivariant maps");
  Space prod = cartesian(f.domain, g.domain);
  const int nb = g.domain.size();
  PointSet sub;
  for (int a = 0; a < f.domain.size(); ++a)
    for (int b = 0; b < nb; ++b)
      if (f.assign[a] == g.assign[b]) sub.push_back(a * nb + b);
  return subspace(prod, sub);
}

Pushout pushout_excisive(const Space& space, const PointSet& first_in, const PointSet& second_in) {
  PointSet y = normalized(first_in), z = normalized(second_in);
  if (set_union(y, z) != full_set(space.size()))
    fail(ErrorKind::Precondition, "pushout pieces must cover the carrier; missing " +
                                      describe(space, set_difference(full_set(space.size()), set_union(y, z))));
  SubsetReport sr = classify_subsets(space, y, z);
  if (!sr.excisive.value_or(false))
    fail(ErrorKind::Precondition, "pair is not coarsely excisive: " + failed_witnesses(sr.report));
  Space ys = subspace(space, y), zs = subspace(space, z);
  Pushout out;
  Space& p = out.space;
  p.points = space.points;
  p.group = space.group;
  p.action = space.action;
  const int n = space.size();
  for (const auto& [part, sub] : {std::pair{&ys, &y}, std::pair{&zs, &z}}) {
    Relation u(n);
    for (auto [a, b] : part->coarseMax.pairs()) u.insert((*sub)[a], (*sub)[b]);
    p.coarseGenerators.push_back(u);
    for (const auto& b : part->bornology) {
      PointSet q;
      for (int a : b) q.push_back((*sub)[a]);
      p.bornology.push_back(normalized(q));
    }
  }
  p.coarseMax = saturate(p.coarseGenerators, *p.group, p.action, n);
  out.from_first = make_map(ys, p, y);
  out.from_second = make_map(zs, p, z);
  out.comparison = make_map(p, space, full_set(n));
  SpaceMap back = make_map(space, p, full_set(n));
  out.comparison_report = analyze_map(out.comparison, &back);
  out.report.absorb("pushout.valid", validate_space(p));
  for (const auto* m : {&out.from_first, &out.from_second}) {
    std::string w;
    bool ok = m->equivariant && is_controlled(m->domain, m->codomain, m->assign) &&
              is_proper(m->domain, m->codomain, m->assign, &w);
    out.report.add(m == &out.from_first ? "pushout.first_inclusion_morphism" : "pushout.second_inclusion_morphism", ok, w);
  }
  bool commutes = true;
  for (int x : set_intersection(y, z)) {
    int iy = static_cast<int>(std::lower_bound(y.begin(), y.end(), x) - y.begin());
    int iz = static_cast<int>(std::lower_bound(z.begin(), z.end(), x) - z.begin());
    if (out.from_first.assign[iy] != out.from_second.assign[iz]) commutes = false;
  }
  out.report.add("pushout.square_commutes", commutes);
  bool iso = out.comparison_report.morphism() && is_controlled(space, p, back.assign) &&
             is_proper(space, p, back.assign);
  out.report.add("pushout.identity_to_ambient_is_isomorphism", iso);
  return out;
}

OrbitPartition orbit_partition(const Space& space, const std::vector<int>& elements) {
  OrbitPartition part;
  const int n = space.size();
  part.class_of.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (part.class_of[x] >= 0) continue;
    PointSet orbit;
    for (int h : elements) orbit.push_back(space.act(h, x));
    orbit = normalized(orbit);
    for (int y : orbit) part.class_of[y] = static_cast<int>(part.classes.size());
    part.classes.push_back(orbit);
  }
  return part;
}

Space orbit_quotient(const Space& space, const OrbitPartition& part, const Space& bornology_source,
                     const GroupPtr& group, const std::vector<int>& acting) {
  const int m = static_cast<int>(part.classes.size());
  std::vector<std::string> names;
  for (const auto& c : part.classes) names.push_back("[" + space.points[c.front()] + "]");
  if (static_cast<int>(acting.size()) != group->order()) fail(ErrorKind::Domain, "acting elements size mismatch");
  ActionTable action(group->order(), std::vector<int>(m));
  for (int g = 0; g < group->order(); ++g)
    for (int c = 0; c < m; ++c) {
      int target = part.class_of[space.act(acting[g], part.classes[c].front())];
      for (int x : part.classes[c])
        if (part.class_of[space.act(acting[g], x)] != target)
          fail(ErrorKind::Precondition, "group element " + space.group->name(acting[g]) +
                                            " does not descend to the orbit set");
      action[g][c] = target;
    }
  Relation image(m);
  for (auto [x, y] : space.coarseMax.pairs()) image.insert(part.class_of[x], part.class_of[y]);
  PointSet bounded = bounded_union(bornology_source);
  PointSet classes_bounded;
  for (int c = 0; c < m; ++c)
    if (is_subset(part.classes[c], bounded)) classes_bounded.push_back(c);
  std::vector<PointSet> born;
  if (!classes_bounded.empty()) born.push_back(classes_bounded);
  return make_space(std::move(names), group, std::move(action), {image}, std::move(born));
}

Space completion(const Space& space, const std::vector<int>& elements) {
  Space s = space;
  s.bornology.clear();
  for (const auto& b : space.bornology) {
    PointSet c;
    for (int h : elements)
      for (int x : b) c.push_back(space.act(h, x));
    s.bornology.push_back(normalized(c));
  }
  return s;
}

Space restrict_action(const Space& space, const GroupPtr& group, const std::vector<int>& elements) {
  if (static_cast<int>(elements.size()) != group->order()) fail(ErrorKind::Domain, "restriction element map size mismatch");
  Space s;
  s.points = space.points;
  s.group = group;
  for (int g = 0; g < group->order(); ++g) s.action.push_back(space.action[elements[g]]);
  s.coarseGenerators = {space.coarseMax};
  s.coarseMax = space.coarseMax;
  s.bornology = space.bornology;
  return s;
}

Coequalizer coequalizer_H(const Space& space, const std::vector<int>& subgroup_in) {
  const FiniteGroup& G = *space.group;
  std::vector<int> h = normalized(subgroup_in);
  if (!G.is_subgroup(h)) fail(ErrorKind::Precondition, "coequalizer needs a subgroup");
  Coequalizer out;
  out.normalizer = G.normalizer(h);
  Subgroup nsub = make_subgroup(space.group, out.normalizer);
  const GroupPtr& N = nsub.group;
  const std::vector<int>& nel = nsub.inclusion.map();
  out.target = restrict_action(completion(space, h), N, nel);

  const int nx = space.size(), nh = static_cast<int>(h.size());
  Space& src = out.source;
  src.group = N;
  for (int i = 0; i < nh; ++i)
    for (int x = 0; x < nx; ++x) src.points.push_back("(" + G.name(h[i]) + "," + space.points[x] + ")");
  src.action.assign(N->order(), std::vector<int>(nh * nx));
  for (int s = 0; s < N->order(); ++s)
    for (int i = 0; i < nh; ++i) {
      int c = G.conj(nel[s], h[i]);
      int ci = static_cast<int>(std::lower_bound(h.begin(), h.end(), c) - h.begin());
      for (int x = 0; x < nx; ++x) src.action[s][i * nx + x] = ci * nx + space.act(nel[s], x);
    }
  src.coarseGenerators = {product_relation(Relation::diagonal(nh), space.coarseMax)};
  src.coarseMax = saturate(src.coarseGenerators, *N, src.action, nh * nx);
  src.bornology = whole(nh * nx);

  std::vector<int> proj(nh * nx), act(nh * nx);
  for (int i = 0; i < nh; ++i)
    for (int x = 0; x < nx; ++x) {
      proj[i * nx + x] = x;
      act[i * nx + x] = space.act(h[i], x);
    }
  out.projection_map = make_map(src, out.target, proj);
  out.action_map = make_map(src, out.target, act);
  OrbitPartition part = orbit_partition(space, h);
  out.colimit = orbit_quotient(out.target, part, out.target, N, nel);
  out.quotient = make_map(out.target, out.colimit, part.class_of);

  out.report.absorb("coequalizer.source", validate_space(src));
  for (const auto* m : {&out.projection_map, &out.action_map, &out.quotient}) {
    std::string w;
    std::pair<int, int> cw{-1, -1};
    bool ctrl = is_controlled(m->domain, m->codomain, m->assign, &cw);
    bool prop = is_proper(m->domain, m->codomain, m->assign, &w);
    std::string name = m == &out.projection_map ? "projection" : m == &out.action_map ? "action" : "quotient";
    out.report.add("coequalizer." + name + "_equivariant", m->equivariant);
    out.report.add("coequalizer." + name + "_controlled", ctrl,
                   ctrl ? "" : describe_pair(m->domain, cw.first, cw.second));
    out.report.add("coequalizer." + name + "_proper", prop, w);
  }
  bool coeq = true;
  for (int p = 0; p < nh * nx; ++p)
    if (part.class_of[proj[p]] != part.class_of[act[p]]) coeq = false;
  out.report.add("coequalizer.coequalizes", coeq);
  out.report.absorb("coequalizer.colimit", validate_space(out.colimit));
  return out;
}

QuotientAdjunction quotient_adjunction(const Space& space) {
  const FiniteGroup& G = *space.group;
  std::vector<int> all = full_set(G.order());
  QuotientAdjunction out;
  out.completion = completion(space, all);
  OrbitPartition part = orbit_partition(space, all);
  GroupPtr triv = make_group(FiniteGroup::trivial());
  out.quotient = orbit_quotient(space, part, space, triv, {G.identity()});
  Space target = out.quotient;
  target.group = space.group;
  target.action = trivial_action(G, target.size());
  out.unit = make_map(space, target, part.class_of);
  AnalyzeOptions opts;
  opts.search_bound = 0;
  out.unit_report = analyze_map(out.unit, nullptr, opts);
  return out;
}

}  // namespace coarsex
