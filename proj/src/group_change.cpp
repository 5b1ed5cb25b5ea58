#include "coarsex/group_change.hpp"

#include <algorithm>

#include "coarsex/error.hpp"

namespace coarsex {

const char* to_string(ChangeKind k) {
  switch (k) {
    case ChangeKind::Res: return "res";
    case ChangeKind::Bh: return "bh";
    case ChangeKind::Qh: return "qh";
    case ChangeKind::Ind: return "ind";
  }
  return "?";
}

ChangeKind change_kind_from_string(const std::string& s) {
  for (auto k : {ChangeKind::Res, ChangeKind::Bh, ChangeKind::Qh, ChangeKind::Ind})
    if (s == to_string(k)) return k;
  fail(ErrorKind::Input, "unknown change-of-group kind '" + s + "'");
}

namespace {

int index_in(const std::vector<int>& sorted, int g) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), g);
  if (it == sorted.end() || *it != g) return -1;
  return static_cast<int>(it - sorted.begin());
}

void require_group(const Space& s, const GroupPtr& g, const char* what) {
  if (!s.group->same_as(*g)) fail(ErrorKind::Precondition, std::string(what) + ": space is over the wrong group");
}

}  // namespace

Corestriction corestrict(const GroupHom& hom) {
  Subgroup image = make_subgroup(hom.target(), hom.image());
  const auto& elems = image.inclusion.map();
  std::vector<int> onto(hom.source()->order());
  for (int h = 0; h < hom.source()->order(); ++h) onto[h] = index_in(elems, hom(h));
  return Corestriction{image, GroupHom(hom.source(), image.group, onto)};
}

WeylData weyl_data(const GroupHom& hom) {
  const GroupPtr& G = hom.target();
  Subgroup n = make_subgroup(G, G->normalizer(hom.image()));
  std::vector<int> inside;
  for (int g : hom.image()) inside.push_back(index_in(n.inclusion.map(), g));
  Quotient w = make_quotient(n.group, inside);
  std::vector<int> acting;
  for (int r : w.representative) acting.push_back(n.inclusion(r));
  return WeylData{n, w, acting, inside};
}

Space restrict_along(const Space& space, const GroupHom& hom) {
  require_group(space, hom.target(), "restriction");
  return restrict_action(space, hom.source(), hom.map());
}

Space complete_along(const Space& space, const GroupHom& hom) {
  require_group(space, hom.target(), "completion");
  WeylData wd = weyl_data(hom);
  return restrict_action(completion(space, hom.image()), wd.normalizer.group, wd.normalizer.inclusion.map());
}

Space quotient_along(const Space& space, const GroupHom& hom) {
  require_group(space, hom.target(), "quotient");
  WeylData wd = weyl_data(hom);
  return orbit_quotient(space, orbit_partition(space, hom.image()), completion(space, hom.image()), wd.weyl.group,
                        wd.weyl_acting);
}

Induced induce(const Space& space, const GroupHom& hom) {
  require_group(space, hom.source(), "induction");
  const FiniteGroup& G = *hom.target();
  const FiniteGroup& H = *hom.source();
  Induced out;
  const int nx = space.size(), ng = G.order();
  out.base_size = nx;
  out.class_of.assign(ng * nx, -1);
  for (int p = 0; p < ng * nx; ++p) {
    if (out.class_of[p] >= 0) continue;
    int g = p / nx, x = p % nx;
    std::vector<int> mem;
    for (int h = 0; h < H.order(); ++h) mem.push_back(G.mul(g, G.inv(hom(h))) * nx + space.act(h, x));
    std::sort(mem.begin(), mem.end());
    mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
    for (int q : mem) out.class_of[q] = static_cast<int>(out.members.size());
    out.members.push_back(mem);
  }
  const int m = static_cast<int>(out.members.size());
  std::vector<std::string> names;
  for (const auto& mem : out.members)
    names.push_back("[" + G.name(mem.front() / nx) + "," + space.points[mem.front() % nx] + "]");
  ActionTable action(ng, std::vector<int>(m));
  for (int a = 0; a < ng; ++a)
    for (int c = 0; c < m; ++c) {
      int p = out.members[c].front();
      action[a][c] = out.cls(G.mul(a, p / nx), p % nx);
    }
  Relation gen(m);
  for (auto [x, y] : space.coarseMax.pairs())
    for (int g = 0; g < ng; ++g) gen.insert(out.cls(g, x), out.cls(g, y));
  std::vector<PointSet> born;
  for (int g = 0; g < ng; ++g)
    for (const auto& b : space.bornology) {
      PointSet img;
      for (int x : b) img.push_back(out.cls(g, x));
      born.push_back(normalized(img));
    }
  out.space = make_space(std::move(names), hom.target(), std::move(action), {gen}, std::move(born));
  return out;
}

Space change_group(ChangeKind kind, const Space& space, const GroupHom& hom) {
  switch (kind) {
    case ChangeKind::Res: return restrict_along(space, hom);
    case ChangeKind::Bh: return complete_along(space, hom);
    case ChangeKind::Qh: return quotient_along(space, hom);
    case ChangeKind::Ind: return induce(space, hom).space;
  }
  fail(ErrorKind::Unsupported, "unknown change-of-group kind");
}

SpaceMap induce_map(const SpaceMap& f, const GroupHom& hom, const Induced& source, const Induced& target) {
  if (!f.equivariant) fail(ErrorKind::Precondition, "induction of a non-equivariant map");
  std::vector<int> assign;
  for (const auto& mem : source.members) {
    int p = mem.front();
    assign.push_back(target.cls(source.element(p), f.assign[source.base_point(p)]));
  }
  (void)hom;
  return make_map(source.space, target.space, assign);
}

namespace {
std::string joined(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "." + name;
}
}  // namespace

Report morphism_checks(const SpaceMap& f, const std::string& prefix) {
  Report r;
  r.add(joined(prefix, "equivariant"), f.equivariant);
  std::pair<int, int> p{-1, -1};
  bool ctrl = is_controlled(f.domain, f.codomain, f.assign, &p);
  r.add(joined(prefix, "controlled"), ctrl, ctrl ? "" : describe_pair(f.domain, p.first, p.second));
  std::string w;
  bool prop = is_proper(f.domain, f.codomain, f.assign, &w);
  r.add(joined(prefix, "proper"), prop, w);
  return r;
}

Report isomorphism_checks(const SpaceMap& f, const SpaceMap& g, const std::string& prefix) {
  Report r;
  r.absorb(joined(prefix, "forward"), morphism_checks(f, ""));
  r.absorb(joined(prefix, "backward"), morphism_checks(g, ""));
  bool inverse = f.assign.size() == g.domain.points.size() && g.assign.size() == f.domain.points.size();
  for (size_t x = 0; inverse && x < f.assign.size(); ++x)
    if (g.assign[f.assign[x]] != static_cast<int>(x)) inverse = false;
  for (size_t y = 0; inverse && y < g.assign.size(); ++y)
    if (f.assign[g.assign[y]] != static_cast<int>(y)) inverse = false;
  r.add(joined(prefix, "mutually_inverse"), inverse);
  return r;
}

namespace {

struct MackeyContext {
  const Space& x;
  GroupPtr G;
  Corestriction first, second;
  Induced inner;     // Ind from H to the first image
  Induced left_ind;  // Ind from H to Gamma
  Space left;
};

MackeyOrientation build_orientation(const MackeyContext& ctx, const std::vector<int>& reps, bool into_first) {
  const FiniteGroup& G = *ctx.G;
  const auto& hb = ctx.first.image.inclusion.map();
  const auto& hb2 = ctx.second.image.inclusion.map();
  MackeyOrientation o;
  o.name = into_first ? "conjugate_into_first" : "conjugate_into_second";
  std::vector<Space> summands;
  std::vector<Induced> outer;
  for (int g : reps) {
    std::vector<int> l;
    if (into_first) {
      for (int a : hb2)
        if (index_in(hb, G.mul(G.mul(G.inv(g), a), g)) >= 0) l.push_back(a);
    } else {
      for (int a : hb)
        if (index_in(hb2, G.mul(G.mul(g, a), G.inv(g))) >= 0) l.push_back(a);
    }
    Subgroup ls = make_subgroup(ctx.G, l);
    const auto& le = ls.inclusion.map();
    std::vector<int> to_first, to_second;
    for (int a : le) {
      if (into_first) {
        to_first.push_back(index_in(hb, G.mul(G.mul(G.inv(g), a), g)));
        to_second.push_back(index_in(hb2, a));
      } else {
        to_first.push_back(index_in(hb, a));
        to_second.push_back(index_in(hb2, G.mul(G.mul(g, a), G.inv(g))));
      }
    }
    Space z = restrict_along(ctx.inner.space, GroupHom(ls.group, ctx.first.image.group, to_first));
    Induced w = induce(z, GroupHom(ls.group, ctx.second.image.group, to_second));
    summands.push_back(restrict_along(w.space, ctx.second.onto));
    outer.push_back(w);
    o.subgroup_orders.push_back(ls.group->order());
  }
  o.right = coproduct(summands);
  auto off = summand_offsets(summands);
  std::vector<int> assign(o.right.size(), -1);
  o.well_defined = true;
  for (size_t i = 0; i < reps.size(); ++i) {
    const Induced& w = outer[i];
    for (size_t c = 0; c < w.members.size(); ++c) {
      int value = -1;
      for (int p : w.members[c]) {
        int h2 = hb2[w.element(p)];
        for (int q : ctx.inner.members[w.base_point(p)]) {
          int h1 = hb[ctx.inner.element(q)];
          int target = ctx.left_ind.cls(G.mul(G.mul(h2, reps[i]), h1), ctx.inner.base_point(q));
          if (value < 0) value = target;
          if (value != target && o.well_defined) {
            o.well_defined = false;
            o.witness = "representatives of " + o.right.points[off[i] + c] + " map to " + ctx.left.points[value] +
                        " and " + ctx.left.points[target];
          }
        }
      }
      assign[off[i] + c] = value;
    }
  }
  std::vector<int> inverse(ctx.left.size(), -1);
  o.bijective = o.right.size() == ctx.left.size();
  for (int p = 0; o.bijective && p < o.right.size(); ++p) {
    if (inverse[assign[p]] >= 0) {
      o.bijective = false;
      if (o.witness.empty()) o.witness = "two points map to " + ctx.left.points[assign[p]];
    }
    inverse[assign[p]] = p;
  }
  if (!o.bijective && o.witness.empty())
    o.witness = "carrier sizes " + std::to_string(o.right.size()) + " and " + std::to_string(ctx.left.size());
  o.bijection = make_map(o.right, ctx.left, assign);
  if (o.well_defined && o.bijective) {
    SpaceMap back = make_map(ctx.left, o.right, inverse);
    o.forward = analyze_map(o.bijection, &back);
    o.backward = analyze_map(back, &o.bijection);
    o.certified = o.forward.equivalence == Verdict::Pass && o.backward.equivalence == Verdict::Pass;
    if (!o.certified) o.witness = "bijection is not an isomorphism of bornological coarse spaces";
  }
  return o;
}

}  // namespace

MackeyReport mackey_check(const Space& space, const GroupHom& hom, const GroupHom& other) {
  if (!hom.target()->same_as(*other.target())) fail(ErrorKind::Precondition, "Mackey check needs a common target group");
  require_group(space, hom.source(), "Mackey check");
  const GroupPtr& G = hom.target();
  MackeyContext ctx{space, G, corestrict(hom), corestrict(other), {}, {}, {}};
  ctx.inner = induce(space, ctx.first.onto);
  ctx.left_ind = induce(space, hom);
  ctx.left = restrict_along(ctx.left_ind.space, other);

  MackeyReport r;
  std::vector<int> seen(G->order(), -1);
  for (int g = 0; g < G->order(); ++g) {
    if (seen[g] >= 0) continue;
    std::vector<int> dc;
    for (int a : other.image())
      for (int b : hom.image()) dc.push_back(G->mul(G->mul(a, g), b));
    dc = normalized(dc);
    for (int d : dc) seen[d] = static_cast<int>(r.representatives.size());
    r.representatives.push_back(g);
    r.double_cosets.push_back(dc);
  }
  r.left = ctx.left;
  r.conjugate_into_first = build_orientation(ctx, r.representatives, true);
  r.conjugate_into_second = build_orientation(ctx, r.representatives, false);
  for (const auto* o : {&r.conjugate_into_first, &r.conjugate_into_second}) {
    r.report.add("mackey." + o->name + ".well_defined", o->well_defined, o->well_defined ? "" : o->witness);
    r.report.add("mackey." + o->name + ".bijective", o->bijective, o->bijective ? "" : o->witness);
    r.report.add("mackey." + o->name + ".isomorphism", o->certified, o->certified ? "" : o->witness);
  }
  r.report.add("mackey.some_orientation_certified", r.certified(),
               r.certified() ? "" : "both orientations fail; flagged");
  return r;
}

AdjunctionReport adjunction_check(const GroupHom& hom, const Space& x, const Space& y) {
  require_group(x, hom.source(), "adjunction check (first space)");
  require_group(y, hom.target(), "adjunction check (second space)");
  const FiniteGroup& G = *hom.target();
  AdjunctionReport r;

  Induced ind_x = induce(x, hom);
  Space res_ind_x = restrict_along(ind_x.space, hom);
  std::vector<int> unit(x.size());
  for (int p = 0; p < x.size(); ++p) unit[p] = ind_x.cls(G.identity(), p);
  r.unit = make_map(x, res_ind_x, unit);
  r.report.absorb("unit", morphism_checks(r.unit, ""));

  Space res_y = restrict_along(y, hom);
  Induced ind_res_y = induce(res_y, hom);
  std::vector<int> counit(ind_res_y.members.size());
  r.counit_well_defined = true;
  for (size_t c = 0; c < ind_res_y.members.size(); ++c) {
    counit[c] = -1;
    for (int p : ind_res_y.members[c]) {
      int v = y.act(ind_res_y.element(p), ind_res_y.base_point(p));
      if (counit[c] >= 0 && counit[c] != v) r.counit_well_defined = false;
      counit[c] = v;
    }
  }
  r.report.add("counit.well_defined", r.counit_well_defined);
  r.counit = make_map(ind_res_y.space, y, counit);
  r.report.absorb("counit", morphism_checks(r.counit, ""));

  // Ind X -> Ind Res Ind X -> Ind X
  Induced ind_res_ind_x = induce(res_ind_x, hom);
  SpaceMap ind_unit = induce_map(r.unit, hom, ind_x, ind_res_ind_x);
  r.triangle_induced = true;
  for (int c = 0; c < ind_x.space.size(); ++c) {
    int p = ind_res_ind_x.members[ind_unit.assign[c]].front();
    int back = ind_x.space.act(ind_res_ind_x.element(p), ind_res_ind_x.base_point(p));
    if (back != c) r.triangle_induced = false;
  }
  r.report.add("triangle.induced_side", r.triangle_induced);

  // Res Y -> Res Ind Res Y -> Res Y
  r.triangle_restricted = true;
  for (int p = 0; p < y.size(); ++p)
    if (counit[ind_res_y.cls(G.identity(), p)] != p) r.triangle_restricted = false;
  r.report.add("triangle.restricted_side", r.triangle_restricted);
  return r;
}

Report induction_kernel_certificate(const Space& space, const GroupHom& hom) {
  Induced a = induce(space, hom);
  Induced b = induce(completion(space, hom.kernel()), hom);
  Report r;
  r.add("ind_kernel.same_carrier", a.space.points == b.space.points);
  if (a.space.points != b.space.points) return r;
  const auto id = full_set(a.space.size());
  r.absorb("ind_kernel", isomorphism_checks(make_map(a.space, b.space, id), make_map(b.space, a.space, id), ""));
  return r;
}

Report completion_restriction_certificate(const Space& space, const GroupHom& hom) {
  WeylData wd = weyl_data(hom);
  Space a = complete_along(space, hom);
  Space b = restrict_action(space, wd.normalizer.group, wd.normalizer.inclusion.map());
  const auto id = full_set(space.size());
  Report r;
  r.absorb("completion_restriction", isomorphism_checks(make_map(a, b, id), make_map(b, a, id), ""));
  return r;
}

Report quotient_coequalizer_certificate(const Space& space, const GroupHom& hom) {
  WeylData wd = weyl_data(hom);
  Space q = quotient_along(space, hom);
  Space rq = restrict_action(q, wd.normalizer.group, wd.weyl.projection.map());
  Coequalizer c = coequalizer_H(space, hom.image());
  Report r;
  r.absorb("quotient_coequalizer", c.report);
  r.add("quotient_coequalizer.same_carrier", rq.points == c.colimit.points);
  if (rq.points != c.colimit.points) return r;
  const auto id = full_set(rq.size());
  r.absorb("quotient_coequalizer",
           isomorphism_checks(make_map(rq, c.colimit, id), make_map(c.colimit, rq, id), ""));
  return r;
}

}  // namespace coarsex
