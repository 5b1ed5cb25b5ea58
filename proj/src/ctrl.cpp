#include "coarsex/ctrl.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"

namespace coarsex {

namespace {

DenseMatrix zeros(size_t r, size_t c) { return DenseMatrix(r, c); }

int inv_act(const Space& s, int g, int x) { return s.act(s.group->inv(g), x); }

std::string pt(const Space& s, int x) { return s.points[x]; }

bool same_carrier(const Space& a, const Space& b) {
  return a.points == b.points && a.group->same_as(*b.group) && a.action == b.action;
}

bool same_object(const CtrlObject& a, const CtrlObject& b) {
  return same_carrier(a.space, b.space) && a.dims == b.dims && a.cocycle == b.cocycle;
}

void require_same(const CtrlObject& a, const CtrlObject& b, const std::string& what) {
  if (!same_object(a, b)) fail(ErrorKind::Precondition, what + ": objects do not match");
}

std::vector<std::vector<DenseMatrix>> identity_cocycle(const Space& s, const std::vector<int>& dims) {
  std::vector<std::vector<DenseMatrix>> rho(s.group->order(), std::vector<DenseMatrix>(s.size()));
  for (int g = 0; g < s.group->order(); ++g)
    for (int x = 0; x < s.size(); ++x) rho[g][x] = DenseMatrix::identity(dims[x]);
  return rho;
}

PointSet support_from_dims(const std::vector<int>& dims) {
  PointSet out;
  for (size_t x = 0; x < dims.size(); ++x)
    if (dims[x] > 0) out.push_back(static_cast<int>(x));
  return out;
}

// Invariant closure of a relation under the diagonal action.
Relation translates(const Space& s, const Relation& r) {
  Relation out(s.size());
  for (auto [y, x] : r.pairs())
    for (int g = 0; g < s.group->order(); ++g) out.insert(s.act(g, y), s.act(g, x));
  return out;
}

DenseMatrix block_diag(const std::vector<DenseMatrix>& parts) {
  size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  DenseMatrix out(r, c);
  size_t ro = 0, co = 0;
  for (const auto& p : parts) {
    for (size_t i = 0; i < p.rows(); ++i)
      for (size_t j = 0; j < p.cols(); ++j) out.at(ro + i, co + j) = p.at(i, j);
    ro += p.rows();
    co += p.cols();
  }
  return out;
}

void put(DenseMatrix& dst, size_t r0, size_t c0, const DenseMatrix& src) {
  for (size_t i = 0; i < src.rows(); ++i)
    for (size_t j = 0; j < src.cols(); ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
}

}  // namespace

int CtrlObject::rank(const PointSet& b) const {
  int r = 0;
  for (int x : b) r += dims[x];
  return r;
}

PointSet CtrlObject::support_of(const PointSet& b) const { return set_intersection(support, b); }

Report validate_ctrl_object(const CtrlObject& c) {
  Report r;
  const Space& s = c.space;
  const FiniteGroup& G = *s.group;
  const int n = s.size();
  bool shape = static_cast<int>(c.dims.size()) == n && static_cast<int>(c.cocycle.size()) == G.order();
  for (const auto& row : c.cocycle) shape = shape && static_cast<int>(row.size()) == n;
  r.add("ctrl_object.shape", shape);
  if (!shape) return r;
  r.add("ctrl_object.support_invariant", s.is_invariant(c.support));
  std::string w;
  for (int x = 0; x < n && w.empty(); ++x) {
    bool inside = std::binary_search(c.support.begin(), c.support.end(), x);
    if (c.dims[x] < 0 || (!inside && c.dims[x] != 0)) w = "rank " + std::to_string(c.dims[x]) + " at " + pt(s, x);
  }
  r.add("ctrl_object.dims_on_support", w.empty(), w);
  w.clear();
  for (int g = 0; g < G.order() && w.empty(); ++g)
    for (int x = 0; x < n && w.empty(); ++x)
      if (c.dims[inv_act(s, g, x)] != c.dims[x]) w = "rank differs between " + pt(s, x) + " and its translate by " + G.name(g);
  r.add("ctrl_object.orbit_constant", w.empty(), w);
  if (!w.empty()) return r;
  w.clear();
  for (int g = 0; g < G.order() && w.empty(); ++g)
    for (int x = 0; x < n && w.empty(); ++x) {
      const auto& m = c.rho(g, x);
      if (static_cast<int>(m.rows()) != c.dims[inv_act(s, g, x)] || static_cast<int>(m.cols()) != c.dims[x])
        w = "rho(" + G.name(g) + ") at " + pt(s, x) + " has the wrong shape";
    }
  r.add("ctrl_object.cocycle_shapes", w.empty(), w);
  if (!w.empty()) return r;
  w.clear();
  for (int x = 0; x < n && w.empty(); ++x)
    if (!c.rho(G.identity(), x).is_identity()) w = "rho(e) is not the identity at " + pt(s, x);
  r.add("ctrl_object.unit", w.empty(), w);
  w.clear();
  for (int g = 0; g < G.order() && w.empty(); ++g)
    for (int h = 0; h < G.order() && w.empty(); ++h)
      for (int x = 0; x < n && w.empty(); ++x) {
        if (c.dims[x] == 0) continue;
        if (c.rho(G.mul(g, h), x) != c.rho(h, inv_act(s, g, x)) * c.rho(g, x))
          w = "(" + G.name(g) + "," + G.name(h) + "," + pt(s, x) + ")";
      }
  r.add("ctrl_object.cocycle_law", w.empty(), w);
  // Finite carrier: the support is finite, and sigma(B) = support meets B carries all of A(B).
  r.add("ctrl_object.locally_finite", true);
  w.clear();
  for (const auto& b : s.bornology)
    if (c.rank(c.support_of(b)) != c.rank(b)) w = "support function misses part of " + describe(s, b);
  r.add("ctrl_object.support_function", w.empty(), w);
  return r;
}

CtrlObject make_ctrl_object(Space space, PointSet support, std::vector<int> dims,
                            std::vector<std::vector<DenseMatrix>> cocycle) {
  CtrlObject c{std::move(space), normalized(std::move(support)), std::move(dims), std::move(cocycle)};
  if (faults::active().break_cocycle) {
    const FiniteGroup& G = *c.space.group;
    bool done = false;
    for (int g = 0; g < G.order() && !done; ++g) {
      if (g == G.identity()) continue;
      for (int x : c.support)
        if (c.dims[x] > 0) {
          DenseMatrix& m = c.cocycle[g][x];
          m = m + m;
          done = true;
          break;
        }
    }
  }
  Report r = validate_ctrl_object(c);
  for (const auto& ch : r.checks)
    if (ch.verdict == Verdict::Fail) fail(ErrorKind::Validation, ch.name + " fails: " + ch.witness);
  return c;
}

CtrlObject zero_object(const Space& space) {
  std::vector<int> dims(space.size(), 0);
  return make_ctrl_object(space, {}, dims, identity_cocycle(space, dims));
}

CtrlObject trivial_object(const Space& space, const std::vector<int>& dims) {
  if (static_cast<int>(dims.size()) != space.size()) fail(ErrorKind::Precondition, "one rank per point expected");
  return make_ctrl_object(space, support_from_dims(dims), dims, identity_cocycle(space, dims));
}

CtrlObject twist(const CtrlObject& c, const std::vector<DenseMatrix>& frames,
                 const std::vector<DenseMatrix>& inverse_frames) {
  const Space& s = c.space;
  for (int x = 0; x < s.size(); ++x)
    if (frames[x] * inverse_frames[x] != DenseMatrix::identity(c.dims[x]))
      fail(ErrorKind::Precondition, "frame at " + pt(s, x) + " is not inverted by the given matrix");
  auto rho = c.cocycle;
  for (int g = 0; g < s.group->order(); ++g)
    for (int x = 0; x < s.size(); ++x) rho[g][x] = frames[inv_act(s, g, x)] * c.rho(g, x) * inverse_frames[x];
  return make_ctrl_object(s, c.support, c.dims, rho);
}

const DenseMatrix& Representation::of(int g) const {
  auto it = std::find(elements.begin(), elements.end(), g);
  if (it == elements.end()) fail(ErrorKind::Domain, "element outside the subgroup");
  return matrices[it - elements.begin()];
}

Report validate_representation(const Representation& rep) {
  Report r;
  const FiniteGroup& G = *rep.group;
  bool shape = rep.elements.size() == rep.matrices.size() && G.is_subgroup(rep.elements);
  for (const auto& m : rep.matrices) shape = shape && static_cast<int>(m.rows()) == rep.rank && m.rows() == m.cols();
  r.add("representation.shape", shape);
  if (!shape) return r;
  r.add("representation.unit", rep.of(G.identity()).is_identity());
  std::string w;
  for (int a : rep.elements)
    for (int b : rep.elements)
      if (w.empty() && rep.of(G.mul(a, b)) != rep.of(a) * rep.of(b)) w = "(" + G.name(a) + "," + G.name(b) + ")";
  r.add("representation.law", w.empty(), w);
  return r;
}

Representation trivial_representation(const GroupPtr& group, const std::vector<int>& elements, int rank) {
  Representation r{group, elements, rank, {}};
  std::sort(r.elements.begin(), r.elements.end());
  r.matrices.assign(r.elements.size(), DenseMatrix::identity(rank));
  return r;
}

std::vector<int> orbit_section(const Space& space, int m) {
  const FiniteGroup& G = *space.group;
  std::vector<int> s(space.size(), -1);
  s[m] = G.identity();
  for (int g = 0; g < G.order(); ++g) {
    int p = space.act(g, m);
    if (s[p] < 0) s[p] = g;
  }
  return s;
}

CtrlObject induced_object(const Space& space, int m, const Representation& rep) {
  const FiniteGroup& G = *space.group;
  std::vector<int> stab = space.stabilizer(m);
  std::sort(stab.begin(), stab.end());
  std::vector<int> elems = rep.elements;
  std::sort(elems.begin(), elems.end());
  if (elems != stab) fail(ErrorKind::Precondition, "representation is not over the stabilizer of " + pt(space, m));
  if (!validate_representation(rep).passed()) fail(ErrorKind::Validation, "representation law fails");
  auto s = orbit_section(space, m);
  std::vector<int> dims(space.size(), 0);
  for (int p = 0; p < space.size(); ++p)
    if (s[p] >= 0) dims[p] = rep.rank;
  auto rho = identity_cocycle(space, dims);
  for (int g = 0; g < G.order(); ++g)
    for (int p = 0; p < space.size(); ++p) {
      if (s[p] < 0) continue;
      int q = inv_act(space, g, p);
      int h = G.mul(G.inv(s[q]), G.mul(G.inv(g), s[p]));
      rho[g][p] = rep.of(h);
    }
  return make_ctrl_object(space, support_from_dims(dims), dims, rho);
}

Report validate_ctrl_morphism(const CtrlMorphism& f) {
  Report r;
  const Space& s = f.source.space;
  const FiniteGroup& G = *s.group;
  const int n = s.size();
  bool shape = same_carrier(s, f.target.space) && f.control.carrier_size() == n &&
               f.blocks.size() == static_cast<size_t>(n) * n;
  for (int y = 0; y < n && shape; ++y)
    for (int x = 0; x < n && shape; ++x)
      shape = static_cast<int>(f.block(y, x).rows()) == f.target.dims[y] &&
              static_cast<int>(f.block(y, x).cols()) == f.source.dims[x];
  r.add("ctrl_morphism.shape", shape);
  if (!shape) return r;
  std::string w;
  for (int y = 0; y < n && w.empty(); ++y)
    for (int x = 0; x < n && w.empty(); ++x)
      if (!f.block(y, x).is_zero() && !f.control.contains(y, x)) w = "block " + describe_pair(s, y, x) + " outside the control";
  r.add("ctrl_morphism.controlled", w.empty(), w);
  w.clear();
  for (auto [y, x] : f.control.pairs())
    if (w.empty() && !s.coarseMax.contains(y, x)) w = describe_pair(s, y, x) + " is not in the coarse structure";
  r.add("ctrl_morphism.control_in_structure", w.empty(), w);
  w.clear();
  for (int g = 0; g < G.order() && w.empty(); ++g)
    for (int y = 0; y < n && w.empty(); ++y)
      for (int x = 0; x < n && w.empty(); ++x) {
        if (f.source.dims[x] == 0 || f.target.dims[y] == 0) continue;
        const DenseMatrix lhs = f.target.rho(g, y) * f.block(y, x);
        const DenseMatrix rhs = f.block(inv_act(s, g, y), inv_act(s, g, x)) * f.source.rho(g, x);
        if (lhs != rhs) w = "(" + G.name(g) + "," + describe_pair(s, y, x) + ")";
      }
  r.add("ctrl_morphism.equivariant", w.empty(), w);
  return r;
}

CtrlMorphism make_ctrl_morphism(CtrlObject source, CtrlObject target, Relation control,
                                std::vector<DenseMatrix> blocks) {
  CtrlMorphism f{std::move(source), std::move(target), std::move(control), std::move(blocks)};
  Report r = validate_ctrl_morphism(f);
  for (const auto& ch : r.checks)
    if (ch.verdict == Verdict::Fail) fail(ErrorKind::Validation, ch.name + " fails: " + ch.witness);
  return f;
}

CtrlMorphism zero_morphism(const CtrlObject& source, const CtrlObject& target) {
  if (!same_carrier(source.space, target.space)) fail(ErrorKind::Precondition, "objects over different spaces");
  const int n = source.space.size();
  std::vector<DenseMatrix> blocks;
  blocks.reserve(static_cast<size_t>(n) * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) blocks.push_back(zeros(target.dims[y], source.dims[x]));
  return CtrlMorphism{source, target, Relation::diagonal(n), std::move(blocks)};
}

CtrlMorphism identity_morphism(const CtrlObject& c) {
  CtrlMorphism f = zero_morphism(c, c);
  for (int x = 0; x < c.space.size(); ++x) f.block(x, x) = DenseMatrix::identity(c.dims[x]);
  return f;
}

CtrlMorphism compose(const CtrlMorphism& outer, const CtrlMorphism& inner) {
  require_same(inner.target, outer.source, "compose");
  const int n = inner.source.space.size();
  CtrlMorphism out = zero_morphism(inner.source, outer.target);
  out.control = compose(outer.control, inner.control);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) {
      if (!outer.control.contains(z, y) || outer.block(z, y).is_zero()) continue;
      for (int x = 0; x < n; ++x)
        if (inner.control.contains(y, x)) out.block(z, x) = out.block(z, x) + outer.block(z, y) * inner.block(y, x);
    }
  return out;
}

CtrlMorphism add(const CtrlMorphism& a, const CtrlMorphism& b) {
  require_same(a.source, b.source, "add");
  require_same(a.target, b.target, "add");
  CtrlMorphism out = a;
  out.control |= b.control;
  for (size_t i = 0; i < out.blocks.size(); ++i) out.blocks[i] = a.blocks[i] + b.blocks[i];
  return out;
}

CtrlMorphism scale(const CtrlMorphism& a, const Int& k) {
  CtrlMorphism out = a;
  for (auto& b : out.blocks)
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < b.cols(); ++j) b.at(i, j) *= k;
  return out;
}

bool same_blocks(const CtrlMorphism& a, const CtrlMorphism& b) {
  return same_object(a.source, b.source) && same_object(a.target, b.target) && a.blocks == b.blocks;
}

Relation block_support(const CtrlMorphism& f) {
  const int n = f.source.space.size();
  Relation r(n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (!f.block(y, x).is_zero()) r.insert(y, x);
  return r;
}

Biproduct direct_sum(const std::vector<CtrlObject>& parts) {
  if (parts.empty()) fail(ErrorKind::Precondition, "direct sum of no objects");
  const Space& s = parts[0].space;
  for (const auto& p : parts)
    if (!same_carrier(p.space, s)) fail(ErrorKind::Precondition, "direct sum over different spaces");
  const int n = s.size();
  std::vector<int> dims(n, 0);
  for (const auto& p : parts)
    for (int x = 0; x < n; ++x) dims[x] += p.dims[x];
  auto rho = identity_cocycle(s, dims);
  for (int g = 0; g < s.group->order(); ++g)
    for (int x = 0; x < n; ++x) {
      std::vector<DenseMatrix> diag;
      for (const auto& p : parts) diag.push_back(p.rho(g, x));
      rho[g][x] = block_diag(diag);
    }
  Biproduct b;
  b.sum = make_ctrl_object(s, support_from_dims(dims), dims, rho);
  std::vector<int> offset(n, 0);
  for (const auto& p : parts) {
    CtrlMorphism inc = zero_morphism(p, b.sum), proj = zero_morphism(b.sum, p);
    for (int x = 0; x < n; ++x) {
      put(inc.block(x, x), offset[x], 0, DenseMatrix::identity(p.dims[x]));
      put(proj.block(x, x), 0, offset[x], DenseMatrix::identity(p.dims[x]));
      offset[x] += p.dims[x];
    }
    b.inclusions.push_back(std::move(inc));
    b.projections.push_back(std::move(proj));
  }
  return b;
}

CtrlMorphism direct_sum(const std::vector<CtrlMorphism>& parts) {
  if (parts.empty()) fail(ErrorKind::Precondition, "direct sum of no morphisms");
  std::vector<CtrlObject> src, tgt;
  for (const auto& f : parts) {
    src.push_back(f.source);
    tgt.push_back(f.target);
  }
  Biproduct a = direct_sum(src), b = direct_sum(tgt);
  CtrlMorphism out = zero_morphism(a.sum, b.sum);
  for (size_t i = 0; i < parts.size(); ++i) {
    CtrlMorphism term = compose(b.inclusions[i], compose(parts[i], a.projections[i]));
    out = add(out, term);
  }
  return out;
}

Report biproduct_checks(const Biproduct& b) {
  Report r;
  const size_t k = b.inclusions.size();
  bool orth = true;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      CtrlMorphism pi = compose(b.projections[i], b.inclusions[j]);
      CtrlMorphism expect = i == j ? identity_morphism(b.inclusions[i].source)
                                   : zero_morphism(b.inclusions[j].source, b.projections[i].target);
      orth = orth && pi.blocks == expect.blocks;
    }
  r.add("biproduct.projection_inclusion", orth);
  CtrlMorphism total = zero_morphism(b.sum, b.sum);
  for (size_t i = 0; i < k; ++i) total = add(total, compose(b.inclusions[i], b.projections[i]));
  r.add("biproduct.sum_of_idempotents", total.blocks == identity_morphism(b.sum).blocks);
  return r;
}

CtrlObject pushforward_partial(const CtrlObject& c, const std::vector<int>& assign, const Space& codomain) {
  const Space& s = c.space;
  const FiniteGroup& G = *s.group;
  if (!G.same_as(*codomain.group)) fail(ErrorKind::Precondition, "pushforward across different groups");
  const int n = s.size(), m = codomain.size();
  if (static_cast<int>(assign.size()) != n) fail(ErrorKind::Precondition, "assignment is not total");
  for (int g = 0; g < G.order(); ++g)
    for (int x = 0; x < n; ++x) {
      int gx = s.act(g, x);
      bool ok = assign[x] < 0 ? assign[gx] < 0 : assign[gx] == codomain.act(g, assign[x]);
      if (!ok) fail(ErrorKind::Precondition, "assignment is not equivariant at " + pt(s, x));
    }
  std::vector<int> dims(m, 0), offset(n, 0);
  for (int x = 0; x < n; ++x)
    if (assign[x] >= 0) {
      offset[x] = dims[assign[x]];
      dims[assign[x]] += c.dims[x];
    }
  auto rho = identity_cocycle(codomain, dims);
  for (int g = 0; g < G.order(); ++g) {
    for (int p = 0; p < m; ++p) rho[g][p] = zeros(dims[codomain.act(G.inv(g), p)], dims[p]);
    for (int x = 0; x < n; ++x) {
      if (assign[x] < 0) continue;
      int y = inv_act(s, g, x);
      put(rho[g][assign[x]], offset[y], offset[x], c.rho(g, x));
    }
  }
  return make_ctrl_object(codomain, support_from_dims(dims), dims, rho);
}

CtrlObject pushforward(const CtrlObject& c, const SpaceMap& f) {
  if (!same_carrier(c.space, f.domain)) fail(ErrorKind::Precondition, "pushforward along a map from another space");
  if (!f.equivariant) fail(ErrorKind::Precondition, "pushforward needs an equivariant map");
  return pushforward_partial(c, f.assign, f.codomain);
}

CtrlMorphism pushforward(const CtrlMorphism& a, const SpaceMap& f) {
  CtrlObject src = pushforward(a.source, f), tgt = pushforward(a.target, f);
  const int n = a.source.space.size();
  std::vector<int> so(n, 0), to(n, 0), sfill(f.codomain.size(), 0), tfill(f.codomain.size(), 0);
  for (int x = 0; x < n; ++x) {
    so[x] = sfill[f.assign[x]];
    sfill[f.assign[x]] += a.source.dims[x];
    to[x] = tfill[f.assign[x]];
    tfill[f.assign[x]] += a.target.dims[x];
  }
  CtrlMorphism out = zero_morphism(src, tgt);
  out.control = Relation(f.codomain.size());
  for (auto [y, x] : a.control.pairs()) out.control.insert(f.assign[y], f.assign[x]);
  if (!out.control.subset_of(f.codomain.coarseMax))
    fail(ErrorKind::Construction, "pushed-forward control leaves the codomain structure");
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) put(out.block(f.assign[y], f.assign[x]), to[y], so[x], a.block(y, x));
  return out;
}

CtrlObject restrict_to(const CtrlObject& c, const PointSet& z) {
  const Space& s = c.space;
  PointSet zz = normalized(z);
  if (!s.is_invariant(zz)) fail(ErrorKind::Precondition, "restriction to a non-invariant subset");
  std::vector<int> dims(s.size(), 0);
  for (int x : zz) dims[x] = c.dims[x];
  auto rho = identity_cocycle(s, dims);
  for (int g = 0; g < s.group->order(); ++g)
    for (int x : zz) rho[g][x] = c.rho(g, x);
  return make_ctrl_object(s, set_intersection(c.support, zz), dims, rho);
}

CtrlMorphism restrict_to(const CtrlMorphism& f, const PointSet& z) {
  CtrlMorphism out = zero_morphism(restrict_to(f.source, z), restrict_to(f.target, z));
  PointSet zz = normalized(z);
  out.control = Relation(f.control.carrier_size());
  for (auto [y, x] : f.control.pairs())
    if (std::binary_search(zz.begin(), zz.end(), y) && std::binary_search(zz.begin(), zz.end(), x)) {
      out.control.insert(y, x);
      out.block(y, x) = f.block(y, x);
    }
  return out;
}

CtrlMorphism restriction_inclusion(const CtrlObject& c, const PointSet& z) {
  CtrlObject r = restrict_to(c, z);
  CtrlMorphism f = zero_morphism(r, c);
  for (int x : normalized(z)) f.block(x, x) = DenseMatrix::identity(c.dims[x]);
  return f;
}

CtrlMorphism restriction_projection(const CtrlObject& c, const PointSet& z) {
  CtrlObject r = restrict_to(c, z);
  CtrlMorphism f = zero_morphism(c, r);
  for (int x : normalized(z)) f.block(x, x) = DenseMatrix::identity(c.dims[x]);
  return f;
}

std::vector<Int> HomLattice::flatten(const CtrlMorphism& f) const {
  std::vector<Int> v(ambient);
  for (size_t k = 0; k < representatives.size(); ++k) {
    auto [y, x] = representatives[k];
    const DenseMatrix& b = f.block(y, x);
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < b.cols(); ++j) v[offsets[k] + i * b.cols() + j] = b.at(i, j);
  }
  return v;
}

CtrlMorphism HomLattice::morphism(const std::vector<Int>& coords) const {
  const Space& s = source.space;
  const FiniteGroup& G = *s.group;
  std::vector<Int> v = basis * coords;
  CtrlMorphism f = zero_morphism(source, target);
  f.control = control;
  for (size_t k = 0; k < representatives.size(); ++k) {
    auto [y, x] = representatives[k];
    DenseMatrix b(target.dims[y], source.dims[x]);
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < b.cols(); ++j) b.at(i, j) = v[offsets[k] + i * b.cols() + j];
    for (int g = 0; g < G.order(); ++g) {
      int gy = inv_act(s, g, y), gx = inv_act(s, g, x);
      f.block(gy, gx) = target.rho(g, y) * b * source.rho(G.inv(g), gx);
    }
  }
  return f;
}

std::optional<std::vector<Int>> HomLattice::coordinates(const CtrlMorphism& f) const {
  if (!same_object(f.source, source) || !same_object(f.target, target)) return std::nullopt;
  if (!block_support(f).subset_of(control)) return std::nullopt;
  std::vector<Int> c;
  if (!solve_in_lattice(basis, flatten(f), &c)) return std::nullopt;
  if (morphism(c).blocks != f.blocks) return std::nullopt;
  return c;
}

HomLattice hom_lattice(const CtrlObject& source, const CtrlObject& target, const std::optional<Relation>& control) {
  if (!same_carrier(source.space, target.space)) fail(ErrorKind::Precondition, "objects over different spaces");
  const Space& s = source.space;
  const FiniteGroup& G = *s.group;
  const int n = s.size();
  HomLattice h;
  h.source = source;
  h.target = target;
  h.control = translates(s, control ? *control : s.coarseMax);
  if (!h.control.subset_of(s.coarseMax)) fail(ErrorKind::Precondition, "control is not an entourage of the space");
  std::vector<char> seen(static_cast<size_t>(n) * n, 0);
  std::vector<DenseMatrix> kernels;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (seen[static_cast<size_t>(y) * n + x] || !h.control.contains(y, x)) continue;
      std::vector<int> stab;
      for (int g = 0; g < G.order(); ++g) {
        int gy = s.act(g, y), gx = s.act(g, x);
        seen[static_cast<size_t>(gy) * n + gx] = 1;
        if (gy == y && gx == x && g != G.identity()) stab.push_back(g);
      }
      const int dr = target.dims[y], dc = source.dims[x];
      if (dr == 0 || dc == 0) continue;
      const size_t vars = static_cast<size_t>(dr) * dc;
      DenseMatrix constraints(stab.size() * vars, vars);
      for (size_t k = 0; k < stab.size(); ++k) {
        const DenseMatrix& P = target.rho(stab[k], y);
        const DenseMatrix& R = source.rho(G.inv(stab[k]), x);
        for (int i = 0; i < dr; ++i)
          for (int j = 0; j < dc; ++j) {
            size_t row = k * vars + static_cast<size_t>(i) * dc + j;
            for (int a = 0; a < dr; ++a)
              for (int b = 0; b < dc; ++b) constraints.at(row, static_cast<size_t>(a) * dc + b) += P.at(i, a) * R.at(b, j);
            constraints.at(row, static_cast<size_t>(i) * dc + j) -= 1;
          }
      }
      h.representatives.emplace_back(y, x);
      h.offsets.push_back(h.ambient);
      h.ambient += vars;
      kernels.push_back(stab.empty() ? DenseMatrix::identity(vars) : integer_kernel(constraints));
    }
  h.basis = block_diag(kernels);
  if (kernels.empty()) h.basis = DenseMatrix(0, 0);
  for (size_t k = 0; k < h.rank(); ++k) {
    std::vector<Int> e(h.rank());
    e[k] = 1;
    h.generators.push_back(h.morphism(e));
  }
  return h;
}

namespace {

DenseMatrix columns_of(const std::vector<std::vector<Int>>& cols, size_t rows) {
  DenseMatrix m(rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  return m;
}

HomologyGroup cokernel(const DenseMatrix& lattice, size_t rank) {
  HomologyGroup g;
  auto d = lattice.cols() == 0 ? std::vector<Int>{} : smith_invariants(lattice);
  g.rank = static_cast<int>(rank - d.size());
  for (const auto& v : d)
    if (v > 1) g.torsion.push_back(v);
  return g;
}

DenseMatrix factoring_lattice(const HomLattice& hom, const CtrlObject& c, const CtrlObject& d, const PointSet& sub) {
  std::vector<std::vector<Int>> gens;
  for (const CtrlObject& middle : {restrict_to(c, sub), restrict_to(d, sub)}) {
    HomLattice in = hom_lattice(c, middle), out = hom_lattice(middle, d);
    for (const auto& q : in.generators)
      for (const auto& p : out.generators) {
        CtrlMorphism pq = compose(p, q);
        pq.control = hom.control;
        auto coords = hom.coordinates(pq);
        if (!coords) fail(ErrorKind::Construction, "composite through a restricted object left the hom lattice");
        gens.push_back(*coords);
      }
  }
  DenseMatrix m = columns_of(gens, hom.rank());
  return gens.empty() ? m : lattice_basis(m);
}

}  // namespace

QuotientHom quotient_hom(const CtrlObject& c, const CtrlObject& d, const PointSet& sub) {
  const Space& s = c.space;
  PointSet z = normalized(sub);
  if (!s.is_invariant(z)) fail(ErrorKind::Precondition, "quotient by a non-invariant subset");
  QuotientHom q;
  HomLattice hom = hom_lattice(c, d);
  q.hom_rank = hom.rank();
  q.factoring = factoring_lattice(hom, c, d, z);
  // Coordinates whose blocks sit at pairs with both points outside sub.
  std::vector<size_t> outside;
  for (size_t k = 0; k < hom.representatives.size(); ++k) {
    auto [y, x] = hom.representatives[k];
    bool in_y = std::binary_search(z.begin(), z.end(), y), in_x = std::binary_search(z.begin(), z.end(), x);
    if (in_y || in_x) continue;
    size_t len = static_cast<size_t>(d.dims[y]) * c.dims[x];
    for (size_t i = 0; i < len; ++i) outside.push_back(hom.offsets[k] + i);
  }
  if (outside.empty()) {
    q.vanishing = DenseMatrix::identity(hom.rank());
  } else {
    DenseMatrix rows(outside.size(), hom.rank());
    for (size_t i = 0; i < outside.size(); ++i)
      for (size_t j = 0; j < hom.rank(); ++j) rows.at(i, j) = hom.basis.at(outside[i], j);
    q.vanishing = integer_kernel(rows);
  }
  q.vanishing_in_factoring = lattice_contains(q.factoring, q.vanishing);
  q.factoring_in_vanishing = lattice_contains(q.vanishing, q.factoring);
  q.quotient = cokernel(q.factoring, hom.rank());
  q.report.add("quotient_hom.vanishing_factors", q.vanishing_in_factoring,
               q.vanishing_in_factoring ? "" : "a morphism vanishing off sub does not factor");
  if (q.factoring_in_vanishing) {
    q.report.add("quotient_hom.factoring_vanishes", true);
    q.note = "factoring morphisms are exactly those vanishing off sub";
  } else {
    q.note = "counterexample: composites through sub reach blocks with both points outside sub";
    q.report.unknown("quotient_hom.factoring_vanishes", q.note);
  }
  return q;
}

Report quotient_hom_functoriality(const CtrlObject& c, const CtrlObject& d, const PointSet& smaller,
                                  const PointSet& larger) {
  Report r;
  if (!is_subset(normalized(smaller), normalized(larger))) fail(ErrorKind::Precondition, "stages are not nested");
  QuotientHom a = quotient_hom(c, d, smaller), b = quotient_hom(c, d, larger);
  bool nested = lattice_contains(b.factoring, a.factoring);
  r.add("quotient_hom.stage_map_surjective", nested,
        nested ? "" : "the smaller stage factors a morphism the larger does not");
  return r;
}

DenseMatrix ConvMorphism::part(int x, int g) const {
  auto it = parts.find({x, g});
  if (it != parts.end()) return it->second;
  int gx = source.set.act(source.set.group->inv(g), x);
  return zeros(target.ranks[gx], source.ranks[x]);
}

ConvMorphism conv_compose(const ConvMorphism& outer, const ConvMorphism& inner) {
  if (inner.target.ranks != outer.source.ranks) fail(ErrorKind::Precondition, "convolution of mismatched morphisms");
  const Space& set = inner.source.set;
  const FiniteGroup& G = *set.group;
  ConvMorphism out{inner.source, outer.target, {}};
  for (int x = 0; x < set.size(); ++x)
    for (int g = 0; g < G.order(); ++g) {
      DenseMatrix acc = zeros(outer.target.ranks[inv_act(set, g, x)], inner.source.ranks[x]);
      for (int g1 = 0; g1 < G.order(); ++g1)
        acc = acc + outer.part(inv_act(set, g1, x), G.mul(G.inv(g1), g)) * inner.part(x, g1);
      if (!acc.is_zero()) out.parts[{x, g}] = acc;
    }
  return out;
}

bool conv_equal(const ConvMorphism& a, const ConvMorphism& b) {
  if (a.source.ranks != b.source.ranks || a.target.ranks != b.target.ranks) return false;
  const Space& set = a.source.set;
  for (int x = 0; x < set.size(); ++x)
    for (int g = 0; g < set.group->order(); ++g)
      if (a.part(x, g) != b.part(x, g)) return false;
  return true;
}

Space convolution_space(const Space& set) {
  return tensor(min_max(set.points, set.group, set.action), canonical_space(set.group));
}

namespace {

void require_convolution_shape(const CtrlObject& c, const Space& set) {
  Space expect = convolution_space(set);
  if (!same_carrier(c.space, expect) || !(c.space.coarseMax == expect.coarseMax))
    fail(ErrorKind::Precondition, "object is not over X_min,max tensor Gamma_can,min");
}

}  // namespace

ConvObject convolution_object(const CtrlObject& c, const Space& set) {
  require_convolution_shape(c, set);
  const int order = set.group->order();
  ConvObject a{set, std::vector<int>(set.size())};
  for (int x = 0; x < set.size(); ++x) a.ranks[x] = c.dims[x * order + set.group->identity()];
  return a;
}

ConvMorphism convolution_morphism(const CtrlMorphism& f, const Space& set) {
  require_convolution_shape(f.source, set);
  const int order = set.group->order();
  const int e = set.group->identity();
  ConvMorphism out{convolution_object(f.source, set), convolution_object(f.target, set), {}};
  for (int x = 0; x < set.size(); ++x)
    for (int g = 0; g < order; ++g) {
      int p = x * order + g;
      DenseMatrix v = f.target.rho(g, p) * f.block(p, x * order + e);
      if (!v.is_zero()) out.parts[{x, g}] = v;
    }
  return out;
}

CtrlObject convolution_preimage(const ConvObject& a) {
  Space s = convolution_space(a.set);
  const FiniteGroup& G = *a.set.group;
  std::vector<int> dims(s.size());
  for (int x = 0; x < a.set.size(); ++x)
    for (int g = 0; g < G.order(); ++g) dims[x * G.order() + g] = a.ranks[inv_act(a.set, g, x)];
  return trivial_object(s, dims);
}

namespace {

std::vector<Int> conv_flatten(const ConvMorphism& m) {
  std::vector<Int> v;
  const Space& set = m.source.set;
  for (int x = 0; x < set.size(); ++x)
    for (int g = 0; g < set.group->order(); ++g) {
      DenseMatrix b = m.part(x, g);
      for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) v.push_back(b.at(i, j));
    }
  return v;
}

}  // namespace

FullnessReport convolution_fullness(const CtrlObject& c, const CtrlObject& d, const Space& set) {
  FullnessReport out;
  HomLattice hom = hom_lattice(c, d);
  ConvObject ca = convolution_object(c, set), da = convolution_object(d, set);
  size_t rows = 0;
  for (int x = 0; x < set.size(); ++x)
    for (int g = 0; g < set.group->order(); ++g)
      rows += static_cast<size_t>(da.ranks[inv_act(set, g, x)]) * ca.ranks[x];
  std::vector<std::vector<Int>> cols;
  for (const auto& f : hom.generators) cols.push_back(conv_flatten(convolution_morphism(f, set)));
  out.comparison = columns_of(cols, rows);
  out.diagonal = cols.empty() ? std::vector<Int>{} : smith_invariants(out.comparison);
  out.faithful = out.diagonal.size() == hom.rank();
  out.full = out.diagonal.size() == rows &&
             std::all_of(out.diagonal.begin(), out.diagonal.end(), [](const Int& v) { return v == 1; });
  out.report.add("convolution.faithful", out.faithful,
                 out.faithful ? "" : "comparison has rank " + std::to_string(out.diagonal.size()) + " < " +
                                         std::to_string(hom.rank()));
  out.report.add("convolution.full", out.full, out.full ? "" : "comparison lattice is a proper sublattice");
  CtrlObject pre = convolution_preimage(ca);
  out.report.add("convolution.essentially_surjective", convolution_object(pre, set).ranks == ca.ranks);
  return out;
}

Space coset_space(const GroupPtr& group, const std::vector<int>& subgroup) {
  const FiniteGroup& G = *group;
  if (!G.is_subgroup(subgroup)) fail(ErrorKind::Precondition, "not a subgroup");
  std::vector<int> coset_of(G.order(), -1);
  std::vector<int> least;
  auto add_coset = [&](int g) {
    int id = static_cast<int>(least.size());
    int lo = G.order();
    for (int h : subgroup) {
      coset_of[G.mul(g, h)] = id;
      lo = std::min(lo, G.mul(g, h));
    }
    least.push_back(lo);
  };
  add_coset(G.identity());
  for (int g = 0; g < G.order(); ++g)
    if (coset_of[g] < 0) add_coset(g);
  std::vector<std::string> names;
  for (int c = 0; c < static_cast<int>(least.size()); ++c)
    names.push_back(c == 0 ? "eH" : G.name(least[c]) + "H");
  ActionTable action(G.order(), std::vector<int>(least.size()));
  for (int g = 0; g < G.order(); ++g)
    for (size_t c = 0; c < least.size(); ++c) action[g][c] = coset_of[G.mul(g, least[c])];
  return min_min(names, group, action);
}

int base_coset(const Space&) { return 0; }

namespace {

void require_cosets(const Space& s, const std::vector<int>& subgroup) {
  Space expect = coset_space(s.group, subgroup);
  if (!same_carrier(s, expect) || !(s.coarseMax == expect.coarseMax))
    fail(ErrorKind::Precondition, "object is not over (Gamma/H)_min,min");
}

}  // namespace

Representation bh_functor(const CtrlObject& c, const std::vector<int>& subgroup) {
  require_cosets(c.space, subgroup);
  const FiniteGroup& G = *c.space.group;
  Representation r{c.space.group, subgroup, c.dims[0], {}};
  std::sort(r.elements.begin(), r.elements.end());
  for (int h : r.elements) r.matrices.push_back(c.rho(G.inv(h), 0));
  return r;
}

DenseMatrix bh_functor(const CtrlMorphism& f) { return f.block(0, 0); }

CtrlObject bh_inverse(const Representation& rep, const Space& cosets) {
  require_cosets(cosets, rep.elements);
  return induced_object(cosets, 0, rep);
}

CtrlMorphism bh_inverse(const DenseMatrix& intertwiner, const Representation& source, const Representation& target,
                        const Space& cosets) {
  for (int h : source.elements)
    if (intertwiner * source.of(h) != target.of(h) * intertwiner)
      fail(ErrorKind::Precondition, "matrix does not intertwine at " + source.group->name(h));
  CtrlObject a = bh_inverse(source, cosets), b = bh_inverse(target, cosets);
  CtrlMorphism f = zero_morphism(a, b);
  for (int p = 0; p < cosets.size(); ++p) f.block(p, p) = intertwiner;
  return make_ctrl_morphism(f.source, f.target, f.control, f.blocks);
}

BHRoundTrip bh_round_trip(const CtrlObject& c, const std::vector<int>& subgroup,
                          const std::vector<CtrlMorphism>& sample) {
  BHRoundTrip out;
  const Space& s = c.space;
  const FiniteGroup& G = *s.group;
  out.section = orbit_section(s, 0);
  out.image = bh_functor(c, subgroup);
  out.report.absorb("bh", validate_representation(out.image));
  out.rebuilt = bh_inverse(out.image, s);
  Representation again = bh_functor(out.rebuilt, subgroup);
  out.report.add("bh.phi_psi_identity", again.matrices == out.image.matrices);
  CtrlMorphism unit = zero_morphism(out.rebuilt, c), back = zero_morphism(c, out.rebuilt);
  for (int p = 0; p < s.size(); ++p) {
    int g = out.section[p];
    unit.block(p, p) = c.rho(G.inv(g), 0);
    back.block(p, p) = c.rho(g, p);
  }
  Report ur = validate_ctrl_morphism(unit), br = validate_ctrl_morphism(back);
  out.report.add("bh.unit_is_morphism", ur.passed(), ur.passed() ? "" : ur.table());
  out.report.add("bh.unit_inverse_is_morphism", br.passed(), br.passed() ? "" : br.table());
  out.report.add("bh.unit_invertible", compose(unit, back).blocks == identity_morphism(c).blocks &&
                                           compose(back, unit).blocks == identity_morphism(out.rebuilt).blocks);
  bool natural = true;
  std::string w;
  for (size_t i = 0; i < sample.size(); ++i) {
    const CtrlMorphism& f = sample[i];
    if (!same_object(f.source, c) || !same_object(f.target, c)) fail(ErrorKind::Precondition, "sample is not an endomorphism");
    CtrlMorphism lifted = bh_inverse(bh_functor(f), out.image, out.image, s);
    if (compose(f, unit).blocks != compose(unit, lifted).blocks) {
      natural = false;
      if (w.empty()) w = "sample morphism " + std::to_string(i);
    }
  }
  out.report.add("bh.unit_natural", natural, w);
  out.unit = std::move(unit);
  out.unit_inverse = std::move(back);
  return out;
}

KaroubiDiagram karoubi_complete(const CtrlMorphism& f, const CtrlMorphism& g, const BigFamily& family) {
  require_same(f.target, g.source, "karoubi");
  const CtrlObject& mid = f.target;
  const Space& s = mid.space;
  KaroubiDiagram k;
  PointSet outer = set_union(f.source.support, g.target.support);
  for (size_t i = 0; i < family.stages.size() && k.source_stage < 0; ++i)
    if (is_subset(outer, family.stages[i])) k.source_stage = static_cast<int>(i);
  if (k.source_stage < 0) fail(ErrorKind::Precondition, "outer objects are not supported in any stage");
  k.control = f.control;
  k.control |= invert(g.control);
  k.control |= Relation::diagonal(s.size());
  PointSet absorbed = thicken(k.control, family.stages[k.source_stage]);
  for (size_t j = k.source_stage; j < family.stages.size() && k.stage < 0; ++j)
    if (is_subset(absorbed, family.stages[j])) k.stage = static_cast<int>(j);
  if (k.stage < 0) {
    std::string pairs;
    for (auto [y, x] : k.control.pairs())
      if (x != y) pairs += (pairs.empty() ? "" : " ") + describe_pair(s, y, x);
    fail(ErrorKind::Precondition, "family not big for this control: {" + pairs + "}");
  }
  const PointSet& y = family.stages[k.stage];
  if (!s.is_invariant(y)) fail(ErrorKind::Precondition, "selected stage is not invariant");
  PointSet rest = set_difference(full_set(s.size()), y);
  k.piece = restrict_to(mid, y);
  k.complement = restrict_to(mid, rest);
  k.inclusion = restriction_inclusion(mid, y);
  k.projection = restriction_projection(mid, y);
  k.complement_inclusion = restriction_inclusion(mid, rest);
  k.complement_projection = restriction_projection(mid, rest);
  k.f_factor = compose(k.projection, f);
  k.g_factor = compose(g, k.inclusion);
  auto zero_like = [](const CtrlMorphism& m) { return zero_morphism(m.source, m.target).blocks == m.blocks; };
  k.report.add("karoubi.retract", compose(k.projection, k.inclusion).blocks == identity_morphism(k.piece).blocks);
  k.report.add("karoubi.splitting", add(compose(k.inclusion, k.projection),
                                        compose(k.complement_inclusion, k.complement_projection))
                                            .blocks == identity_morphism(mid).blocks);
  k.report.add("karoubi.f_factors", compose(k.inclusion, k.f_factor).blocks == f.blocks);
  k.report.add("karoubi.g_factors", compose(k.g_factor, k.projection).blocks == g.blocks);
  k.report.add("karoubi.composite", compose(k.g_factor, k.f_factor).blocks == compose(g, f).blocks);
  k.report.add("karoubi.g_kills_complement", zero_like(compose(g, k.complement_inclusion)));
  k.report.add("karoubi.f_misses_complement", zero_like(compose(k.complement_projection, f)));
  return k;
}

SigmaReport flasque_sigma_check(const CtrlObject& sample, const std::vector<int>& assign, const PointSet& window,
                                int horizon) {
  if (horizon < 1) fail(ErrorKind::Precondition, "horizon must be at least 1");
  const Space& s = sample.space;
  const int n = s.size();
  SigmaReport out;
  out.horizon = horizon;
  out.window = normalized(window);
  std::vector<std::vector<int>> powers{full_set(n)};
  for (int k = 1; k <= horizon + 1; ++k) {
    std::vector<int> next(n, -1);
    for (int x = 0; x < n; ++x) {
      int y = powers.back()[x];
      next[x] = y < 0 ? -1 : assign[y];
    }
    powers.push_back(next);
  }
  std::vector<CtrlObject> sigma, comparison;
  for (int k = 0; k <= horizon + 1; ++k) {
    CtrlObject pushed = pushforward_partial(sample, powers[k], s);
    if (k <= horizon) sigma.push_back(pushed);
    comparison.push_back(pushed);
  }
  CtrlObject a = restrict_to(direct_sum(sigma).sum, out.window);
  CtrlObject b = restrict_to(direct_sum(comparison).sum, out.window);
  std::string w;
  for (int p : out.window) {
    out.sigma_ranks.push_back(a.dims[p]);
    out.comparison_ranks.push_back(b.dims[p]);
    if (w.empty() && a.dims[p] != b.dims[p])
      w = "at " + pt(s, p) + ": " + std::to_string(a.dims[p]) + " vs " + std::to_string(b.dims[p]);
  }
  out.ranks_match = w.empty();
  out.report.add("sigma.fiber_ranks", out.ranks_match, w);
  if (out.ranks_match) {
    // Summand n of the sum matches summand n of A + phi_* Sigma; the last summand vanishes on the window.
    CtrlMorphism iso = zero_morphism(a, b), inv = zero_morphism(b, a);
    for (int p : out.window) {
      iso.block(p, p) = DenseMatrix::identity(a.dims[p]);
      inv.block(p, p) = DenseMatrix::identity(a.dims[p]);
    }
    Report vr = validate_ctrl_morphism(iso);
    out.isomorphism = vr.passed() && compose(inv, iso).blocks == identity_morphism(a).blocks &&
                      compose(iso, inv).blocks == identity_morphism(b).blocks;
    out.report.add("sigma.blockwise_isomorphism", out.isomorphism);
  } else {
    out.report.add("sigma.blockwise_isomorphism", false, "fiber ranks differ");
  }
  out.verdict = out.isomorphism ? "verified up to horizon " + std::to_string(horizon) : "failed";
  return out;
}

SigmaReport flasque_sigma_check(const ShiftFamily& family, const ShiftEndo& f, int horizon) {
  Space w = shift_window(family, horizon);
  CtrlObject sample = trivial_object(w, std::vector<int>(w.size(), 1));
  return flasque_sigma_check(sample, shift_window_map(family, f, horizon), full_set(w.size()), horizon);
}

SigmaReport flasque_sigma_check(const Space& space, const SpaceMap& f, int horizon) {
  if (!same_carrier(f.domain, space) || !same_carrier(f.codomain, space))
    fail(ErrorKind::Precondition, "flasqueness needs an endomorphism");
  CtrlObject sample = trivial_object(space, std::vector<int>(space.size(), 1));
  return flasque_sigma_check(sample, f.assign, full_set(space.size()), horizon);
}

}  // namespace coarsex
