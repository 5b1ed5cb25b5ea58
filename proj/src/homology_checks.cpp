#include <algorithm>
#include <map>
#include <set>

#include "coarsex/error.hpp"
#include "coarsex/homology.hpp"

namespace coarsex {

namespace {

std::string dname(const std::string& base, int n) { return base + ".C" + std::to_string(n); }

SparseMatrix permutation_like(size_t rows, const std::vector<std::pair<int, Int>>& entries) {
  SparseMatrix m(rows, entries.size());
  for (size_t j = 0; j < entries.size(); ++j)
    if (entries[j].first >= 0) m.set_column(j, {{entries[j].first, entries[j].second}});
  return m;
}

// Distinct translates of a tuple.
std::vector<std::vector<int>> orbit_of(const Space& s, const std::vector<int>& t) {
  std::set<std::vector<int>> seen;
  std::vector<int> cur(t.size());
  for (int g = 0; g < s.group->order(); ++g) {
    for (size_t i = 0; i < t.size(); ++i) cur[i] = s.act(g, t[i]);
    seen.insert(cur);
  }
  return {seen.begin(), seen.end()};
}

// Express a function on tuples (given by its nonzero values) in the orbit basis of a complex,
// verifying invariance. Returns false with a witness when the function is not invariant or
// touches uncontrolled tuples.
bool to_orbit_basis(const Space& s, const ChainComplex& c, int n, const std::map<std::vector<int>, Int>& values,
                    SparseVector& out, std::string& witness) {
  std::map<int, Int> coef;
  for (const auto& [t, v] : values) {
    int stab = 0;
    auto canon = canonical_tuple(s, t, &stab);
    int idx = c.index_of(n, canon);
    if (idx < 0) {
      witness = "value on an uncontrolled tuple";
      return false;
    }
    for (const auto& u : orbit_of(s, t)) {
      auto it = values.find(u);
      if (it == values.end() || it->second != v) {
        witness = "function is not invariant on the orbit of a degree-" + std::to_string(n) + " tuple";
        return false;
      }
    }
    coef[idx] = v;
  }
  out.clear();
  for (auto& [i, v] : coef) out.emplace_back(i, v);
  return true;
}

bool check_identity(const SparseMatrix& m) {
  return m.rows() == m.cols() && m == SparseMatrix::identity(m.rows());
}

}  // namespace

PhiPsiReport phi_psi(const GroupPtr& group, const Space& set, int max_degree) {
  if (!set.group->same_as(*group)) fail(ErrorKind::Precondition, "coefficient set is over a different group");
  const FiniteGroup& G = *group;
  PhiPsiReport r;
  const int top = max_degree + 1;
  r.standard = standard_group_complex(group, set, top);
  Space tens = tensor(canonical_space(group), min_max(set.points, group, set.action));
  r.coarse = chain_complex(tens, top);
  const int ns = set.size();
  for (int n = 0; n <= top; ++n) {
    std::vector<std::pair<int, Int>> phi_cols, psi_cols;
    for (const auto& e : r.standard.basis[n]) {
      const int s = e.tuple.back();
      std::vector<int> t;
      for (int i = 0; i <= n; ++i) t.push_back(e.tuple[i] * ns + s);
      int stab = 0;
      auto canon = canonical_tuple(tens, t, &stab);
      phi_cols.emplace_back(r.coarse.index_of(n, canon), Int(stab));
    }
    SparseMatrix phi = permutation_like(r.coarse.dim(n), phi_cols);
    SparseMatrix psi(r.standard.dim(n), r.coarse.dim(n));
    for (size_t j = 0; j < r.coarse.dim(n); ++j) {
      SparseVector col;
      for (const auto& u : orbit_of(tens, r.coarse.basis[n][j].tuple)) {
        if (u[0] / ns != G.identity()) continue;
        const int s = u[0] % ns;
        std::vector<int> t;
        bool ok = true;
        for (int p : u) {
          if (p % ns != s) ok = false;
          t.push_back(p / ns);
        }
        if (!ok) continue;
        t.push_back(s);
        col.emplace_back(r.standard.index_of(n, t), Int(1));
      }
      psi.set_column(j, col);
    }
    r.report.add(dname("phi_psi.psi_phi_identity", n), check_identity(psi * phi));
    r.report.add(dname("phi_psi.phi_psi_identity", n), check_identity(phi * psi));
    r.phi.push_back(std::move(phi));
    r.psi.push_back(std::move(psi));
  }
  int bad = -1;
  bool pc = is_chain_map(r.standard, r.coarse, r.phi, &bad);
  r.report.add("phi_psi.phi_chain_map", pc, pc ? "" : "fails in degree " + std::to_string(bad));
  bool qc = is_chain_map(r.coarse, r.standard, r.psi, &bad);
  r.report.add("phi_psi.psi_chain_map", qc, qc ? "" : "fails in degree " + std::to_string(bad));
  r.standard_groups = homology(r.standard);
  r.coarse_groups = homology(r.coarse);
  for (int n = 0; n <= max_degree; ++n) {
    bool eq = r.standard_groups[n] == r.coarse_groups[n];
    r.report.add("phi_psi.same_groups.H" + std::to_string(n), eq,
                 eq ? "" : r.standard_groups[n].str() + " vs " + r.coarse_groups[n].str());
  }
  return r;
}

ContinuityReport hx_cont(const Space& space, int max_degree) {
  ContinuityReport r;
  PointSet acc;
  for (const auto& orbit : space.orbits()) {
    acc = set_union(acc, orbit);
    r.chain.push_back(acc);
    r.values.push_back(homology(subspace(space, acc), max_degree));
  }
  r.direct = homology(space, max_degree);
  if (r.chain.empty()) {
    r.note = "empty carrier: the only invariant subset is empty";
    r.colimit = r.direct;
  } else {
    r.note = "every invariant subset of a finite carrier is locally finite; the chain ends at the carrier itself";
    r.colimit = r.values.back();
  }
  r.report.add("continuity.chain_ends_at_carrier", r.chain.empty() || r.chain.back() == full_set(space.size()));
  bool eq = r.colimit == r.direct;
  r.report.add("continuity.colimit_matches", eq, eq ? "" : "colimit differs from direct homology");
  return r;
}

Report u_continuity_check(const Space& space, int max_degree) {
  Report r;
  auto direct = homology(space, max_degree);
  bool same = homology(recoarsen(space, space.coarseMax), max_degree) == direct;
  r.add("u_continuity.recoarsen_maximal", same);
  std::vector<Relation> prefix;
  std::vector<HomologyGroup> last = homology(make_space(space.points, space.group, space.action, {}, space.bornology),
                                             max_degree);
  for (const auto& g : space.coarseGenerators) {
    prefix.push_back(g);
    last = homology(make_space(space.points, space.group, space.action, prefix, space.bornology), max_degree);
  }
  bool stab = last == direct;
  r.add("u_continuity.generator_chain_stabilizes", stab, stab ? "" : "final stage differs from the space");
  return r;
}

Report additivity_factorization(const std::vector<Space>& family, int max_degree) {
  Report r;
  Space u = free_union(family);
  auto off = summand_offsets(family);
  ChainComplex cu = chain_complex(u, max_degree);
  std::vector<ChainComplex> parts;
  for (const auto& s : family) parts.push_back(chain_complex(s, max_degree));
  std::vector<SparseMatrix> iso;
  for (int n = 0; n <= max_degree; ++n) {
    std::vector<std::pair<int, Int>> cols;
    for (size_t i = 0; i < parts.size(); ++i)
      for (const auto& e : parts[i].basis[n]) {
        std::vector<int> t = e.tuple;
        for (int& p : t) p += off[i];
        cols.emplace_back(cu.index_of(n, canonical_tuple(u, t)), Int(1));
      }
    bool total = std::all_of(cols.begin(), cols.end(), [](const auto& c) { return c.first >= 0; });
    SparseMatrix m = permutation_like(cu.dim(n), cols);
    std::set<int> rows;
    for (const auto& c : cols) rows.insert(c.first);
    bool bij = total && cols.size() == cu.dim(n) && rows.size() == cols.size();
    r.add(dname("additivity.bijective", n), bij,
          bij ? "" : std::to_string(cols.size()) + " summand basis elements vs " + std::to_string(cu.dim(n)));
    iso.push_back(std::move(m));
  }
  bool chain = true;
  for (int n = 1; n <= max_degree && chain; ++n) {
    SparseMatrix sum(iso[n - 1].cols(), iso[n].cols());
    size_t ro = 0, co = 0;
    for (const auto& p : parts) {
      for (size_t j = 0; j < p.dim(n); ++j) {
        SparseVector col;
        for (const auto& [i, v] : p.boundary[n].column(j)) col.emplace_back(static_cast<int>(ro + i), v);
        sum.set_column(co + j, col);
      }
      ro += p.dim(n - 1);
      co += p.dim(n);
    }
    if (cu.boundary[n] * iso[n] != iso[n - 1] * sum) chain = false;
  }
  r.add("additivity.chain_isomorphism", chain, chain ? "" : "boundaries do not commute with the factorization");
  return r;
}

const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::Res: return "res";
    case TransformKind::Qh: return "qH";
    case TransformKind::Ind: return "ind";
  }
  return "?";
}

TransformKind transform_kind_from_string(const std::string& s) {
  if (s == "res") return TransformKind::Res;
  if (s == "qH" || s == "qh") return TransformKind::Qh;
  if (s == "ind") return TransformKind::Ind;
  fail(ErrorKind::Input, "unknown chain transform '" + s + "'");
}

namespace {

void transform_res(ChainTransform& t, const GroupHom& hom, const Space& x, int top) {
  Space r = restrict_along(x, hom);
  t.source = chain_complex(x, top);
  t.target = chain_complex(r, top);
  for (int n = 0; n <= top; ++n) {
    SparseMatrix m(t.target.dim(n), t.source.dim(n));
    for (size_t j = 0; j < t.source.dim(n); ++j) {
      std::set<int> hits;
      for (const auto& u : orbit_of(x, t.source.basis[n][j].tuple)) hits.insert(t.target.index_of(n, canonical_tuple(r, u)));
      SparseVector col;
      for (int i : hits) col.emplace_back(i, Int(1));
      m.set_column(j, col);
    }
    t.map.push_back(std::move(m));
  }
}

// Orbit-representative restriction followed by projection to the orbit set.
std::vector<SparseMatrix> quotient_matrices(const Space& x, const ChainComplex& cx, const Space& q,
                                            const ChainComplex& cq, const std::vector<int>& class_of,
                                            const std::vector<char>& is_rep, int top, Report& report,
                                            const std::string& label) {
  std::vector<SparseMatrix> out;
  bool ok = true;
  std::string witness;
  for (int n = 0; n <= top; ++n) {
    SparseMatrix m(cq.dim(n), cx.dim(n));
    for (size_t j = 0; j < cx.dim(n); ++j) {
      std::map<std::vector<int>, Int> values;
      for (const auto& u : orbit_of(x, cx.basis[n][j].tuple)) {
        if (!is_rep[u[0]]) continue;
        std::vector<int> img;
        for (int p : u) img.push_back(class_of[p]);
        values[img] += 1;
      }
      SparseVector col;
      std::string w;
      if (!to_orbit_basis(q, cq, n, values, col, w)) {
        ok = false;
        if (witness.empty()) witness = w;
      }
      m.set_column(j, col);
    }
    out.push_back(std::move(m));
  }
  report.add(label, ok, witness);
  return out;
}

void transform_qh(ChainTransform& t, const GroupHom& hom, const Space& x, int top) {
  Space q = quotient_along(x, hom);
  OrbitPartition part = orbit_partition(x, hom.image());
  t.source = chain_complex(x, top);
  t.target = chain_complex(q, top);
  std::vector<char> least(x.size(), 0), greatest(x.size(), 0);
  for (const auto& c : part.classes) {
    least[c.front()] = 1;
    greatest[c.back()] = 1;
  }
  t.map = quotient_matrices(x, t.source, q, t.target, part.class_of, least, top, t.report, "transform.invariant_values");
  Report alt;
  auto other = quotient_matrices(x, t.source, q, t.target, part.class_of, greatest, top, alt, "alt");
  bool same = alt.passed() && other == t.map;
  t.report.add("transform.independent_of_representatives", same);
}

void transform_ind(ChainTransform& t, const GroupHom& hom, const Space& x, int top) {
  const FiniteGroup& G = *hom.target();
  Induced ind = induce(x, hom);
  t.source = chain_complex(x, top);
  t.target = chain_complex(ind.space, top);
  const int nx = x.size();
  std::vector<char> is_rep(G.order() * nx, 0);
  for (const auto& mem : ind.members) is_rep[mem.front()] = 1;
  bool ok = true;
  std::string witness;
  for (int n = 0; n <= top; ++n) {
    SparseMatrix m(t.target.dim(n), t.source.dim(n));
    for (size_t j = 0; j < t.source.dim(n); ++j) {
      std::map<std::vector<int>, Int> values;
      for (const auto& s : orbit_of(x, t.source.basis[n][j].tuple))
        for (int g = 0; g < G.order(); ++g) {
          if (!is_rep[g * nx + s[0]]) continue;
          std::vector<int> img;
          for (int p : s) img.push_back(ind.class_of[g * nx + p]);
          values[img] += 1;
        }
      SparseVector col;
      std::string w;
      if (!to_orbit_basis(ind.space, t.target, n, values, col, w)) {
        ok = false;
        if (witness.empty()) witness = w;
      }
      m.set_column(j, col);
    }
    t.map.push_back(std::move(m));
  }
  t.report.add("transform.invariant_values", ok, witness);
  if (!hom.injective()) {
    t.note = "isomorphism not asserted: the homomorphism is not injective";
    return;
  }
  // Inverse: restriction along x -> [e, x].
  std::vector<int> back(ind.space.size(), -1);
  for (int p = 0; p < nx; ++p) back[ind.cls(G.identity(), p)] = p;
  for (int n = 0; n <= top; ++n) {
    SparseMatrix m(t.source.dim(n), t.target.dim(n));
    for (size_t j = 0; j < t.target.dim(n); ++j) {
      SparseVector col;
      for (const auto& v : orbit_of(ind.space, t.target.basis[n][j].tuple)) {
        std::vector<int> pre;
        bool inside = true;
        for (int p : v) {
          if (back[p] < 0) inside = false;
          pre.push_back(back[p]);
        }
        if (!inside || canonical_tuple(x, pre) != pre) continue;
        col.emplace_back(t.source.index_of(n, pre), Int(1));
      }
      m.set_column(j, col);
    }
    t.inverse.push_back(std::move(m));
  }
  bool inv = true;
  for (int n = 0; n <= top; ++n)
    if (!check_identity(t.inverse[n] * t.map[n]) || !check_identity(t.map[n] * t.inverse[n])) inv = false;
  t.report.add("transform.inverse_by_component_restriction", inv);
  t.note = "chain isomorphism";
}

}  // namespace

ChainTransform chain_transform(TransformKind kind, const GroupHom& hom, const Space& space, int max_degree) {
  ChainTransform t;
  switch (kind) {
    case TransformKind::Res: transform_res(t, hom, space, max_degree); break;
    case TransformKind::Qh: transform_qh(t, hom, space, max_degree); break;
    case TransformKind::Ind: transform_ind(t, hom, space, max_degree); break;
  }
  int bad = -1;
  bool cm = is_chain_map(t.source, t.target, t.map, &bad);
  t.report.add("transform.chain_map", cm, cm ? "" : "fails in degree " + std::to_string(bad));
  return t;
}

}  // namespace coarsex
