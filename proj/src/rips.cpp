#include "coarsex/rips.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "coarsex/constructions.hpp"
#include "coarsex/error.hpp"
#include "coarsex/group_change.hpp"

namespace coarsex {

bool SimplicialComplex::contains(const Simplex& s) const { return index_of(s) >= 0; }

int SimplicialComplex::index_of(const Simplex& s) const {
  int d = static_cast<int>(s.size()) - 1;
  if (d < 0 || d > max_dim()) return -1;
  const auto& list = simplices[d];
  auto it = std::lower_bound(list.begin(), list.end(), s);
  return it != list.end() && *it == s ? static_cast<int>(it - list.begin()) : -1;
}

std::string SimplicialComplex::str() const {
  std::ostringstream out;
  for (const auto& layer : simplices)
    for (const auto& s : layer) {
      for (size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
      out << "\n";
    }
  return out.str();
}

SimplicialComplex parse_complex(const std::string& text) {
  SimplicialComplex k;
  k.group = make_group(FiniteGroup::trivial());
  std::istringstream in(text);
  std::string line;
  std::set<Simplex> all;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Simplex s;
    long v;
    while (ls >> v) {
      if (v < 0) fail(ErrorKind::Input, "negative vertex in complex");
      s.push_back(static_cast<int>(v));
    }
    if (!ls.eof()) fail(ErrorKind::Input, "malformed simplex line: " + line);
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) fail(ErrorKind::Input, "repeated vertex in simplex");
    k.vertices = std::max(k.vertices, s.back() + 1);
    all.insert(s);
  }
  for (const auto& s : all) {
    if (k.simplices.size() < s.size()) k.simplices.resize(s.size());
    k.simplices[s.size() - 1].push_back(s);
  }
  for (auto& layer : k.simplices) std::sort(layer.begin(), layer.end());
  k.action = trivial_action(*k.group, k.vertices);
  return k;
}

Report validate_complex(const SimplicialComplex& k) {
  Report r;
  std::string w;
  for (int d = 1; d <= k.max_dim() && w.empty(); ++d)
    for (const auto& s : k.simplices[d]) {
      for (size_t i = 0; i < s.size() && w.empty(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + i);
        if (!k.contains(face)) w = "a face of a " + std::to_string(d) + "-simplex is missing";
      }
      if (!w.empty()) break;
    }
  r.add("complex.downward_closed", w.empty(), w);
  w.clear();
  for (int g = 0; g < k.group->order() && w.empty(); ++g)
    for (const auto& layer : k.simplices)
      for (const auto& s : layer) {
        Simplex t;
        for (int v : s) t.push_back(k.action[g][v]);
        std::sort(t.begin(), t.end());
        if (!k.contains(t)) {
          w = "translate by " + k.group->name(g) + " of a simplex is missing";
          break;
        }
      }
  r.add("complex.invariant", w.empty(), w);
  return r;
}

namespace {

void extend_cliques(const Relation& adj, int n, Simplex& current, int max_size,
                    std::vector<std::vector<Simplex>>& out) {
  out[current.size() - 1].push_back(current);
  if (static_cast<int>(current.size()) == max_size) return;
  for (int v = current.back() + 1; v < n; ++v) {
    bool ok = true;
    for (int u : current)
      if (!adj.contains(u, v)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    current.push_back(v);
    extend_cliques(adj, n, current, max_size, out);
    current.pop_back();
  }
}

// Distances in the 1-skeleton; -1 when unreachable.
std::vector<std::vector<int>> path_metric(const Relation& adj, int n) {
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    d[s][s] = 0;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y = 0; y < n; ++y)
        if (d[s][y] < 0 && adj.contains(x, y)) {
          d[s][y] = d[s][x] + 1;
          q.push(y);
        }
    }
  }
  return d;
}

}  // namespace

RipsComplex rips_complex(const Space& space, const Relation& u, int max_dim) {
  const int n = space.size();
  if (max_dim < 0) fail(ErrorKind::Precondition, "negative dimension cap");
  if (u.carrier_size() != n) fail(ErrorKind::Domain, "entourage over a different carrier");
  for (int g = 0; g < space.group->order(); ++g)
    for (auto [x, y] : u.pairs())
      if (!u.contains(space.act(g, x), space.act(g, y)))
        fail(ErrorKind::Precondition, "entourage is not invariant: translate of " + describe_pair(space, x, y));
  if (!u.subset_of(space.coarseMax)) fail(ErrorKind::Precondition, "entourage is not in the coarse structure");
  for (int x = 0; x < n; ++x)
    if (!u.contains(x, x)) fail(ErrorKind::Precondition, "entourage does not contain the diagonal");
  Relation adj(n);
  for (auto [x, y] : u.pairs()) {
    adj.insert(x, y);
    adj.insert(y, x);
  }
  RipsComplex r;
  r.complex.vertices = n;
  r.complex.group = space.group;
  r.complex.action = space.action;
  r.complex.simplices.resize(max_dim + 1);
  for (int v = 0; v < n; ++v) {
    Simplex s{v};
    extend_cliques(adj, n, s, max_dim + 1, r.complex.simplices);
  }
  for (auto& layer : r.complex.simplices) std::sort(layer.begin(), layer.end());
  while (r.complex.simplices.size() > 1 && r.complex.simplices.back().empty()) r.complex.simplices.pop_back();
  auto d = path_metric(adj, n);
  for (const auto& row : d)
    for (int v : row) r.diameter = std::max(r.diameter, v);
  std::vector<Relation> scales;
  for (int k = 1; k <= std::max(1, r.diameter); ++k) {
    Relation rk(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (d[x][y] >= 0 && d[x][y] <= k) rk.insert(x, y);
    scales.push_back(rk);
  }
  r.bd = make_space(space.points, space.group, space.action, scales, space.bornology);
  Report vr = validate_space(r.bd);
  if (!vr.passed()) fail(ErrorKind::Construction, "P_U(X)_bd is not a valid space");
  return r;
}

RipsFiltration rips_filtration(const Space& space, const std::vector<Relation>& chain, int max_dim) {
  RipsFiltration f;
  for (const auto& u : chain) f.stages.push_back(rips_complex(space, u, max_dim));
  for (size_t i = 1; i < f.stages.size(); ++i) {
    bool inc = true;
    const auto& a = f.stages[i - 1].complex;
    for (const auto& layer : a.simplices)
      for (const auto& s : layer) inc = inc && f.stages[i].complex.contains(s);
    f.report.add("filtration.inclusion." + std::to_string(i), inc);
  }
  return f;
}

DiracEquivalence dirac_equivalence(const Space& space, const Relation& u, const std::optional<Space>& twist) {
  const FiniteGroup& G = *space.group;
  if (!twist) {
    if (G.order() != 1)
      fail(ErrorKind::Precondition,
           "the untwisted Dirac equivalence needs a torsion-free group acting freely; a nontrivial finite group has torsion");
  } else {
    if (!same_group(space, *twist)) fail(ErrorKind::Precondition, "twisting space over a different group");
    for (int x = 0; x < twist->size(); ++x)
      if (twist->stabilizer(x).size() != 1)
        fail(ErrorKind::Precondition, "the twisting space is not a free Gamma-set at " + twist->points[x]);
  }
  DiracEquivalence out;
  RipsComplex rc = rips_complex(space, u, 1);
  Space xu = recoarsen(space, u);
  out.source = twist ? tensor(xu, *twist) : xu;
  out.target = twist ? tensor(rc.bd, *twist) : rc.bd;
  const int n = out.source.size();
  std::vector<int> delta(n);
  for (int p = 0; p < n; ++p) delta[p] = p;
  out.delta = make_map(out.source, out.target, delta);
  // Inverse: one representative per orbit, its least support vertex, extended equivariantly.
  std::vector<int> inv(n, -1);
  for (const auto& orbit : out.target.orbits()) {
    int rep = orbit.front();
    out.representatives.push_back(rep);
    int support = rep;
    for (int g = 0; g < G.order(); ++g) {
      int p = out.target.act(g, rep), image = out.source.act(g, support);
      if (inv[p] >= 0 && inv[p] != image) fail(ErrorKind::Construction, "equivariant extension is not well defined");
      inv[p] = image;
    }
  }
  out.inverse = make_map(out.target, out.source, inv);
  out.analysis = analyze_map(out.delta, &out.inverse);
  out.report.absorb("dirac", morphism_checks(out.delta, "delta"));
  out.report.absorb("dirac", morphism_checks(out.inverse, "inverse"));
  SpaceMap gd = compose(out.inverse, out.delta);
  bool left = gd.assign == identity_map(out.source).assign;
  out.report.add("dirac.inverse_after_delta_is_identity", left);
  SpaceMap dg = compose(out.delta, out.inverse);
  int bad = -1;
  bool close = are_close(out.target, dg.assign, identity_map(out.target).assign, &bad);
  out.report.add("dirac.delta_after_inverse_close_to_identity", close,
                 close ? "" : "at " + out.target.points[bad]);
  out.report.add("dirac.equivalence", out.analysis.equivalence == Verdict::Pass);
  return out;
}

RipsMap rips_functorial(const SpaceMap& f, const Relation& u, const Relation& u_target, int max_dim) {
  for (auto [x, y] : u.pairs())
    if (!u_target.contains(f.assign[x], f.assign[y]))
      fail(ErrorKind::Precondition, "image of " + describe_pair(f.domain, x, y) + " is not in the target entourage");
  RipsMap out;
  out.source = rips_complex(f.domain, u, max_dim);
  out.target = rips_complex(f.codomain, u_target, max_dim);
  out.vertex_map = f.assign;
  bool simplicial = true;
  std::string w;
  for (const auto& layer : out.source.complex.simplices)
    for (const auto& s : layer) {
      Simplex t;
      for (int v : s) t.push_back(f.assign[v]);
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      if (!out.target.complex.contains(t)) {
        simplicial = false;
        if (w.empty()) w = "image of a " + std::to_string(s.size() - 1) + "-simplex is not a simplex";
      }
    }
  out.report.add("rips_map.simplicial", simplicial, w);
  out.map = make_map(out.source.bd, out.target.bd, f.assign);
  out.report.absorb("rips_map", morphism_checks(out.map, "bd"));
  return out;
}

std::vector<HomologyGroup> simplicial_homology(const SimplicialComplex& k, int max_degree) {
  // boundary[d] : C_d -> C_{d-1}
  auto boundary = [&](int d) {
    DenseMatrix m(k.count(d - 1), k.count(d));
    if (d < 1 || d > k.max_dim()) return m;
    for (size_t j = 0; j < k.simplices[d].size(); ++j) {
      const Simplex& s = k.simplices[d][j];
      for (size_t i = 0; i < s.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + i);
        m.at(k.index_of(face), j) += (i % 2 == 0) ? 1 : -1;
      }
    }
    return m;
  };
  std::vector<HomologyGroup> out;
  std::vector<size_t> ranks(max_degree + 3, 0);
  std::vector<std::vector<Int>> invariants(max_degree + 3);
  for (int d = 1; d <= max_degree + 1; ++d) {
    DenseMatrix b = boundary(d);
    if (b.rows() == 0 || b.cols() == 0) continue;
    invariants[d] = smith_invariants(b);
    ranks[d] = invariants[d].size();
  }
  for (int n = 0; n <= max_degree; ++n) {
    HomologyGroup h;
    h.rank = static_cast<int>(k.count(n) - ranks[n] - ranks[n + 1]);
    for (const auto& v : invariants[n + 1])
      if (v > 1) h.torsion.push_back(v);
    out.push_back(h);
  }
  return out;
}

BoundedGeometry sbg_check(const Space& space) {
  BoundedGeometry out;
  std::string w;
  for (const auto& b : space.bornology)
    if (b.size() > 1) {
      w = "generator " + describe(space, b) + " is not a singleton";
      break;
    }
  bool singletons = true;
  for (int x = 0; x < space.size() && singletons; ++x) singletons = space.is_bounded({x});
  out.minimal_bornology = w.empty() && singletons;
  out.report.add("sbg.minimal_bornology", out.minimal_bornology, w.empty() && !singletons ? "a singleton is unbounded" : w);
  Relation step = step_entourage(space);
  for (int x = 0; x < space.size(); ++x) out.bound = std::max(out.bound, static_cast<int>(step.row(x).size()));
  out.report.add("sbg.uniform_bound", true, "bound " + std::to_string(out.bound));
  return out;
}

}  // namespace coarsex
