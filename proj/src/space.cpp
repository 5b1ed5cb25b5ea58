#include "coarsex/space.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"

namespace coarsex {

PointSet normalized(PointSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const PointSet& a, const PointSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

PointSet full_set(int n) {
  PointSet s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

Relation Relation::diagonal(int n) {
  Relation r(n);
  for (int x = 0; x < n; ++x) r.insert(x, x);
  return r;
}

Relation Relation::full(int n) {
  Relation r(n);
  std::fill(r.bits_.begin(), r.bits_.end(), 1);
  return r;
}

Relation Relation::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  Relation r(n);
  for (auto [x, y] : pairs) r.insert(x, y);
  return r;
}

void Relation::insert(int x, int y) {
  if (x < 0 || y < 0 || x >= n_ || y >= n_)
    fail(ErrorKind::Domain, "pair (" + std::to_string(x) + "," + std::to_string(y) + ") has an endpoint outside the carrier");
  bits_[static_cast<size_t>(x) * n_ + y] = 1;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y)
      if (contains(x, y)) out.emplace_back(x, y);
  return out;
}

size_t Relation::size() const { return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

bool Relation::subset_of(const Relation& other) const {
  if (n_ != other.n_) return false;
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

PointSet Relation::row(int x) const {
  PointSet out;
  for (int y = 0; y < n_; ++y)
    if (contains(x, y)) out.push_back(y);
  return out;
}

Relation& Relation::operator|=(const Relation& other) {
  if (n_ != other.n_) fail(ErrorKind::Domain, "union of relations over different carriers");
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

Relation compose(const Relation& u, const Relation& v) {
  const int n = u.carrier_size();
  if (v.carrier_size() != n) fail(ErrorKind::Domain, "composition of relations over different carriers");
  Relation out(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!u.contains(x, y)) continue;
      for (int z = 0; z < n; ++z)
        if (v.contains(y, z)) out.insert(x, z);
    }
  return out;
}

Relation invert(const Relation& u) {
  Relation out(u.carrier_size());
  for (auto [x, y] : u.pairs()) out.insert(y, x);
  return out;
}

PointSet thicken(const Relation& u, const PointSet& b) {
  const int n = u.carrier_size();
  PointSet out;
  for (int x = 0; x < n; ++x)
    for (int y : b) {
      if (y < 0 || y >= n) fail(ErrorKind::Domain, "thickened set has a point outside the carrier");
      if (u.contains(x, y)) {
        out.push_back(x);
        break;
      }
    }
  return out;
}

Relation saturate(const std::vector<Relation>& generators, const FiniteGroup& group, const ActionTable& action,
                  int n) {
  std::vector<std::pair<int, int>> edges;
  bool dropped = !faults::active().drop_entourage_pair;
  for (const auto& gen : generators) {
    if (gen.carrier_size() != n) fail(ErrorKind::Domain, "entourage generator over a different carrier");
    auto ps = gen.pairs();
    if (!dropped) {
      auto it = std::find_if(ps.rbegin(), ps.rend(), [](auto p) { return p.first != p.second; });
      if (it != ps.rend()) {
        ps.erase(std::next(it).base());
        dropped = true;
      }
    }
    edges.insert(edges.end(), ps.begin(), ps.end());
  }
  // Closure under translates, inversion and composition is the equivalence relation
  // generated by all translated pairs.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [x, y] : edges)
    for (int g = 0; g < group.order(); ++g) {
      int a = find(action[g][x]), b = find(action[g][y]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  Relation out(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (find(x) == find(y)) out.insert(x, y);
  return out;
}

int Space::index_of(const std::string& point) const {
  auto it = std::find(points.begin(), points.end(), point);
  if (it == points.end()) fail(ErrorKind::Domain, "unknown point '" + point + "'");
  return static_cast<int>(it - points.begin());
}

std::vector<int> Space::orbit_ids() const {
  std::vector<int> id(size(), -1);
  int next = 0;
  for (int x = 0; x < size(); ++x) {
    if (id[x] >= 0) continue;
    for (int g = 0; g < group->order(); ++g) id[act(g, x)] = next;
    ++next;
  }
  return id;
}

std::vector<PointSet> Space::orbits() const {
  auto id = orbit_ids();
  int count = id.empty() ? 0 : *std::max_element(id.begin(), id.end()) + 1;
  std::vector<PointSet> out(count);
  for (int x = 0; x < size(); ++x) out[id[x]].push_back(x);
  return out;
}

std::vector<int> Space::stabilizer(int x) const {
  std::vector<int> out;
  for (int g = 0; g < group->order(); ++g)
    if (act(g, x) == x) out.push_back(g);
  return out;
}

PointSet Space::orbit_closure(const PointSet& b) const {
  PointSet out;
  for (int x : b)
    for (int g = 0; g < group->order(); ++g) out.push_back(act(g, x));
  return normalized(out);
}

bool Space::is_invariant(const PointSet& b) const { return orbit_closure(b) == normalized(b); }

bool Space::is_bounded(const PointSet& b) const {
  // Finitely many generators: the bounded sets are exactly the subsets of their union.
  PointSet all;
  for (const auto& g : bornology) all = set_union(all, g);
  return is_subset(normalized(b), all);
}

Space make_space(std::vector<std::string> points, GroupPtr group, ActionTable action,
                 std::vector<Relation> generators, std::vector<PointSet> bornology) {
  Space s;
  s.points = std::move(points);
  s.group = std::move(group);
  s.action = std::move(action);
  const int n = s.size();
  if (static_cast<int>(s.action.size()) != s.group->order())
    fail(ErrorKind::Domain, "action table needs one permutation per group element");
  for (const auto& perm : s.action)
    if (static_cast<int>(perm.size()) != n) fail(ErrorKind::Domain, "action permutation has wrong length");
  for (auto& gen : generators)
    if (gen.carrier_size() != n) fail(ErrorKind::Domain, "entourage generator over a different carrier");
  s.coarseGenerators = std::move(generators);
  s.coarseMax = saturate(s.coarseGenerators, *s.group, s.action, n);
  for (auto& b : bornology) {
    b = normalized(b);
    for (int x : b)
      if (x < 0 || x >= n) fail(ErrorKind::Domain, "bornology generator has a point outside the carrier");
  }
  s.bornology = std::move(bornology);
  return s;
}

ActionTable trivial_action(const FiniteGroup& group, int n) {
  return ActionTable(group.order(), full_set(n));
}

bool same_group(const Space& a, const Space& b) { return a.group->same_as(*b.group); }

std::string describe(const Space& s, const PointSet& set) {
  std::string out = "{";
  for (size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += s.points[set[i]];
  }
  return out + "}";
}

std::string describe_pair(const Space& s, int x, int y) { return "(" + s.points[x] + "," + s.points[y] + ")"; }

Report validate_space(const Space& space) {
  Report r;
  const int n = space.size();
  const FiniteGroup& G = *space.group;
  {
    std::set<std::string> seen(space.points.begin(), space.points.end());
    r.add("carrier.distinct", static_cast<int>(seen.size()) == n, seen.size() == space.points.size() ? "" : "duplicate point identifiers");
  }
  {
    std::string w;
    bool ok = static_cast<int>(space.action.size()) == G.order();
    for (int g = 0; ok && g < G.order(); ++g) {
      std::vector<int> p = space.action[g];
      std::sort(p.begin(), p.end());
      if (p != full_set(n)) {
        ok = false;
        w = "element " + G.name(g) + " does not act by a permutation";
      }
    }
    for (int x = 0; ok && x < n; ++x)
      if (space.act(G.identity(), x) != x) {
        ok = false;
        w = "identity moves " + space.points[x];
      }
    for (int a = 0; ok && a < G.order(); ++a)
      for (int b = 0; ok && b < G.order(); ++b)
        for (int x = 0; ok && x < n; ++x)
          if (space.act(G.mul(a, b), x) != space.act(a, space.act(b, x))) {
            ok = false;
            w = "action law fails at (" + G.name(a) + "," + G.name(b) + "," + space.points[x] + ")";
          }
    r.add("action.homomorphism", ok, w);
    if (!ok) return r;
  }
  const Relation& C = space.coarseMax;
  if (C.carrier_size() != n) {
    r.add("coarse.carrier", false, "maximal entourage over a different carrier");
    return r;
  }
  {
    std::string w;
    for (int x = 0; x < n && w.empty(); ++x)
      if (!C.contains(x, x)) w = "missing " + describe_pair(space, x, x);
    r.add("coarse.diagonal", w.empty(), w);
  }
  {
    std::string w;
    for (auto [x, y] : C.pairs())
      if (!C.contains(y, x)) {
        w = "missing inverse of " + describe_pair(space, x, y);
        break;
      }
    r.add("coarse.symmetric", w.empty(), w);
  }
  {
    std::string w;
    Relation cc = compose(C, C);
    for (auto [x, z] : cc.pairs())
      if (!C.contains(x, z)) {
        w = "composite pair " + describe_pair(space, x, z) + " missing";
        break;
      }
    r.add("coarse.composition", w.empty(), w);
  }
  {
    std::string w;
    for (auto [x, y] : C.pairs()) {
      for (int g = 0; g < G.order() && w.empty(); ++g)
        if (!C.contains(space.act(g, x), space.act(g, y)))
          w = G.name(g) + " translate of " + describe_pair(space, x, y) + " missing";
      if (!w.empty()) break;
    }
    r.add("coarse.invariant", w.empty(), w);
  }
  {
    std::string w;
    for (size_t i = 0; i < space.coarseGenerators.size() && w.empty(); ++i) {
      const auto& gen = space.coarseGenerators[i];
      if (gen.carrier_size() != n) {
        w = "generator " + std::to_string(i) + " over a different carrier";
        break;
      }
      for (auto [x, y] : gen.pairs())
        if (!C.contains(x, y)) {
          w = "generator " + std::to_string(i) + " pair " + describe_pair(space, x, y) + " not in maximal entourage";
          break;
        }
    }
    r.add("coarse.generators_contained", w.empty(), w);
  }
  {
    PointSet covered;
    for (const auto& b : space.bornology) covered = set_union(covered, b);
    PointSet missing = set_difference(full_set(n), covered);
    r.add("bornology.covers", missing.empty(),
          missing.empty() ? "" : "does not cover carrier: " + describe(space, missing));
  }
  {
    std::string w;
    for (const auto& b : space.bornology) {
      for (int g = 0; g < G.order() && w.empty(); ++g) {
        PointSet gb;
        for (int x : b) gb.push_back(space.act(g, x));
        if (!space.is_bounded(gb)) w = G.name(g) + " translate of " + describe(space, b) + " unbounded";
      }
      if (!w.empty()) break;
    }
    r.add("bornology.invariant", w.empty(), w);
  }
  {
    std::string w;
    for (const auto& b : space.bornology)
      if (!space.is_bounded(thicken(C, b))) {
        w = "thickening of " + describe(space, b) + " unbounded";
        break;
      }
    r.add("compatibility", w.empty(), w);
  }
  return r;
}

Relation step_entourage(const Space& space) {
  const int n = space.size();
  Relation s = Relation::diagonal(n);
  for (const auto& gen : space.coarseGenerators)
    for (auto [x, y] : gen.pairs())
      for (int g = 0; g < space.group->order(); ++g) {
        s.insert(space.act(g, x), space.act(g, y));
        s.insert(space.act(g, y), space.act(g, x));
      }
  return s;
}

Space subspace(const Space& space, const PointSet& subset_in) {
  PointSet subset = normalized(subset_in);
  for (int x : subset)
    if (x < 0 || x >= space.size()) fail(ErrorKind::Domain, "subspace point outside the carrier");
  if (!space.is_invariant(subset)) fail(ErrorKind::Precondition, "subspace " + describe(space, subset) + " is not invariant");
  const int k = static_cast<int>(subset.size());
  std::vector<int> local(space.size(), -1);
  for (int i = 0; i < k; ++i) local[subset[i]] = i;
  Space s;
  s.group = space.group;
  for (int x : subset) s.points.push_back(space.points[x]);
  s.action.assign(space.group->order(), std::vector<int>(k));
  for (int g = 0; g < space.group->order(); ++g)
    for (int i = 0; i < k; ++i) s.action[g][i] = local[space.act(g, subset[i])];
  s.coarseMax = Relation(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (space.coarseMax.contains(subset[i], subset[j])) s.coarseMax.insert(i, j);
  s.coarseGenerators = {s.coarseMax};
  for (const auto& b : space.bornology) {
    PointSet c;
    for (int x : b)
      if (local[x] >= 0) c.push_back(local[x]);
    if (!c.empty()) s.bornology.push_back(normalized(c));
  }
  return s;
}

bool is_equivariant(const Space& dom, const Space& cod, const std::vector<int>& f) {
  if (!same_group(dom, cod)) return false;
  for (int g = 0; g < dom.group->order(); ++g)
    for (int x = 0; x < dom.size(); ++x)
      if (f[dom.act(g, x)] != cod.act(g, f[x])) return false;
  return true;
}

SpaceMap make_map(Space domain, Space codomain, std::vector<int> assign) {
  if (static_cast<int>(assign.size()) != domain.size()) fail(ErrorKind::Domain, "map is not total on the domain");
  for (int y : assign)
    if (y < 0 || y >= codomain.size()) fail(ErrorKind::Domain, "map value outside the codomain");
  SpaceMap m{std::move(domain), std::move(codomain), std::move(assign), false};
  m.equivariant = is_equivariant(m.domain, m.codomain, m.assign);
  return m;
}

SpaceMap identity_map(const Space& s) { return make_map(s, s, full_set(s.size())); }

SpaceMap compose(const SpaceMap& outer, const SpaceMap& inner) {
  if (outer.domain.points != inner.codomain.points) fail(ErrorKind::Domain, "composing maps with mismatched carriers");
  std::vector<int> a(inner.assign.size());
  for (size_t i = 0; i < a.size(); ++i) a[i] = outer.assign[inner.assign[i]];
  return make_map(inner.domain, outer.codomain, a);
}

bool is_controlled(const Space& dom, const Space& cod, const std::vector<int>& f, std::pair<int, int>* witness) {
  for (auto [x, y] : dom.coarseMax.pairs())
    if (!cod.coarseMax.contains(f[x], f[y])) {
      if (witness) *witness = {x, y};
      return false;
    }
  return true;
}

bool is_proper(const Space& dom, const Space& cod, const std::vector<int>& f, std::string* witness) {
  for (const auto& b : cod.bornology) {
    PointSet pre;
    for (int x = 0; x < dom.size(); ++x)
      if (std::binary_search(b.begin(), b.end(), f[x])) pre.push_back(x);
    if (!dom.is_bounded(pre)) {
      if (witness) *witness = "preimage of " + describe(cod, b) + " unbounded";
      return false;
    }
  }
  return true;
}

bool are_close(const Space& cod, const std::vector<int>& f, const std::vector<int>& g, int* witness) {
  for (size_t x = 0; x < f.size(); ++x)
    if (!cod.coarseMax.contains(f[x], g[x])) {
      if (witness) *witness = static_cast<int>(x);
      return false;
    }
  return true;
}

namespace {

struct EquivalenceCheck {
  bool ok = false;
  std::string witness;
};

EquivalenceCheck check_equivalence(const SpaceMap& f, const std::vector<int>& g) {
  const Space& X = f.domain;
  const Space& Y = f.codomain;
  EquivalenceCheck out;
  if (!is_equivariant(Y, X, g)) {
    out.witness = "inverse candidate not equivariant";
    return out;
  }
  std::pair<int, int> p;
  if (!is_controlled(Y, X, g, &p)) {
    out.witness = "inverse candidate not controlled at " + describe_pair(Y, p.first, p.second);
    return out;
  }
  std::string w;
  if (!is_proper(Y, X, g, &w)) {
    out.witness = "inverse candidate not proper: " + w;
    return out;
  }
  std::vector<int> gf(X.size()), id_x = full_set(X.size()), fg(Y.size()), id_y = full_set(Y.size());
  for (int x = 0; x < X.size(); ++x) gf[x] = g[f.assign[x]];
  for (int y = 0; y < Y.size(); ++y) fg[y] = f.assign[g[y]];
  int bad = -1;
  if (!are_close(X, gf, id_x, &bad)) {
    out.witness = "g.f not close to id at " + X.points[bad];
    return out;
  }
  if (!are_close(Y, fg, id_y, &bad)) {
    out.witness = "f.g not close to id at " + Y.points[bad];
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace

std::optional<std::vector<int>> find_inverse(const SpaceMap& f, int search_bound, bool* exhausted) {
  const Space& X = f.domain;
  const Space& Y = f.codomain;
  if (exhausted) *exhausted = false;
  if (X.size() > search_bound || Y.size() > search_bound) return std::nullopt;
  if (!same_group(X, Y)) {
    if (exhausted) *exhausted = true;
    return std::nullopt;
  }
  const FiniteGroup& G = *X.group;
  auto orbits = Y.orbits();
  const int k = static_cast<int>(orbits.size());
  std::vector<std::vector<int>> candidates(k);
  for (int o = 0; o < k; ++o) {
    int y = orbits[o][0];
    auto stab_y = Y.stabilizer(y);
    for (int x = 0; x < X.size(); ++x) {
      bool ok = Y.coarseMax.contains(f.assign[x], y);
      for (int g : stab_y)
        if (ok && X.act(g, x) != x) ok = false;
      for (int x2 = 0; ok && x2 < X.size(); ++x2)
        if (f.assign[x2] == y && !X.coarseMax.contains(x, x2)) ok = false;
      if (ok) candidates[o].push_back(x);
    }
  }
  std::vector<int> g(Y.size(), -1);
  std::function<bool(int)> search = [&](int o) -> bool {
    if (o == k) return check_equivalence(f, g).ok;
    int y = orbits[o][0];
    for (int x : candidates[o]) {
      for (int h = 0; h < G.order(); ++h) g[Y.act(h, y)] = X.act(h, x);
      bool ok = true;
      for (int yo : orbits[o]) {
        for (int y2 = 0; ok && y2 < Y.size(); ++y2)
          if (g[y2] >= 0 && Y.coarseMax.contains(yo, y2) && !X.coarseMax.contains(g[yo], g[y2])) ok = false;
        if (!ok) break;
      }
      if (ok && search(o + 1)) return true;
      for (int yo : orbits[o]) g[yo] = -1;
    }
    return false;
  };
  if (search(0)) return g;
  if (exhausted) *exhausted = true;
  return std::nullopt;
}

MapReport analyze_map(const SpaceMap& f, const SpaceMap* g, AnalyzeOptions options) {
  MapReport m;
  const Space& X = f.domain;
  const Space& Y = f.codomain;
  if (static_cast<int>(f.assign.size()) != X.size()) fail(ErrorKind::Domain, "map is not total on its domain");
  m.equivariant = is_equivariant(X, Y, f.assign);
  m.report.add("equivariant", m.equivariant, m.equivariant ? "" : "f(g.x) != g.f(x) for some g, x");
  std::pair<int, int> p;
  m.controlled = is_controlled(X, Y, f.assign, &p);
  m.report.add("controlled", m.controlled,
               m.controlled ? "" : "image of " + describe_pair(X, p.first, p.second) + " not in target structure");
  std::string w;
  m.proper = is_proper(X, Y, f.assign, &w);
  m.report.add("proper", m.proper, w);

  if (g) {
    const bool parallel = g->domain.points == X.points && g->codomain.points == Y.points;
    const bool opposite = g->domain.points == Y.points && g->codomain.points == X.points;
    if (!parallel && !opposite) fail(ErrorKind::Domain, "second map matches neither direction of the first");
    if (parallel) {
      int bad = -1;
      m.close = are_close(Y, f.assign, g->assign, &bad);
      m.report.add("close", *m.close, *m.close ? "" : "pair at " + X.points[bad] + " not in target structure");
    }
    if (opposite) {
      if (!m.morphism()) {
        m.equivalence = Verdict::Fail;
        m.report.add("equivalence", false, "f is not a morphism");
      } else {
        auto chk = check_equivalence(f, g->assign);
        m.equivalence = chk.ok ? Verdict::Pass : Verdict::Fail;
        if (chk.ok) m.inverse = g->assign;
        m.report.add("equivalence", chk.ok, chk.witness);
      }
    }
    return m;
  }
  if (!m.morphism()) {
    m.equivalence = Verdict::Fail;
    m.report.add("equivalence", false, "f is not a morphism");
    return m;
  }
  bool exhausted = false;
  auto inv = find_inverse(f, options.search_bound, &exhausted);
  if (inv) {
    m.equivalence = Verdict::Pass;
    m.inverse = inv;
    m.report.add("equivalence", true);
  } else if (exhausted) {
    m.equivalence = Verdict::Fail;
    m.report.add("equivalence", false, "no equivariant inverse up to closeness exists (search exhausted)");
  } else {
    m.equivalence = Verdict::Unknown;
    m.report.unknown("equivalence", "carrier exceeds search bound " + std::to_string(options.search_bound));
  }
  return m;
}

BigFamily generated_family(const Space& space, const PointSet& a) {
  BigFamily fam;
  Relation step = step_entourage(space);
  PointSet cur = normalized(a);
  fam.stages.push_back(cur);
  while (true) {
    PointSet next = thicken(step, cur);
    if (next == cur) break;
    fam.stages.push_back(next);
    cur = next;
  }
  fam.stabilized = thicken(space.coarseMax, cur) == cur;
  return fam;
}

Report check_big_family(const Space& space, const BigFamily& family) {
  Report r;
  std::string w;
  for (size_t i = 0; i + 1 < family.stages.size() && w.empty(); ++i)
    if (!is_subset(family.stages[i], family.stages[i + 1])) w = "stage " + std::to_string(i) + " not contained in the next";
  r.add("family.monotone", w.empty(), w);
  w.clear();
  for (size_t i = 0; i < family.stages.size() && w.empty(); ++i)
    if (!space.is_invariant(family.stages[i])) w = "stage " + std::to_string(i) + " not invariant";
  r.add("family.invariant", w.empty(), w);
  if (family.stabilized && !family.stages.empty()) {
    const auto& last = family.stages.back();
    PointSet t = thicken(space.coarseMax, last);
    r.add("family.absorbs", t == last, t == last ? "" : "thickening adds " + describe(space, set_difference(t, last)));
  } else if (!family.stabilized) {
    // A finite family is big only if some stage absorbs the maximal entourage.
    bool found = false;
    for (const auto& st : family.stages) found = found || thicken(space.coarseMax, st) == st;
    r.add("family.absorbs", found, found ? "" : "no stage absorbs the maximal entourage");
  }
  return r;
}

Verdict is_nice(const Space& space, const PointSet& a_in, AnalyzeOptions options) {
  PointSet a = normalized(a_in);
  if (!space.is_invariant(a)) return Verdict::Fail;
  PointSet t = thicken(space.coarseMax, a);
  Space sa = subspace(space, a);
  Space st = subspace(space, t);
  std::vector<int> incl;
  for (int x : a) incl.push_back(static_cast<int>(std::lower_bound(t.begin(), t.end(), x) - t.begin()));
  auto m = analyze_map(make_map(sa, st, incl), nullptr, options);
  return m.equivalence;
}

SubsetReport classify_subsets(const Space& space, const PointSet& a_in, const std::optional<PointSet>& z_in,
                              const BigFamily* family, AnalyzeOptions options) {
  SubsetReport out;
  const PointSet a = normalized(a_in);
  for (int x : a)
    if (x < 0 || x >= space.size()) fail(ErrorKind::Domain, "subset point outside the carrier");
  out.invariant = space.is_invariant(a);
  out.report.add("A.invariant", out.invariant, out.invariant ? "" : describe(space, a) + " is not invariant");
  out.generated = generated_family(space, a);
  out.report.absorb("generated", check_big_family(space, out.generated));
  if (out.invariant) {
    out.nice = is_nice(space, a, options);
    if (out.nice == Verdict::Unknown)
      out.report.unknown("A.nice", "beyond search bound");
    else
      out.report.add("A.nice", out.nice == Verdict::Pass, out.nice == Verdict::Pass ? "" : "inclusion into its thickening is no equivalence");
  }
  if (!z_in) return out;
  const PointSet z = normalized(*z_in);
  const bool z_inv = space.is_invariant(z);
  out.report.add("Z.invariant", z_inv, z_inv ? "" : describe(space, z) + " is not invariant");
  if (family) {
    Report fr = check_big_family(space, *family);
    bool covers = false;
    for (const auto& st : family->stages) covers = covers || set_union(z, st) == full_set(space.size());
    out.complementary = z_inv && fr.passed() && covers;
    out.report.absorb("family", fr);
    out.report.add("complementary.covers", covers, covers ? "" : "no stage together with Z covers the carrier");
  }
  {
    const PointSet& y = a;
    bool ok = out.invariant && z_inv && set_union(y, z) == full_set(space.size());
    std::string w = ok ? "" : "Y and Z must be invariant and cover the carrier";
    if (ok) {
      const Relation& C = space.coarseMax;
      PointSet lhs = set_intersection(thicken(C, y), thicken(C, z));
      PointSet rhs = thicken(C, set_intersection(y, z));
      if (!is_subset(lhs, rhs)) {
        ok = false;
        w = "U[Y] and U[Z] meet outside W[Y cap Z] at " + describe(space, set_difference(lhs, rhs));
      }
    }
    out.report.add("excisive.intersection", ok, w);
    bool nice_ok = false;
    if (ok) {
      PointSet vz = set_intersection(thicken(space.coarseMax, y), z);
      Verdict v = is_nice(space, vz, options);
      nice_ok = v == Verdict::Pass;
      if (v == Verdict::Unknown)
        out.report.unknown("excisive.nice", "beyond search bound");
      else
        out.report.add("excisive.nice", nice_ok, nice_ok ? "" : "V[Y] cap Z is not nice");
    }
    out.excisive = ok && nice_ok;
  }
  return out;
}

ExhaustionReport classify_exhaustion(const Space& space, const std::vector<PointSet>& family_in,
                                     ExhaustionOptions options) {
  ExhaustionReport out;
  std::vector<PointSet> family;
  for (const auto& f : family_in) family.push_back(normalized(f));
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = 0; j < family.size(); ++j) {
      PointSet u = set_union(family[i], family[j]);
      bool dominated = false;
      for (const auto& k : family) dominated = dominated || is_subset(u, k);
      if (!dominated)
        fail(ErrorKind::Precondition, "family is not directed: no member contains members " + std::to_string(i) +
                                          " and " + std::to_string(j));
    }
  for (size_t i = 0; i < family.size(); ++i)
    if (!space.is_invariant(family[i]))
      fail(ErrorKind::Precondition, "family member " + std::to_string(i) + " is not invariant");
  // On a finite carrier every subset is locally finite; checked literally anyway.
  for (const auto& f : family) {
    bool lf = true;
    for (const auto& b : space.bornology) lf = lf && set_intersection(b, f).size() <= static_cast<size_t>(space.size());
    out.locally_finite.push_back(lf);
  }
  // The maximal locally finite invariant subset is the whole carrier.
  const PointSet all = full_set(space.size());
  bool trap = false;
  for (const auto& f : family) trap = trap || f == all;
  out.trapping = trap || space.size() == 0;
  out.report.add("trapping", out.trapping, out.trapping ? "" : "the carrier itself lies in no member");
  auto orbits = space.orbits();
  if (static_cast<int>(orbits.size()) <= options.max_orbits_enumerated) {
    bool all_trapped = true;
    std::string w;
    const size_t count = size_t{1} << orbits.size();
    for (size_t mask = 0; mask < count && all_trapped; ++mask) {
      PointSet f;
      for (size_t o = 0; o < orbits.size(); ++o)
        if (mask >> o & 1) f = set_union(f, orbits[o]);
      bool inside = false;
      for (const auto& m : family) inside = inside || is_subset(f, m);
      if (!inside) {
        all_trapped = false;
        w = "invariant subset " + describe(space, f) + " lies in no member";
      }
    }
    out.trapping_by_enumeration = all_trapped ? Verdict::Pass : Verdict::Fail;
    out.report.add("trapping.enumerated", all_trapped == out.trapping, w);
  } else {
    out.report.unknown("trapping.enumerated", "too many orbits to enumerate");
  }
  PointSet uni;
  for (const auto& f : family) uni = set_union(uni, f);
  bool exhaustion = uni == all;
  bool cobounded = false;
  if (exhaustion) {
    for (const auto& f : family) {
      PointSet rest = set_difference(all, f);
      // Gamma-bounded: contained in the Gamma-completion, generated by the sets Gamma.B.
      PointSet completed;
      for (const auto& b : space.bornology) completed = set_union(completed, space.orbit_closure(b));
      cobounded = cobounded || is_subset(rest, completed);
    }
  }
  out.co_gamma_bounded = exhaustion && cobounded;
  out.report.add("cobounded_implies_trapping", !out.co_gamma_bounded || out.trapping);
  return out;
}

ShiftFamily standard_shift_family(const Space& base, int width) {
  ShiftFamily fam;
  fam.base = base;
  fam.bands.push_back({width, Relation::diagonal(base.size())});
  return fam;
}

ShiftEndo shift_endo(const ShiftFamily& family, int step) { return ShiftEndo{step, full_set(family.base.size())}; }

FlasquenessReport flasqueness_check(const Space& space, const SpaceMap& f, int horizon) {
  if (horizon < 1) fail(ErrorKind::Precondition, "horizon must be at least 1");
  if (f.domain.points != space.points || f.codomain.points != space.points)
    fail(ErrorKind::Precondition, "flasqueness needs an endomorphism");
  FlasquenessReport out;
  out.horizon = horizon;
  const int n = space.size();
  int bad = -1;
  out.close_to_identity = are_close(space, f.assign, full_set(n), &bad);
  out.report.add("close_to_identity", out.close_to_identity,
                 out.close_to_identity ? "" : "pair at " + space.points[bad] + " outside the structure");
  std::vector<int> power = full_set(n);
  std::string w;
  out.uniformly_controlled = true;
  std::vector<std::vector<int>> powers;
  for (int k = 0; k <= horizon; ++k) {
    powers.push_back(power);
    for (size_t gi = 0; gi < space.coarseGenerators.size() && out.uniformly_controlled; ++gi)
      for (auto [x, y] : space.coarseGenerators[gi].pairs())
        if (!space.coarseMax.contains(power[x], power[y])) {
          out.uniformly_controlled = false;
          w = "f^" + std::to_string(k) + " moves " + describe_pair(space, x, y) + " outside the declared entourage";
          break;
        }
    std::vector<int> next(n);
    for (int x = 0; x < n; ++x) next[x] = f.assign[power[x]];
    power = next;
  }
  out.report.add("uniformly_controlled", out.uniformly_controlled, w);
  w.clear();
  out.escapes_bounded = true;
  for (const auto& b : space.bornology) {
    PointSet gb = space.orbit_closure(b);
    bool escaped = false;
    for (int k = 0; k <= horizon && !escaped; ++k) {
      PointSet image = normalized(powers[k]);
      escaped = set_intersection(gb, image).empty();
    }
    if (!escaped) {
      out.escapes_bounded = false;
      w = "Gamma." + describe(space, b) + " meets every f^n(X) for n <= " + std::to_string(horizon);
      break;
    }
  }
  out.report.add("escapes_bounded", out.escapes_bounded, w);
  out.verdict = out.verified() ? "verified up to horizon " + std::to_string(horizon) : "failed";
  return out;
}

FlasquenessReport flasqueness_check(const ShiftFamily& family, const ShiftEndo& f, int horizon) {
  if (horizon < 1) fail(ErrorKind::Precondition, "horizon must be at least 1");
  const Space& base = family.base;
  const int b = base.size();
  if (static_cast<int>(f.base_map.size()) != b) fail(ErrorKind::Precondition, "base map is not total");
  if (!is_equivariant(base, base, f.base_map)) fail(ErrorKind::Precondition, "base map is not equivariant");
  if (f.step < 0) fail(ErrorKind::Precondition, "the shift step must be non-negative");
  FlasquenessReport out;
  out.horizon = horizon;
  auto label = [&](int m, int x) { return "(" + std::to_string(m) + "," + base.points[x] + ")"; };
  // (1) the graph of f lies in one band generator.
  out.close_to_identity = false;
  for (const auto& band : family.bands) {
    bool ok = f.step <= band.width;
    for (int x = 0; x < b && ok; ++x) ok = band.base.contains(x, f.base_map[x]);
    out.close_to_identity = out.close_to_identity || ok;
  }
  out.report.add("close_to_identity", out.close_to_identity,
                 out.close_to_identity ? "" : "graph of f lies in no band generator");
  // (2) images of every band under the powers of f stay inside that band.
  std::vector<std::vector<int>> base_pow{full_set(b)};
  for (int k = 1; k <= horizon; ++k) {
    std::vector<int> next(b);
    for (int x = 0; x < b; ++x) next[x] = f.base_map[base_pow.back()[x]];
    base_pow.push_back(next);
  }
  out.uniformly_controlled = true;
  std::string w;
  for (size_t gi = 0; gi < family.bands.size() && out.uniformly_controlled; ++gi) {
    const auto& band = family.bands[gi];
    for (int m = 0; m < horizon && out.uniformly_controlled; ++m)
      for (int m2 = std::max(0, m - band.width); m2 <= std::min(horizon - 1, m + band.width) && out.uniformly_controlled; ++m2)
        for (auto [x, y] : band.base.pairs())
          for (int k = 0; k <= horizon; ++k) {
            int im = m + k * f.step, im2 = m2 + k * f.step;
            int ix = base_pow[k][x], iy = base_pow[k][y];
            if (std::abs(im - im2) > band.width || !band.base.contains(ix, iy)) {
              out.uniformly_controlled = false;
              w = "f^" + std::to_string(k) + " maps " + label(m, x) + "," + label(m2, y) + " outside band " +
                  std::to_string(gi);
              break;
            }
          }
  }
  out.report.add("uniformly_controlled", out.uniformly_controlled, w);
  // (3) every singleton generator {(m,x)} below the horizon escapes f^n(X) for some n <= horizon.
  w.clear();
  out.escapes_bounded = true;
  for (int m = 0; m < horizon && out.escapes_bounded; ++m)
    for (int x = 0; x < b && out.escapes_bounded; ++x) {
      PointSet orbit = base.orbit_closure({x});
      bool escaped = false;
      for (int k = 0; k <= horizon && !escaped; ++k) {
        // f^k(X) = {(m', y) : m' >= k*step, y in image of the k-th base power}
        PointSet image = normalized(base_pow[k]);
        escaped = m < k * f.step || set_intersection(orbit, image).empty();
      }
      if (!escaped) {
        out.escapes_bounded = false;
        w = "Gamma." + label(m, x) + " meets every f^n(X) for n <= " + std::to_string(horizon);
      }
    }
  out.report.add("escapes_bounded", out.escapes_bounded, w);
  out.verdict = out.verified() ? "verified up to horizon " + std::to_string(horizon) : "failed";
  return out;
}

}  // namespace coarsex

namespace coarsex {

Space shift_window(const ShiftFamily& family, int horizon) {
  if (horizon < 1) fail(ErrorKind::Precondition, "horizon must be at least 1");
  const Space& base = family.base;
  const int b = base.size();
  std::vector<std::string> names;
  for (int m = 0; m < horizon; ++m)
    for (int x = 0; x < b; ++x) names.push_back("(" + std::to_string(m) + "," + base.points[x] + ")");
  ActionTable action(base.group->order(), std::vector<int>(horizon * b));
  for (int g = 0; g < base.group->order(); ++g)
    for (int m = 0; m < horizon; ++m)
      for (int x = 0; x < b; ++x) action[g][m * b + x] = m * b + base.act(g, x);
  std::vector<Relation> gens;
  for (const auto& band : family.bands) {
    Relation r(horizon * b);
    for (int m = 0; m < horizon; ++m)
      for (int m2 = std::max(0, m - band.width); m2 <= std::min(horizon - 1, m + band.width); ++m2)
        for (auto [x, y] : band.base.pairs()) r.insert(m * b + x, m2 * b + y);
    gens.push_back(r);
  }
  std::vector<PointSet> born;
  for (int p = 0; p < horizon * b; ++p) born.push_back({p});
  return make_space(names, base.group, action, gens, born);
}

std::vector<int> shift_window_map(const ShiftFamily& family, const ShiftEndo& f, int horizon) {
  const int b = family.base.size();
  std::vector<int> out(horizon * b, -1);
  for (int m = 0; m + f.step < horizon; ++m)
    for (int x = 0; x < b; ++x) out[m * b + x] = (m + f.step) * b + f.base_map[x];
  return out;
}

}  // namespace coarsex
