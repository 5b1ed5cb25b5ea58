#include "coarsex/group.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "coarsex/error.hpp"

namespace coarsex {

FiniteGroup::FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table,
                         std::string label)
    : names_(std::move(names)), table_(std::move(table)), label_(std::move(label)) {
  const int n = order();
  if (n == 0) fail(ErrorKind::Validation, "group has no elements");
  if (static_cast<int>(table_.size()) != n) fail(ErrorKind::Validation, "table row count differs from order");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) fail(ErrorKind::Validation, "table row has wrong length");
    for (int v : row)
      if (v < 0 || v >= n) fail(ErrorKind::Validation, "table entry out of range");
  }
  {
    std::set<std::string> seen(names_.begin(), names_.end());
    if (static_cast<int>(seen.size()) != n) fail(ErrorKind::Validation, "duplicate element names");
  }
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) fail(ErrorKind::Validation, "no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail(ErrorKind::Validation, "associativity fails at (" + names_[a] + "," + names_[b] + "," +
                                          names_[c] + ")");
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inverse_[a] < 0) fail(ErrorKind::Validation, "element " + names_[a] + " has no inverse");
}

int FiniteGroup::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) fail(ErrorKind::Domain, "unknown group element '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

bool FiniteGroup::same_as(const FiniteGroup& other) const {
  return this == &other || (names_ == other.names_ && table_ == other.table_);
}

std::vector<int> FiniteGroup::generated(const std::vector<int>& gens) const {
  std::vector<char> in(order(), 0);
  std::vector<int> elems{identity_};
  in[identity_] = 1;
  for (size_t i = 0; i < elems.size(); ++i)
    for (int g : gens) {
      int p = mul(elems[i], g);
      if (!in[p]) {
        in[p] = 1;
        elems.push_back(p);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elems) const {
  if (elems.empty()) return false;
  std::vector<char> in(order(), 0);
  for (int a : elems) in[a] = 1;
  for (int a : elems)
    for (int b : elems)
      if (!in[mul(a, inv(b))]) return false;
  return true;
}

std::vector<int> FiniteGroup::conjugate_subset(int g, const std::vector<int>& subset) const {
  std::vector<int> out;
  out.reserve(subset.size());
  for (int h : subset) out.push_back(conj(g, h));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> FiniteGroup::normalizer(const std::vector<int>& subgroup) const {
  std::vector<int> sorted = subgroup;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out;
  for (int g = 0; g < order(); ++g)
    if (conjugate_subset(g, sorted) == sorted) out.push_back(g);
  return out;
}

std::vector<std::vector<int>> FiniteGroup::subgroups() const {
  std::set<std::vector<int>> found;
  std::vector<std::vector<int>> frontier{generated({})};
  found.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& h : frontier)
      for (int g = 0; g < order(); ++g) {
        std::vector<int> gens = h;
        gens.push_back(g);
        auto k = generated(gens);
        if (found.insert(k).second) next.push_back(k);
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::vector<std::vector<int>> FiniteGroup::subgroup_classes() const {
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> covered;
  for (const auto& h : subgroups()) {
    if (covered.count(h)) continue;
    out.push_back(h);
    for (int g = 0; g < order(); ++g) covered.insert(conjugate_subset(g, h));
  }
  return out;
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({"e"}, {{0}}, "trivial"); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) fail(ErrorKind::Domain, "cyclic group order must be positive");
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    names.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return FiniteGroup(names, table, n == 1 ? "trivial" : "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
  using Perm = std::array<int, 3>;
  const std::vector<Perm> perms{{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  const std::vector<std::string> names{"e", "(12)", "(13)", "(23)", "(123)", "(132)"};
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      Perm c{perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]};
      table[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup(names, table, "S3");
}

FiniteGroup FiniteGroup::by_name(const std::string& name) {
  if (name == "trivial" || name == "1" || name == "Z1") return trivial();
  if (name == "S3") return symmetric3();
  if (name.size() > 1 && name[0] == 'Z') {
    try {
      size_t used = 0;
      int n = std::stoi(name.substr(1), &used);
      if (used == name.size() - 1 && n >= 1) return cyclic(n);
    } catch (const std::exception&) {
    }
  }
  fail(ErrorKind::Input, "unknown group name '" + name + "' (expected trivial, Z<n>, S3)");
}

GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }
GroupPtr group_by_name(const std::string& name) { return make_group(FiniteGroup::by_name(name)); }

GroupHom::GroupHom(GroupPtr source, GroupPtr target, std::vector<int> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  const int n = source_->order();
  if (static_cast<int>(map_.size()) != n) fail(ErrorKind::Validation, "homomorphism map has wrong length");
  for (int v : map_)
    if (v < 0 || v >= target_->order()) fail(ErrorKind::Validation, "homomorphism value out of range");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (map_[source_->mul(a, b)] != target_->mul(map_[a], map_[b]))
        fail(ErrorKind::Validation, "homomorphism law fails at (" + source_->name(a) + "," +
                                        source_->name(b) + ")");
  std::set<int> img;
  for (int a = 0; a < n; ++a) {
    if (map_[a] == target_->identity()) kernel_.push_back(a);
    img.insert(map_[a]);
  }
  image_.assign(img.begin(), img.end());
}

GroupHom GroupHom::identity(const GroupPtr& g) {
  std::vector<int> m(g->order());
  for (int a = 0; a < g->order(); ++a) m[a] = a;
  return GroupHom(g, g, m);
}

GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
  if (!inner.target()->same_as(*outer.source())) fail(ErrorKind::Domain, "composing incompatible homomorphisms");
  std::vector<int> m(inner.source()->order());
  for (int a = 0; a < inner.source()->order(); ++a) m[a] = outer(inner(a));
  return GroupHom(inner.source(), outer.target(), m);
}

Subgroup make_subgroup(const GroupPtr& parent, std::vector<int> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!parent->is_subgroup(elems)) fail(ErrorKind::Domain, "subset is not a subgroup");
  const int k = static_cast<int>(elems.size());
  std::vector<int> local(parent->order(), -1);
  for (int i = 0; i < k; ++i) local[elems[i]] = i;
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i) {
    names.push_back(parent->name(elems[i]));
    for (int j = 0; j < k; ++j) table[i][j] = local[parent->mul(elems[i], elems[j])];
  }
  std::string label = k == parent->order() ? parent->label() : (k == 1 ? "trivial" : "");
  auto g = make_group(FiniteGroup(names, table, label));
  return Subgroup{g, GroupHom(g, parent, elems)};
}

Quotient make_quotient(const GroupPtr& parent, const std::vector<int>& normal) {
  if (!parent->is_subgroup(normal)) fail(ErrorKind::Domain, "quotient by a non-subgroup");
  std::vector<int> sorted = normal;
  std::sort(sorted.begin(), sorted.end());
  for (int g = 0; g < parent->order(); ++g)
    if (parent->conjugate_subset(g, sorted) != sorted) fail(ErrorKind::Domain, "quotient by a non-normal subgroup");
  const int n = parent->order();
  std::vector<int> coset(n, -1), reps;
  for (int g = 0; g < n; ++g) {
    if (coset[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int k : sorted) coset[parent->mul(g, k)] = id;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(q, std::vector<int>(q));
  for (int i = 0; i < q; ++i) {
    names.push_back("[" + parent->name(reps[i]) + "]");
    for (int j = 0; j < q; ++j) table[i][j] = coset[parent->mul(reps[i], reps[j])];
  }
  auto g = make_group(FiniteGroup(names, table, q == 1 ? "trivial" : ""));
  return Quotient{g, GroupHom(parent, g, coset), reps};
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  const int na = a->order(), nb = b->order();
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      names.push_back("(" + a->name(i) + "," + b->name(j) + ")");
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) table[i * nb + j][k * nb + l] = a->mul(i, k) * nb + b->mul(j, l);
    }
  return make_group(FiniteGroup(names, table, a->label() + "x" + b->label()));
}

}  // namespace coarsex
