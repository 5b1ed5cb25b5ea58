#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsex/group.hpp"
#include "coarsex/report.hpp"

namespace coarsex {

using PointSet = std::vector<int>;  // sorted, duplicate free

PointSet normalized(PointSet s);
PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);
bool is_subset(const PointSet& a, const PointSet& b);
PointSet full_set(int n);

// Finite binary relation on {0, ..., n-1}.
class Relation {
 public:
  Relation() = default;
  explicit Relation(int n) : n_(n), bits_(static_cast<size_t>(n) * n, 0) {}
  static Relation diagonal(int n);
  static Relation full(int n);
  static Relation from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

  int carrier_size() const { return n_; }
  bool contains(int x, int y) const { return bits_[static_cast<size_t>(x) * n_ + y] != 0; }
  void insert(int x, int y);
  void erase(int x, int y) { bits_[static_cast<size_t>(x) * n_ + y] = 0; }
  std::vector<std::pair<int, int>> pairs() const;
  size_t size() const;
  bool empty() const { return size() == 0; }
  bool subset_of(const Relation& other) const;
  PointSet row(int x) const;  // {y : (x,y) in R}
  Relation& operator|=(const Relation& other);
  bool operator==(const Relation& other) const { return n_ == other.n_ && bits_ == other.bits_; }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

Relation compose(const Relation& u, const Relation& v);  // {(x,z) | (x,y) in u, (y,z) in v}
Relation invert(const Relation& u);
PointSet thicken(const Relation& u, const PointSet& b);  // {x | (x,b) in u for some b in B}

using ActionTable = std::vector<std::vector<int>>;  // action[g][x] = g.x

// Least relation containing the generators and the diagonal that is closed under
// group translates, inversion and composition.
Relation saturate(const std::vector<Relation>& generators, const FiniteGroup& group, const ActionTable& action,
                  int n);

// A finite Gamma-bornological coarse space. The coarse structure is stored via its maximal
// entourage; the bornology via a generating list of subsets.
struct Space {
  std::vector<std::string> points;
  GroupPtr group;
  ActionTable action;
  std::vector<Relation> coarseGenerators;
  Relation coarseMax;
  std::vector<PointSet> bornology;

  int size() const { return static_cast<int>(points.size()); }
  int act(int g, int x) const { return action[g][x]; }
  int index_of(const std::string& point) const;
  std::vector<PointSet> orbits() const;
  std::vector<int> orbit_ids() const;
  std::vector<int> stabilizer(int x) const;
  PointSet orbit_closure(const PointSet& b) const;  // Gamma.B
  bool is_invariant(const PointSet& b) const;
  bool is_bounded(const PointSet& b) const;
  PointSet component(int x) const { return coarseMax.row(x); }
};

// Builds a space with coarseMax = saturate(generators).
Space make_space(std::vector<std::string> points, GroupPtr group, ActionTable action,
                 std::vector<Relation> generators, std::vector<PointSet> bornology);

ActionTable trivial_action(const FiniteGroup& group, int n);
bool same_group(const Space& a, const Space& b);
std::string describe(const Space& s, const PointSet& set);
std::string describe_pair(const Space& s, int x, int y);

Report validate_space(const Space& space);

// The symmetric, invariant one-step entourage generated by the coarse generators.
Relation step_entourage(const Space& space);

Space subspace(const Space& space, const PointSet& subset);

struct SpaceMap {
  Space domain;
  Space codomain;
  std::vector<int> assign;
  bool equivariant = false;
};

SpaceMap make_map(Space domain, Space codomain, std::vector<int> assign);
SpaceMap identity_map(const Space& s);
SpaceMap compose(const SpaceMap& outer, const SpaceMap& inner);

bool is_equivariant(const Space& dom, const Space& cod, const std::vector<int>& f);
bool is_controlled(const Space& dom, const Space& cod, const std::vector<int>& f,
                   std::pair<int, int>* witness = nullptr);
bool is_proper(const Space& dom, const Space& cod, const std::vector<int>& f, std::string* witness = nullptr);
bool are_close(const Space& cod, const std::vector<int>& f, const std::vector<int>& g, int* witness = nullptr);

struct AnalyzeOptions {
  int search_bound = 8;
};

struct MapReport {
  bool equivariant = false;
  bool controlled = false;
  bool proper = false;
  std::optional<bool> close;
  Verdict equivalence = Verdict::Unknown;
  std::optional<std::vector<int>> inverse;
  Report report;

  bool morphism() const { return equivariant && controlled && proper; }
};

// If g is given with the same domain and codomain, closeness is tested; if it goes the
// opposite way, (f, g) is tested as an equivalence. Without g, an equivariant inverse up to
// closeness is searched exhaustively for carriers up to the search bound.
MapReport analyze_map(const SpaceMap& f, const SpaceMap* g = nullptr, AnalyzeOptions options = {});

std::optional<std::vector<int>> find_inverse(const SpaceMap& f, int search_bound, bool* exhausted);

struct BigFamily {
  std::vector<PointSet> stages;
  bool stabilized = false;
};

BigFamily generated_family(const Space& space, const PointSet& a);
Report check_big_family(const Space& space, const BigFamily& family);

struct SubsetReport {
  BigFamily generated;
  bool invariant = false;
  Verdict nice = Verdict::Unknown;
  std::optional<bool> complementary;
  std::optional<bool> excisive;
  Report report;
};

Verdict is_nice(const Space& space, const PointSet& a, AnalyzeOptions options = {});
SubsetReport classify_subsets(const Space& space, const PointSet& a, const std::optional<PointSet>& z = std::nullopt,
                              const BigFamily* family = nullptr, AnalyzeOptions options = {});

struct ExhaustionReport {
  std::vector<bool> locally_finite;
  bool trapping = false;
  bool co_gamma_bounded = false;
  Verdict trapping_by_enumeration = Verdict::Unknown;
  Report report;
};

struct ExhaustionOptions {
  int max_orbits_enumerated = 16;
};

ExhaustionReport classify_exhaustion(const Space& space, const std::vector<PointSet>& family,
                                     ExhaustionOptions options = {});

// The truncated shift family N x F0: positions below the horizon, band entourages.
struct ShiftFamily {
  struct Band {
    int width = 0;
    Relation base;  // relation on the base points
  };
  Space base;  // the finite Gamma-set F0 (its structures are not used)
  std::vector<Band> bands;
};

struct ShiftEndo {
  int step = 1;
  std::vector<int> base_map;  // equivariant self-map of F0
};

ShiftFamily standard_shift_family(const Space& base, int width = 1);
ShiftEndo shift_endo(const ShiftFamily& family, int step = 1);

// Positions below the horizon as a space: point (m, x) has index m * |F0| + x.
Space shift_window(const ShiftFamily& family, int horizon);
// The endomorphism on the window; -1 where the image leaves it.
std::vector<int> shift_window_map(const ShiftFamily& family, const ShiftEndo& f, int horizon);

struct FlasquenessReport {
  int horizon = 0;
  bool close_to_identity = false;
  bool uniformly_controlled = false;
  bool escapes_bounded = false;
  std::string verdict;  // "verified up to horizon N" or "failed"
  Report report;

  bool verified() const { return close_to_identity && uniformly_controlled && escapes_bounded; }
};

FlasquenessReport flasqueness_check(const Space& space, const SpaceMap& f, int horizon);
FlasquenessReport flasqueness_check(const ShiftFamily& family, const ShiftEndo& f, int horizon);

}  // namespace coarsex
