#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coarsex/space.hpp"

namespace coarsex {

enum class SpaceKind { CanMin, MinMin, MaxMax, MinMax, Metric, Recoarsen, Subspace };

const char* to_string(SpaceKind k);
SpaceKind space_kind_from_string(const std::string& s);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::MinMin;
  GroupPtr group;                   // defaults to the trivial group
  std::vector<std::string> points;  // ignored by can_min
  ActionTable action;               // empty means trivial
  std::vector<std::vector<double>> distance;  // metric; infinity separates points
  std::vector<double> scales;                 // metric
  std::optional<Space> base;                  // recoarsen, subspace
  Relation entourage;                         // recoarsen
  PointSet subset;                            // subspace
};

Space build(const SpaceSpec& spec);

Space canonical_space(const GroupPtr& group);  // the group acting on itself, Gamma_can,min
Space min_min(std::vector<std::string> points, GroupPtr group, ActionTable action = {});
Space max_max(std::vector<std::string> points, GroupPtr group, ActionTable action = {});
Space min_max(std::vector<std::string> points, GroupPtr group, ActionTable action = {});
Space max_min(std::vector<std::string> points, GroupPtr group, ActionTable action = {});
Space metric_space(std::vector<std::string> points, GroupPtr group, ActionTable action,
                   const std::vector<std::vector<double>>& distance, const std::vector<double>& scales);
Space recoarsen(const Space& space, const Relation& entourage);
Space with_maximal_bornology(const Space& space);
Space point_space(const GroupPtr& group);
std::vector<std::string> numbered_points(int n, const std::string& prefix = "");

enum class CombineKind { Tensor, Cartesian, Coproduct, FreeUnion, FiberProduct, PushoutExcisive, CoequalizerH };

const char* to_string(CombineKind k);

// Carrier index of (a, b) is a * |second| + b; points are named "(p,q)".
Space tensor(const Space& first, const Space& second);
Space cartesian(const Space& first, const Space& second);
// Points are named "i:p"; summand i occupies a contiguous block in order.
Space coproduct(const std::vector<Space>& parts);
Space free_union(const std::vector<Space>& parts);
std::vector<int> summand_offsets(const std::vector<Space>& parts);
// The subspace {(a, b) : f(a) = g(b)} of the cartesian product.
Space fiber_product(const SpaceMap& f, const SpaceMap& g);

struct Pushout {
  Space space;  // colimit of Y <- Y cap Z -> Z
  SpaceMap from_first;
  SpaceMap from_second;
  SpaceMap comparison;  // to the ambient space, identity on points
  MapReport comparison_report;
  Report report;
};
Pushout pushout_excisive(const Space& space, const PointSet& first, const PointSet& second);

struct Coequalizer {
  Space source;  // subgroup_min,min tensor X with maximal bornology, over the normalizer
  Space target;  // completion of X along the subgroup, over the normalizer
  SpaceMap projection_map;  // (h, x) -> x
  SpaceMap action_map;      // (h, x) -> h x
  Space colimit;            // subgroup orbits, over the normalizer
  SpaceMap quotient;        // target -> colimit
  std::vector<int> normalizer;  // as elements of the ambient group
  Report report;
};
Coequalizer coequalizer_H(const Space& space, const std::vector<int>& subgroup);

struct OrbitPartition {
  std::vector<PointSet> classes;  // ordered by least element
  std::vector<int> class_of;
};
OrbitPartition orbit_partition(const Space& space, const std::vector<int>& elements);

// Carrier = orbits of the given subgroup, coarse structure generated by the images of the
// entourages, bornology maximal making the projection from `bornology_source` proper. The
// quotient group acts through `acting` (elements of the ambient group, one per new element).
Space orbit_quotient(const Space& space, const OrbitPartition& part, const Space& bornology_source,
                     const GroupPtr& group, const std::vector<int>& acting);

// Bornology generated by the translates of the bounded sets under the given elements.
Space completion(const Space& space, const std::vector<int>& elements);

struct QuotientAdjunction {
  Space quotient;  // trivial group
  SpaceMap unit;   // to the quotient with trivial action
  Space completion;
  MapReport unit_report;
};
QuotientAdjunction quotient_adjunction(const Space& space);

// Same points and structures, acting group changed through `elements` (ambient element per new one).
Space restrict_action(const Space& space, const GroupPtr& group, const std::vector<int>& elements);

}  // namespace coarsex
