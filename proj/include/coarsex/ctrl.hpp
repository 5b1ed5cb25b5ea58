#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsex/homology.hpp"
#include "coarsex/intmat.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

// An equivariant controlled module of finitely generated free abelian groups, stored on
// singletons. rho(g, x) maps Z^dims[x] to Z^dims[g^-1 x].
struct CtrlObject {
  Space space;
  PointSet support;
  std::vector<int> dims;
  std::vector<std::vector<DenseMatrix>> cocycle;  // [g][x]

  const DenseMatrix& rho(int g, int x) const { return cocycle[g][x]; }
  int rank(const PointSet& b) const;
  PointSet support_of(const PointSet& b) const;  // support meets B
  int total_rank() const { return rank(support); }
};

Report validate_ctrl_object(const CtrlObject& c);
// Checks every condition and raises a validation error with the first witness.
CtrlObject make_ctrl_object(Space space, PointSet support, std::vector<int> dims,
                            std::vector<std::vector<DenseMatrix>> cocycle);
CtrlObject zero_object(const Space& space);
// Identity cocycle, rank dims[x] on each point; dims must be orbit-constant.
CtrlObject trivial_object(const Space& space, const std::vector<int>& dims);
// Base change by frames[x] : Z^dims[x] -> Z^dims[x] (with inverses); rho' = T rho T^-1.
CtrlObject twist(const CtrlObject& c, const std::vector<DenseMatrix>& frames,
                 const std::vector<DenseMatrix>& inverse_frames);

// A representation of a subgroup (given by ambient element indices) on Z^rank.
struct Representation {
  GroupPtr group;
  std::vector<int> elements;
  int rank = 0;
  std::vector<DenseMatrix> matrices;  // parallel to elements

  const DenseMatrix& of(int g) const;
};
Report validate_representation(const Representation& r);
Representation trivial_representation(const GroupPtr& group, const std::vector<int>& elements, int rank);

// The object on the orbit of m induced from a representation of the stabilizer of m, using
// the section that sends each orbit point p to the least element g with g m = p.
CtrlObject induced_object(const Space& space, int m, const Representation& rep);
std::vector<int> orbit_section(const Space& space, int m);

struct CtrlMorphism {
  CtrlObject source, target;
  Relation control;                 // block (y, x) allowed when (y, x) in control
  std::vector<DenseMatrix> blocks;  // index y * n + x, shape dims_t[y] x dims_s[x]

  const DenseMatrix& block(int y, int x) const { return blocks[static_cast<size_t>(y) * source.space.size() + x]; }
  DenseMatrix& block(int y, int x) { return blocks[static_cast<size_t>(y) * source.space.size() + x]; }
};

Report validate_ctrl_morphism(const CtrlMorphism& f);
CtrlMorphism make_ctrl_morphism(CtrlObject source, CtrlObject target, Relation control,
                                std::vector<DenseMatrix> blocks);
CtrlMorphism zero_morphism(const CtrlObject& source, const CtrlObject& target);
CtrlMorphism identity_morphism(const CtrlObject& c);
CtrlMorphism compose(const CtrlMorphism& outer, const CtrlMorphism& inner);
CtrlMorphism add(const CtrlMorphism& a, const CtrlMorphism& b);
CtrlMorphism scale(const CtrlMorphism& a, const Int& k);
bool same_blocks(const CtrlMorphism& a, const CtrlMorphism& b);
// The (y, x) pairs carrying a nonzero block.
Relation block_support(const CtrlMorphism& f);

struct Biproduct {
  CtrlObject sum;
  std::vector<CtrlMorphism> inclusions, projections;
};
Biproduct direct_sum(const std::vector<CtrlObject>& parts);
CtrlMorphism direct_sum(const std::vector<CtrlMorphism>& parts);
// The biproduct identities p_i i_j = delta_ij and sum i_k p_k = id, checked exactly.
Report biproduct_checks(const Biproduct& b);

// Summands over each fiber are ordered by increasing source point.
CtrlObject pushforward(const CtrlObject& c, const SpaceMap& f);
CtrlMorphism pushforward(const CtrlMorphism& a, const SpaceMap& f);
// Pushforward along a partial equivariant assignment (-1 drops the point).
CtrlObject pushforward_partial(const CtrlObject& c, const std::vector<int>& assign, const Space& codomain);

CtrlObject restrict_to(const CtrlObject& c, const PointSet& z);
CtrlMorphism restrict_to(const CtrlMorphism& f, const PointSet& z);
CtrlMorphism restriction_inclusion(const CtrlObject& c, const PointSet& z);   // C|Z -> C
CtrlMorphism restriction_projection(const CtrlObject& c, const PointSet& z);  // C -> C|Z

// Equivariant morphisms with blocks inside an invariant control, as a lattice. Coordinates
// are the entries of the blocks at one representative per orbit of pairs.
struct HomLattice {
  CtrlObject source, target;
  Relation control;
  std::vector<std::pair<int, int>> representatives;
  std::vector<size_t> offsets;
  size_t ambient = 0;
  DenseMatrix basis;  // ambient x rank
  std::vector<CtrlMorphism> generators;

  size_t rank() const { return basis.cols(); }
  std::vector<Int> flatten(const CtrlMorphism& f) const;
  std::optional<std::vector<Int>> coordinates(const CtrlMorphism& f) const;
  CtrlMorphism morphism(const std::vector<Int>& coords) const;
};
HomLattice hom_lattice(const CtrlObject& source, const CtrlObject& target,
                       const std::optional<Relation>& control = std::nullopt);

// Hom(C, D) modulo the morphisms factoring through an object supported in sub. The factoring
// sublattice is generated by composites through C|sub and D|sub; it is compared with the
// lattice of morphisms whose blocks (y, x) with x, y both outside sub vanish.
struct QuotientHom {
  HomologyGroup quotient;
  size_t hom_rank = 0;
  DenseMatrix factoring;  // lattice basis in Hom coordinates
  DenseMatrix vanishing;
  bool vanishing_in_factoring = false;
  bool factoring_in_vanishing = false;
  std::string note;
  Report report;
};
QuotientHom quotient_hom(const CtrlObject& c, const CtrlObject& d, const PointSet& sub);
// The quotient map for a smaller stage onto the quotient for a larger one is surjective.
Report quotient_hom_functoriality(const CtrlObject& c, const CtrlObject& d, const PointSet& smaller,
                                  const PointSet& larger);

// Objects and morphisms over a Gamma-set with finitely supported families (A_x) and
// (phi_{x,g} : A_x -> B_{g^-1 x}).
struct ConvObject {
  Space set;
  std::vector<int> ranks;
};
struct ConvMorphism {
  ConvObject source, target;
  std::map<std::pair<int, int>, DenseMatrix> parts;  // (x, g) -> block

  DenseMatrix part(int x, int g) const;
};
ConvMorphism conv_compose(const ConvMorphism& outer, const ConvMorphism& inner);
bool conv_equal(const ConvMorphism& a, const ConvMorphism& b);

// X_min,max tensor Gamma_can,min for the Gamma-set underlying `set`; (x, g) has index x * |G| + g.
Space convolution_space(const Space& set);
ConvObject convolution_object(const CtrlObject& c, const Space& set);
ConvMorphism convolution_morphism(const CtrlMorphism& f, const Space& set);
CtrlObject convolution_preimage(const ConvObject& a);

struct FullnessReport {
  DenseMatrix comparison;  // conv coordinates x Hom lattice basis
  std::vector<Int> diagonal;
  bool faithful = false;
  bool full = false;
  Report report;
};
FullnessReport convolution_fullness(const CtrlObject& c, const CtrlObject& d, const Space& set);

// (Gamma/H)_min,min: the base coset eH first, the others ordered by least element.
Space coset_space(const GroupPtr& group, const std::vector<int>& subgroup);
int base_coset(const Space& cosets);  // always 0

// Value at the base coset, with h acting through rho(h^-1).
Representation bh_functor(const CtrlObject& c, const std::vector<int>& subgroup);
DenseMatrix bh_functor(const CtrlMorphism& f);
CtrlObject bh_inverse(const Representation& rep, const Space& cosets);
CtrlMorphism bh_inverse(const DenseMatrix& intertwiner, const Representation& source, const Representation& target,
                        const Space& cosets);

struct BHRoundTrip {
  std::vector<int> section;
  Representation image;
  CtrlObject rebuilt;
  CtrlMorphism unit, unit_inverse;  // rebuilt -> original and back
  Report report;
};
// Exhibits F -> Phi Psi F as the identity and Psi Phi A -> A explicitly; naturality is checked
// on the sample endomorphisms of A.
BHRoundTrip bh_round_trip(const CtrlObject& c, const std::vector<int>& subgroup,
                          const std::vector<CtrlMorphism>& sample = {});

struct KaroubiDiagram {
  int source_stage = -1;
  int stage = -1;
  Relation control;
  CtrlObject piece, complement;
  CtrlMorphism inclusion, projection, complement_inclusion, complement_projection;
  CtrlMorphism f_factor, g_factor;  // A -> piece, piece -> B
  Report report;
};
// f : A -> C and g : C -> B with A, B supported in a stage of the family.
KaroubiDiagram karoubi_complete(const CtrlMorphism& f, const CtrlMorphism& g, const BigFamily& family);

struct SigmaReport {
  int horizon = 0;
  PointSet window;
  std::vector<int> sigma_ranks, comparison_ranks;  // per window point
  bool ranks_match = false;
  bool isomorphism = false;
  std::string verdict;
  Report report;
};
// Compares sum_{n <= horizon} (phi^n)_* A with A + sum_{n <= horizon} (phi^{n+1})_* A on the window.
SigmaReport flasque_sigma_check(const CtrlObject& sample, const std::vector<int>& assign, const PointSet& window,
                                int horizon);
SigmaReport flasque_sigma_check(const ShiftFamily& family, const ShiftEndo& f, int horizon);
SigmaReport flasque_sigma_check(const Space& space, const SpaceMap& f, int horizon);

}  // namespace coarsex
