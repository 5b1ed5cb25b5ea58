#pragma once

#include <string>
#include <vector>

#include "coarsex/constructions.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

enum class ChangeKind { Res, Bh, Qh, Ind };

const char* to_string(ChangeKind k);
ChangeKind change_kind_from_string(const std::string& s);

// The image of a homomorphism as a group, and the homomorphism onto it.
struct Corestriction {
  Subgroup image;
  GroupHom onto;
};
Corestriction corestrict(const GroupHom& hom);

// Normalizer N of the image, the Weyl group W = N / image, and for each element of W an
// ambient element representing it.
struct WeylData {
  Subgroup normalizer;
  Quotient weyl;
  std::vector<int> weyl_acting;
  std::vector<int> image_in_normalizer;
};
WeylData weyl_data(const GroupHom& hom);

// Carrier of Gamma x_H X: classes of pairs (g, x) under h(g, x) = (g hom(h)^-1, h x).
// Classes are ordered by their least pair index g * |X| + x; names are "[g,x]".
struct Induced {
  Space space;
  int base_size = 0;
  std::vector<int> class_of;             // pair index -> class
  std::vector<std::vector<int>> members;  // class -> pair indices
  int cls(int g, int x) const { return class_of[g * base_size + x]; }
  int element(int pair) const { return pair / base_size; }
  int base_point(int pair) const { return pair % base_size; }
};

Space restrict_along(const Space& space, const GroupHom& hom);
Space complete_along(const Space& space, const GroupHom& hom);  // over the normalizer
Space quotient_along(const Space& space, const GroupHom& hom);  // over the Weyl group
Induced induce(const Space& space, const GroupHom& hom);
Space change_group(ChangeKind kind, const Space& space, const GroupHom& hom);

// Induction on morphisms: [g, a] -> [g, f(a)].
SpaceMap induce_map(const SpaceMap& f, const GroupHom& hom, const Induced& source, const Induced& target);

// Equivariance, control and properness, each as a named check.
Report morphism_checks(const SpaceMap& f, const std::string& prefix);
// Whether (f, g) are mutually inverse morphisms; g goes the opposite way.
Report isomorphism_checks(const SpaceMap& f, const SpaceMap& g, const std::string& prefix);

struct MackeyOrientation {
  std::string name;
  Space right;                       // coproduct over the double cosets
  std::vector<int> subgroup_orders;  // order of the intersection subgroup per double coset
  SpaceMap bijection;                // right -> left
  bool well_defined = false;
  bool bijective = false;
  MapReport forward, backward;
  bool certified = false;
  std::string witness;
};

struct MackeyReport {
  std::vector<int> representatives;  // first-occurrence double coset representatives
  std::vector<std::vector<int>> double_cosets;
  Space left;
  MackeyOrientation conjugate_into_first;   // intersection inside the second image, conjugated into the first
  MackeyOrientation conjugate_into_second;  // intersection inside the first image, conjugated into the second
  Report report;
  bool certified() const { return conjugate_into_first.certified || conjugate_into_second.certified; }
};

MackeyReport mackey_check(const Space& space, const GroupHom& hom, const GroupHom& other);

struct AdjunctionReport {
  SpaceMap unit;    // X -> Res Ind X
  SpaceMap counit;  // Ind Res Y -> Y
  bool counit_well_defined = false;
  bool triangle_induced = false;    // Ind X -> Ind Res Ind X -> Ind X
  bool triangle_restricted = false;  // Res Y -> Res Ind Res Y -> Res Y
  Report report;
};

AdjunctionReport adjunction_check(const GroupHom& hom, const Space& x, const Space& y);

// Ind X and Ind B_K X agree, K the kernel: the identity on classes is an isomorphism.
Report induction_kernel_certificate(const Space& space, const GroupHom& hom);
// For a finite subgroup image, B_H X equals the restriction of X to the normalizer.
Report completion_restriction_certificate(const Space& space, const GroupHom& hom);
// The orbit quotient restricted to the normalizer agrees with the coequalizer.
Report quotient_coequalizer_certificate(const Space& space, const GroupHom& hom);

}  // namespace coarsex
