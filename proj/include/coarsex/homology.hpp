#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarsex/group_change.hpp"
#include "coarsex/intmat.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

using SparseVector = SparseMatrix::Column;

struct OrbitBasisElement {
  std::vector<int> tuple;  // lexicographically least in its orbit
  int stabilizer_order = 1;
  int orbit_size = 1;
};

struct ChainOptions {
  size_t max_tuples = 4'000'000;  // controlled tuples enumerated per degree
  size_t max_basis = 500'000;
};

// Invariant chains in orbit bases, degrees 0..top.
struct ChainComplex {
  int top = 0;
  int radix = 1;  // tuple entries are < radix
  std::vector<std::vector<OrbitBasisElement>> basis;
  std::vector<SparseMatrix> boundary;  // boundary[n]: C_n -> C_{n-1}; boundary[0] has no rows
  std::vector<std::unordered_map<std::uint64_t, int>> lookup;

  size_t dim(int n) const { return basis[n].size(); }
  std::uint64_t code(const std::vector<int>& tuple) const;
  int index_of(int n, const std::vector<int>& canonical) const;  // -1 when absent
};

ChainComplex chain_complex(const Space& space, int top, const ChainOptions& options = {});
// Group homology complex of Gamma with coefficients Z[S]; basis tuples (e, g1, ..., gn, s) stored
// as group indices followed by the point of S.
ChainComplex standard_group_complex(const GroupPtr& group, const Space& set, int top,
                                    const ChainOptions& options = {});
void verify_boundary_squares(const ChainComplex& c);  // Validation error on failure

// Lexicographically least translate of a tuple.
std::vector<int> canonical_tuple(const Space& space, const std::vector<int>& tuple, int* stabilizer = nullptr);

struct HomologyGroup {
  int rank = 0;
  std::vector<Int> torsion;  // each > 1, each dividing the next

  bool operator==(const HomologyGroup& o) const { return rank == o.rank && torsion == o.torsion; }
  bool operator!=(const HomologyGroup& o) const { return !(*this == o); }
  bool is_zero() const { return rank == 0 && torsion.empty(); }
  std::string str() const;  // "0", "Z", "Z^2 + Z/2"
};

// Homology of a chain complex in degrees 0..top-1, with generating cycles and coordinates.
class HomologyEngine {
 public:
  explicit HomologyEngine(const ChainComplex& complex);
  ~HomologyEngine();
  HomologyEngine(HomologyEngine&&) noexcept;
  HomologyEngine& operator=(HomologyEngine&&) noexcept;

  int degrees() const;  // number of computed degrees
  const HomologyGroup& group(int n) const;
  std::vector<HomologyGroup> groups() const;
  // Per component: the order of a torsion component, 0 for a free one. Torsion first.
  std::vector<Int> orders(int n) const;
  // Cycles in C_n whose classes are the components of H_n.
  const std::vector<SparseVector>& generators(int n) const;
  // Coordinates of the class of a cycle; torsion coordinates reduced. Validation error if x is not a cycle.
  std::vector<Int> coordinates(int n, const SparseVector& cycle) const;
  size_t reduced_dimension(int n) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<HomologyGroup> homology(const Space& space, int max_degree, const ChainOptions& options = {});
std::vector<HomologyGroup> homology(const ChainComplex& complex);  // degrees 0..top-1

// Matrices of the chain map induced by an equivariant map on orbit bases, degrees 0..top.
std::vector<SparseMatrix> induced_chain_map(const Space& domain, const Space& codomain, const std::vector<int>& f,
                                            const ChainComplex& source, const ChainComplex& target);
bool is_chain_map(const ChainComplex& source, const ChainComplex& target, const std::vector<SparseMatrix>& f,
                  int* bad_degree = nullptr);

// Map between homology groups in component coordinates: column j is the image of component j.
DenseMatrix homology_map(const HomologyEngine& source, const HomologyEngine& target, const SparseMatrix& chain_map,
                         int n);

// Relation lattice of a presented group: d e_i for each component of order d > 0.
DenseMatrix relation_lattice(const std::vector<Int>& orders);
// Whether two component matrices agree modulo the relations of the target.
bool equal_mod_relations(const DenseMatrix& a, const DenseMatrix& b, const std::vector<Int>& target_orders);
// Whether a homology map between groups with the same invariants is an isomorphism.
bool is_isomorphism(const DenseMatrix& map, const std::vector<Int>& source_orders, const std::vector<Int>& target_orders);
// Exactness of A -F-> B -G-> C at B, for presented groups.
bool is_exact(const DenseMatrix& f, const DenseMatrix& g, const std::vector<Int>& b_orders,
              const std::vector<Int>& c_orders);

struct InducedMapResult {
  ChainComplex source, target;
  std::vector<SparseMatrix> chain;  // degrees 0..max_degree+1
  std::vector<HomologyGroup> source_groups, target_groups;
  std::vector<DenseMatrix> maps;  // degrees 0..max_degree
  bool chain_map = false;
};

// Requires f to be a morphism (Precondition otherwise).
InducedMapResult induced_map(const SpaceMap& f, int max_degree, const ChainOptions& options = {});

// Homology-level checks.
Report close_maps_check(const SpaceMap& f, const SpaceMap& g, int max_degree);
Report equivalence_homology_check(const SpaceMap& f, const SpaceMap& g, int max_degree);
Report coarse_invariance_check(const Space& space, int max_degree);

struct MayerVietorisReport {
  std::vector<HomologyGroup> intersection, first, family, whole;
  Report report;
};
// Z invariant, Y the last (stabilized) stage of a big family, Z and Y covering X.
MayerVietorisReport mayer_vietoris_check(const Space& space, const PointSet& z, const BigFamily& family,
                                         int max_degree);

struct PhiPsiReport {
  ChainComplex standard, coarse;
  std::vector<SparseMatrix> phi, psi;  // degrees 0..max_degree + 1
  std::vector<HomologyGroup> standard_groups, coarse_groups;
  Report report;
};
PhiPsiReport phi_psi(const GroupPtr& group, const Space& set, int max_degree);

struct ContinuityReport {
  std::vector<PointSet> chain;  // increasing invariant subsets ending at X
  std::vector<std::vector<HomologyGroup>> values;
  std::vector<HomologyGroup> colimit, direct;
  std::string note;
  Report report;
};
ContinuityReport hx_cont(const Space& space, int max_degree);
Report u_continuity_check(const Space& space, int max_degree);

Report additivity_factorization(const std::vector<Space>& family, int max_degree);

enum class TransformKind { Res, Qh, Ind };
const char* to_string(TransformKind k);
TransformKind transform_kind_from_string(const std::string& s);

struct ChainTransform {
  ChainComplex source, target;
  std::vector<SparseMatrix> map;      // degrees 0..max_degree
  std::vector<SparseMatrix> inverse;  // ind along an injective map only
  std::string note;
  Report report;
};
ChainTransform chain_transform(TransformKind kind, const GroupHom& hom, const Space& space, int max_degree);

}  // namespace coarsex
