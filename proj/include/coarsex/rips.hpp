#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarsex/homology.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

using Simplex = std::vector<int>;  // sorted vertices

struct SimplicialComplex {
  int vertices = 0;
  GroupPtr group;
  ActionTable action;
  std::vector<std::vector<Simplex>> simplices;  // by dimension, each list sorted

  int max_dim() const { return static_cast<int>(simplices.size()) - 1; }
  size_t count(int dim) const { return dim >= 0 && dim <= max_dim() ? simplices[dim].size() : 0; }
  bool contains(const Simplex& s) const;
  int index_of(const Simplex& s) const;  // -1 when absent
  std::string str() const;               // one simplex per line, grouped by dimension
};

SimplicialComplex parse_complex(const std::string& text);
Report validate_complex(const SimplicialComplex& k);

// Cliques of U with at most max_dim + 1 vertices, plus the vertex-carried space P_U(X)_bd:
// coarse structure from the path metric of the 1-skeleton at every scale up to its diameter,
// bornology generated by the vertex sets of P_U(B).
struct RipsComplex {
  SimplicialComplex complex;
  Space bd;
  int diameter = 0;
};
RipsComplex rips_complex(const Space& space, const Relation& u, int max_dim = 4);

struct RipsFiltration {
  std::vector<RipsComplex> stages;
  Report report;  // monotonicity of consecutive stages
};
RipsFiltration rips_filtration(const Space& space, const std::vector<Relation>& chain, int max_dim = 4);

struct DiracEquivalence {
  Space source, target;  // X recoarsened by U and P_U(X)_bd, each tensored with Q when twisted
  SpaceMap delta, inverse;
  std::vector<int> representatives;
  MapReport analysis;
  Report report;
  bool certified() const { return report.passed(); }
};
DiracEquivalence dirac_equivalence(const Space& space, const Relation& u, const std::optional<Space>& twist = std::nullopt);

struct RipsMap {
  RipsComplex source, target;
  std::vector<int> vertex_map;
  SpaceMap map;
  Report report;
};
RipsMap rips_functorial(const SpaceMap& f, const Relation& u, const Relation& u_target, int max_dim = 4);

std::vector<HomologyGroup> simplicial_homology(const SimplicialComplex& k, int max_degree);

struct BoundedGeometry {
  int bound = 0;
  bool minimal_bornology = false;
  Report report;
};
BoundedGeometry sbg_check(const Space& space);

}  // namespace coarsex
