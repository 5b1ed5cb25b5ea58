#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coarsex/ctrl.hpp"
#include "coarsex/report.hpp"
#include "coarsex/space.hpp"

namespace coarsex {

// SplitMix64: state += 0x9E3779B97F4A7C15, then the murmur-style finalizer.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  int uniform(int lo, int hi);  // inclusive, by reduction modulo the range
  bool chance(int percent) { return uniform(0, 99) < percent; }
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 100;
  int min_size = 1;
  int max_size = 6;
  std::vector<std::string> groups{"trivial", "Z2", "Z3", "Z4", "S3"};
  int max_degree = 2;
  int flasque_horizon = 20;
  int sigma_horizon = 10;
  bool phi_psi = true;
  bool ctrl = true;
};

// A Gamma-set of the given size: a disjoint union of coset spaces G/K.
ActionTable random_action(SplitMix64& rng, const FiniteGroup& g, int n);
Space gen_space(std::uint64_t seed, const SuiteConfig& cfg);
Space gen_space(SplitMix64& rng, const GroupPtr& group, int min_size, int max_size);

// Product of random elementary matrices; the inverse is accumulated alongside.
DenseMatrix random_unimodular(SplitMix64& rng, int n, DenseMatrix* inverse);
// Trivial representations induced on random orbits, twisted by random frames.
CtrlObject random_ctrl_object(SplitMix64& rng, const Space& space, int max_rank);
CtrlMorphism random_morphism(SplitMix64& rng, const HomLattice& hom, int range = 2);

// A band space (a shift window over a random Gamma-set) with the family generated by its
// first column, and composable random f : A -> C, g : C -> B with A, B on the first stage.
struct KaroubiInstance {
  Space space;
  BigFamily family;
  CtrlMorphism f, g;
};
KaroubiInstance random_karoubi_instance(SplitMix64& rng, const GroupPtr& group, int horizon = 6);

// Number of orbits of coarse components, from the generators directly.
int component_orbit_count(const Space& space);

// Each category contributes one check per trial, named "<category>/<trial>".
Report axiom_suite(const SuiteConfig& cfg);

}  // namespace coarsex
