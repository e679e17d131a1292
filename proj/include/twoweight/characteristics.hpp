#pragma once

#include <string>
#include <vector>

#include "twoweight/corona.hpp"
#include "twoweight/dyadic.hpp"
#include "twoweight/hilbert.hpp"
#include "twoweight/measure.hpp"

namespace twoweight {

struct ValueWitness {
  double value = 0.0;
  std::string witness;  // "n:k", "n:k|n:k" for pairs, "A1".. for ancestors
};

// Intervals the suprema range over: the dyadic grid to max_depth plus
// doubling ancestors of the root, so every tail is a genuine finite sum.
struct ScanIntervals {
  std::vector<Interval> ivs;
  std::vector<std::string> labels;
};
ScanIntervals scan_intervals(const Grid& grid, int tail_doublings);

// Offset Muckenhoupt: sup over disjoint touching dyadic pairs of comparable
// length (within 2^r) of (avg omega over Q')(avg sigma over Q).
ValueWitness a2_offset(const DiscreteMeasure& sigma,
                       const DiscreteMeasure& omega, const Grid& grid,
                       const GridConfig& cfg);

// Holed Muckenhoupt: sup_I P(I,1_{R\I}omega)(|I|_s/|I|) + (|I|_w/|I|)P(I,1_{R\I}sigma).
ValueWitness a2_hole(const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                     const Grid& grid, const GridConfig& cfg);

// Two-tailed Muckenhoupt with s_I^2 weights; local_tails restricts the
// integration to I itself instead of the whole line.
ValueWitness a2_twotailed(const DiscreteMeasure& sigma,
                          const DiscreteMeasure& omega, const Grid& grid,
                          const GridConfig& cfg, bool local_tails = false);

// Testing characteristic sup_I ||H 1_I sigma||_{L2(omega)} / sqrt(|I|_sigma);
// local restricts the norm to I.
ValueWitness testing(const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
                     const Grid& grid, const GridConfig& cfg,
                     const Truncation& trunc, bool local);

// sup over adjacent pairs of comparable length (within 2^tau) of
// |int_J H(1_I sigma) domega|.
ValueWitness weak_boundedness(const DiscreteMeasure& sigma,
                              const DiscreteMeasure& omega, const Grid& grid,
                              const GridConfig& cfg, const Truncation& trunc);

// Energy characteristic: sqrt of the sup over top intervals I of the best
// disjoint dyadic subpartition value of
//   sum (P(I_r,1_{I\I_r}sigma)/l(I_r))^2 E(I_r,omega)^2 |I_r|_omega / |I|_sigma,
// computed by bottom-up dynamic programming over each subtree.
ValueWitness energy_char(const DiscreteMeasure& sigma,
                         const DiscreteMeasure& omega, const Grid& grid);

// Poisson-Energy characteristic of a stopping forest:
// sup over F and good corona I with |I|_sigma > 0 of
//   P(I,1_{F\I}sigma) E(I,omega) sqrt(|I|_omega/|I|_sigma).
ValueWitness pe_characteristic(const StoppingForest& forest,
                               const DiscreteMeasure& sigma,
                               const DiscreteMeasure& omega,
                               const GridConfig& cfg);

// Size functional over the corona of F:
// sup over good K of (1/sqrt|K|_s)(P(K,1_{F\K}sigma)/l(K))
//   sqrt(sum_{J in Lambda, J inside K} ||Delta_J x||^2).
ValueWitness size_functional(const StoppingForest& forest, int F_index,
                             std::span<const Dyad> lambda,
                             const DiscreteMeasure& sigma,
                             const DiscreteMeasure& omega,
                             const GridConfig& cfg);

// Refined triple characteristic: like the size functional but K ranges over
// [{S} union whitney_triple(S)] within the corona of F, S over the
// A-children of `a_forest`, and the Poisson tail is P(K, 1_{F\S} sigma).
ValueWitness refined_trip_char(const StoppingForest& main_forest, int F_index,
                               const StoppingForest& a_forest, int A_index,
                               std::span<const Dyad> lambda,
                               const DiscreteMeasure& sigma,
                               const DiscreteMeasure& omega,
                               const GridConfig& cfg);

struct FunctionalEnergy {
  double direct = 0.0;        // exact largest singular value of the map
  double khat_fwd = 0.0;      // testing constant of the enlarged kernel
  double khat_bwd = 0.0;      // dual testing constant
  double value = 0.0;         // max(direct, max(khat_fwd, khat_bwd))
  // enlarged kernel sampled on omega x sigma atoms (row-major), for the
  // kernel-property suites
  std::vector<double> khat;
  std::size_t rows = 0, cols = 0;
};

// Functional-energy constant over Lambda = union of whitney_deep(F)
// intersected with the corona of F, in the squared/squared operator-norm
// convention.
FunctionalEnergy functional_energy(const StoppingForest& forest,
                                   const DiscreteMeasure& sigma,
                                   const DiscreteMeasure& omega,
                                   const Grid& grid, const GridConfig& cfg);

struct CharacteristicReport {
  ValueWitness a2_offset, a2_hole, a2_twotailed;
  ValueWitness testing_fwd, testing_bwd, testing_local;
  ValueWitness weak_bdd;
  ValueWitness energy_fwd, energy_bwd;
  ValueWitness pe;
  FunctionalEnergy func_energy;
};

// All characteristics against one stopping forest (the forms pipeline builds
// the forest from the instance's f; the CLI uses a weight-only forest).
CharacteristicReport characteristic_report(const DiscreteMeasure& sigma,
                                           const DiscreteMeasure& omega,
                                           const Grid& grid,
                                           const GridConfig& cfg,
                                           const Truncation& trunc,
                                           const StoppingForest& forest,
                                           bool local_tails = false);

}  // namespace twoweight
