#pragma once

#include <limits>
#include <span>
#include <vector>

#include "twoweight/measure.hpp"

namespace twoweight {

// Kernel window: 1/(y-x) kept only on eps < |y-x| < outer.
struct Truncation {
  double eps = 1e-12;
  double outer = std::numeric_limits<double>::infinity();
};

// H(f sigma)(x) over the truncation window.
double hilbert_apply(std::span<const double> f, const DiscreteMeasure& sigma,
                     double x, const Truncation& trunc);

// <H_sigma f, g>_omega.
double hilbert_bilinear(std::span<const double> f, std::span<const double> g,
                        const DiscreteMeasure& sigma,
                        const DiscreteMeasure& omega, const Truncation& trunc);

// <H_sigma phi, Delta>_omega with phi given on sigma-atoms and the second slot
// given on omega-atoms (the workhorse for all sub-forms).
double hilbert_pairing(std::span<const double> phi,
                       std::span<const double> dg,
                       const DiscreteMeasure& sigma,
                       const DiscreteMeasure& omega, const Truncation& trunc);

struct OperatorNorm {
  double value = 0.0;
  int iterations = 0;
  bool zero_measure = false;
};

// Largest singular value of the weighted truncated-kernel matrix, by power
// iteration on M^T M with a fixed deterministic start vector. Relative
// tolerance 1e-8 on successive Rayleigh quotients, 2000 iteration cap;
// non-convergence throws.
OperatorNorm operator_norm(const DiscreteMeasure& sigma,
                           const DiscreteMeasure& omega,
                           const Truncation& trunc);

// Deterministic largest singular value of a dense row-major matrix by power
// iteration on M^T M (fixed start vector, 1e-8 relative tolerance on
// successive Rayleigh quotients, 2000 iteration cap, throws on failure).
double sigma_max(const std::vector<double>& m, std::size_t rows,
                 std::size_t cols);

// Smallest distance between a sigma-atom and a distinct omega-atom
// (1.0 when no distinct pair exists).
double truncation_gap(const DiscreteMeasure& sigma,
                      const DiscreteMeasure& omega);

// The ladder {gap/2, gap/4} with infinite outer radius; on finite atom sets
// the supremum over truncations is attained once eps drops below the gap.
std::vector<Truncation> truncation_ladder(const DiscreteMeasure& sigma,
                                          const DiscreteMeasure& omega);

}  // namespace twoweight
