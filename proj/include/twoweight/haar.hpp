#pragma once

#include <span>
#include <vector>

#include "twoweight/dyadic.hpp"
#include "twoweight/measure.hpp"

namespace twoweight {

// Functions are stored as one value per atom of a fixed measure.

struct Expectation {
  double value = 0.0;
  bool zero_mass = false;  // |I|_mu = 0, value defaults to 0
};

// E_I^mu f = (1/|I|_mu) int_I f dmu.
Expectation expectation(std::span<const double> f, const DiscreteMeasure& mu,
                        const Interval& I);

// Martingale difference Delta_I^mu f. Identically zero when either child of I
// carries no mass (degenerate convention, keeps reconstruction exact).
struct HaarDifference {
  Dyad interval;
  std::vector<double> values;  // per atom, vanishes outside the interval
  double coefficient = 0.0;    // <f, h_I>_mu with ||h_I||_mu = 1
  bool degenerate = true;
};

HaarDifference haar_diff(std::span<const double> f, const DiscreteMeasure& mu,
                         const Grid& grid, Dyad I);

// Fast path: adds Delta_I^mu f into acc without building a HaarDifference.
void add_haar_diff(std::span<const double> f, const DiscreteMeasure& mu,
                   const Grid& grid, Dyad I, std::span<double> acc);

// P_H^mu f = sum of Delta_H f over H; the local variant keeps only H inside J.
std::vector<double> project(std::span<const double> f,
                            const DiscreteMeasure& mu, const Grid& grid,
                            std::span<const Dyad> H);
std::vector<double> project_local(std::span<const double> f,
                                  const DiscreteMeasure& mu, const Grid& grid,
                                  std::span<const Dyad> H, Dyad J);

// P_{D[I]} f on the atoms of I: leaf average at max_depth minus E_I f,
// zero outside I. Equals the literal sum of Delta_K f over K inside I.
std::vector<double> project_subtree(std::span<const double> f,
                                    const DiscreteMeasure& mu, const Grid& grid,
                                    Dyad I);

// Intervals with a nonvanishing difference, depths 0..max_depth-1. With
// good_filter the interval and both children must be (r,eps)-good.
std::vector<Dyad> haar_support(std::span<const double> f,
                               const DiscreteMeasure& mu, const Grid& grid,
                               const GridConfig& cfg, bool good_filter);

// ||Delta_J^omega Z||^2 where Z is the identity map on atoms.
double coordinate_energy(const Grid& grid, Dyad J, const DiscreteMeasure& omega);

// Dyadic maximal function: at each atom, sup over containing dyads of E_I|f|.
std::vector<double> maximal_fn(std::span<const double> f,
                               const DiscreteMeasure& mu, const Grid& grid);

double l2_norm_sq(std::span<const double> f, const DiscreteMeasure& mu);
double inner_product(std::span<const double> f, std::span<const double> g,
                     const DiscreteMeasure& mu);
std::vector<double> identity_values(const DiscreteMeasure& mu);  // Z on atoms

}  // namespace twoweight
