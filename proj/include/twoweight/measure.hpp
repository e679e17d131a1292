#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace twoweight {

// Half-open interval [left, left+length) on the real line.
struct Interval {
  double left = 0.0;
  double length = 1.0;

  double right() const { return left + length; }
  double center() const { return left + 0.5 * length; }
  bool contains(double x) const { return x >= left && x < right(); }
};

// Finite positive atomic measure: strictly increasing positions, masses > 0.
// Immutable after construction; prefix sums make interval masses O(log n).
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<double> positions, std::vector<double> masses);

  std::size_t size() const { return pos_.size(); }
  bool empty() const { return pos_.empty(); }
  double position(std::size_t i) const { return pos_[i]; }
  double mass_at(std::size_t i) const { return mass_[i]; }
  double total_mass() const { return prefix_.back(); }
  const std::vector<double>& positions() const { return pos_; }
  const std::vector<double>& masses() const { return mass_; }

  // Index range [a, b) of atoms with position in [lo, hi).
  std::pair<std::size_t, std::size_t> range(double lo, double hi) const;
  double mass_between(double lo, double hi) const;

 private:
  std::vector<double> pos_;
  std::vector<double> mass_;
  std::vector<double> prefix_;  // prefix_[i] = sum of mass_[0..i), size n+1
};

// |I|_mu, atoms with position in [left, right).
double mass(const DiscreteMeasure& mu, const Interval& I);

// P(I, mu) = sum of m * l(I)/(l(I)+|y-c_I|)^2 over all atoms.
double poisson(const Interval& I, const DiscreteMeasure& mu);

// P(I, 1_E mu) where E is given atom-by-atom; keep[i] selects atom i.
double poisson_masked(const Interval& I, const DiscreteMeasure& mu,
                      std::span<const bool> keep);

// P(I, 1_{inside \ hole} mu): atoms in `inside` but not in `hole`.
// Pass inside = everything() for tails over all of R.
double poisson_annulus(const Interval& I, const DiscreteMeasure& mu,
                       const Interval& inside, const Interval& hole);

// P(I, h 1_{outside F} mu) with a per-atom weight h (used by functional energy).
double poisson_weighted_hole(const Interval& I, const DiscreteMeasure& mu,
                             std::span<const double> h, const Interval& F);

// s_I(x) = l(I)/(l(I)+|x-c_I|), in (0,1], equals 1 iff x = c_I.
double tail_weight(const Interval& I, double x);

// E(J, omega)^2: mass-normalized variance of atom positions in J at scale
// l(J)^2. Zero when J carries no atoms or a single atom; always <= 1/4.
double energy(const Interval& J, const DiscreteMeasure& omega);

// An interval certain to contain every atom of the given measures (for tails).
Interval hull(std::initializer_list<const DiscreteMeasure*> measures);

}  // namespace twoweight
