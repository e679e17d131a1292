#include "twoweight/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace twoweight {

DiscreteMeasure::DiscreteMeasure(std::vector<double> positions,
                                 std::vector<double> masses)
    : pos_(std::move(positions)), mass_(std::move(masses)) {
  if (pos_.size() != mass_.size())
    throw std::invalid_argument("measure: positions/masses size mismatch");
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (!(mass_[i] > 0.0))
      throw std::invalid_argument("measure: masses must be positive");
    if (i > 0 && !(pos_[i - 1] < pos_[i]))
      throw std::invalid_argument("measure: positions must be strictly increasing");
  }
  prefix_.resize(pos_.size() + 1, 0.0);
  for (std::size_t i = 0; i < pos_.size(); ++i)
    prefix_[i + 1] = prefix_[i] + mass_[i];
}

std::pair<std::size_t, std::size_t> DiscreteMeasure::range(double lo,
                                                           double hi) const {
  auto a = std::lower_bound(pos_.begin(), pos_.end(), lo) - pos_.begin();
  auto b = std::lower_bound(pos_.begin(), pos_.end(), hi) - pos_.begin();
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

double DiscreteMeasure::mass_between(double lo, double hi) const {
  if (empty() || !(lo < hi)) return 0.0;
  auto [a, b] = range(lo, hi);
  return prefix_[b] - prefix_[a];
}

double mass(const DiscreteMeasure& mu, const Interval& I) {
  return mu.mass_between(I.left, I.right());
}

static double poisson_kernel(const Interval& I, double y) {
  const double d = I.length + std::abs(y - I.center());
  return I.length / (d * d);
}

double poisson(const Interval& I, const DiscreteMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    s += mu.mass_at(i) * poisson_kernel(I, mu.position(i));
  return s;
}

double poisson_masked(const Interval& I, const DiscreteMeasure& mu,
                      std::span<const bool> keep) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (keep[i]) s += mu.mass_at(i) * poisson_kernel(I, mu.position(i));
  return s;
}

double poisson_annulus(const Interval& I, const DiscreteMeasure& mu,
                       const Interval& inside, const Interval& hole) {
  double s = 0.0;
  auto [a, b] = mu.range(inside.left, inside.right());
  for (std::size_t i = a; i < b; ++i) {
    const double y = mu.position(i);
    if (hole.contains(y)) continue;
    s += mu.mass_at(i) * poisson_kernel(I, y);
  }
  return s;
}

double poisson_weighted_hole(const Interval& I, const DiscreteMeasure& mu,
                             std::span<const double> h, const Interval& F) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double y = mu.position(i);
    if (F.contains(y)) continue;
    s += h[i] * mu.mass_at(i) * poisson_kernel(I, y);
  }
  return s;
}

double tail_weight(const Interval& I, double x) {
  return I.length / (I.length + std::abs(x - I.center()));
}

double energy(const Interval& J, const DiscreteMeasure& omega) {
  auto [a, b] = omega.range(J.left, J.right());
  if (b - a < 2) return 0.0;
  const double c = J.center();
  double m = 0.0, s1 = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    m += omega.mass_at(i);
    s1 += omega.mass_at(i) * (omega.position(i) - c);
  }
  if (!(m > 0.0)) return 0.0;
  const double mean = s1 / m;  // offset of the omega-average from c
  double var = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    const double d = (omega.position(i) - c) - mean;
    var += omega.mass_at(i) * d * d;
  }
  return var / (m * J.length * J.length);
}

Interval hull(std::initializer_list<const DiscreteMeasure*> measures) {
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  bool any = false;
  for (const auto* mu : measures) {
    if (mu->empty()) continue;
    any = true;
    lo = std::min(lo, mu->position(0));
    hi = std::max(hi, mu->position(mu->size() - 1));
  }
  if (!any) return {0.0, 1.0};
  return {lo - 1.0, (hi - lo) + 2.0};
}

}  // namespace twoweight
